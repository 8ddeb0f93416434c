#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "slseng/analytic.hpp"
#include "slseng/params.hpp"
#include "slseng/rng.hpp"

namespace slseng {

struct McConfig {
    double r_sim = 4000.0;          // simulation radius
    double region_radius = 2000.0;  // metric radius, r_sim/2
    std::uint64_t n_realizations = 1000;
    std::uint64_t seed = 12345;
    bool antithetic_fading = false;
    unsigned threads = 0;  // 0 = hardware concurrency

    void validate() const {
        if (!(region_radius <= r_sim))
            throw std::domain_error("McConfig: region_radius must be <= r_sim");
        if (n_realizations < 1) throw std::domain_error("McConfig: need n_realizations >= 1");
    }
};

// One PPP snapshot in the primary-receiver frame.
struct Realization {
    struct Point {
        PolarPoint position;
        double omega;
        LinkState state_to_primary;
        double fading_to_primary;
        bool active;
    };
    std::vector<Point> points;
    LinkState primary_state = LinkState::LOS;
    double primary_fading = 1.0;
    double interference = 0.0;  // at the primary receiver, active links only
    double sinr = 0.0;
};

Realization sample_realization(const SystemParams& params, const McConfig& mc, Rng& rng);

// Mean of n independent (blockage, fading) indicator draws for one placement.
McEstimate estimate_map(const SecondaryPlacement& sp, const SystemParams& params,
                        std::uint64_t n, const McConfig& mc = {});

// Fraction of active transmitters inside the disk of radius region_radius.
McEstimate estimate_af(const SystemParams& params, const McConfig& mc);

// CCDF of the primary SINR over a tau grid with common random numbers.
CoverageCurve estimate_primary_coverage(const std::vector<double>& tau_grid_db,
                                        const SystemParams& params, const McConfig& mc);

// CCDF of the considered secondary SINR; pp absent = typical mode (the
// primary pose is re-sampled every realization, x_p area-uniform in the
// metric disk).
CoverageCurve estimate_secondary_coverage(const std::vector<double>& tau_grid_db,
                                          const SystemParams& params,
                                          const std::optional<PrimaryPlacement>& pp,
                                          const McConfig& mc);

// Mean interference at the primary receiver with fading and directionality
// off and the hard exclusion ball of Example-1 geometry.
McEstimate estimate_mean_interference(const SystemParams& params, const McConfig& mc,
                                      MediumCase medium);

}  // namespace slseng
