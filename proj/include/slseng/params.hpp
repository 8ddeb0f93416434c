#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "slseng/channel.hpp"
#include "slseng/geometry.hpp"
#include "slseng/quadrature.hpp"

namespace slseng {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watt_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }
inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }

// Every scalar of the propagation/deployment model. Defaults are the
// numerical-evaluation parameters: p_p = 27 dBm, p_s = 17 dBm, r_p = 50 m,
// r_s = 20 m, alpha = (2.4, 4.2), C = (-60 dB, -70 dB), sigma^2 encodes the
// 60 GHz / 200 MHz noise floor, kappa = 121 deg, lambda_s = 8e-5 /m^2,
// rho = 1 pW, region radius R = R_sim/2 = 2000 m. dB values are converted
// at the config boundary; everything here is linear.
struct SystemParams {
    double p_p = dbm_to_watt(27.0);
    double p_s = dbm_to_watt(17.0);
    double rho = 1e-12;
    double r_p = 50.0;
    double r_s = 20.0;
    double lambda_s = 8e-5;
    double sigma2 = 7.9621e-13;
    double region_radius = 2000.0;
    PathLossParams plp{};
    BlockageParams blockage = BlockageParams::zbl();
    AntennaConfig antennas = AntennaConfig::ula(4, 4, deg_to_rad(121.0));
    QuadratureSpec quad{};

    void validate() const {
        if (!(p_p >= 0.0) || !(p_s >= 0.0) || !(rho >= 0.0) || !(sigma2 >= 0.0))
            throw std::domain_error("SystemParams: powers must be >= 0");
        if (!(r_p > 0.0) || !(r_s > 0.0) || !(region_radius > 0.0))
            throw std::domain_error("SystemParams: lengths must be > 0");
        if (!(lambda_s >= 0.0)) throw std::domain_error("SystemParams: lambda_s must be >= 0");
        plp.validate();
        quad.validate();
    }

    // kappa_T = (rho/p_s)/C_T; inf when the NLOS constant is zeroed (NOL).
    double kappa_t(LinkState t) const {
        const double c = plp.near_field(t);
        if (c == 0.0) return kInf;
        return (rho / p_s) / c;
    }

    double los_prob(double z) const { return los_probability(z, blockage); }

    PrimaryPlacement placement(SecondaryType t) const {
        return preset_placement(t, r_p, r_s);
    }
};

// Numerical-path diagnostics carried out of the analytic operations.
struct Flags {
    bool series_fallback = false;   // series failed, reference path used
    bool series_failure = false;    // series failed with no fallback
    bool quad_nonconverged = false;
    bool range_violation = false;   // probability left [-1e-9, 1+1e-9]

    void merge(const Flags& o) {
        series_fallback |= o.series_fallback;
        series_failure |= o.series_failure;
        quad_nonconverged |= o.quad_nonconverged;
        range_violation |= o.range_violation;
    }
    bool numerical_failure() const { return series_failure || quad_nonconverged; }
};

// Clamp a computed probability, recording violations beyond round-off slack.
inline double finalize_probability(double raw, Flags* flags) {
    if (raw < -1e-9 || raw > 1.0 + 1e-9)
        if (flags) flags->range_violation = true;
    return raw < 0.0 ? 0.0 : (raw > 1.0 ? 1.0 : raw);
}

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t trials = 0;
};

struct CoverageCurve {
    std::vector<double> tau_db;
    std::vector<double> values;
    std::vector<double> std_errors;  // empty for analytic curves
    std::string method;              // "analytic" | "mc"
    std::uint64_t trials = 0;
};

}  // namespace slseng
