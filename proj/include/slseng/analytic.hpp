#pragma once

#include <cstddef>

#include "slseng/params.hpp"
#include "slseng/specfun.hpp"

namespace slseng {

enum class EvalPath { Auto, Reference, Series };
enum class BlockageCase { Zbl, Hbl, Nol };
enum class BeamCase { General, Sectorized, Ideal, Omni };
enum class MediumCase { LosOnly, NlosOnly };
enum class Term4Regime { Close, Far };

// Medium access probability of a secondary transmitter at the given pose
// relative to the primary receiver (Lemma-level closed form).
double map_secondary(const SecondaryPlacement& sp, const SystemParams& params,
                     Flags* flags = nullptr);

// Activity factor of the secondary network inside the disk of radius R
// around the primary receiver. Auto runs the blockage series and falls back
// to the radial-quadrature reference on convergence failure.
double activity_factor(const SystemParams& params, double region_radius,
                       Flags* flags = nullptr, EvalPath path = EvalPath::Auto);

// Direct implementations of the AF special-case table cells.
double activity_factor_special(const SystemParams& params, double region_radius,
                               BlockageCase blockage, BeamCase beam,
                               Flags* flags = nullptr);

// (1 - AF_ideal,NOL)/(1 - AF_omni,NOL) and the S quadrature-ratio factor;
// S < 1 for M > 1 quantifies the directionality gain.
struct AfDirectionality {
    double ratio = 1.0;
    double s_factor = 1.0;
    double prefactor = 1.0;
};
AfDirectionality directionality_af_ratio(const SystemParams& params, double region_radius,
                                         std::size_t m_elements, double kappa);

// Mean interference at the primary receiver with fading and directionality
// disabled: active transmitters lie outside the exclusion ball.
struct MeanInterference {
    double value = 0.0;             // closed form over the whole plane
    double exclusion_radius = 0.0;  // u (LOS) resp. u~ (NLOS)
};
MeanInterference mean_interference_noblockage(const SystemParams& params, MediumCase medium);

struct InterferenceComparison {
    double e_los, e_nlos, u, u_tilde, ratio;
};
InterferenceComparison mean_interference_comparison(const SystemParams& params);

// Coverage probability of the primary link, P(SINR > tau).
double primary_coverage(double tau, const SystemParams& params, Flags* flags = nullptr,
                        EvalPath path = EvalPath::Auto);

// Direct implementations of the primary-coverage special-case table cells.
double primary_coverage_special(double tau, const SystemParams& params,
                                BlockageCase blockage, BeamCase beam,
                                Flags* flags = nullptr);

// Coverage probability of the considered secondary link at a fixed primary
// pose (transformed frame, product of the four labeled terms).
double secondary_coverage(double tau, const SystemParams& params,
                          const PrimaryPlacement& pp, Flags* flags = nullptr);

// Direct ZBL/HBL/NOL formulas for the secondary coverage.
double secondary_coverage_special(double tau, const SystemParams& params,
                                  const PrimaryPlacement& pp, BlockageCase blockage,
                                  Flags* flags = nullptr);

// The secondary-interference integral (Term-4 exponent argument, without the
// -lambda_s factor) for a given serving-link state; exposed for the
// approximation and sectorized variants to test against.
double term4_general(double tau, const SystemParams& params, const PrimaryPlacement& pp,
                     LinkState serving, Flags* flags = nullptr);

// Close/far closed-form approximations of Term-4 under the NOL scenario.
double term4_approx(double tau, const SystemParams& params, const PrimaryPlacement& pp,
                    Term4Regime regime, Flags* flags = nullptr);

// Event-partitioned sectorized form of Term-4.
double term4_sectorized(double tau, const SystemParams& params, const PrimaryPlacement& pp,
                        LinkState serving, Flags* flags = nullptr);

// Typical secondary coverage: area-weighted average of secondary_coverage
// over the primary pose inside the disk of radius R (Halton sequence).
double typical_secondary_coverage(double tau, const SystemParams& params,
                                  double region_radius, std::size_t n_placements = 256,
                                  Flags* flags = nullptr, unsigned threads = 0);

// Smallest rho satisfying p_cp >= p_star and p_cs >= s_star on a log grid,
// refined by bisection on the left edge. The scan walks the grid from below
// and never assumes monotonicity of p_cs.
struct RhoGrid {
    double min_w = 1e-24;
    double max_w = 1e-9;
    double step_db = 0.5;
    double refine_db = 0.1;
};
struct RhoSelection {
    bool feasible = false;
    double rho = 0.0;
};
RhoSelection rho_dagger(const SystemParams& params, double tau_star, double p_star,
                        double s_star, SecondaryType kind, const RhoGrid& grid = {},
                        Flags* flags = nullptr, unsigned threads = 0,
                        std::size_t typical_placements = 128);

}  // namespace slseng
