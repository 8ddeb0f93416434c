#pragma once

#include "slseng/channel.hpp"
#include "slseng/quadrature.hpp"

namespace slseng {

// Lower incomplete gamma integral(0..b) t^{a-1} e^{-t} dt.
double lower_inc_gamma(double a, double b);

// Regularized P(a, b) = lower_inc_gamma(a, b) / Gamma(a).
double regularized_gamma_p(double a, double b);

// psi_T(m, u) of the activity-factor series: u^{-m/alpha_T} * gamma(m/alpha_T,
// u R^{alpha_T}), with the NLOS branch carrying a leading minus sign.
// u = 0 and u = inf resolve to the corresponding limits of the defining
// integral (alpha R^m / m and 0).
double psi(LinkState state, double m, double u, double region_radius,
           const PathLossParams& plp);

// n1(k) = pi * csc(pi k), the continuation of the Beta-tail integral; poles
// at integer k are rejected rather than continued.
double n1(double k);

// n2(k, nu) = integral(nu..inf) e^{-u} u^{-1} (u - nu)^k du.
double n2(double k, double nu, const QuadratureSpec& spec = {});

// n3(k) = E_omega[ integral(0..2pi) (g_pr(theta) g_st(theta-pi-omega))^k dtheta ]
// in the two-level closed form 2 pi sum_i Q_i G_i^k (omni: 2 pi).
double n3(double k, const AntennaConfig& ac);

// N(k, s) = (1/alpha) kappa^{-k} [ s^k n1(k) - Gamma(k) + n2(k, s) ], the
// radial kernel of the coverage fast path. kappa = inf yields 0.
double script_n(double k, double s, double kappa, double alpha,
                const QuadratureSpec& spec = {});
long double script_n_l(double k, double s, double kappa, double alpha,
                       const QuadratureSpec& spec);

// Tricomi confluent hypergeometric U(a, b, z) via its integral representation.
double tricomi_u(double a, double b, double z, const QuadratureSpec& spec = {});

}  // namespace slseng
