#include "slseng/analytic.hpp"

#include "analytic_detail.hpp"

namespace slseng {

using detail::cross_gain_levels;
using detail::exp_neg;
using detail::geometric_tail;
using detail::kDeadExponent;

namespace {

// E over fading of exp(-s * interference contribution) of one transmitter
// with cross gain kappa0 and interferer link state T1 at distance x:
//   W = e^{-rho/chi} + (1 - e^{-s rho} e^{-rho/chi}) / (1 + s chi),
// chi = p_s kappa0 C_T1 x^{-alpha_T1}. chi = 0 collapses to W = 1.
double w_factor(double x, double kappa0, double s, LinkState t1,
                const SystemParams& params) {
    const double c = params.plp.near_field(t1);
    if (c == 0.0 || kappa0 == 0.0) return 1.0;
    const double alpha = params.plp.alpha(t1);
    const double inv_chi_rho = params.kappa_t(t1) / kappa0 * std::pow(x, alpha);  // rho/chi
    const double chi = params.rho == kInf
                           ? params.p_s * kappa0 * c * std::pow(x, -alpha)
                           : (inv_chi_rho > 0.0 ? params.rho / inv_chi_rho : kInf);
    const double e1 = exp_neg(inv_chi_rho);
    const double e2 = params.rho == kInf ? 0.0 : exp_neg(s * params.rho) * e1;
    return e1 + (1.0 - e2) / (1.0 + s * chi);
}

// Radial cut beyond which every stretched exponential of the integrand is
// below e^-70 and the algebraic tail series has ratio <= 1/2.
double primary_radial_cut(const SystemParams& params, double kappa0, double s) {
    double cut = params.quad.radial_upper_bound;
    const BlockageParams& b = params.blockage;
    if (b.regime == BlockageRegime::General && b.mu > 0.0)
        cut = std::max(cut, kDeadExponent / b.mu);
    for (LinkState t : {LinkState::LOS, LinkState::NLOS}) {
        if (params.plp.near_field(t) == 0.0) continue;
        const double kappa_t = params.kappa_t(t);
        const double alpha = params.plp.alpha(t);
        if (params.rho != kInf && kappa_t > 0.0)
            cut = std::max(cut, std::pow(kDeadExponent * kappa0 / kappa_t, 1.0 / alpha));
        const double s_rho = params.rho == kInf ? 0.0 : s * params.rho;
        if (s_rho > 0.0 && kappa_t > 0.0)
            cut = std::max(cut, std::pow(2.0 * s_rho * kappa0 / kappa_t, 1.0 / alpha));
        // rho = inf: 1 - W = s chi/(1+s chi); require s*chi <= 1/2 at the cut
        if (params.rho == kInf) {
            const double sk = s * params.p_s * kappa0 * params.plp.near_field(t);
            cut = std::max(cut, std::pow(2.0 * sk, 1.0 / alpha));
        }
    }
    return cut;
}

// J(s) = integral over the plane of (1 - sum_T1 p_T1(x) E_omega[W]) x dx dtheta,
// the PGFL exponent of the secondary interference Laplace transform.
double interference_exponent_reference(const SystemParams& params, double s, Flags* flags) {
    if (params.rho == 0.0) return 0.0;  // nobody transmits
    double total = 0.0;
    const double p_l_far = detail::far_los_probability(params.blockage);
    for (const auto& [q, g] : cross_gain_levels(params.antennas.pr, params.antennas.st)) {
        if (q == 0.0 || g == 0.0) continue;
        const double cut = primary_radial_cut(params, g, s);
        const auto integrand = [&](double x) {
            if (x <= 0.0) return 0.0;
            const double p_l = params.los_prob(x);
            double survive = 0.0;
            if (p_l > 0.0) survive += p_l * w_factor(x, g, s, LinkState::LOS, params);
            if (p_l < 1.0) survive += (1.0 - p_l) * w_factor(x, g, s, LinkState::NLOS, params);
            return (1.0 - survive) * x;
        };
        const IntegralResult r = integrate(integrand, 0.0, cut, params.quad);
        if (!r.converged && flags) flags->quad_nonconverged = true;

        double tail = 0.0;
        for (LinkState t : {LinkState::LOS, LinkState::NLOS}) {
            const double p_far = t == LinkState::LOS ? p_l_far : 1.0 - p_l_far;
            const double c = params.plp.near_field(t);
            if (p_far == 0.0 || c == 0.0) continue;
            tail += p_far * geometric_tail(s * params.p_s * g * c, params.plp.alpha(t), cut);
        }
        total += kTwoPi * q * (r.value + tail);
    }
    return total;
}

// Residue corrections of the blockage Taylor series: the interferer
// integrand decays algebraically, so its Laplace transform in mu carries
// non-analytic mu^{alpha j - 2} terms next to the printed power series:
//   sum_j (-1)^{j-1} (s p_s C_T)^j Gamma(2 - alpha j) mu^{alpha j - 2} n3(j).
// Without them the series path would sit ~1e-3 away from the integral form
// for any mu > 0. Collisions alpha j - 2 = integer need log(mu) terms; the
// sum stops there and flags unless the remainder is already negligible.
double mellin_residue_correction(const SystemParams& params, double s, double c_t,
                                 double alpha_t, double mu,
                                 const std::function<double(double)>& n3_of, Flags* flags) {
    if (mu <= 0.0 || c_t == 0.0 || s <= 0.0) return 0.0;
    long double sum = 0.0L;
    long double cj = 1.0L;
    long double last = 0.0L;
    const long double base = -static_cast<long double>(s * params.p_s * c_t);
    for (int j = 1; j <= 60; ++j) {
        cj *= base;  // (-1)^j (s K)^j
        const double arg = 2.0 - alpha_t * j;
        if (detail::near_integer(arg)) {
            // remainder is O(|last| * mu^alpha); flag only if it matters
            const long double est = std::fabs(last) * std::pow((long double)mu, alpha_t);
            if (flags && est > 1e-9 * std::max<long double>(std::fabs(sum), 1.0L))
                flags->series_failure = true;
            break;
        }
        last = -cj * std::tgamma(arg) *
               std::pow(static_cast<long double>(mu), alpha_t * j - 2.0) *
               static_cast<long double>(n3_of(static_cast<double>(j)));
        sum += last;
        if (std::fabs(last) < 1e-18 * std::max<long double>(std::fabs(sum), 1e-300L)) break;
    }
    return static_cast<double>(sum);
}

// Fast path: N(2/aN, s rho) n3(2/aN) + e^-p sum_n (-mu)^n/n! *
//   [ N((n+2)/aL, s rho) n3((n+2)/aL) - N((n+2)/aN, s rho) n3((n+2)/aN) ]
// plus the mu^{alpha j - 2} residue corrections above. Terms touching an
// integer k (a pole of n1) before the series has settled flag a convergence
// failure; the reference path never has this problem.
double interference_exponent_series(const SystemParams& params, double s, Flags* flags) {
    if (params.rho == 0.0) return 0.0;
    if (params.rho == kInf) {
        if (flags) flags->series_failure = true;  // s*rho diverges; reference handles it
        return 0.0;
    }
    const PathLossParams& plp = params.plp;
    const double s_rho = s * params.rho;
    const double kappa_l = params.kappa_t(LinkState::LOS);
    const double kappa_n = params.kappa_t(LinkState::NLOS);
    const QuadratureSpec& spec = params.quad;

    const auto n_term = [&](double k, double kappa, double alpha) -> long double {
        if (kappa == kInf) return 0.0L;
        return script_n_l(k, s_rho, kappa, alpha, spec) *
               static_cast<long double>(n3(k, params.antennas));
    };

    const double first = kappa_n == kInf
                             ? 0.0
                             : static_cast<double>(n_term(2.0 / plp.alpha_n, kappa_n, plp.alpha_n));
    const BlockageParams& b = params.blockage;
    if (b.regime == BlockageRegime::Hbl) return first;

    const detail::PoleSeriesResult s_sum = detail::pole_aware_series(
        b.mu,
        [&](std::size_t n) -> long double {
            const double m = static_cast<double>(n) + 2.0;
            return n_term(m / plp.alpha_l, kappa_l, plp.alpha_l) -
                   n_term(m / plp.alpha_n, kappa_n, plp.alpha_n);
        },
        [&](std::size_t n) {
            const double m = static_cast<double>(n) + 2.0;
            return detail::near_integer(m / plp.alpha_l) ||
                   detail::near_integer(m / plp.alpha_n);
        },
        spec);
    if (!s_sum.converged && flags) flags->series_failure = true;
    const double mu = b.regime == BlockageRegime::General ? b.mu : 0.0;
    const auto n3_full = [&](double k) { return n3(k, params.antennas); };
    const double corr = mellin_residue_correction(params, s, plp.near_field(LinkState::LOS),
                                                  plp.alpha_l, mu, n3_full, flags) -
                        mellin_residue_correction(params, s, plp.near_field(LinkState::NLOS),
                                                  plp.alpha_n, mu, n3_full, flags);
    return first + std::exp(-b.p) * (s_sum.value + corr);
}

double coverage_from_exponent(double tau, const SystemParams& params,
                              const std::function<double(double, Flags*)>& exponent,
                              Flags* flags) {
    const double g_own = params.antennas.pt.gain(0.0) * params.antennas.pr.gain(0.0);
    const double p_l = params.los_prob(params.r_p);
    double cov = 0.0;
    for (LinkState t : {LinkState::LOS, LinkState::NLOS}) {
        const double p_t = t == LinkState::LOS ? p_l : 1.0 - p_l;
        const double c = params.plp.near_field(t);
        if (p_t == 0.0 || c == 0.0) continue;  // NOL NLOS serving link has no power
        const double s = tau * std::pow(params.r_p, params.plp.alpha(t)) /
                         (c * params.p_p * g_own);
        cov += p_t * std::exp(-s * params.sigma2 - params.lambda_s * exponent(s, flags));
    }
    return finalize_probability(cov, flags);
}

}  // namespace

double primary_coverage(double tau, const SystemParams& params, Flags* flags,
                        EvalPath path) {
    if (!(tau > 0.0)) throw std::domain_error("primary_coverage: tau must be > 0");
    if (params.lambda_s == 0.0)
        return coverage_from_exponent(tau, params, [](double, Flags*) { return 0.0; }, flags);

    if (path == EvalPath::Reference)
        return coverage_from_exponent(
            tau, params,
            [&](double s, Flags* f) { return interference_exponent_reference(params, s, f); },
            flags);

    Flags series_flags;
    const double value = coverage_from_exponent(
        tau, params,
        [&](double s, Flags* f) { return interference_exponent_series(params, s, f); },
        &series_flags);
    if (!series_flags.series_failure) {
        if (flags) flags->merge(series_flags);
        return value;
    }
    if (path == EvalPath::Series) {
        if (flags) flags->merge(series_flags);
        return value;
    }
    if (flags) flags->series_fallback = true;
    return coverage_from_exponent(
        tau, params,
        [&](double s, Flags* f) { return interference_exponent_reference(params, s, f); },
        flags);
}

double primary_coverage_special(double tau, const SystemParams& params,
                                BlockageCase blockage, BeamCase beam, Flags* flags) {
    if (!(tau > 0.0)) throw std::domain_error("primary_coverage_special: tau must be > 0");
    const PathLossParams& plp = params.plp;
    const AntennaConfig& ac = params.antennas;

    const double g_own = beam == BeamCase::Omni ? 1.0 : ac.pt.gain(0.0) * ac.pr.gain(0.0);
    const auto n3_case = [&](double k) -> double {
        switch (beam) {
            case BeamCase::Omni:
                return kTwoPi;
            case BeamCase::Ideal:
                return kTwoPi * ac.pr.q() * ac.st.q() * std::pow(ac.pr.a * ac.st.a, k);
            case BeamCase::Sectorized:
                return n3(k, ac);
            case BeamCase::General: {
                // E_omega[ integral (g_pr g_st)^k dtheta ] by theta quadrature
                const auto f = [&](double theta) {
                    const double gpr = ac.pr.gain(theta);
                    double v = 0.0;
                    for (const GainLevel& ls : ac.st.levels()) {
                        const double g = gpr * ls.gain;
                        if (ls.prob > 0.0 && g > 0.0) v += ls.prob * std::pow(g, k);
                    }
                    return v;
                };
                return integrate(f, -kPi, kPi, params.quad).value;
            }
        }
        return kTwoPi;
    };

    const auto s_of = [&](LinkState t) {
        return tau * std::pow(params.r_p, plp.alpha(t)) /
               (plp.near_field(t) * params.p_p * g_own);
    };

    switch (blockage) {
        case BlockageCase::Zbl: {
            const double s = s_of(LinkState::LOS);
            const double k = 2.0 / plp.alpha_l;
            const double expo =
                script_n(k, s * params.rho, params.kappa_t(LinkState::LOS), plp.alpha_l,
                         params.quad) * n3_case(k);
            return finalize_probability(
                std::exp(-s * params.sigma2 - params.lambda_s * expo), flags);
        }
        case BlockageCase::Hbl: {
            const double s = s_of(LinkState::NLOS);
            const double k = 2.0 / plp.alpha_n;
            const double expo =
                script_n(k, s * params.rho, params.kappa_t(LinkState::NLOS), plp.alpha_n,
                         params.quad) * n3_case(k);
            return finalize_probability(
                std::exp(-s * params.sigma2 - params.lambda_s * expo), flags);
        }
        case BlockageCase::Nol: {
            // p_L(r_p) e^{-s_L sigma^2 - lambda e^-p I},
            // I = sum_n (-mu)^n/n! N((n+2)/aL, s_L rho) n3((n+2)/aL)
            const double s = s_of(LinkState::LOS);
            const double kappa_l = params.kappa_t(LinkState::LOS);
            const double mu = params.blockage.regime == BlockageRegime::General
                                  ? params.blockage.mu
                                  : 0.0;
            const detail::PoleSeriesResult sum = detail::pole_aware_series(
                mu,
                [&](std::size_t n) -> long double {
                    const double k = (static_cast<double>(n) + 2.0) / plp.alpha_l;
                    return script_n_l(k, s * params.rho, kappa_l, plp.alpha_l, params.quad) *
                           static_cast<long double>(n3_case(k));
                },
                [&](std::size_t n) {
                    return detail::near_integer((static_cast<double>(n) + 2.0) / plp.alpha_l);
                },
                params.quad);
            if (!sum.converged && flags) flags->series_failure = true;
            const double corr = mellin_residue_correction(
                params, s, plp.c_l, plp.alpha_l, mu, [&](double k) { return n3_case(k); },
                flags);
            const double expo = std::exp(-params.blockage.p) * (sum.value + corr);
            return finalize_probability(params.los_prob(params.r_p) *
                                            std::exp(-s * params.sigma2 -
                                                     params.lambda_s * expo),
                                        flags);
        }
    }
    return 0.0;
}

}  // namespace slseng
