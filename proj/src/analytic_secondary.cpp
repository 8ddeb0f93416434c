#include <mutex>

#include "slseng/analytic.hpp"
#include "slseng/parallel.hpp"

#include "analytic_detail.hpp"

namespace slseng {

using detail::exp_neg;
using detail::geometric_tail;
using detail::kDeadExponent;
using detail::omega_joint_states;

namespace {

// Received-signal scale of the considered secondary link, A^T_0.
double serving_power(LinkState t, const SystemParams& params) {
    const AntennaConfig& ac = params.antennas;
    return params.p_s * ac.st.gain(0.0) * ac.sr.gain(0.0) * params.plp.near_field(t) *
           std::pow(params.r_s, -params.plp.alpha(t));
}

// rho * z^alpha / (p_s C_T g g): the exponent rate of a transmitter's MAP
// survival term toward the primary receiver.
double map_rate(double z, LinkState t, double gain_product, const SystemParams& params) {
    const double c = params.plp.near_field(t);
    if (params.rho == kInf) return kInf;
    const double denom = params.p_s * c * gain_product;
    if (denom == 0.0) return params.rho > 0.0 ? kInf : 0.0;
    return params.rho * std::pow(z, params.plp.alpha(t)) / denom;
}

// MAP of the considered transmitter (Term-2): 1 - sum_T1 p_T1(z00) e^{-1/A^T1_10}.
double own_map(const SystemParams& params, const PrimaryPlacement& pp) {
    if (params.rho == 0.0) return 0.0;
    const AntennaConfig& ac = params.antennas;
    const double gg = ac.st.gain(pp.beta_00) * ac.pr.gain(pp.beta_00 - pp.omega_p0 - kPi);
    const double p_l = params.los_prob(pp.z_00);
    double survive = 0.0;
    for (LinkState t1 : {LinkState::LOS, LinkState::NLOS}) {
        const double p = t1 == LinkState::LOS ? p_l : 1.0 - p_l;
        if (p == 0.0) continue;
        survive += p * exp_neg(map_rate(pp.z_00, t1, gg, params));
    }
    return 1.0 - survive;
}

// Primary interference factor (Term-3) for serving state T.
double primary_interference_factor(double tau, LinkState t, const SystemParams& params,
                                   const PrimaryPlacement& pp) {
    const AntennaConfig& ac = params.antennas;
    const double a0 = serving_power(t, params);
    const double kbar =
        ac.sr.gain(pp.delta_p0) * ac.pt.gain(pp.delta_p0 - kPi - pp.omega_p0);
    const double p_l = params.los_prob(pp.x_p0);
    double sum = 0.0;
    for (LinkState t2 : {LinkState::LOS, LinkState::NLOS}) {
        const double p = t2 == LinkState::LOS ? p_l : 1.0 - p_l;
        if (p == 0.0) continue;
        const double a20 = params.p_p * kbar * params.plp.near_field(t2) *
                           std::pow(pp.x_p0, -params.plp.alpha(t2));
        sum += p / (1.0 + tau * a20 / a0);
    }
    return sum;
}

struct Term4Geometry {
    double y;      // || Y_p0 ||
    double gamma;  // angle of Y_p0
};

double radial_cut_for_term4(double tau, const SystemParams& params, double y_p0,
                            double a0) {
    const AntennaConfig& ac = params.antennas;
    const double g_to_prim_max = ac.st.a * ac.pr.a;
    const double g_to_sec_max = ac.st.a * ac.sr.a;
    double cut = params.quad.radial_upper_bound;
    const BlockageParams& b = params.blockage;
    if (b.regime == BlockageRegime::General && b.mu > 0.0)
        cut = std::max(cut, y_p0 + kDeadExponent / b.mu);
    for (LinkState t : {LinkState::LOS, LinkState::NLOS}) {
        const double c = params.plp.near_field(t);
        if (c == 0.0) continue;
        const double alpha = params.plp.alpha(t);
        if (params.rho > 0.0 && params.rho != kInf)
            cut = std::max(cut, y_p0 + std::pow(kDeadExponent * params.p_s * c *
                                                    g_to_prim_max / params.rho,
                                                1.0 / alpha));
        cut = std::max(cut,
                       std::pow(2.0 * tau * params.p_s * c * g_to_sec_max / a0, 1.0 / alpha));
    }
    return cut;
}

// Generic secondary-interference integral. `numerator_los_weight` selects the
// blockage weights: General uses the actual p_L, the ZBL/HBL single-state
// variants pin the link state.
enum class Term4Mode { General, LosOnly, NlosOnly, NolForm };

double term4_integral(double tau, const SystemParams& params, const PrimaryPlacement& pp,
                      LinkState serving, Term4Mode mode, Flags* flags) {
    if (params.rho == 0.0) return 0.0;  // nobody transmits, no interference
    const AntennaConfig& ac = params.antennas;
    const PathLossParams& plp = params.plp;
    const double a0 = serving_power(serving, params);
    const Term4Geometry geo{pp.y_p0, pp.primary_rx.angle()};
    const double cut = radial_cut_for_term4(tau, params, geo.y, a0);

    const auto los_weight = [&](double z) -> double {
        switch (mode) {
            case Term4Mode::LosOnly: return 1.0;
            case Term4Mode::NlosOnly: return 0.0;
            default: return params.los_prob(z);
        }
    };
    const double far_l = mode == Term4Mode::LosOnly
                             ? 1.0
                             : (mode == Term4Mode::NlosOnly
                                    ? 0.0
                                    : detail::far_los_probability(params.blockage));

    const auto radial_integrand = [&](double theta, double x) -> double {
        if (x <= 0.0) return 0.0;
        const double cg = std::cos(theta - geo.gamma);
        const double z0sq = x * x + geo.y * geo.y - 2.0 * x * geo.y * cg;
        const double z0 = z0sq > 0.0 ? std::sqrt(z0sq) : 0.0;
        const double gsr = ac.sr.gain(theta);
        double beta0, gpr;
        if (z0 > 1e-12) {
            beta0 = std::atan2(x * std::sin(theta) - pp.primary_rx.y,
                               x * std::cos(theta) - pp.primary_rx.x);
            gpr = ac.pr.gain(beta0 - pp.omega_p0 - kPi);
        } else {
            beta0 = theta;
            gpr = ac.pr.a;
        }
        const double p_l_x = los_weight(x);
        const double p_l_z = los_weight(z0);

        double acc = 0.0;
        for (const detail::OmegaState& st : omega_joint_states(ac.st, theta - beta0)) {
            if (st.prob == 0.0) continue;
            // interferer MAP toward the primary receiver
            double num = 1.0;
            if (mode == Term4Mode::NolForm) {
                num = 1.0 - p_l_z * exp_neg(map_rate(z0, LinkState::LOS,
                                                     st.g_to_primary * gpr, params));
            } else {
                for (LinkState t4 : {LinkState::LOS, LinkState::NLOS}) {
                    const double p4 = t4 == LinkState::LOS ? p_l_z : 1.0 - p_l_z;
                    if (p4 == 0.0) continue;
                    num -= p4 * exp_neg(map_rate(z0, t4, st.g_to_primary * gpr, params));
                }
            }
            if (num <= 0.0) continue;
            // interference attenuation toward the considered receiver
            double mix = 0.0;
            for (LinkState t3 : {LinkState::LOS, LinkState::NLOS}) {
                double p3 = t3 == LinkState::LOS ? p_l_x : 1.0 - p_l_x;
                if (mode == Term4Mode::NolForm && t3 == LinkState::NLOS) p3 = 0.0;
                if (p3 == 0.0) continue;
                const double c3 = plp.near_field(t3);
                const double g = st.g_to_secondary * gsr;
                if (c3 == 0.0 || g == 0.0) continue;  // no received interference power
                const double cs = a0 / (tau * params.p_s * c3 * g);
                mix += p3 / (1.0 + cs * std::pow(x, plp.alpha(t3)));
            }
            acc += st.prob * num * mix;
        }
        return acc * x;
    };

    const auto radial_tail = [&](double theta) -> double {
        const double gsr = ac.sr.gain(theta);
        double v = 0.0;
        for (LinkState t3 : {LinkState::LOS, LinkState::NLOS}) {
            double p3 = t3 == LinkState::LOS ? far_l : 1.0 - far_l;
            if (mode == Term4Mode::NolForm && t3 == LinkState::NLOS) p3 = 0.0;
            const double c3 = plp.near_field(t3);
            if (p3 == 0.0 || c3 == 0.0) continue;
            for (const GainLevel& lb : ac.st.levels()) {
                const double g = lb.gain * gsr;
                if (lb.prob == 0.0 || g == 0.0) continue;
                const double c = tau * params.p_s * c3 * g / a0;  // 1/C^{T3}_s
                v += p3 * lb.prob * geometric_tail(c, plp.alpha(t3), cut);
            }
        }
        return v;
    };

    const auto angular_value = [&](double theta) -> double {
        const IntegralResult r =
            integrate([&](double x) { return radial_integrand(theta, x); }, 0.0, cut,
                      params.quad);
        if (!r.converged && flags) flags->quad_nonconverged = true;
        return r.value + radial_tail(theta);
    };

    // split the angular range at the receive-lobe edges
    std::vector<double> edges{-kPi};
    if (ac.sr.kind != BeamKind::Omni && ac.sr.phi < kTwoPi) {
        edges.push_back(-0.5 * ac.sr.phi);
        edges.push_back(0.5 * ac.sr.phi);
    }
    edges.push_back(kPi);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const IntegralResult r = integrate(angular_value, edges[i], edges[i + 1], params.quad);
        if (!r.converged && flags) flags->quad_nonconverged = true;
        total += r.value;
    }
    return total;
}

}  // namespace

double term4_general(double tau, const SystemParams& params, const PrimaryPlacement& pp,
                     LinkState serving, Flags* flags) {
    if (!(tau > 0.0)) throw std::domain_error("term4_general: tau must be > 0");
    return term4_integral(tau, params, pp, serving, Term4Mode::General, flags);
}

double secondary_coverage(double tau, const SystemParams& params, const PrimaryPlacement& pp,
                          Flags* flags) {
    if (!(tau > 0.0)) throw std::domain_error("secondary_coverage: tau must be > 0");
    if (pp.z_00 == 0.0)
        throw std::domain_error("secondary_coverage: degenerate placement (z_00 = 0)");
    const double term2 = own_map(params, pp);
    if (term2 <= 0.0) return 0.0;

    const double p_l_own = params.los_prob(params.r_s);
    double cov = 0.0;
    for (LinkState t : {LinkState::LOS, LinkState::NLOS}) {
        const double p_t = t == LinkState::LOS ? p_l_own : 1.0 - p_l_own;
        if (p_t == 0.0 || params.plp.near_field(t) == 0.0) continue;
        const double a0 = serving_power(t, params);
        const double term1 = std::exp(-tau * params.sigma2 / a0);
        const double term3 = primary_interference_factor(tau, t, params, pp);
        double term4 = 1.0;
        if (params.lambda_s > 0.0)
            term4 = std::exp(-params.lambda_s *
                             term4_integral(tau, params, pp, t, Term4Mode::General, flags));
        cov += p_t * term1 * term3 * term4;
    }
    return finalize_probability(term2 * cov, flags);
}

double secondary_coverage_special(double tau, const SystemParams& params,
                                  const PrimaryPlacement& pp, BlockageCase blockage,
                                  Flags* flags) {
    if (!(tau > 0.0)) throw std::domain_error("secondary_coverage_special: tau must be > 0");
    const AntennaConfig& ac = params.antennas;
    const double gg10 = ac.st.gain(pp.beta_00) * ac.pr.gain(pp.beta_00 - pp.omega_p0 - kPi);
    const double kbar = ac.sr.gain(pp.delta_p0) * ac.pt.gain(pp.delta_p0 - kPi - pp.omega_p0);

    const auto single_state = [&](LinkState t, Term4Mode mode) {
        const double a0 = serving_power(t, params);
        const double alpha = params.plp.alpha(t);
        const double c = params.plp.near_field(t);
        const double term1 = std::exp(-tau * params.sigma2 / a0);
        const double term2 = 1.0 - exp_neg(map_rate(pp.z_00, t, gg10, params));
        const double a20 = params.p_p * kbar * c * std::pow(pp.x_p0, -alpha);
        const double term3 = 1.0 / (1.0 + tau * a20 / a0);
        const double i4 = params.lambda_s > 0.0
                              ? term4_integral(tau, params, pp, t, mode, flags)
                              : 0.0;
        return term1 * term2 * term3 * std::exp(-params.lambda_s * i4);
    };

    switch (blockage) {
        case BlockageCase::Zbl:
            return finalize_probability(single_state(LinkState::LOS, Term4Mode::LosOnly),
                                        flags);
        case BlockageCase::Hbl:
            return finalize_probability(single_state(LinkState::NLOS, Term4Mode::NlosOnly),
                                        flags);
        case BlockageCase::Nol: {
            const LinkState t = LinkState::LOS;
            const double a0 = serving_power(t, params);
            const double term1 = params.los_prob(params.r_s) *
                                 std::exp(-tau * params.sigma2 / a0);
            const double term2 =
                1.0 - params.los_prob(pp.z_00) * exp_neg(map_rate(pp.z_00, t, gg10, params));
            const double a20 = params.p_p * kbar * params.plp.c_l *
                               std::pow(pp.x_p0, -params.plp.alpha_l);
            const double ratio = tau * a20 / a0;
            const double term3 =
                (1.0 + ratio * (1.0 - params.los_prob(pp.x_p0))) / (1.0 + ratio);
            const double i4 = params.lambda_s > 0.0
                                  ? term4_integral(tau, params, pp, t, Term4Mode::NolForm, flags)
                                  : 0.0;
            return finalize_probability(
                term1 * term2 * term3 * std::exp(-params.lambda_s * i4), flags);
        }
    }
    return 0.0;
}

double term4_approx(double tau, const SystemParams& params, const PrimaryPlacement& pp,
                    Term4Regime regime, Flags* flags) {
    if (!(tau > 0.0)) throw std::domain_error("term4_approx: tau must be > 0");
    if (params.plp.near_field(LinkState::NLOS) != 0.0)
        throw std::domain_error("term4_approx: NOL scenario required (C_N = 0)");
    const AntennaConfig& ac = params.antennas;
    const PathLossParams& plp = params.plp;
    const double alpha = plp.alpha_l;
    const double a0 = serving_power(LinkState::LOS, params);
    const double mu =
        params.blockage.regime == BlockageRegime::General ? params.blockage.mu : 0.0;
    const double p_off = params.blockage.regime == BlockageRegime::General
                             ? params.blockage.p
                             : 0.0;
    const double gamma_angle = pp.primary_rx.angle();
    const double beta_far = wrap_angle(gamma_angle + kPi);  // bearing from afar
    if (params.rho == 0.0) return 0.0;

    // non-analytic mu^{alpha j - 2} companions of the csc series (the
    // integrand decays algebraically, so the Taylor part alone is not the
    // whole transform); exact, same residue structure as the coverage series
    const auto residue_of = [&](double cs) -> double {
        if (mu <= 0.0) return 0.0;
        long double sum = 0.0L;
        long double cj = 1.0L;
        for (int j = 1; j <= 60; ++j) {
            cj *= -1.0L / static_cast<long double>(cs);
            const double arg = 2.0 - alpha * j;
            if (detail::near_integer(arg)) break;
            const long double term = -cj * std::tgamma(arg) *
                                     std::pow(static_cast<long double>(mu), alpha * j - 2.0);
            sum += term;
            if (std::fabs(term) < 1e-18 * std::max<long double>(std::fabs(sum), 1e-300L))
                break;
        }
        return static_cast<double>(sum);
    };

    const auto series_value = [&](auto&& angular_term) {
        const detail::PoleSeriesResult s = detail::pole_aware_series(
            mu,
            [&](std::size_t n) -> long double {
                const double k = (static_cast<double>(n) + 2.0) / alpha;
                const auto f = [&](double theta) { return angular_term(n, k, theta); };
                IntegralResult r = integrate(f, -kPi, kPi, params.quad.relaxed(1e-7));
                return static_cast<long double>(r.value);
            },
            [&](std::size_t n) {
                return detail::near_integer((static_cast<double>(n) + 2.0) / alpha);
            },
            params.quad, 1e-4);
        if (!s.converged && flags) flags->series_failure = true;
        return s.value;
    };

    if (regime == Term4Regime::Close) {
        // z0 ~ x_s, beta0 ~ theta_s - pi: per angle,
        //   (1/alpha) [ e^-p n1(k) E[C^-k] - e^-2p 2^n_fold Gamma(k) E[C^-k] U(k,k,A/C) ]
        // where the 2^n folds e^{-2 mu x}. The csc part hits an n1 pole at
        // integer k and keeps its residue companions; the Gamma*U part has no
        // poles and runs as a plain alternating series in 2 mu.
        const double e_p = std::exp(-p_off);
        const double csc_series =
            series_value([&](std::size_t n, double k, double theta) -> double {
                (void)n;
                const double gsr = ac.sr.gain(theta);
                double first = 0.0;
                for (const GainLevel& lb : ac.st.levels()) {
                    if (lb.prob == 0.0) continue;
                    const double g_sec = lb.gain * gsr;
                    if (g_sec == 0.0) continue;
                    first += lb.prob *
                             std::pow(a0 / (tau * params.p_s * plp.c_l * g_sec), -k);
                }
                return e_p * n1(k) * first / alpha;
            });
        const SeriesResult u_series = alternating_blockage_series(
            [&](std::size_t n) -> long double {
                const double k = (static_cast<double>(n) + 2.0) / alpha;
                const auto f = [&](double theta) {
                    const double gsr = ac.sr.gain(theta);
                    const double gpr = ac.pr.gain(theta - pp.omega_p0 - kPi);
                    double second = 0.0;
                    for (const GainLevel& lb : ac.st.levels()) {
                        if (lb.prob == 0.0) continue;
                        const double g_sec = lb.gain * gsr;
                        const double g_prim = lb.gain * gpr;
                        // g_prim = 0 or rho = inf: the survival factor is
                        // dead and U(k, k, inf) = 0
                        if (g_sec == 0.0 || g_prim == 0.0 || params.rho == kInf) continue;
                        const double cs = a0 / (tau * params.p_s * plp.c_l * g_sec);
                        const double as0 = params.rho / (params.p_s * plp.c_l * g_prim);
                        second += lb.prob * std::pow(cs, -k) *
                                  tricomi_u(k, k, as0 / cs, params.quad);
                    }
                    return std::tgamma(k) * second / alpha;
                };
                return static_cast<long double>(
                    integrate(f, -kPi, kPi, params.quad.relaxed(1e-7)).value);
            },
            2.0 * mu, params.quad);
        if (!u_series.converged && flags) flags->series_failure = true;
        const IntegralResult res = integrate(
            [&](double theta) {
                const double gsr = ac.sr.gain(theta);
                double acc = 0.0;
                for (const GainLevel& lb : ac.st.levels()) {
                    const double g_sec = lb.gain * gsr;
                    if (lb.prob == 0.0 || g_sec == 0.0) continue;
                    acc += lb.prob *
                           residue_of(a0 / (tau * params.p_s * plp.c_l * g_sec));
                }
                return e_p * acc;
            },
            -kPi, kPi, params.quad.relaxed(1e-7));
        return csc_series - e_p * e_p * u_series.value + res.value;
    }

    // far: z0 ~ y_p0, beta0 ~ bearing of Y_p0; joint over the two g_st windows
    const double p_l_y = params.los_prob(pp.y_p0);
    const double gpr_far = ac.pr.gain(beta_far - pp.omega_p0 - kPi);
    const double series = series_value([&](std::size_t n, double k, double theta) -> double {
        (void)n;
        const double gsr = ac.sr.gain(theta);
        double acc = 0.0;
        for (const detail::OmegaState& st : omega_joint_states(ac.st, theta - beta_far)) {
            if (st.prob == 0.0) continue;
            const double g_sec = st.g_to_secondary * gsr;
            if (g_sec == 0.0) continue;
            const double cs = a0 / (tau * params.p_s * plp.c_l * g_sec);
            const double num =
                1.0 - p_l_y * exp_neg(map_rate(pp.y_p0, LinkState::LOS,
                                               st.g_to_primary * gpr_far, params));
            acc += st.prob * num * std::pow(cs, -k);
        }
        return std::exp(-p_off) * n1(k) * acc / alpha;
    });
    const IntegralResult res = integrate(
        [&](double theta) {
            const double gsr = ac.sr.gain(theta);
            double acc = 0.0;
            for (const detail::OmegaState& st : omega_joint_states(ac.st, theta - beta_far)) {
                if (st.prob == 0.0) continue;
                const double g_sec = st.g_to_secondary * gsr;
                if (g_sec == 0.0) continue;
                const double cs = a0 / (tau * params.p_s * plp.c_l * g_sec);
                const double num =
                    1.0 - p_l_y * exp_neg(map_rate(pp.y_p0, LinkState::LOS,
                                                   st.g_to_primary * gpr_far, params));
                acc += st.prob * num * residue_of(cs);
            }
            return std::exp(-p_off) * acc;
        },
        -kPi, kPi, params.quad.relaxed(1e-7));
    return series + res.value;
}

double term4_sectorized(double tau, const SystemParams& params, const PrimaryPlacement& pp,
                        LinkState serving, Flags* flags) {
    if (!(tau > 0.0)) throw std::domain_error("term4_sectorized: tau must be > 0");
    const AntennaConfig& ac = params.antennas;
    const PathLossParams& plp = params.plp;
    const double a0 = serving_power(serving, params);
    const double a_pair = ac.st.gain(0.0) * ac.sr.gain(0.0);
    const Term4Geometry geo{pp.y_p0, pp.primary_rx.angle()};
    const double cut = radial_cut_for_term4(tau, params, geo.y, a0);
    const double far_l = detail::far_los_probability(params.blockage);

    // Event-partitioned integrand: q_i(delta_s) weights the transmit-gain
    // pairs (A_i to the primary receiver, B_i to the considered receiver);
    // the receive events F_k select C_k = g_pr level and D_k = g_sr level.
    const auto angular_value = [&](double theta) -> double {
        const bool e1 = std::fabs(wrap_angle(theta)) <= 0.5 * ac.sr.phi ||
                        ac.sr.kind == BeamKind::Omni;
        const double d_k = e1 ? ac.sr.a : ac.sr.b;
        const auto radial = [&](double x) -> double {
            if (x <= 0.0) return 0.0;
            const double z0sq =
                x * x + geo.y * geo.y - 2.0 * x * geo.y * std::cos(theta - geo.gamma);
            const double z0 = z0sq > 0.0 ? std::sqrt(z0sq) : 0.0;
            double beta0 = theta;
            if (z0 > 1e-12)
                beta0 = std::atan2(x * std::sin(theta) - pp.primary_rx.y,
                                   x * std::cos(theta) - pp.primary_rx.x);
            const bool e2 = ac.pr.kind == BeamKind::Omni ||
                            std::fabs(wrap_angle(beta0 - pp.omega_p0 - kPi)) <= 0.5 * ac.pr.phi;
            const double c_k = e2 ? ac.pr.a : ac.pr.b;
            const double p_l_x = params.los_prob(x);
            const double p_l_z = params.los_prob(z0);
            double acc = 0.0;
            for (const detail::OmegaState& st : omega_joint_states(ac.st, theta - beta0)) {
                if (st.prob == 0.0) continue;
                for (LinkState t3 : {LinkState::LOS, LinkState::NLOS}) {
                    const double p3 = t3 == LinkState::LOS ? p_l_x : 1.0 - p_l_x;
                    const double c3 = plp.near_field(t3);
                    if (p3 == 0.0 || c3 == 0.0 || st.g_to_secondary * d_k == 0.0) continue;
                    double num = 0.0;
                    for (LinkState t4 : {LinkState::LOS, LinkState::NLOS}) {
                        const double p4 = t4 == LinkState::LOS ? p_l_z : 1.0 - p_l_z;
                        if (p4 == 0.0) continue;
                        num += p4 * (1.0 - exp_neg(map_rate(z0, t4, st.g_to_primary * c_k,
                                                            params)));
                    }
                    const double denom =
                        1.0 + (1.0 / tau) * (params.plp.near_field(serving) / c3) *
                                  std::pow(x, plp.alpha(t3)) /
                                  std::pow(params.r_s, plp.alpha(serving)) * a_pair /
                                  (st.g_to_secondary * d_k);
                    acc += st.prob * p3 * num / denom;
                }
            }
            return acc * x;
        };
        const IntegralResult r = integrate(radial, 0.0, cut, params.quad);
        if (!r.converged && flags) flags->quad_nonconverged = true;

        double tail = 0.0;
        for (LinkState t3 : {LinkState::LOS, LinkState::NLOS}) {
            const double p3 = t3 == LinkState::LOS ? far_l : 1.0 - far_l;
            const double c3 = plp.near_field(t3);
            if (p3 == 0.0 || c3 == 0.0) continue;
            for (const GainLevel& lb : ac.st.levels()) {
                const double g = lb.gain * d_k;
                if (lb.prob == 0.0 || g == 0.0) continue;
                const double c = tau * params.p_s * c3 * g / a0;
                tail += p3 * lb.prob * geometric_tail(c, plp.alpha(t3), cut);
            }
        }
        return r.value + tail;
    };

    std::vector<double> edges{-kPi};
    if (ac.sr.kind != BeamKind::Omni && ac.sr.phi < kTwoPi) {
        edges.push_back(-0.5 * ac.sr.phi);
        edges.push_back(0.5 * ac.sr.phi);
    }
    edges.push_back(kPi);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const IntegralResult r = integrate(angular_value, edges[i], edges[i + 1], params.quad);
        if (!r.converged && flags) flags->quad_nonconverged = true;
        total += r.value;
    }
    return total;
}

namespace {

double halton(std::size_t index, std::size_t base) {
    double f = 1.0, r = 0.0;
    std::size_t i = index;
    while (i > 0) {
        f /= static_cast<double>(base);
        r += f * static_cast<double>(i % base);
        i /= base;
    }
    return r;
}

}  // namespace

double typical_secondary_coverage(double tau, const SystemParams& params,
                                  double region_radius, std::size_t n_placements,
                                  Flags* flags, unsigned threads) {
    if (!(tau > 0.0)) throw std::domain_error("typical_secondary_coverage: tau must be > 0");
    if (!(region_radius > 0.0))
        throw std::domain_error("typical_secondary_coverage: R must be > 0");
    if (n_placements == 0) throw std::domain_error("typical_secondary_coverage: empty grid");

    SystemParams relaxed = params;
    relaxed.quad = params.quad.relaxed(1e-5);

    std::vector<double> values(n_placements, 0.0);
    std::vector<Flags> local(n_placements);
    parallel_for(n_placements, threads, [&](std::size_t i) {
        const double u = halton(i + 1, 2);
        const double x_p = std::max(region_radius * std::sqrt(u), 1e-3);
        const double delta = kTwoPi * halton(i + 1, 3) - kPi;
        const double omega = kTwoPi * halton(i + 1, 5) - kPi;
        const PrimaryPlacement pp(x_p, delta, omega, params.r_p, params.r_s);
        values[i] = secondary_coverage(tau, relaxed, pp, &local[i]);
    });
    double sum = 0.0;
    for (std::size_t i = 0; i < n_placements; ++i) {
        sum += values[i];
        if (flags) flags->merge(local[i]);
    }
    return finalize_probability(sum / static_cast<double>(n_placements), flags);
}

}  // namespace slseng
