#include "slseng/analytic.hpp"

#include "analytic_detail.hpp"

namespace slseng {

using detail::cross_gain_levels;
using detail::exp_neg;

double map_secondary(const SecondaryPlacement& sp, const SystemParams& params,
                     Flags* flags) {
    if (params.rho == 0.0) return 0.0;  // strict inequality, G > 0 a.s.
    const double kappa0 = cross_gain_at_primary(sp, params.antennas);
    if (kappa0 == 0.0) return 1.0;  // zero cross gain: restriction never binds
    const double p_l = params.los_prob(sp.x_s);
    double survive = 0.0;
    for (LinkState t : {LinkState::LOS, LinkState::NLOS}) {
        const double p_t = t == LinkState::LOS ? p_l : 1.0 - p_l;
        if (p_t == 0.0) continue;
        const double rate = params.kappa_t(t) / kappa0 *
                            std::pow(sp.x_s, params.plp.alpha(t));
        survive += p_t * exp_neg(rate);
    }
    return finalize_probability(1.0 - survive, flags);
}

namespace {

// Bracket of the AF series for one kappa0 level:
//   e^-p sum_n (-mu)^n/n! sum_T psi_T(n+2, kappa_T/kappa0)/alpha_T
//   - psi_N(2, kappa_N/kappa0)/alpha_N
// equal to integral(0..R) sum_T p_T(x) e^{-(kappa_T/kappa0) x^alpha_T} x dx.
double af_bracket_series(const SystemParams& params, double region_radius, double kappa0,
                         Flags* flags) {
    const PathLossParams& plp = params.plp;
    const BlockageParams& b = params.blockage;
    const double u_l = kappa0 > 0.0 ? params.kappa_t(LinkState::LOS) / kappa0 : kInf;
    const double u_n = kappa0 > 0.0 ? params.kappa_t(LinkState::NLOS) / kappa0 : kInf;

    const double standalone = -psi(LinkState::NLOS, 2.0, u_n, region_radius, plp) / plp.alpha_n;
    if (b.regime == BlockageRegime::Hbl) return standalone;

    const auto term = [&](std::size_t n) -> long double {
        const double m = static_cast<double>(n) + 2.0;
        const long double l =
            static_cast<long double>(psi(LinkState::LOS, m, u_l, region_radius, plp)) /
            plp.alpha_l;
        const long double nn =
            static_cast<long double>(psi(LinkState::NLOS, m, u_n, region_radius, plp)) /
            plp.alpha_n;
        return l + nn;
    };
    const SeriesResult s = alternating_blockage_series(term, b.mu, params.quad);
    if (!s.converged) {
        if (flags) flags->series_failure = true;
    }
    return std::exp(-b.p) * s.value + standalone;
}

// Same bracket by radial quadrature of the defining integral.
double af_bracket_reference(const SystemParams& params, double region_radius, double kappa0,
                            Flags* flags) {
    const PathLossParams& plp = params.plp;
    const double u_l = kappa0 > 0.0 ? params.kappa_t(LinkState::LOS) / kappa0 : kInf;
    const double u_n = kappa0 > 0.0 ? params.kappa_t(LinkState::NLOS) / kappa0 : kInf;
    const auto integrand = [&](double x) {
        if (x <= 0.0) return 0.0;
        const double p_l = params.los_prob(x);
        double v = 0.0;
        if (p_l > 0.0) v += p_l * exp_neg(u_l * std::pow(x, plp.alpha_l));
        if (p_l < 1.0) v += (1.0 - p_l) * exp_neg(u_n * std::pow(x, plp.alpha_n));
        return v * x;
    };
    const IntegralResult r = integrate(integrand, 0.0, region_radius, params.quad);
    if (!r.converged && flags) flags->quad_nonconverged = true;
    return r.value;
}

}  // namespace

double activity_factor(const SystemParams& params, double region_radius, Flags* flags,
                       EvalPath path) {
    if (!(region_radius > 0.0)) throw std::domain_error("activity_factor: R must be > 0");
    if (params.rho == 0.0) return 0.0;

    double inactive = 0.0;
    Flags series_flags;
    bool series_ok = true;
    for (const auto& [q, g] : cross_gain_levels(params.antennas.pr, params.antennas.st)) {
        if (q == 0.0) continue;
        double bracket = 0.0;
        if (path != EvalPath::Reference) {
            Flags local;
            bracket = af_bracket_series(params, region_radius, g, &local);
            if (local.series_failure) {
                series_ok = false;
                if (path == EvalPath::Series) series_flags.series_failure = true;
            }
        }
        if (path == EvalPath::Reference || (!series_ok && path == EvalPath::Auto)) {
            bracket = af_bracket_reference(params, region_radius, g, flags);
            if (path == EvalPath::Auto) series_flags.series_fallback = true;
        }
        inactive += q * bracket;
    }
    if (flags) flags->merge(series_flags);
    const double af = 1.0 - 2.0 / (region_radius * region_radius) * inactive;
    return finalize_probability(af, flags);
}

double activity_factor_special(const SystemParams& params, double region_radius,
                               BlockageCase blockage, BeamCase beam, Flags* flags) {
    const PathLossParams& plp = params.plp;
    const AntennaConfig& ac = params.antennas;

    // per-level bracket of the selected blockage row
    const auto cell = [&](double kappa0) -> double {
        const double u_l = kappa0 > 0.0 ? params.kappa_t(LinkState::LOS) / kappa0 : kInf;
        const double u_n = kappa0 > 0.0 ? params.kappa_t(LinkState::NLOS) / kappa0 : kInf;
        switch (blockage) {
            case BlockageCase::Zbl:
                return psi(LinkState::LOS, 2.0, u_l, region_radius, plp) / plp.alpha_l;
            case BlockageCase::Hbl:
                return -psi(LinkState::NLOS, 2.0, u_n, region_radius, plp) / plp.alpha_n;
            case BlockageCase::Nol: {
                const auto term = [&](std::size_t n) -> long double {
                    return static_cast<long double>(psi(
                        LinkState::LOS, static_cast<double>(n) + 2.0, u_l, region_radius, plp));
                };
                const SeriesResult s =
                    alternating_blockage_series(term, params.blockage.mu, params.quad);
                if (!s.converged && flags) flags->series_failure = true;
                return std::exp(-params.blockage.p) * s.value / plp.alpha_l;
            }
        }
        return 0.0;
    };

    double inactive = 0.0;
    switch (beam) {
        case BeamCase::Omni:
            inactive = cell(1.0);
            break;
        case BeamCase::Ideal: {
            const double q1 = ac.pr.q() * ac.st.q();
            inactive = q1 * cell(ac.pr.a * ac.st.a);
            break;
        }
        case BeamCase::Sectorized:
            for (const auto& [q, g] : cross_gain_levels(ac.pr, ac.st))
                if (q > 0.0) inactive += q * cell(g);
            break;
        case BeamCase::General: {
            // (1/2pi) integral over theta of E_omega[bracket(kappa0)]
            const auto angular = [&](double theta) {
                const double gpr = ac.pr.gain(theta);
                double v = 0.0;
                for (const GainLevel& ls : ac.st.levels())
                    if (ls.prob > 0.0) v += ls.prob * cell(gpr * ls.gain);
                return v;
            };
            const double half = 0.5 * ac.pr.phi;
            IntegralResult main = integrate(angular, -half, half, params.quad);
            IntegralResult side = integrate(angular, half, kTwoPi - half, params.quad);
            if ((!main.converged || !side.converged) && flags) flags->quad_nonconverged = true;
            inactive = (main.value + side.value) / kTwoPi;
            break;
        }
    }
    const double af = 1.0 - 2.0 / (region_radius * region_radius) * inactive;
    return finalize_probability(af, flags);
}

AfDirectionality directionality_af_ratio(const SystemParams& params, double region_radius,
                                         std::size_t m_elements, double kappa) {
    AfDirectionality out;
    if (m_elements <= 1) return out;  // ideal degenerates to omni

    const BeamPattern ideal = BeamPattern::ula(m_elements, kappa, BeamKind::Ideal);
    const double g1 = ideal.a * ideal.a;
    const double q1 = ideal.q() * ideal.q();
    const double alpha = params.plp.alpha_l;
    const double kappa_l = params.kappa_t(LinkState::LOS);
    const double mu = params.blockage.regime == BlockageRegime::General ? params.blockage.mu : 0.0;

    // S = int_0^{kL R^a / G1} t^{2/a-1} e^{-t - mu (G1/kL)^{1/a} t^{1/a}} dt
    //   / int_0^{kL R^a}      t^{2/a-1} e^{-t - mu (1/kL)^{1/a} t^{1/a}} dt
    const auto s_integral = [&](double gain_level) {
        const double upper = kappa_l * std::pow(region_radius, alpha) / gain_level;
        const double scale = std::pow(gain_level / kappa_l, 1.0 / alpha);
        const auto f = [&](double t) {
            if (t <= 0.0) return 0.0;
            return std::exp((2.0 / alpha - 1.0) * std::log(t) - t -
                            mu * scale * std::pow(t, 1.0 / alpha));
        };
        return integrate(f, 0.0, upper, params.quad).value;
    };
    out.s_factor = s_integral(g1) / s_integral(1.0);
    // (kappa/2pi)^{4/alpha} Q1^{1-2/alpha} equals Q1 G1^{2/alpha} for the ULA
    // pattern (G1 = M^2, Q1 = (kappa/(2pi M))^2); keep the direct product.
    out.prefactor = q1 * std::pow(g1, 2.0 / alpha);
    out.ratio = out.prefactor * out.s_factor;
    return out;
}

MeanInterference mean_interference_noblockage(const SystemParams& params, MediumCase medium) {
    const LinkState t = medium == MediumCase::LosOnly ? LinkState::LOS : LinkState::NLOS;
    const double alpha = params.plp.alpha(t);
    const double c = params.plp.near_field(t);
    if (!(alpha > 2.0))
        throw std::domain_error("mean_interference_noblockage: divergent for alpha <= 2");
    MeanInterference out;
    out.exclusion_radius = std::pow(c * params.p_s / params.rho, 1.0 / alpha);
    out.value = kTwoPi * params.lambda_s * params.p_s * c *
                std::pow(out.exclusion_radius, 2.0 - alpha) / (alpha - 2.0);
    return out;
}

InterferenceComparison mean_interference_comparison(const SystemParams& params) {
    const MeanInterference l = mean_interference_noblockage(params, MediumCase::LosOnly);
    const MeanInterference n = mean_interference_noblockage(params, MediumCase::NlosOnly);
    return {l.value, n.value, l.exclusion_radius, n.exclusion_radius, l.value / n.value};
}

}  // namespace slseng
