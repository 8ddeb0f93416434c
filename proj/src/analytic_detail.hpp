#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "slseng/analytic.hpp"

namespace slseng::detail {

// Cross-gain level (Q_i, G_i): joint probability and product of one receive
// and one transmit two-level pattern under a uniform boresight.
struct GainLevelPair {
    double prob;
    double gain;
};

inline std::array<GainLevelPair, 4> cross_gain_levels(const BeamPattern& rx,
                                                      const BeamPattern& tx) {
    std::array<GainLevelPair, 4> out{};
    std::size_t k = 0;
    for (const GainLevel& r : rx.levels())
        for (const GainLevel& t : tx.levels())
            out[k++] = {r.prob * t.prob, r.gain * t.gain};
    return out;
}

// Joint distribution of (gain toward the primary receiver, gain toward the
// considered secondary receiver) of one interfering transmitter over its
// uniform boresight. The two main-lobe windows have the same width and
// centers separated by delta = theta_s - beta_0.
struct OmegaState {
    double prob;
    double g_to_primary;
    double g_to_secondary;
};

inline std::array<OmegaState, 4> omega_joint_states(const BeamPattern& st, double delta) {
    if (st.kind == BeamKind::Omni)
        return {{{1.0, 1.0, 1.0}, {0.0, 1.0, 1.0}, {0.0, 1.0, 1.0}, {0.0, 1.0, 1.0}}};
    const double d = std::fabs(wrap_angle(delta));
    const double phi = st.phi;
    double overlap = std::max(0.0, phi - d) + std::max(0.0, phi - (kTwoPi - d));
    overlap = std::min(overlap, phi);
    const double q = st.q();
    const double q_both = overlap / kTwoPi;
    const double q_one = std::max(0.0, q - q_both);
    const double q_none = std::max(0.0, 1.0 - 2.0 * q + q_both);
    return {{{q_both, st.a, st.a},
             {q_one, st.a, st.b},
             {q_one, st.b, st.a},
             {q_none, st.b, st.b}}};
}

// exp(-r) with the convention exp(-inf) = 0 and the 0*inf guard resolved to 0
// rate when the numerator vanished first.
inline double exp_neg(double rate) { return rate == kInf ? 0.0 : std::exp(-rate); }

// Geometric tail integral(X..inf) (c x^-a)/(1 + c x^-a) x dx, requiring
// c X^-a <= 1/2. Shared by the interference tails: x/(1+C x^a) is the same
// series with c = 1/C.
inline double geometric_tail(double c, double alpha, double x_cut) {
    if (c == 0.0) return 0.0;
    const double r0 = c * std::pow(x_cut, -alpha);
    double sum = 0.0;
    double rj = 1.0;
    for (int j = 1; j <= 80; ++j) {
        rj *= -r0;
        const double term = -rj * std::pow(x_cut, 2.0) / (alpha * j - 2.0);
        sum += term;
        if (std::fabs(term) < 1e-17 * std::fabs(sum)) break;
    }
    return sum;
}

// Survival value of p_L(x) as x -> inf (constant under ZBL/pure-p models,
// zero whenever mu > 0 or under HBL).
inline double far_los_probability(const BlockageParams& b) {
    if (b.regime == BlockageRegime::Hbl) return 0.0;
    if (b.regime == BlockageRegime::Zbl) return 1.0;
    return b.mu > 0.0 ? 0.0 : std::exp(-b.p);
}

constexpr double kDeadExponent = 70.0;  // e^-70 times X^2 stays below 1e-12

inline const SecondaryType kFixedTypes[3] = {SecondaryType::T1, SecondaryType::T2,
                                             SecondaryType::T3};

// Alternating blockage series whose terms hit continuation poles of n1 at
// integer (n+2)/alpha. Terms are summed until quiet (series_term_tol),
// until a pole, or until max_terms. A pole reached while the running
// truncation estimate is already below accept_rel counts as converged: the
// printed series is only asymptotic past the pole and the omitted remainder
// is bounded by the last term.
struct PoleSeriesResult {
    double value = 0.0;
    bool converged = true;
    double truncation_estimate = 0.0;
};

template <typename TermFn, typename PoleFn>
PoleSeriesResult pole_aware_series(double mu, TermFn&& term, PoleFn&& pole_at,
                                   const QuadratureSpec& spec, double accept_rel = 1e-7) {
    PoleSeriesResult res;
    long double sum = 0.0L;
    long double factor = 1.0L;
    long double last = 0.0L;
    std::size_t quiet = 0;
    bool settled = false;
    for (std::size_t n = 0; n < spec.series_max_terms; ++n) {
        if (pole_at(n)) {
            res.value = static_cast<double>(sum);
            res.truncation_estimate =
                sum == 0.0L ? 0.0 : static_cast<double>(std::fabs(last / sum));
            res.converged = settled || res.truncation_estimate <= accept_rel;
            return res;
        }
        if (n > 0) factor *= static_cast<long double>(-mu) / static_cast<long double>(n);
        last = factor * term(n);
        sum += last;
        if (mu == 0.0) {
            res.value = static_cast<double>(sum);
            return res;
        }
        const long double scale = std::max<long double>(std::fabs(sum), 1e-300L);
        if (n > 0 && std::fabs(last) < spec.series_term_tol * scale) {
            if (++quiet >= 3) settled = true;
            if (settled) {
                res.value = static_cast<double>(sum);
                return res;
            }
        } else {
            quiet = 0;
        }
    }
    res.value = static_cast<double>(sum);
    res.truncation_estimate =
        sum == 0.0L ? 1.0 : static_cast<double>(std::fabs(last / sum));
    res.converged = res.truncation_estimate <= accept_rel;
    return res;
}

inline bool near_integer(double k, double tol = 1e-6) {
    return std::fabs(k - std::round(k)) < tol;
}

}  // namespace slseng::detail
