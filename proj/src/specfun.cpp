#include "slseng/specfun.hpp"

#include <cmath>

namespace slseng {
namespace {

// Regularized lower incomplete gamma, series branch (x < a + 1).
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < 500; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-16)
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma, continued fraction branch (x >= a + 1).
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double regularized_gamma_p(double a, double b) {
    if (!(a > 0.0)) throw std::domain_error("lower_inc_gamma: a must be > 0");
    if (!(b >= 0.0)) throw std::domain_error("lower_inc_gamma: b must be >= 0");
    if (b == 0.0) return 0.0;
    if (std::isinf(b)) return 1.0;
    return b < a + 1.0 ? gamma_p_series(a, b) : 1.0 - gamma_q_cf(a, b);
}

double lower_inc_gamma(double a, double b) {
    return regularized_gamma_p(a, b) * std::tgamma(a);
}

double psi(LinkState state, double m, double u, double region_radius,
           const PathLossParams& plp) {
    if (!(m > 0.0)) throw std::domain_error("psi: m must be > 0");
    if (!(u >= 0.0)) throw std::domain_error("psi: u must be >= 0");
    if (!(region_radius > 0.0)) throw std::domain_error("psi: R must be > 0");
    const double alpha = plp.alpha(state);
    const double sign = state == LinkState::LOS ? 1.0 : -1.0;
    if (std::isinf(u)) return 0.0;
    if (u == 0.0) return sign * alpha * std::pow(region_radius, m) / m;
    const double k = m / alpha;
    const double arg = u * std::pow(region_radius, alpha);
    const long double inc = static_cast<long double>(regularized_gamma_p(k, arg)) *
                            std::exp(std::lgamma(static_cast<long double>(k)));
    const long double scale = std::exp(-static_cast<long double>(k) *
                                        std::log(static_cast<long double>(u)));
    return sign * static_cast<double>(scale * inc);
}

double n1(double k) {
    if (!(k > 0.0)) throw std::domain_error("n1: pole or invalid argument (k <= 0)");
    const double nearest = std::round(k);
    if (std::fabs(k - nearest) < 1e-9)
        throw std::domain_error("n1: pole at integer k");
    return kPi / std::sin(kPi * k);
}

double n2(double k, double nu, const QuadratureSpec& spec) {
    if (!(nu >= 0.0)) throw std::domain_error("n2: nu must be >= 0");
    if (nu == 0.0) {
        if (!(k > 0.0)) throw std::domain_error("n2: needs k > 0 when nu = 0");
        return std::tgamma(k);
    }
    if (!(k >= 0.0)) throw std::domain_error("n2: k must be >= 0");
    if (std::isinf(nu)) return 0.0;

    // u = nu + t:  e^{-nu} * integral(0..inf) e^{-t} t^k / (nu + t) dt.
    // The integrand peaks near t = k; march the upper cut out until the
    // log-magnitude falls 70 nats below the peak.
    const double log_peak = k > 0.0 ? k * (std::log(k) - 1.0) : 0.0;
    double cut = std::max(k, 1.0);
    while (-cut + k * std::log(cut) > log_peak - 70.0) cut *= 1.5;

    QuadratureSpec q = spec;
    q.rel_tol = std::min(spec.rel_tol, 1e-11);
    const auto integrand = [&](double t) {
        return std::exp(-t + k * std::log(t)) / (nu + t);
    };
    // split at the peak so the rule sees the rise and the decay separately
    const double split = std::min(std::max(k, 1e-3), cut * 0.5);
    const IntegralResult left = integrate(integrand, 0.0, split, q);
    const IntegralResult right = integrate(integrand, split, cut, q);
    return std::exp(-nu) * (left.value + right.value);
}

double n3(double k, const AntennaConfig& ac) {
    if (!(k > 0.0)) throw std::domain_error("n3: k must be > 0");
    double sum = 0.0;
    for (const GainLevel& lp : ac.pr.levels())
        for (const GainLevel& ls : ac.st.levels()) {
            const double q = lp.prob * ls.prob;
            const double g = lp.gain * ls.gain;
            if (q == 0.0) continue;
            sum += g > 0.0 ? q * std::pow(g, k) : 0.0;
        }
    return kTwoPi * sum;
}

long double script_n_l(double k, double s, double kappa, double alpha,
                       const QuadratureSpec& spec) {
    if (!(s >= 0.0)) throw std::domain_error("script_n: s must be >= 0");
    if (!(kappa > 0.0)) throw std::domain_error("script_n: kappa must be > 0");
    if (std::isinf(kappa)) return 0.0L;
    if (s == 0.0) return 0.0L;
    const long double bracket = std::pow(static_cast<long double>(s), k) * n1(k) -
                                std::exp(std::lgamma(static_cast<long double>(k))) +
                                static_cast<long double>(n2(k, s, spec));
    const long double scale = std::exp(-static_cast<long double>(k) *
                                        std::log(static_cast<long double>(kappa)));
    return scale * bracket / static_cast<long double>(alpha);
}

double script_n(double k, double s, double kappa, double alpha,
                const QuadratureSpec& spec) {
    return static_cast<double>(script_n_l(k, s, kappa, alpha, spec));
}

double tricomi_u(double a, double b, double z, const QuadratureSpec& spec) {
    if (!(a > 0.0)) throw std::domain_error("tricomi_u: a must be > 0");
    if (!(z > 0.0)) throw std::domain_error("tricomi_u: z must be > 0");

    QuadratureSpec q = spec;
    q.rel_tol = std::min(spec.rel_tol, 1e-11);
    const double e = b - a - 1.0;

    // t in [0, 1] with t = w^{1/a}: absorbs the t^{a-1} endpoint.
    const IntegralResult head = integrate(
        [&](double w) {
            const double t = std::pow(w, 1.0 / a);
            return std::exp(-z * t) * std::pow(1.0 + t, e) / a;
        },
        0.0, 1.0, q);

    // t in [1, inf) in log space; cut when the integrand is 70 nats down.
    double smax = 1.0;
    for (int i = 0; i < 64; ++i) {
        const double need = (70.0 + a * smax + std::fabs(e) * smax) / z;
        const double next = std::log1p(need);
        if (next <= smax) break;
        smax = next;
    }
    const IntegralResult tail = integrate(
        [&](double s_) {
            const double t = std::exp(s_);
            return std::exp(-z * t + a * s_) * std::pow(1.0 + t, e);
        },
        0.0, smax, q);

    return (head.value + tail.value) / std::tgamma(a);
}

}  // namespace slseng
