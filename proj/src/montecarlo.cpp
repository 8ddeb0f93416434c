#include "slseng/montecarlo.hpp"

#include <cmath>

#include "slseng/parallel.hpp"

namespace slseng {

namespace {

// stream ids keep the keyed substreams of different estimators apart
enum Stream : std::uint64_t {
    kStreamRealization = 1,
    kStreamMap = 2,
    kStreamAf = 3,
    kStreamPrimaryCov = 4,
    kStreamSecondaryCov = 5,
    kStreamMeanInterference = 6,
};

// batch-means standard error (20 batches): samples within one realization
// are dependent, realizations are not.
McEstimate batch_means(const std::vector<double>& per_realization) {
    constexpr std::size_t kBatches = 20;
    McEstimate est;
    est.trials = per_realization.size();
    if (per_realization.empty()) return est;

    double total = 0.0;
    for (double v : per_realization) total += v;
    est.mean = total / static_cast<double>(per_realization.size());

    if (per_realization.size() < 2 * kBatches) {
        // fall back to the plain sample variance
        double ss = 0.0;
        for (double v : per_realization) ss += (v - est.mean) * (v - est.mean);
        const double n = static_cast<double>(per_realization.size());
        est.std_error = n > 1.0 ? std::sqrt(ss / (n * (n - 1.0))) : 0.0;
        return est;
    }

    double batch_mean[kBatches];
    std::size_t batch_count[kBatches] = {};
    double batch_sum[kBatches] = {};
    for (std::size_t i = 0; i < per_realization.size(); ++i) {
        const std::size_t b = i * kBatches / per_realization.size();
        batch_sum[b] += per_realization[i];
        ++batch_count[b];
    }
    double mean_of_batches = 0.0;
    for (std::size_t b = 0; b < kBatches; ++b) {
        batch_mean[b] = batch_sum[b] / static_cast<double>(batch_count[b]);
        mean_of_batches += batch_mean[b];
    }
    mean_of_batches /= kBatches;
    double ss = 0.0;
    for (std::size_t b = 0; b < kBatches; ++b)
        ss += (batch_mean[b] - mean_of_batches) * (batch_mean[b] - mean_of_batches);
    est.std_error = std::sqrt(ss / (kBatches * (kBatches - 1.0)));
    return est;
}

LinkState draw_state(Rng& rng, double p_los) {
    return rng.uniform() < p_los ? LinkState::LOS : LinkState::NLOS;
}

}  // namespace

Realization sample_realization(const SystemParams& params, const McConfig& mc, Rng& rng) {
    mc.validate();
    Realization r;
    const double area_mean = params.lambda_s * kPi * mc.r_sim * mc.r_sim;
    const std::uint64_t count = area_mean > 0.0 ? rng.poisson(area_mean) : 0;
    r.points.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        const double radius = mc.r_sim * std::sqrt(rng.uniform());
        const double theta = rng.uniform_angle() - kPi;
        const double omega = rng.uniform_angle() - kPi;
        Realization::Point pt{PolarPoint(radius, theta), omega, LinkState::LOS, 0.0, false};
        pt.state_to_primary = draw_state(rng, params.los_prob(radius));
        pt.fading_to_primary = rng.exp1();
        if (radius > 0.0) {
            const SecondaryPlacement sp(radius, theta, omega);
            const double power = received_power_at_primary(
                sp, pt.fading_to_primary, pt.state_to_primary, params.p_s, params.antennas,
                params.plp);
            pt.active = transmit_indicator(power, params.rho);
            if (pt.active) r.interference += power;
        }
        r.points.push_back(pt);
    }
    r.primary_state = draw_state(rng, params.los_prob(params.r_p));
    r.primary_fading = rng.exp1();
    const double g_own = params.antennas.pt.gain(0.0) * params.antennas.pr.gain(0.0);
    const double signal = r.primary_fading * params.p_p * g_own *
                          path_loss(params.r_p, r.primary_state, params.plp);
    r.sinr = signal / (params.sigma2 + r.interference);
    return r;
}

McEstimate estimate_map(const SecondaryPlacement& sp, const SystemParams& params,
                        std::uint64_t n, const McConfig& mc) {
    std::vector<double> stats(n, 0.0);
    const double p_los = params.los_prob(sp.x_s);
    parallel_for(n, mc.threads, [&](std::size_t i) {
        Rng rng(mc.seed, kStreamMap, i);
        const double u_state = rng.uniform();
        const double u_fade = rng.uniform();
        const auto eval = [&](double us, double uf) {
            const LinkState st = us < p_los ? LinkState::LOS : LinkState::NLOS;
            const double fade = -std::log1p(-std::min(uf, 0x1.fffffffffffffp-1));
            const double power = received_power_at_primary(sp, fade, st, params.p_s,
                                                           params.antennas, params.plp);
            return transmit_indicator(power, params.rho) ? 1.0 : 0.0;
        };
        stats[i] = mc.antithetic_fading
                       ? 0.5 * (eval(u_state, u_fade) + eval(1.0 - u_state, 1.0 - u_fade))
                       : eval(u_state, u_fade);
    });
    return batch_means(stats);
}

McEstimate estimate_af(const SystemParams& params, const McConfig& mc) {
    mc.validate();
    const double expected = params.lambda_s * kPi * mc.region_radius * mc.region_radius;
    if (expected <= 0.0)
        throw std::domain_error("estimate_af: zero expected count in the region");
    std::vector<double> stats(mc.n_realizations, 0.0);
    parallel_for(mc.n_realizations, mc.threads, [&](std::size_t i) {
        Rng rng(mc.seed, kStreamAf, i);
        const std::uint64_t count = rng.poisson(expected);
        double active = 0.0;
        for (std::uint64_t j = 0; j < count; ++j) {
            const double radius = mc.region_radius * std::sqrt(rng.uniform());
            const double theta = rng.uniform_angle() - kPi;
            const double omega = rng.uniform_angle() - kPi;
            const LinkState st = draw_state(rng, params.los_prob(radius));
            const double fade = rng.exp1();
            if (radius <= 0.0) continue;
            const SecondaryPlacement sp(radius, theta, omega);
            const double power = received_power_at_primary(sp, fade, st, params.p_s,
                                                           params.antennas, params.plp);
            if (transmit_indicator(power, params.rho)) active += 1.0;
        }
        stats[i] = active / expected;
    });
    return batch_means(stats);
}

CoverageCurve estimate_primary_coverage(const std::vector<double>& tau_grid_db,
                                        const SystemParams& params, const McConfig& mc) {
    mc.validate();
    std::vector<double> sinr(mc.n_realizations, 0.0);
    parallel_for(mc.n_realizations, mc.threads, [&](std::size_t i) {
        Rng rng(mc.seed, kStreamPrimaryCov, i);
        sinr[i] = sample_realization(params, mc, rng).sinr;
    });

    CoverageCurve curve;
    curve.method = "mc";
    curve.tau_db = tau_grid_db;
    curve.trials = mc.n_realizations;
    std::vector<double> indicator(mc.n_realizations);
    for (double tau_db : tau_grid_db) {
        const double tau = db_to_linear(tau_db);
        for (std::size_t i = 0; i < sinr.size(); ++i) indicator[i] = sinr[i] > tau ? 1.0 : 0.0;
        const McEstimate est = batch_means(indicator);
        curve.values.push_back(est.mean);
        curve.std_errors.push_back(est.std_error);
    }
    return curve;
}

CoverageCurve estimate_secondary_coverage(const std::vector<double>& tau_grid_db,
                                          const SystemParams& params,
                                          const std::optional<PrimaryPlacement>& pp,
                                          const McConfig& mc) {
    mc.validate();
    const AntennaConfig& ac = params.antennas;
    std::vector<double> sinr(mc.n_realizations, 0.0);
    std::vector<char> transmitted(mc.n_realizations, 0);

    parallel_for(mc.n_realizations, mc.threads, [&](std::size_t i) {
        Rng rng(mc.seed, kStreamSecondaryCov, i);

        PrimaryPlacement placement = pp.has_value()
                                         ? *pp
                                         : [&] {
                                               const double x_p = std::max(
                                                   mc.region_radius * std::sqrt(rng.uniform()),
                                                   1e-3);
                                               const double delta = rng.uniform_angle() - kPi;
                                               const double omega = rng.uniform_angle() - kPi;
                                               return PrimaryPlacement(x_p, delta, omega,
                                                                       params.r_p, params.r_s);
                                           }();

        // own link
        const LinkState own_state = draw_state(rng, params.los_prob(params.r_s));
        const double own_fading = rng.exp1();

        // transmit restriction of the considered transmitter at r_s<0
        const LinkState cross_state = draw_state(rng, params.los_prob(placement.z_00));
        const double cross_fading = rng.exp1();
        const double gg10 = ac.st.gain(placement.beta_00) *
                            ac.pr.gain(placement.beta_00 - placement.omega_p0 - kPi);
        const double power_at_primary = placement.z_00 > 0.0
                                            ? params.p_s * gg10 * cross_fading *
                                                  path_loss(placement.z_00, cross_state,
                                                            params.plp)
                                            : kInf;
        const bool own_active = transmit_indicator(power_at_primary, params.rho);
        transmitted[i] = own_active ? 1 : 0;
        if (!own_active) {
            sinr[i] = 0.0;
            return;
        }

        // primary interference at the considered receiver
        const LinkState p_state = draw_state(rng, params.los_prob(placement.x_p0));
        const double p_fading = rng.exp1();
        const double kbar = ac.sr.gain(placement.delta_p0) *
                            ac.pt.gain(placement.delta_p0 - kPi - placement.omega_p0);
        const double i_p = params.p_p * kbar * p_fading *
                           path_loss(placement.x_p0, p_state, params.plp);

        // secondary interferers: PPP around the considered receiver; each
        // transmitter's activity is checked against the primary receiver at
        // Y_p0 with its own cross-link blockage state and the SAME position
        // and boresight, then its interference here uses an independent
        // cross-link state/fading (the two paths are blocked independently).
        double i_s = 0.0;
        const double area_mean = params.lambda_s * kPi * mc.r_sim * mc.r_sim;
        const std::uint64_t count = area_mean > 0.0 ? rng.poisson(area_mean) : 0;
        for (std::uint64_t j = 0; j < count; ++j) {
            const double x = mc.r_sim * std::sqrt(rng.uniform());
            const double theta = rng.uniform_angle() - kPi;
            const double omega = rng.uniform_angle() - kPi;
            const double zx = x * std::cos(theta) - placement.primary_rx.x;
            const double zy = x * std::sin(theta) - placement.primary_rx.y;
            const double z = std::hypot(zx, zy);
            const double beta = std::atan2(zy, zx);
            const LinkState to_prim = draw_state(rng, params.los_prob(z));
            const double g_ind = rng.exp1();
            const LinkState to_sec = draw_state(rng, params.los_prob(x));
            const double f_int = rng.exp1();
            if (x <= 0.0) continue;
            const double kappa_prim = z > 0.0 ? ac.pr.gain(beta - placement.omega_p0 - kPi) *
                                                    ac.st.gain(beta - kPi - omega)
                                              : ac.pr.a * ac.st.a;
            const double p_prim = z > 0.0
                                      ? params.p_s * kappa_prim * g_ind *
                                            path_loss(z, to_prim, params.plp)
                                      : kInf;
            if (!transmit_indicator(p_prim, params.rho)) continue;
            const double kappa_sec = ac.sr.gain(theta) * ac.st.gain(theta - kPi - omega);
            i_s += params.p_s * kappa_sec * f_int * path_loss(x, to_sec, params.plp);
        }

        const double signal = own_fading * params.p_s * ac.st.gain(0.0) * ac.sr.gain(0.0) *
                              path_loss(params.r_s, own_state, params.plp);
        sinr[i] = signal / (params.sigma2 + i_p + i_s);
    });

    CoverageCurve curve;
    curve.method = "mc";
    curve.tau_db = tau_grid_db;
    curve.trials = mc.n_realizations;
    std::vector<double> indicator(mc.n_realizations);
    for (double tau_db : tau_grid_db) {
        const double tau = db_to_linear(tau_db);
        for (std::size_t i = 0; i < sinr.size(); ++i)
            indicator[i] = (transmitted[i] && sinr[i] > tau) ? 1.0 : 0.0;
        const McEstimate est = batch_means(indicator);
        curve.values.push_back(est.mean);
        curve.std_errors.push_back(est.std_error);
    }
    return curve;
}

McEstimate estimate_mean_interference(const SystemParams& params, const McConfig& mc,
                                      MediumCase medium) {
    mc.validate();
    const LinkState t = medium == MediumCase::LosOnly ? LinkState::LOS : LinkState::NLOS;
    const double alpha = params.plp.alpha(t);
    const double c = params.plp.near_field(t);
    const double exclusion = std::pow(c * params.p_s / params.rho, 1.0 / alpha);

    std::vector<double> stats(mc.n_realizations, 0.0);
    const double area_mean = params.lambda_s * kPi * mc.r_sim * mc.r_sim;
    parallel_for(mc.n_realizations, mc.threads, [&](std::size_t i) {
        Rng rng(mc.seed, kStreamMeanInterference, i);
        const std::uint64_t count = rng.poisson(area_mean);
        double total = 0.0;
        for (std::uint64_t j = 0; j < count; ++j) {
            const double x = mc.r_sim * std::sqrt(rng.uniform());
            rng.uniform();  // angle, irrelevant without directionality
            if (x > exclusion) total += params.p_s * c * std::pow(x, -alpha);
        }
        stats[i] = total;
    });
    return batch_means(stats);
}

}  // namespace slseng
