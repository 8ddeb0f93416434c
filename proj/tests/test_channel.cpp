#include <doctest.h>

#include <cmath>

#include "slseng/channel.hpp"
#include "slseng/params.hpp"

using namespace slseng;

namespace {
const double kKappa = deg_to_rad(121.0);
}

TEST_CASE("ULA pattern values at M = 4, kappa = 121 deg") {
    const BeamPattern bp = BeamPattern::ula(4, kKappa);
    CHECK(bp.a == doctest::Approx(4.0));
    CHECK(bp.phi == doctest::Approx(deg_to_rad(30.25)).epsilon(1e-12));
    const double kp = 121.0 / 360.0;
    CHECK(bp.b == doctest::Approx((1.0 - kp) / (1.0 - kp / 4.0)).epsilon(1e-12));
    CHECK(bp.q() == doctest::Approx(kp / 4.0).epsilon(1e-12));
}

TEST_CASE("beam normalization a q + b (1 - q) = 1") {
    for (std::size_t m : {1, 2, 4, 8, 16}) {
        const BeamPattern bp = BeamPattern::ula(m, kKappa);
        CHECK(std::fabs(bp.a * bp.q() + bp.b * (1.0 - bp.q()) - 1.0) < 1e-12);
    }
}

TEST_CASE("gain lookups") {
    const BeamPattern omni = BeamPattern::omni();
    const BeamPattern sec = BeamPattern::ula(4, kKappa);
    const BeamPattern ideal = BeamPattern::ula(4, kKappa, BeamKind::Ideal);

    CHECK(gain(omni, 0.0) == 1.0);
    CHECK(gain(omni, 2.9) == 1.0);
    CHECK(gain(sec, 0.0) == doctest::Approx(4.0));
    CHECK(gain(sec, kPi) == doctest::Approx(sec.b));
    CHECK(gain(ideal, 0.0) == doctest::Approx(4.0));
    CHECK(gain(ideal, kPi) == 0.0);

    // even, piecewise constant, one discontinuity of size |a - b| at phi/2
    for (double t = -kPi; t < kPi; t += 0.01) {
        CHECK(gain(sec, t) == gain(sec, -t));
        CHECK((gain(sec, t) == sec.a || gain(sec, t) == sec.b));
    }
    const double edge = 0.5 * sec.phi;
    CHECK(gain(sec, edge) == doctest::Approx(sec.a));  // boundary belongs to the main lobe
    CHECK(gain(sec, edge + 1e-9) == doctest::Approx(sec.b));
    CHECK(std::fabs(gain(sec, edge) - gain(sec, edge + 1e-9)) ==
          doctest::Approx(sec.a - sec.b));
}

TEST_CASE("M = 1 degenerates to omni") {
    const BeamPattern bp = BeamPattern::ula(1, kKappa);
    CHECK(bp.kind == BeamKind::Omni);
    CHECK(gain(bp, 1.0) == 1.0);
}

TEST_CASE("path loss") {
    PathLossParams plp;  // Table defaults: -60/-70 dB, 2.4/4.2
    CHECK(path_loss(1.0, LinkState::LOS, plp) == doctest::Approx(1e-6));
    CHECK(path_loss(50.0, LinkState::LOS, plp) ==
          doctest::Approx(1e-6 * std::pow(50.0, -2.4)).epsilon(1e-14));
    PathLossParams nol = plp;
    nol.nlos_outage = true;
    CHECK(path_loss(50.0, LinkState::NLOS, nol) == 0.0);
    CHECK_THROWS_AS(path_loss(0.0, LinkState::LOS, plp), std::domain_error);

    // strictly decreasing in z; LOS >= NLOS for z >= 1
    double prev_l = kInf, prev_n = kInf;
    for (double z = 1.0; z < 300.0; z += 3.7) {
        const double l = path_loss(z, LinkState::LOS, plp);
        const double n = path_loss(z, LinkState::NLOS, plp);
        CHECK(l < prev_l);
        CHECK(n < prev_n);
        CHECK(l >= n);
        prev_l = l;
        prev_n = n;
    }
    // near-field cap below 1 m
    CHECK(path_loss(0.25, LinkState::LOS, plp) == doctest::Approx(1e-6));
}

TEST_CASE("received power at the primary receiver") {
    SystemParams params;
    const AntennaConfig omni = AntennaConfig::omni();
    CHECK(received_power_at_primary(SecondaryPlacement(10.0, 0.3, 1.0), 0.0, LinkState::LOS,
                                    params.p_s, params.antennas, params.plp) == 0.0);
    CHECK(received_power_at_primary(SecondaryPlacement(1.0, 0.7, -0.4), 1.0, LinkState::LOS,
                                    params.p_s, omni, params.plp) ==
          doctest::Approx(params.p_s * 1e-6));
    // both boresights aligned: theta = 0, omega = -pi puts both angle args at 0
    const AntennaConfig dir = AntennaConfig::ula(4, 4, kKappa);
    const double p = received_power_at_primary(SecondaryPlacement(20.0, 0.0, -kPi), 0.8,
                                               LinkState::LOS, params.p_s, dir, params.plp);
    CHECK(p == doctest::Approx(params.p_s * 16.0 * 0.8 * 1e-6 * std::pow(20.0, -2.4)));
}

TEST_CASE("transmit indicator uses a strict inequality") {
    CHECK(transmit_indicator(0.0, 1e-12));
    CHECK(!transmit_indicator(1e-12, 1e-12));
    CHECK(transmit_indicator(0.5e-12, 1e-12));
    CHECK(!transmit_indicator(1.0, 0.0));
    // monotone in rho
    const double power = 3.7e-13;
    bool was_true = false;
    for (double rho = 1e-14; rho < 1e-11; rho *= 2.0) {
        const bool now = transmit_indicator(power, rho);
        if (was_true) CHECK(now);
        was_true = now;
    }
}

TEST_CASE("fading moments over one million draws") {
    Rng rng(99, 0, 0);
    const std::size_t n = 1000000;
    double sum = 0.0, sum_sq = 0.0;
    std::size_t above_median = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double g = sample_fading(rng);
        sum += g;
        sum_sq += g * g;
        if (g > std::log(2.0)) ++above_median;
    }
    const double mean = sum / n;
    const double var = sum_sq / n - mean * mean;
    CHECK(std::fabs(mean - 1.0) < 0.003);                       // 3 SE of exp(1)
    CHECK(std::fabs(var - 1.0) < 0.02);
    CHECK(std::fabs(static_cast<double>(above_median) / n - 0.5) < 0.002);
}
