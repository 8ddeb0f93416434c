#include <doctest.h>

#include <cmath>

#include "slseng/geometry.hpp"
#include "slseng/rng.hpp"

using namespace slseng;

TEST_CASE("angle normalization lands in [-pi, pi)") {
    CHECK(wrap_angle(kPi) == doctest::Approx(-kPi));
    CHECK(wrap_angle(-kPi) == doctest::Approx(-kPi));
    CHECK(wrap_angle(3.0 * kPi) == doctest::Approx(-kPi));
    CHECK(wrap_angle(0.25) == doctest::Approx(0.25));
    for (double t = -25.0; t < 25.0; t += 0.37) {
        const double w = wrap_angle(t);
        CHECK(w >= -kPi);
        CHECK(w < kPi);
        CHECK(std::fabs(std::sin(w) - std::sin(t)) < 1e-12);
        CHECK(std::fabs(std::cos(w) - std::cos(t)) < 1e-12);
    }
}

TEST_CASE("polar points validate and normalize") {
    const PolarPoint p(2.0, 5.0 * kPi / 2.0);
    CHECK(p.angle == doctest::Approx(kPi / 2.0));
    CHECK(p.to_vec().x == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(p.to_vec().y == doctest::Approx(2.0));
    CHECK_THROWS_AS(PolarPoint(-1.0, 0.0), std::domain_error);
}

TEST_CASE("LOS probability") {
    const BlockageParams zbl = BlockageParams::zbl();
    const BlockageParams hbl = BlockageParams::hbl();
    const BlockageParams gen = BlockageParams::general(1.0 / 200.0);

    CHECK(los_probability(123.0, zbl) == 1.0);
    CHECK(los_probability(123.0, hbl) == 0.0);
    CHECK(los_probability(0.0, BlockageParams::general(0.02)) == doctest::Approx(1.0));
    CHECK(los_probability(50.0, gen) == doctest::Approx(std::exp(-0.25)).epsilon(1e-14));
    CHECK_THROWS_AS(los_probability(-1.0, gen), std::domain_error);

    // monotone non-increasing in z and in mu
    double prev = 1.1;
    for (double z = 0.0; z < 500.0; z += 10.0) {
        const double v = los_probability(z, gen);
        CHECK(v <= prev);
        prev = v;
    }
    for (double mu = 0.0; mu < 0.2; mu += 0.01) {
        CHECK(los_probability(100.0, BlockageParams::general(mu)) <=
              los_probability(100.0, BlockageParams::general(std::max(mu - 0.01, 0.0))) + 1e-15);
    }
}

TEST_CASE("average LOS distance") {
    CHECK(BlockageParams::zbl().l_mu() == kInf);
    CHECK(BlockageParams::hbl().l_mu() == 0.0);
    CHECK(BlockageParams::general(0.005).l_mu() == doctest::Approx(200.0));
}

TEST_CASE("placement presets reproduce the three set-ups") {
    const PrimaryPlacement t1 = preset_placement(SecondaryType::T1, 50.0, 20.0);
    CHECK(t1.delta_p0 == doctest::Approx(kPi / 2));
    CHECK(t1.x_p0 == doctest::Approx(50.0));
    CHECK(t1.omega_p0 == doctest::Approx(kPi / 12));
    const PrimaryPlacement t2 = preset_placement(SecondaryType::T2, 50.0, 20.0);
    CHECK(t2.delta_p0 == doctest::Approx(kPi / 2));
    CHECK(t2.x_p0 == doctest::Approx(80.0));
    CHECK(t2.omega_p0 == doctest::Approx(-kPi / 2));
    const PrimaryPlacement t3 = preset_placement(SecondaryType::T3, 50.0, 20.0);
    CHECK(t3.delta_p0 == doctest::Approx(kPi / 2));
    CHECK(t3.x_p0 == doctest::Approx(10.0));
    CHECK(t3.omega_p0 == doctest::Approx(kPi / 2));
    CHECK_THROWS(preset_placement(SecondaryType::T4, 50.0, 20.0));
}

TEST_CASE("primary link length is reproduced exactly") {
    Rng rng(7, 0, 0);
    for (int i = 0; i < 2000; ++i) {
        const double x = 1.0 + 200.0 * rng.uniform();
        const double d = rng.uniform_angle() - kPi;
        const double w = rng.uniform_angle() - kPi;
        const double r_p = 1.0 + 100.0 * rng.uniform();
        const PrimaryPlacement pp(x, d, w, r_p, 20.0);
        const double link = (pp.primary_tx - pp.primary_rx).norm();
        CHECK(std::fabs(link - r_p) <= 1e-12 * r_p);
    }
}

TEST_CASE("distance to the primary receiver") {
    const PrimaryPlacement t3 = preset_placement(SecondaryType::T3, 50.0, 20.0);
    // transmitter at (0,10) beaming up: receiver at (0,10) + (0,50) = (0,60)
    CHECK(t3.primary_rx.x == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(t3.primary_rx.y == doctest::Approx(60.0));
    CHECK(distance_to_primary_rx(60.0, kPi / 2, t3) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(distance_to_primary_rx(20.0, 0.0, t3) ==
          doctest::Approx(std::hypot(20.0, 60.0)).epsilon(1e-12));
    // at the origin the distance is y_p0 by definition
    const PrimaryPlacement t1 = preset_placement(SecondaryType::T1, 50.0, 20.0);
    CHECK(distance_to_primary_rx(1e-14, 0.0, t1) == doctest::Approx(t1.y_p0).epsilon(1e-9));
}

TEST_CASE("bearing of a point next to the receiver") {
    const PrimaryPlacement t2 = preset_placement(SecondaryType::T2, 50.0, 20.0);
    // T2 receiver: (0,80) + 50*unit(-pi/2) = (0,30)
    CHECK(t2.primary_rx.x == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(t2.primary_rx.y == doctest::Approx(30.0));
    const Vec2 probe = t2.primary_rx + Vec2{1.0, 0.0};
    const double beta = beta_to_primary(probe.norm(), probe.angle(), t2);
    CHECK(beta == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_THROWS_AS(
        beta_to_primary(t2.primary_rx.norm(), t2.primary_rx.angle(), t2),
        std::domain_error);
}

TEST_CASE("Cartesian bearing agrees with the arcsin composition") {
    // the composition returns the bearing toward the receiver; the Cartesian
    // route returns the bearing from it -- a pi shift apart. Probe points are
    // chosen on the principal branch of the outer arcsin.
    const PrimaryPlacement t2 = preset_placement(SecondaryType::T2, 50.0, 20.0);
    const double b2 = wrap_angle(beta_to_primary(10.0, kPi / 2, t2) + kPi);
    CHECK(std::fabs(wrap_angle(b2 - beta_towards_primary_arcsin(10.0, kPi / 2, t2))) < 1e-9);
    const PrimaryPlacement t1 = preset_placement(SecondaryType::T1, 50.0, 20.0);
    const double b1 = wrap_angle(beta_to_primary(30.0, kPi / 4, t1) + kPi);
    CHECK(std::fabs(wrap_angle(b1 - beta_towards_primary_arcsin(30.0, kPi / 4, t1))) < 1e-9);
}

TEST_CASE("frame consistency over randomized geometries") {
    // the arcsin form is only valid on its principal branch; branch-adjacent
    // samples are counted, not asserted
    Rng rng(1234, 1, 0);
    std::size_t asserted = 0, skipped = 0;
    for (int i = 0; i < 10000; ++i) {
        const double x_p0 = 5.0 + 150.0 * rng.uniform();
        const double delta = rng.uniform_angle() - kPi;
        const double omega = rng.uniform_angle() - kPi;
        const double r_p = 5.0 + 80.0 * rng.uniform();
        const PrimaryPlacement pp(x_p0, delta, omega, r_p, 20.0);
        double x_s, theta;
        if (i % 2 == 0) {
            // point placed around the receiver so the to-receiver bearing
            // stays within the outer principal branch
            const double d = (0.05 + 0.45 * rng.uniform()) * pp.y_p0;
            const double psi = pp.primary_rx.angle() + kPi +
                               0.8 * (rng.uniform() - 0.5) * kPi;
            const Vec2 p = pp.primary_rx + Vec2{d * std::cos(psi), d * std::sin(psi)};
            x_s = std::max(p.norm(), 1e-3);
            theta = p.angle();
        } else {
            x_s = 1.0 + 400.0 * rng.uniform();
            theta = rng.uniform_angle() - kPi;
        }

        const double z = distance_to_primary_rx(x_s, theta, pp);
        if (z < 1e-6 || pp.y_p0 < 1e-6) {
            ++skipped;
            continue;
        }
        // inner branch: gamma = angle(Y_p0) must sit within pi/2 of delta;
        // outer branch: the to-receiver bearing must sit within pi/2 of theta
        const double gamma = pp.primary_rx.angle();
        const double towards = wrap_angle(beta_to_primary(x_s, theta, pp) + kPi);
        const double margin = 0.05;
        if (std::fabs(wrap_angle(delta - gamma)) > kPi / 2 - margin ||
            std::fabs(wrap_angle(theta - towards)) > kPi / 2 - margin ||
            std::fabs((pp.r_p / pp.y_p0) * std::sin(delta - omega)) > 1.0 - 1e-6) {
            ++skipped;
            continue;
        }
        ++asserted;
        const double via_arcsin = beta_towards_primary_arcsin(x_s, theta, pp);
        CHECK(std::fabs(wrap_angle(towards - via_arcsin)) < 1e-9);
    }
    MESSAGE("frame consistency: ", asserted, " asserted, ", skipped,
            " branch-adjacent samples skipped");
    CHECK(asserted > 3000);
}
