#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace slseng {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Normalize an angle to [-pi, pi).
inline double wrap_angle(double theta) {
    double w = theta - kTwoPi * std::floor((theta + kPi) / kTwoPi);
    if (w >= kPi) w -= kTwoPi;   // guards the rounding case w == pi
    if (w < -kPi) w += kTwoPi;
    return w;
}

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    double norm() const { return std::hypot(x, y); }
    double angle() const { return wrap_angle(std::atan2(y, x)); }
};

// Location given as radial distance and angle from the frame origin.
struct PolarPoint {
    double radius;
    double angle;

    PolarPoint(double r, double theta) : radius(r), angle(wrap_angle(theta)) {
        if (!(r >= 0.0)) throw std::domain_error("PolarPoint: radius must be >= 0");
    }
    Vec2 to_vec() const { return {radius * std::cos(angle), radius * std::sin(angle)}; }
};

enum class BlockageRegime { General, Zbl, Hbl };

// Boolean blockage model: a path of length z is LOS with probability
// exp(-(mu z + p)). HBL (all blocked) is a regime flag, never mu = inf.
struct BlockageParams {
    BlockageRegime regime = BlockageRegime::Zbl;
    double mu = 0.0;  // 1/m
    double p = 0.0;

    static BlockageParams general(double mu, double p = 0.0) {
        if (!(mu >= 0.0) || !(p >= 0.0))
            throw std::domain_error("BlockageParams: mu and p must be >= 0");
        BlockageParams b;
        b.mu = mu;
        b.p = p;
        b.regime = (mu == 0.0 && p == 0.0) ? BlockageRegime::Zbl : BlockageRegime::General;
        return b;
    }
    static BlockageParams zbl() { return {}; }
    static BlockageParams hbl() { return {BlockageRegime::Hbl, 0.0, 0.0}; }

    // Average LOS distance 1/mu; inf under ZBL, 0 under HBL.
    double l_mu() const {
        if (regime == BlockageRegime::Hbl) return 0.0;
        return mu > 0.0 ? 1.0 / mu : kInf;
    }
};

// LOS probability p_L(z) = exp(-(mu z + p)).
inline double los_probability(double z, const BlockageParams& b) {
    if (!(z >= 0.0)) throw std::domain_error("los_probability: negative distance");
    switch (b.regime) {
        case BlockageRegime::Zbl: return 1.0;
        case BlockageRegime::Hbl: return 0.0;
        default: return std::exp(-(b.mu * z + b.p));
    }
}

// Pose of the primary link in the transformed frame of the secondary
// coverage analysis: the considered secondary receiver sits at the origin
// with its transmitter at r_s along the X-axis; the primary transmitter is
// at distance x_p0 / bearing delta_p0 and beams toward omega_p0, where its
// receiver sits: Y_p0 = X_p0 + r_p*(unit at omega_p0). The receiver
// boresight is omega_p0 + pi (back at the transmitter).
struct PrimaryPlacement {
    double x_p0;
    double delta_p0;
    double omega_p0;
    double r_p;
    double r_s;

    Vec2 primary_tx;   // X_p0
    Vec2 primary_rx;   // Y_p0
    double y_p0;       // ||Y_p0||
    double z_00;       // || r_s<0  - Y_p0 ||
    double beta_00;    // angle( r_s<0 - Y_p0 )

    PrimaryPlacement(double x_p0_, double delta_p0_, double omega_p0_, double r_p_,
                     double r_s_)
        : x_p0(x_p0_),
          delta_p0(wrap_angle(delta_p0_)),
          omega_p0(wrap_angle(omega_p0_)),
          r_p(r_p_),
          r_s(r_s_) {
        if (!(x_p0 > 0.0)) throw std::domain_error("PrimaryPlacement: x_p0 must be > 0");
        primary_tx = PolarPoint(x_p0, delta_p0).to_vec();
        primary_rx = primary_tx + Vec2{r_p * std::cos(omega_p0), r_p * std::sin(omega_p0)};
        y_p0 = primary_rx.norm();
        const Vec2 own_tx{r_s, 0.0};
        z_00 = (own_tx - primary_rx).norm();
        beta_00 = (own_tx - primary_rx).angle();
    }
};

// Fixed set-ups of Fig. 2(b): minimal (T1), moderate (T2) and high (T3)
// cross-link coupling between the primary and the considered secondary link.
enum class SecondaryType { T1, T2, T3, T4 };

inline PrimaryPlacement preset_placement(SecondaryType t, double r_p, double r_s) {
    switch (t) {
        case SecondaryType::T1: return {50.0, kPi / 2, kPi / 12, r_p, r_s};
        case SecondaryType::T2: return {80.0, kPi / 2, -kPi / 2, r_p, r_s};
        case SecondaryType::T3: return {10.0, kPi / 2, kPi / 2, r_p, r_s};
        default:
            throw std::invalid_argument("preset_placement: T4 is the typical user, not a fixed pose");
    }
}

// Bearing of the point x_s<theta_s as seen from the primary receiver,
// computed by Cartesian subtraction.
inline double beta_to_primary(double x_s, double theta_s, const PrimaryPlacement& pp) {
    const Vec2 p = PolarPoint(x_s, theta_s).to_vec();
    const Vec2 d = p - pp.primary_rx;
    if (d.norm() < 1e-9)
        throw std::domain_error("beta_to_primary: point coincides with the primary receiver");
    return d.angle();
}

inline double distance_to_primary_rx(double x_s, double theta_s,
                                     const PrimaryPlacement& pp) {
    const Vec2 p = PolarPoint(x_s, theta_s).to_vec();
    return (p - pp.primary_rx).norm();
}

// The arcsin composition for the bearing from x_s<theta_s TOWARD the primary
// receiver (valid on its principal branch only); beta_to_primary equals this
// shifted by pi. Kept as the documented dual route; the frame-consistency
// test compares the two over randomized geometries.
double beta_towards_primary_arcsin(double x_s, double theta_s, const PrimaryPlacement& pp);

}  // namespace slseng
