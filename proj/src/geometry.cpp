#include "slseng/geometry.hpp"

namespace slseng {

double beta_towards_primary_arcsin(double x_s, double theta_s, const PrimaryPlacement& pp) {
    const double z = distance_to_primary_rx(x_s, theta_s, pp);
    if (z == 0.0)
        throw std::domain_error(
            "beta_towards_primary_arcsin: point coincides with the primary receiver");
    if (pp.y_p0 == 0.0) return wrap_angle(theta_s + kPi);
    const double inner = std::asin((pp.r_p / pp.y_p0) * std::sin(pp.delta_p0 - pp.omega_p0));
    const double outer = std::asin((pp.y_p0 / z) * std::sin(theta_s - pp.delta_p0 + inner));
    return wrap_angle(theta_s - outer);
}

}  // namespace slseng
