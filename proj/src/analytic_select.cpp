#include <cmath>
#include <vector>

#include "slseng/analytic.hpp"
#include "slseng/parallel.hpp"

namespace slseng {

RhoSelection rho_dagger(const SystemParams& params, double tau_star, double p_star,
                        double s_star, SecondaryType kind, const RhoGrid& grid,
                        Flags* flags, unsigned threads, std::size_t typical_placements) {
    if (!(p_star >= 0.0 && p_star <= 1.0 && s_star >= 0.0 && s_star <= 1.0))
        throw std::domain_error("rho_dagger: constraint levels must lie in [0, 1]");
    if (!(grid.min_w > 0.0) || !(grid.max_w >= grid.min_w) || !(grid.step_db > 0.0))
        throw std::domain_error("rho_dagger: empty grid");

    const double span_db = 10.0 * std::log10(grid.max_w / grid.min_w);
    const std::size_t count = static_cast<std::size_t>(span_db / grid.step_db + 1e-9) + 1;
    std::vector<double> rho_grid(count);
    for (std::size_t j = 0; j < count; ++j)
        rho_grid[j] = grid.min_w * std::pow(10.0, (static_cast<double>(j) * grid.step_db) / 10.0);

    // p_cp is monotone non-increasing in rho: precompute it over the grid in
    // parallel, then walk upward. The p_cs constraint is NOT monotone, so the
    // walk never skips a grid point on its account.
    std::vector<double> cp(count, 0.0);
    std::vector<Flags> cp_flags(count);
    parallel_for(count, threads, [&](std::size_t j) {
        SystemParams p = params;
        p.rho = rho_grid[j];
        cp[j] = primary_coverage(tau_star, p, &cp_flags[j]);
    });
    if (flags)
        for (const Flags& f : cp_flags) flags->merge(f);

    const auto feasible_at = [&](double rho) {
        SystemParams p = params;
        p.rho = rho;
        const double pc = primary_coverage(tau_star, p, flags);
        if (pc < p_star) return false;
        SystemParams relaxed = p;
        relaxed.quad = p.quad.relaxed(1e-5);
        double cs;
        if (kind == SecondaryType::T4)
            cs = typical_secondary_coverage(tau_star, relaxed, p.region_radius,
                                            typical_placements, flags, threads);
        else
            cs = secondary_coverage(tau_star, relaxed, p.placement(kind), flags);
        return cs >= s_star;
    };

    RhoSelection out;
    std::size_t found = count;
    for (std::size_t j = 0; j < count; ++j) {
        if (cp[j] < p_star) break;  // monotone: no larger rho can recover p_cp
        if (s_star == 0.0 || feasible_at(rho_grid[j])) {
            found = j;
            break;
        }
    }
    if (found == count) return out;

    out.feasible = true;
    out.rho = rho_grid[found];
    if (found == 0) return out;

    // refine the left edge by bisection in dB down to refine_db
    double lo_db = 10.0 * std::log10(rho_grid[found - 1]);
    double hi_db = 10.0 * std::log10(rho_grid[found]);
    while (hi_db - lo_db > grid.refine_db) {
        const double mid_db = 0.5 * (lo_db + hi_db);
        if (feasible_at(std::pow(10.0, mid_db / 10.0)))
            hi_db = mid_db;
        else
            lo_db = mid_db;
    }
    out.rho = std::pow(10.0, hi_db / 10.0);
    return out;
}

}  // namespace slseng
