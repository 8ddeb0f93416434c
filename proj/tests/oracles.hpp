#pragma once

// Test-only numerical oracles, independent of the library's Gauss-Kronrod
// path: adaptive Simpson with different node placement, pre-split so that
// narrow features cannot hide between the first samples.

#include <cmath>
#include <functional>

namespace oracles {

inline double simpson_panel(double h, double fa, double fm, double fb) {
    return h / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b,
                                   double fa, double fm, double fb, double whole, double tol,
                                   int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson_panel(m - a, fa, flm, fm);
    const double right = simpson_panel(b - m, fm, frm, fb);
    if (depth <= 0) return left + right;
    const double scale = std::max(tol, 5e-14 * std::fabs(left + right));
    if (std::fabs(left + right - whole) <= 15.0 * scale)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-11, int splits = 16, int depth = 44) {
    if (a == b) return 0.0;
    double total = 0.0;
    const double h = (b - a) / splits;
    for (int i = 0; i < splits; ++i) {
        const double x0 = a + i * h;
        const double x1 = i + 1 == splits ? b : x0 + h;
        const double fa = f(x0);
        const double fb = f(x1);
        const double m = 0.5 * (x0 + x1);
        const double fm = f(m);
        const double whole = simpson_panel(x1 - x0, fa, fm, fb);
        total += adaptive_simpson_rec(f, x0, x1, fa, fm, fb, whole, tol / splits, depth);
    }
    return total;
}

// integral(a..b) f(x) dx with x = e^t; spreads power-law mass evenly.
inline double integrate_log(const std::function<double(double)>& f, double a, double b,
                            double tol = 1e-11, int splits = 48) {
    const double lo = std::log(a);
    const double hi = std::log(b);
    return integrate([&](double t) { const double x = std::exp(t); return f(x) * x; }, lo, hi,
                     tol, splits);
}

}  // namespace oracles
