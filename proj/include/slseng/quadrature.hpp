#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace slseng {

struct QuadratureSpec {
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
    std::size_t max_subdivisions = 4000;
    double radial_upper_bound = 4000.0;  // m
    std::size_t series_max_terms = 60;
    double series_term_tol = 1e-12;

    void validate() const {
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0) || !(series_term_tol > 0.0))
            throw std::domain_error("QuadratureSpec: tolerances must be > 0");
        if (!(radial_upper_bound > 0.0))
            throw std::domain_error("QuadratureSpec: radial_upper_bound must be > 0");
    }

    QuadratureSpec relaxed(double rel) const {
        QuadratureSpec q = *this;
        q.rel_tol = std::max(q.rel_tol, rel);
        return q;
    }
};

struct IntegralResult {
    double value = 0.0;
    double error = 0.0;
    std::size_t evaluations = 0;
    bool converged = true;
};

// Adaptive Gauss-Kronrod 15(7) over [a, b]. Bisects the worst panel until
// the summed error estimate meets max(abs_tol, rel_tol*|I|); panels are
// re-summed in left-to-right order so results are run-to-run identical.
IntegralResult integrate(const std::function<double(double)>& f, double a, double b,
                         const QuadratureSpec& spec);

struct SeriesResult {
    double value = 0.0;
    bool converged = true;
    std::size_t terms = 0;
};

// Alternating blockage series sum_n (-mu)^n / n! * term(n), truncated when
// three consecutive terms fall below series_term_tol relative to the partial
// sum. Non-convergence within series_max_terms is flagged, never silent.
SeriesResult alternating_blockage_series(const std::function<long double(std::size_t)>& term,
                                         double mu, const QuadratureSpec& spec);

}  // namespace slseng
