#pragma once

#include <functional>
#include <vector>

#include "wcl/types.hpp"

namespace wcl {

struct QuadResult {
    Complex value{0.0, 0.0};
    double error = 0.0;  // absolute error estimate
};

/// Adaptive Gauss-Kronrod (G7,K15) quadrature of a complex integrand on [a,b].
/// Throws IntegrationError when the requested tolerance cannot be met.
QuadResult integrate(const std::function<Complex(double)>& f, double a, double b,
                     double rel_tol = 1e-10, double abs_tol = 1e-14,
                     int max_intervals = 4000);

/// Integral over [a, +inf) via the rational substitution t = a + u/(1-u).
QuadResult integrate_half_line(const std::function<Complex(double)>& f, double a,
                               double rel_tol = 1e-10, double abs_tol = 1e-14,
                               int max_intervals = 4000);

/// Richardson extrapolation of a sequence v(lambda_k) with error ~ C*lambda^order,
/// lambda halved between consecutive entries. Returns the extrapolated limit.
Complex richardson_extrapolate(const std::vector<Complex>& values, double order = 2.0);

}  // namespace wcl
