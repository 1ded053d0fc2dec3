#pragma once

#include <vector>

#include "wcl/combinatorics.hpp"

namespace wcl {

/// Exponents of the series majorant. A = ln(K C11) must be negative (the
/// contraction condition); B and B_prime follow the printed forms
///   B  = ln(t v 1) + ln(C^2 v 1) + ln(C11^-2 v 1) + ln(K^-1 v 1)
///   B' = (1/2) ln(t v 1) + ln(C^2 v 1) + ln(C11^-2 v 1) + ln(K^-1 v 1) + (1/2) ln gamma.
/// When C11 = 0 the exponent A is -inf and only one- and two-vertex blocks
/// survive; that regime is handled by a dedicated branch on the raw constants.
struct BoundParameters {
    double a = 0.0;
    double b = 0.0;
    double b_prime = 0.0;
    bool gaussian_branch = false;  // C11 == 0: blocks of size <= 2 only
    // provenance
    double big_k = 0.0;
    double c11 = 0.0;
    double c = 0.0;
    double t = 0.0;
    double gamma = 0.0;

    static BoundParameters from_constants(double big_k, double c11, double c, double t,
                                          double gamma);
};

/// Per-level majorant: sum over occupation sequences with weight n of
/// e^{A E + B N} / prod_j n_j!.
double level_bound(int n, const BoundParameters& params);

/// Closed form of the full series, exp{e^{A+B}/(1 - e^A)}.
double omega(double a, double b);
double omega(const BoundParameters& params);

/// Heisenberg-side majorant exp{2 e^{A+B}/(1-e^A) + e^{2A+2B'}/(1-e^{2A})}.
double heisenberg_majorant(double a, double b, double b_prime);
double heisenberg_majorant(const BoundParameters& params);

/// Upper bound on sum_{n > N} level_bound(n): a Chernoff shift of the
/// factorized series, capped by the whole-series value.
double tail_bound(int truncation, const BoundParameters& params);

}  // namespace wcl
