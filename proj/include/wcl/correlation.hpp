#pragma once

#include <memory>
#include <string>
#include <vector>

#include "wcl/quadrature.hpp"
#include "wcl/types.hpp"

namespace wcl {

/// Derived constants of a reservoir two-point function G:
///   kappa_plus = int_0^inf G,  kappa_minus = int_{-inf}^0 G,
///   gamma = kappa_plus + kappa_minus,  sigma = Im kappa_plus,
///   K = int_0^inf |G|.
struct KernelConstants {
    double gamma = 0.0;
    Complex kappa_plus{0.0, 0.0};
    Complex kappa_minus{0.0, 0.0};
    double sigma = 0.0;
    double big_k = 0.0;
    double quadrature_error = 0.0;  // absolute error carried by the integrals
};

/// Reservoir two-point function G(t) with G(-t) = G(t)* and integrable decay.
/// Built-in families have closed-form constants and antiderivatives; tabulated
/// kernels interpolate user data with a declared tail bound.
class CorrelationModel {
  public:
    /// e^{-|t|/tau} e^{-i sigma0 t}
    static CorrelationModel exponential(double tau = 1.0, double sigma0 = 0.0);
    /// e^{-t^2/(2 tau^2)} e^{-i sigma0 t}
    static CorrelationModel gaussian(double tau = 1.0, double sigma0 = 0.0);
    /// Samples (t_i, G(t_i)) on t >= 0, mirrored by conjugate symmetry;
    /// cubic-spline interpolated, zero outside the table (tail_bound declared).
    static CorrelationModel tabulated(std::vector<double> t, std::vector<Complex> g,
                                      double tail_bound = 0.0);

    Complex kernel(double t) const;
    /// int_a^b G(x) dx, closed form where the family allows it.
    Complex kernel_integral(double a, double b) const;
    /// int_0^t |G(x)| dx for t >= 0.
    double abs_kernel_integral(double t) const;

    const KernelConstants& constants() const { return constants_; }
    double gamma() const { return constants_.gamma; }
    Complex kappa_plus() const { return constants_.kappa_plus; }
    Complex kappa_minus() const { return constants_.kappa_minus; }
    double sigma() const { return constants_.sigma; }
    double big_k() const { return constants_.big_k; }

    const std::string& family() const { return family_; }
    bool is_degenerate() const { return constants_.gamma == 0.0 && constants_.big_k == 0.0; }

    /// (1/lambda^2) G((t - s)/lambda^2); the van Hove rescaled kernel.
    Complex rescaled(double t, double s, double lambda) const;

    struct Impl;

  private:
    std::shared_ptr<const Impl> impl_;
    KernelConstants constants_;
    std::string family_;
};

/// Recomputes the constants by adaptive quadrature regardless of family;
/// used to cross-check closed forms.
KernelConstants derive_constants_by_quadrature(const CorrelationModel& model,
                                               double rel_tol = 1e-10);

/// Matrix of kernels G_jk(t) for a finite family f_j = c_j * g over one base
/// model: G_jk(t) = conj(c_j) c_k G(t), limit Gram (f_j|f_k) = conj(c_j) c_k gamma.
struct KernelMatrix {
    CorrelationModel base;
    std::vector<Complex> coefficients;

    Complex kernel(std::size_t j, std::size_t k, double t) const;
    Complex limit_gram(std::size_t j, std::size_t k) const;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double length() const { return hi - lo; }
};

double intersection_length(const Interval& a, const Interval& b);

/// Pre-limit smeared commutator
///   (1/lambda^2) int_{I_j} du int_{I_k} dv G_jk((u - v)/lambda^2),
/// reduced to a single integral against the overlap tent of the intervals.
Complex smeared_commutator(const KernelMatrix& kernels, std::size_t j, std::size_t k,
                           const Interval& ij, const Interval& ik, double lambda,
                           double rel_tol = 1e-10);

struct CommutatorLimitRow {
    double lambda = 0.0;
    Complex value{0.0, 0.0};
    double abs_error = 0.0;  // |value - limit|
};

struct CommutatorLimitTable {
    Complex limit{0.0, 0.0};
    std::vector<CommutatorLimitRow> rows;
    bool errors_decreasing = true;
};

/// Lambda sweep of the smeared commutator against its limit
/// (f_j|f_k) <1_{I_j}, 1_{I_k}>.
CommutatorLimitTable commutator_limit_check(const KernelMatrix& kernels, std::size_t j,
                                            std::size_t k, const Interval& ij,
                                            const Interval& ik,
                                            const std::vector<double>& lambdas);

/// Gaussian coherent-state overlap exp{<u1,u2> - |u1|^2/2 - |u2|^2/2} with the
/// pre-limit (finite lambda) or limit (lambda absent) inner products.
Complex weyl_overlap(const KernelMatrix& kernels, const Interval& i1, const Interval& i2,
                     double lambda);
Complex weyl_overlap_limit(const KernelMatrix& kernels, const Interval& i1,
                           const Interval& i2);

}  // namespace wcl
