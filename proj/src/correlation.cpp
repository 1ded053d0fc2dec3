#include "wcl/correlation.hpp"

#include <algorithm>
#include <cmath>

#include "wcl/errors.hpp"

namespace wcl {

struct CorrelationModel::Impl {
    virtual ~Impl() = default;
    virtual Complex kernel(double t) const = 0;
    virtual Complex kernel_integral(double a, double b) const = 0;
    virtual double abs_kernel_integral(double t) const = 0;
    virtual KernelConstants constants() const = 0;
};

namespace {

struct ExponentialImpl final : CorrelationModel::Impl {
    double tau;
    double sigma0;
    ExponentialImpl(double tau_, double sigma0_) : tau(tau_), sigma0(sigma0_) {
        if (tau <= 0.0) throw ModelError("exponential kernel requires tau > 0");
    }

    Complex kernel(double t) const override {
        return std::exp(-std::abs(t) / tau) * std::exp(-I * sigma0 * t);
    }

    // Antiderivative of G through cumulative integrals from -inf.
    Complex cumulative(double x) const {
        const Complex minus_pole = 1.0 / tau - I * sigma0;  // decay rate for t < 0
        const Complex plus_pole = 1.0 / tau + I * sigma0;   // decay rate for t > 0
        if (x <= 0.0) return std::exp(x / tau) * std::exp(-I * sigma0 * x) / minus_pole;
        return 1.0 / minus_pole + (1.0 - std::exp(-x / tau) * std::exp(-I * sigma0 * x)) / plus_pole;
    }

    Complex kernel_integral(double a, double b) const override {
        return cumulative(b) - cumulative(a);
    }

    double abs_kernel_integral(double t) const override {
        return tau * (1.0 - std::exp(-t / tau));
    }

    KernelConstants constants() const override {
        KernelConstants c;
        c.kappa_plus = tau / Complex(1.0, sigma0 * tau);
        c.kappa_minus = std::conj(c.kappa_plus);
        c.gamma = 2.0 * c.kappa_plus.real();
        c.sigma = c.kappa_plus.imag();
        c.big_k = tau;
        c.quadrature_error = 0.0;
        return c;
    }
};

struct GaussianImpl final : CorrelationModel::Impl {
    double tau;
    double sigma0;
    GaussianImpl(double tau_, double sigma0_) : tau(tau_), sigma0(sigma0_) {
        if (tau <= 0.0) throw ModelError("gaussian kernel requires tau > 0");
    }

    double support() const { return 10.0 * tau; }  // exp(-50) ~ 2e-22 beyond

    Complex kernel(double t) const override {
        const double u = t / tau;
        return std::exp(-0.5 * u * u) * std::exp(-I * sigma0 * t);
    }

    Complex kernel_integral(double a, double b) const override {
        const double lo = std::clamp(a, -support(), support());
        const double hi = std::clamp(b, -support(), support());
        if (hi <= lo) return {0.0, 0.0};
        return integrate([this](double t) { return kernel(t); }, lo, hi, 1e-12, 1e-15).value;
    }

    double abs_kernel_integral(double t) const override {
        // int_0^t e^{-x^2/2tau^2} dx = tau sqrt(pi/2) erf(t/(tau sqrt 2))
        return tau * std::sqrt(M_PI / 2.0) * std::erf(t / (tau * std::sqrt(2.0)));
    }

    KernelConstants constants() const override {
        KernelConstants c;
        const QuadResult kp =
            integrate([this](double t) { return kernel(t); }, 0.0, support(), 1e-13, 1e-16);
        c.kappa_plus = kp.value;
        // Real part has the closed form (1/2) tau sqrt(2 pi) e^{-sigma0^2 tau^2/2}.
        c.kappa_plus.real(0.5 * tau * std::sqrt(2.0 * M_PI) *
                          std::exp(-0.5 * sigma0 * sigma0 * tau * tau));
        c.kappa_minus = std::conj(c.kappa_plus);
        c.gamma = 2.0 * c.kappa_plus.real();
        c.sigma = c.kappa_plus.imag();
        c.big_k = tau * std::sqrt(M_PI / 2.0);
        c.quadrature_error = kp.error;
        return c;
    }
};

struct TabulatedImpl final : CorrelationModel::Impl {
    // Natural cubic spline of samples on t >= 0; negative times by the
    // conjugate-symmetry assumption G(-t) = G(t)*, zero beyond the table.
    std::vector<double> t;
    std::vector<Complex> g;
    std::vector<Complex> second_derivative;
    double tail_bound;

    TabulatedImpl(std::vector<double> ts, std::vector<Complex> gs, double tail)
        : t(std::move(ts)), g(std::move(gs)), tail_bound(tail) {
        if (t.size() != g.size() || t.size() < 3)
            throw ModelError("tabulated kernel needs >= 3 samples");
        if (t.front() != 0.0)
            throw ModelError("tabulated kernel must start at t = 0");
        for (std::size_t i = 1; i < t.size(); ++i)
            if (t[i] <= t[i - 1]) throw ModelError("tabulated kernel times must increase");
        if (std::abs(g.front().imag()) > 1e-12 * (1.0 + std::abs(g.front())))
            throw ModelError("G(0) must be real under G(-t) = G(t)*");
        build_spline();
    }

    void build_spline() {
        const std::size_t n = t.size();
        second_derivative.assign(n, Complex{0.0, 0.0});
        std::vector<Complex> scratch(n, Complex{0.0, 0.0});
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double sig = (t[i] - t[i - 1]) / (t[i + 1] - t[i - 1]);
            const Complex p = sig * second_derivative[i - 1] + 2.0;
            second_derivative[i] = (sig - 1.0) / p;
            scratch[i] = (g[i + 1] - g[i]) / (t[i + 1] - t[i]) -
                         (g[i] - g[i - 1]) / (t[i] - t[i - 1]);
            scratch[i] = (6.0 * scratch[i] / (t[i + 1] - t[i - 1]) - sig * scratch[i - 1]) / p;
        }
        for (std::size_t i = n - 1; i-- > 0;)
            second_derivative[i] = second_derivative[i] * second_derivative[i + 1] + scratch[i];
    }

    Complex value_positive(double x) const {
        if (x > t.back()) return {0.0, 0.0};
        const auto it = std::upper_bound(t.begin(), t.end(), x);
        const std::size_t hi = std::min<std::size_t>(
            std::max<std::ptrdiff_t>(it - t.begin(), 1), t.size() - 1);
        const std::size_t lo = hi - 1;
        const double h = t[hi] - t[lo];
        const double a = (t[hi] - x) / h;
        const double b = (x - t[lo]) / h;
        return a * g[lo] + b * g[hi] +
               ((a * a * a - a) * second_derivative[lo] +
                (b * b * b - b) * second_derivative[hi]) *
                   (h * h) / 6.0;
    }

    Complex kernel(double x) const override {
        return x >= 0.0 ? value_positive(x) : std::conj(value_positive(-x));
    }

    Complex kernel_integral(double a, double b) const override {
        if (b <= a) return -kernel_integral(b, a);
        return integrate([this](double x) { return kernel(x); },
                         std::clamp(a, -t.back(), t.back()),
                         std::clamp(b, -t.back(), t.back()), 1e-10, 1e-13)
            .value;
    }

    double abs_kernel_integral(double x) const override {
        if (x <= 0.0) return 0.0;
        return integrate([this](double u) { return Complex(std::abs(kernel(u)), 0.0); },
                         0.0, std::min(x, t.back()), 1e-10, 1e-13)
            .value.real();
    }

    KernelConstants constants() const override {
        KernelConstants c;
        const QuadResult kp = integrate([this](double x) { return kernel(x); },
                                        0.0, t.back(), 1e-11, 1e-14);
        c.kappa_plus = kp.value;
        c.kappa_minus = std::conj(c.kappa_plus);
        c.gamma = 2.0 * c.kappa_plus.real();
        c.sigma = c.kappa_plus.imag();
        c.big_k = abs_kernel_integral(t.back());
        c.quadrature_error = kp.error + tail_bound;
        return c;
    }
};

}  // namespace

CorrelationModel CorrelationModel::exponential(double tau, double sigma0) {
    CorrelationModel m;
    m.impl_ = std::make_shared<ExponentialImpl>(tau, sigma0);
    m.constants_ = m.impl_->constants();
    m.family_ = "exponential";
    return m;
}

CorrelationModel CorrelationModel::gaussian(double tau, double sigma0) {
    CorrelationModel m;
    m.impl_ = std::make_shared<GaussianImpl>(tau, sigma0);
    m.constants_ = m.impl_->constants();
    m.family_ = "gaussian";
    return m;
}

CorrelationModel CorrelationModel::tabulated(std::vector<double> t, std::vector<Complex> g,
                                             double tail_bound) {
    CorrelationModel m;
    m.impl_ = std::make_shared<TabulatedImpl>(std::move(t), std::move(g), tail_bound);
    m.constants_ = m.impl_->constants();
    m.family_ = "tabulated";
    return m;
}

Complex CorrelationModel::kernel(double t) const { return impl_->kernel(t); }

Complex CorrelationModel::kernel_integral(double a, double b) const {
    return impl_->kernel_integral(a, b);
}

double CorrelationModel::abs_kernel_integral(double t) const {
    return impl_->abs_kernel_integral(t);
}

Complex CorrelationModel::rescaled(double t, double s, double lambda) const {
    if (lambda <= 0.0) throw DomainError("rescaled kernel requires lambda > 0");
    const double l2 = lambda * lambda;
    return kernel((t - s) / l2) / l2;
}

KernelConstants derive_constants_by_quadrature(const CorrelationModel& model,
                                               double rel_tol) {
    KernelConstants c;
    const QuadResult kp = integrate_half_line(
        [&model](double t) { return model.kernel(t); }, 0.0, rel_tol, 1e-14);
    const QuadResult km = integrate_half_line(
        [&model](double t) { return model.kernel(-t); }, 0.0, rel_tol, 1e-14);
    const QuadResult k = integrate_half_line(
        [&model](double t) { return Complex(std::abs(model.kernel(t)), 0.0); }, 0.0,
        rel_tol, 1e-14);
    c.kappa_plus = kp.value;
    c.kappa_minus = km.value;
    c.gamma = (kp.value + km.value).real();
    c.sigma = kp.value.imag();
    c.big_k = k.value.real();
    c.quadrature_error = kp.error + km.error + k.error;
    return c;
}

Complex KernelMatrix::kernel(std::size_t j, std::size_t k, double t) const {
    return std::conj(coefficients.at(j)) * coefficients.at(k) * base.kernel(t);
}

Complex KernelMatrix::limit_gram(std::size_t j, std::size_t k) const {
    return std::conj(coefficients.at(j)) * coefficients.at(k) * base.gamma();
}

double intersection_length(const Interval& a, const Interval& b) {
    return std::max(0.0, std::min(a.hi, b.hi) - std::max(a.lo, b.lo));
}

namespace {

// Length of {(u,v) in I_j x I_k : u - v = w}: a trapezoidal tent in w.
double tent(const Interval& ij, const Interval& ik, double w) {
    return std::max(0.0, std::min(ij.hi, ik.hi + w) - std::max(ij.lo, ik.lo + w));
}

}  // namespace

Complex smeared_commutator(const KernelMatrix& kernels, std::size_t j, std::size_t k,
                           const Interval& ij, const Interval& ik, double lambda,
                           double rel_tol) {
    if (lambda <= 0.0) throw DomainError("smeared_commutator requires lambda > 0");
    const double l2 = lambda * lambda;
    // (1/l2) iint G((u-v)/l2) du dv = int G(x) tent(l2 x) dx after x = (u-v)/l2.
    const double lo = (ij.lo - ik.hi) / l2;
    const double hi = (ij.hi - ik.lo) / l2;
    const Complex coeff = std::conj(kernels.coefficients.at(j)) * kernels.coefficients.at(k);
    const QuadResult q = integrate(
        [&](double x) { return kernels.base.kernel(x) * tent(ij, ik, l2 * x); }, lo, hi,
        rel_tol, 1e-14, 20000);
    return coeff * q.value;
}

CommutatorLimitTable commutator_limit_check(const KernelMatrix& kernels, std::size_t j,
                                            std::size_t k, const Interval& ij,
                                            const Interval& ik,
                                            const std::vector<double>& lambdas) {
    CommutatorLimitTable table;
    table.limit = kernels.limit_gram(j, k) * intersection_length(ij, ik);
    double previous = 0.0;
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        CommutatorLimitRow row;
        row.lambda = lambdas[i];
        row.value = smeared_commutator(kernels, j, k, ij, ik, lambdas[i]);
        row.abs_error = std::abs(row.value - table.limit);
        if (i > 0 && row.abs_error >= previous) table.errors_decreasing = false;
        previous = row.abs_error;
        table.rows.push_back(row);
    }
    return table;
}

namespace {

Complex overlap_from_grams(Complex g12, double n1, double n2) {
    return std::exp(g12 - 0.5 * n1 - 0.5 * n2);
}

}  // namespace

Complex weyl_overlap(const KernelMatrix& kernels, const Interval& i1, const Interval& i2,
                     double lambda) {
    const Complex g12 = smeared_commutator(kernels, 0, 1, i1, i2, lambda);
    const Complex n1 = smeared_commutator(kernels, 0, 0, i1, i1, lambda);
    const Complex n2 = smeared_commutator(kernels, 1, 1, i2, i2, lambda);
    return overlap_from_grams(g12, n1.real(), n2.real());
}

Complex weyl_overlap_limit(const KernelMatrix& kernels, const Interval& i1,
                           const Interval& i2) {
    const Complex g12 = kernels.limit_gram(0, 1) * intersection_length(i1, i2);
    const double n1 = (kernels.limit_gram(0, 0) * i1.length()).real();
    const double n2 = (kernels.limit_gram(1, 1) * i2.length()).real();
    return overlap_from_grams(g12, n1, n2);
}

}  // namespace wcl
