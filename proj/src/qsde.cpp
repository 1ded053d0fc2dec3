#include "wcl/qsde.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <unsupported/Eigen/MatrixFunctions>

#include "wcl/errors.hpp"

namespace wcl {

namespace {

CMatrix scattering_resolvent(const SystemModel& sys, Complex kappa) {
    const CMatrix denom =
        CMatrix::Identity(sys.dim, sys.dim) + I * kappa * sys.e11;
    return denom.inverse();
}

void require_spectral(const SystemModel& sys, Complex kappa) {
    if (std::abs(kappa) * operator_norm(sys.e11) >= 1.0)
        throw DivergenceError("geometric series diverges: |kappa| ||E11|| >= 1");
}

// Shared breakpoint mesh of two amplitudes clipped to [0, t].
std::vector<double> amplitude_mesh(const LimitAmplitude& amp1, const LimitAmplitude& amp2,
                                   double t) {
    std::set<double> cuts{0.0, t};
    for (const LimitAmplitude* a : {&amp1, &amp2}) {
        if (a->interval.lo > 0.0 && a->interval.lo < t) cuts.insert(a->interval.lo);
        if (a->interval.hi > 0.0 && a->interval.hi < t) cuts.insert(a->interval.hi);
    }
    return {cuts.begin(), cuts.end()};
}

// T^(m) for T^(j)(s) = int_0^s M_j(u) T^(j-1)(u) du with piecewise-constant
// generators M_j sharing one mesh; exact via per-piece polynomial coefficients.
CMatrix iterated_piecewise_integral(const std::vector<std::vector<CMatrix>>& generators,
                                    const std::vector<double>& mesh, Eigen::Index dim) {
    const std::size_t pieces = mesh.size() - 1;
    // Polynomial coefficients of the current iterate per piece, in (s - mesh[i]).
    std::vector<std::vector<CMatrix>> poly(
        pieces, std::vector<CMatrix>{CMatrix::Identity(dim, dim)});
    for (const auto& gen : generators) {
        std::vector<std::vector<CMatrix>> next(pieces);
        CMatrix at_start = CMatrix::Zero(dim, dim);
        for (std::size_t i = 0; i < pieces; ++i) {
            const std::size_t degree = poly[i].size();
            next[i].assign(degree + 1, CMatrix::Zero(dim, dim));
            next[i][0] = at_start;
            for (std::size_t j = 0; j < degree; ++j)
                next[i][j + 1] = gen[i] * poly[i][j] / static_cast<double>(j + 1);
            const double h = mesh[i + 1] - mesh[i];
            double power = 1.0;
            at_start = CMatrix::Zero(dim, dim);
            for (std::size_t j = 0; j < next[i].size(); ++j) {
                at_start += next[i][j] * power;
                power *= h;
            }
        }
        poly.swap(next);
    }
    // Evaluate the final iterate at the mesh end.
    const std::size_t last = pieces - 1;
    const double h = mesh.back() - mesh[last];
    CMatrix value = CMatrix::Zero(dim, dim);
    double power = 1.0;
    for (std::size_t j = 0; j < poly[last].size(); ++j) {
        value += poly[last][j] * power;
        power *= h;
    }
    return value;
}

}  // namespace

const CMatrix& QsdeCoefficients::block(int alpha, int beta) const {
    if (alpha == 0 && beta == 0) return l00;
    if (alpha == 0 && beta == 1) return l01;
    if (alpha == 1 && beta == 0) return l10;
    return l11;
}

double QsdeCoefficients::Residuals::max() const {
    return std::max({w_unitary, h_hermitian, l11_consistent, l10_consistent,
                     l01_consistent, l00_consistent});
}

QsdeCoefficients::Residuals QsdeCoefficients::residuals() const {
    Residuals r;
    const CMatrix id = CMatrix::Identity(dim, dim);
    r.w_unitary = (w.adjoint() * w - id).cwiseAbs().maxCoeff();
    r.h_hermitian = (h - h.adjoint()).cwiseAbs().maxCoeff();
    r.l11_consistent = (l11 - (w - id) / gamma).cwiseAbs().maxCoeff();
    r.l10_consistent = (l10 - l).cwiseAbs().maxCoeff();
    r.l01_consistent = (l01 + l.adjoint() * w).cwiseAbs().maxCoeff();
    r.l00_consistent =
        (l00 + 0.5 * gamma * l.adjoint() * l + I * h).cwiseAbs().maxCoeff();
    return r;
}

CMatrix chain_coefficient(const SystemModel& sys, int alpha, int beta, int r) {
    if (r < 1) throw DomainError("chain_coefficient requires r >= 1");
    if (r == 1) return sys.block(alpha, beta);
    CMatrix middle = CMatrix::Identity(sys.dim, sys.dim);
    for (int k = 0; k < r - 2; ++k) middle = middle * sys.e11;
    return sys.block(alpha, 1) * middle * sys.block(1, beta);
}

QsdeCoefficients limit_coefficients(const SystemModel& sys, const CorrelationModel& model) {
    sys.validate_against(model);
    return limit_coefficients(sys, model.kappa_plus(), model.kappa_minus());
}

QsdeCoefficients limit_coefficients(const SystemModel& sys, Complex kappa_plus,
                                    Complex kappa_minus) {
    sys.validate();
    require_spectral(sys, kappa_plus);
    const Complex kappa = kappa_plus;
    const CMatrix resolvent = scattering_resolvent(sys, kappa);
    QsdeCoefficients c;
    c.dim = sys.dim;
    c.kappa_plus = kappa_plus;
    c.kappa_minus = kappa_minus;
    c.gamma = (kappa_plus + kappa_minus).real();
    for (int alpha : {0, 1})
        for (int beta : {0, 1}) {
            CMatrix l_ab = -I * sys.block(alpha, beta) -
                           kappa * sys.block(alpha, 1) * resolvent * sys.block(1, beta);
            if (alpha == 0 && beta == 0) c.l00 = l_ab;
            else if (alpha == 0 && beta == 1) c.l01 = l_ab;
            else if (alpha == 1 && beta == 0) c.l10 = l_ab;
            else c.l11 = l_ab;
        }
    const CMatrix id = CMatrix::Identity(sys.dim, sys.dim);
    c.w = (id - I * kappa_minus * sys.e11) * resolvent;
    c.l = -I * resolvent * sys.e10;
    c.h = sys.e00 + imag_part(kappa * sys.e01 * resolvent * sys.e10);
    return c;
}

CMatrix partial_chain_sum(const SystemModel& sys, Complex kappa, int alpha, int beta,
                          int r_max) {
    if (r_max < 1) throw DomainError("partial_chain_sum requires r_max >= 1");
    CMatrix sum = CMatrix::Zero(sys.dim, sys.dim);
    Complex factor{1.0, 0.0};  // (-i kappa)^{r-1}
    for (int r = 1; r <= r_max; ++r) {
        sum += factor * chain_coefficient(sys, alpha, beta, r);
        factor *= -I * kappa;
    }
    return -I * sum;
}

CMatrix EvansHudsonMaps::apply(int alpha, int beta, const CMatrix& x) const {
    return unvec(maps[alpha][beta] * vec(x), dim);
}

EvansHudsonMaps evans_hudson(const QsdeCoefficients& coeffs) {
    EvansHudsonMaps eh;
    eh.dim = coeffs.dim;
    eh.gamma = coeffs.gamma;
    const CMatrix id = CMatrix::Identity(coeffs.dim, coeffs.dim);
    for (int alpha : {0, 1})
        for (int beta : {0, 1}) {
            const CMatrix& g_ab = coeffs.block(alpha, beta);
            const CMatrix& g_ba = coeffs.block(beta, alpha);
            const CMatrix& g_1a = coeffs.block(1, alpha);
            const CMatrix& g_1b = coeffs.block(1, beta);
            eh.maps[alpha][beta] = sandwich_matrix(id, g_ab) +
                                   sandwich_matrix(g_ba.adjoint(), id) +
                                   coeffs.gamma * sandwich_matrix(g_1a.adjoint(), g_1b);
        }
    return eh;
}

CMatrix lindblad_generator_matrix(const QsdeCoefficients& coeffs) {
    return evans_hudson(coeffs).maps[0][0];
}

CMatrix lindblad_semigroup(const QsdeCoefficients& coeffs, const CMatrix& x, double t) {
    const CMatrix generator = lindblad_generator_matrix(coeffs);
    const CMatrix propagator = (t * generator).exp();
    return unvec(propagator * vec(x), coeffs.dim);
}

CMatrix choi_matrix(const CMatrix& superoperator_matrix, Eigen::Index dim) {
    CMatrix choi(dim * dim, dim * dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index m = 0; m < dim; ++m)
            for (Eigen::Index j = 0; j < dim; ++j)
                for (Eigen::Index n = 0; n < dim; ++n)
                    choi(i * dim + m, j * dim + n) =
                        superoperator_matrix(n * dim + m, j * dim + i);
    return choi;
}

Complex limit_weyl_overlap(const LimitAmplitude& amp1, const LimitAmplitude& amp2,
                           double gamma) {
    if (amp1.coupling == Complex{0.0, 0.0} && amp2.coupling == Complex{0.0, 0.0})
        return {1.0, 0.0};
    if (gamma <= 0.0) throw DomainError("limit_weyl_overlap requires gamma > 0");
    const Complex cross = amp1.coupling * std::conj(amp2.coupling) / gamma *
                          intersection_length(amp1.interval, amp2.interval);
    const double n1 = std::norm(amp1.coupling) / gamma * amp1.interval.length();
    const double n2 = std::norm(amp2.coupling) / gamma * amp2.interval.length();
    return std::exp(cross - 0.5 * n1 - 0.5 * n2);
}

namespace {

CMatrix dressed_generator(const QsdeCoefficients& coeffs, Complex h1, Complex h2) {
    CMatrix m = coeffs.l00;
    if (h1 != Complex{0.0, 0.0}) m += h1 * coeffs.l10;
    if (h2 != Complex{0.0, 0.0}) m += std::conj(h2) * coeffs.l01;
    if (h1 != Complex{0.0, 0.0} && h2 != Complex{0.0, 0.0})
        m += h1 * std::conj(h2) * coeffs.l11;
    return m;
}

}  // namespace

CMatrix dressed_propagator(const QsdeCoefficients& coeffs, const LimitAmplitude& amp1,
                           const LimitAmplitude& amp2, double t) {
    if (t < 0.0) throw DomainError("dressed_propagator requires t >= 0");
    CMatrix v = CMatrix::Identity(coeffs.dim, coeffs.dim);
    if (t == 0.0) return v;
    const std::vector<double> mesh = amplitude_mesh(amp1, amp2, t);
    for (std::size_t i = 0; i + 1 < mesh.size(); ++i) {
        const double mid = 0.5 * (mesh[i] + mesh[i + 1]);
        const CMatrix m = dressed_generator(coeffs, amp1(mid), amp2(mid));
        v = ((mesh[i + 1] - mesh[i]) * m).exp() * v;
    }
    return v;
}

MatrixElementResult matrix_element_ode(const QsdeCoefficients& coeffs, const CVector& phi1,
                                       const CVector& phi2, const LimitAmplitude& amp1,
                                       const LimitAmplitude& amp2, double t) {
    MatrixElementResult result;
    result.overlap = limit_weyl_overlap(amp1, amp2, coeffs.gamma);
    const CMatrix v = dressed_propagator(coeffs, amp1, amp2, t);
    result.system_part = phi1.dot(v * phi2);
    result.value = result.overlap * result.system_part;
    return result;
}

CMatrix chaotic_expansion_propagator(const QsdeCoefficients& coeffs,
                                     const LimitAmplitude& amp1, const LimitAmplitude& amp2,
                                     double t, int m_max) {
    if (m_max < 0) throw DomainError("chaotic_expansion_propagator requires m_max >= 0");
    CMatrix total = CMatrix::Identity(coeffs.dim, coeffs.dim);
    if (t <= 0.0 || m_max == 0) return total;
    const std::vector<double> mesh = amplitude_mesh(amp1, amp2, t);
    std::vector<CMatrix> generator(mesh.size() - 1);
    for (std::size_t i = 0; i + 1 < mesh.size(); ++i) {
        const double mid = 0.5 * (mesh[i] + mesh[i + 1]);
        generator[i] = dressed_generator(coeffs, amp1(mid), amp2(mid));
    }
    for (int m = 1; m <= m_max; ++m) {
        std::vector<std::vector<CMatrix>> chain(static_cast<std::size_t>(m), generator);
        total += iterated_piecewise_integral(chain, mesh, coeffs.dim);
    }
    return total;
}

CMatrix limit_chaotic_order_term(const SystemModel& sys, const CorrelationModel& model,
                                 const LimitAmplitude& amp1, const LimitAmplitude& amp2,
                                 double t, int n) {
    sys.validate_against(model);
    if (n < 0) throw DomainError("limit_chaotic_order_term requires n >= 0");
    if (n == 0) return CMatrix::Identity(sys.dim, sys.dim);
    const Complex kappa = model.kappa_plus();
    const std::vector<double> mesh = amplitude_mesh(amp1, amp2, t);

    // Effective one-vertex generator of block size r at amplitude values (h1, h2):
    // (-i)^r kappa^{r-1} sum_ab h1^a conj(h2)^b E^(r)_ab.
    auto block_generator = [&](int r, Complex h1, Complex h2) -> CMatrix {
        CMatrix m = CMatrix::Zero(sys.dim, sys.dim);
        for (int alpha : {0, 1})
            for (int beta : {0, 1}) {
                Complex scalar{1.0, 0.0};
                if (alpha) scalar *= h1;
                if (beta) scalar *= std::conj(h2);
                if (scalar == Complex{0.0, 0.0}) continue;
                m += scalar * chain_coefficient(sys, alpha, beta, r);
            }
        return std::pow(-I, r) * std::pow(kappa, r - 1) * m;
    };

    CMatrix total = CMatrix::Zero(sys.dim, sys.dim);
    std::vector<int> sizes;
    // Ordered compositions r_1 + ... + r_m = n, innermost block first.
    std::function<void(int)> recurse = [&](int remaining) {
        if (remaining == 0) {
            std::vector<std::vector<CMatrix>> generators;
            for (int r : sizes) {
                std::vector<CMatrix> per_piece(mesh.size() - 1);
                for (std::size_t i = 0; i + 1 < mesh.size(); ++i) {
                    const double mid = 0.5 * (mesh[i] + mesh[i + 1]);
                    per_piece[i] = block_generator(r, amp1(mid), amp2(mid));
                }
                generators.push_back(std::move(per_piece));
            }
            total += iterated_piecewise_integral(generators, mesh, sys.dim);
            return;
        }
        for (int r = 1; r <= remaining; ++r) {
            sizes.push_back(r);
            recurse(remaining - r);
            sizes.pop_back();
        }
    };
    recurse(n);
    return total;
}

NormalOrderReport normal_order_identity_check(const QsdeCoefficients& coeffs,
                                              const SystemModel& sys, Complex kappa_plus) {
    sys.validate();
    require_spectral(sys, kappa_plus);
    const CMatrix resolvent = scattering_resolvent(sys, kappa_plus);
    // Normal ordering of dU = -i Upsilon U via
    //   a U = (1 + i kappa E11)^{-1} (U a - i kappa E10 U):
    // the E01 a and E11 a+ a terms regroup into the four normal-ordered blocks.
    CMatrix derived[2][2];
    derived[0][0] = -I * sys.e00 - kappa_plus * sys.e01 * resolvent * sys.e10;
    derived[1][0] = -I * sys.e10 - kappa_plus * sys.e11 * resolvent * sys.e10;
    derived[0][1] = -I * sys.e01 * resolvent;
    derived[1][1] = -I * sys.e11 * resolvent;
    NormalOrderReport report;
    for (int alpha : {0, 1})
        for (int beta : {0, 1}) {
            const double r =
                (derived[alpha][beta] - coeffs.block(alpha, beta)).cwiseAbs().maxCoeff();
            report.residual[alpha][beta] = r;
            report.max_residual = std::max(report.max_residual, r);
        }
    return report;
}

}  // namespace wcl
