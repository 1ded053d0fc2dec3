#include "wcl/dyson.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wcl/errors.hpp"
#include "wcl/quadrature.hpp"

namespace wcl {

Complex SmearedAmplitude::h(double t, double lambda, const CorrelationModel& model) const {
    if (lambda <= 0.0) throw DomainError("SmearedAmplitude::h requires lambda > 0");
    if (coupling == Complex{0.0, 0.0}) return {0.0, 0.0};
    const double l2 = lambda * lambda;
    return coupling / model.gamma() *
           model.kernel_integral((t - interval.hi) / l2, (t - interval.lo) / l2);
}

Complex SmearedAmplitude::h_limit(double t) const {
    return (t >= interval.lo && t < interval.hi) ? coupling : Complex{0.0, 0.0};
}

double SmearedAmplitude::h_abs_bar(const CorrelationModel& model) const {
    return std::abs(coupling) * 2.0 * model.big_k() / model.gamma();
}

void ContractionSet::validate() const {
    std::vector<bool> p_used(static_cast<std::size_t>(n) + 1, false);
    int last_q = 0;
    for (const auto& [p, q] : pairs) {
        if (p < 1 || q > n || p >= q)
            throw DomainError("contraction pair must satisfy 1 <= p < q <= n");
        if (q <= last_q) throw DomainError("contraction q indices must increase");
        if (p_used[static_cast<std::size_t>(p)])
            throw DomainError("contraction p indices must be distinct");
        p_used[static_cast<std::size_t>(p)] = true;
        last_q = q;
    }
}

DiagramType ContractionSet::type() const {
    for (const auto& [p, q] : pairs)
        if (q != p + 1) return DiagramType::TypeII;
    return DiagramType::TypeI;
}

std::vector<ContractionSet> enumerate_contraction_sets(int n, int m) {
    std::vector<ContractionSet> out;
    ContractionSet current;
    current.n = n;
    std::function<void(int, int)> recurse = [&](int next_q_min, int remaining) {
        if (remaining == 0) {
            out.push_back(current);
            return;
        }
        for (int q = next_q_min; q <= n; ++q) {
            for (int p = 1; p < q; ++p) {
                bool used = false;
                for (const auto& [pp, qq] : current.pairs) used = used || pp == p;
                if (used) continue;
                current.pairs.emplace_back(p, q);
                recurse(q + 1, remaining - 1);
                current.pairs.pop_back();
            }
        }
    };
    recurse(2, m);
    return out;
}

const CMatrix& DressedCoefficients::block(int alpha, int beta) const {
    if (alpha == 0 && beta == 0) return e00;
    if (alpha == 0 && beta == 1) return e01;
    if (alpha == 1 && beta == 0) return e10;
    return e11;
}

namespace {

DressedCoefficients dress(const SystemModel& sys, Complex h1, Complex h2) {
    DressedCoefficients d;
    const Complex h2c = std::conj(h2);
    d.e11 = sys.e11;
    d.e10 = sys.e10 + h2c * sys.e11;
    d.e01 = sys.e01 + h1 * sys.e11;
    d.e00 = sys.e00 + h1 * sys.e10 + h2c * sys.e01 + h1 * h2c * sys.e11;
    return d;
}

}  // namespace

DressedCoefficients dressed_coefficients(const SystemModel& sys,
                                         const SmearedAmplitude& amp1,
                                         const SmearedAmplitude& amp2, double t,
                                         double lambda, const CorrelationModel& model) {
    return dress(sys, amp1.h(t, lambda, model), amp2.h(t, lambda, model));
}

DressedCoefficients dressed_coefficients_limit(const SystemModel& sys,
                                               const SmearedAmplitude& amp1,
                                               const SmearedAmplitude& amp2, double t) {
    return dress(sys, amp1.h_limit(t), amp2.h_limit(t));
}

namespace {

// Shared recursion for the simplex integrals. Index k runs 1..n with index 1
// the latest time; creator indices (q of some pair) are substituted as
// x = (s_p - s_q)/lambda^2, which removes the 1/lambda^2 stiffness and turns
// the contraction factor into plain G(x).
struct SimplexIntegrand {
    const ContractionSet& cs;
    double t;
    double lambda;
    const CorrelationModel& model;
    double rel_tol;
    // vertex_types empty -> pure contraction integral (scalar 1 weights);
    // otherwise the dressed-block product is accumulated as a row vector.
    std::vector<WordVertex> vertex_types;  // indexed by simplex position 1..n (latest first)
    const SystemModel* sys = nullptr;
    const SmearedAmplitude* amp1 = nullptr;
    const SmearedAmplitude* amp2 = nullptr;
    Eigen::RowVectorXcd phi1_row;
    CVector phi2;

    std::vector<double> time_at;  // time_at[k], 1-based
    int partner_of_creator(int k) const {
        for (const auto& [p, q] : cs.pairs)
            if (q == k) return p;
        return 0;
    }

    Complex recurse(int k, double upper, const Eigen::RowVectorXcd& row) {
        const bool with_matrices = !vertex_types.empty();
        if (k > cs.n) return with_matrices ? (row * phi2)(0) : Complex{1.0, 0.0};
        const double l2 = lambda * lambda;
        const int p = partner_of_creator(k);
        const double abs_floor = 1e-13;
        if (p > 0) {
            const double sp = time_at[static_cast<std::size_t>(p)];
            const double lo = (sp - upper) / l2;
            const double hi = sp / l2;
            if (!with_matrices && k == cs.n)  // innermost creator: closed form
                return model.kernel_integral(lo, hi);
            return integrate(
                       [&](double x) -> Complex {
                           const double sk = sp - l2 * x;
                           time_at[static_cast<std::size_t>(k)] = sk;
                           Eigen::RowVectorXcd next_row = row;
                           if (with_matrices)
                               next_row = row * dressed_block(k, sk);
                           return model.kernel(x) * recurse(k + 1, sk, next_row);
                       },
                       lo, hi, rel_tol, abs_floor)
                .value;
        }
        if (!with_matrices && k == cs.n) return {upper, 0.0};  // plain innermost
        return integrate(
                   [&](double sk) -> Complex {
                       time_at[static_cast<std::size_t>(k)] = sk;
                       Eigen::RowVectorXcd next_row = row;
                       if (with_matrices) next_row = row * dressed_block(k, sk);
                       return recurse(k + 1, sk, next_row);
                   },
                   0.0, upper, rel_tol, abs_floor)
            .value;
    }

    CMatrix dressed_block(int k, double s) const {
        const WordVertex& v = vertex_types[static_cast<std::size_t>(k - 1)];
        const DressedCoefficients d =
            dressed_coefficients(*sys, *amp1, *amp2, s, lambda, model);
        return d.block(v.alpha, v.beta);
    }
};

}  // namespace

Complex simplex_contraction_integral(const ContractionSet& cs, double t, double lambda,
                                     const CorrelationModel& model, double rel_tol) {
    cs.validate();
    if (t < 0.0 || lambda <= 0.0)
        throw DomainError("simplex_contraction_integral requires t >= 0, lambda > 0");
    if (cs.n == 0) return {1.0, 0.0};
    SimplexIntegrand integrand{cs, t, lambda, model, rel_tol};
    integrand.time_at.assign(static_cast<std::size_t>(cs.n) + 1, 0.0);
    return integrand.recurse(1, t, Eigen::RowVectorXcd());
}

double contraction_bound(int n, int m, double t, const CorrelationModel& model) {
    double value = std::pow(model.gamma(), m) * std::pow(t, n - m);
    for (int k = 2; k <= n - m; ++k) value /= k;
    return value;
}

Complex type1_limit_value(int n, int m, double t, const CorrelationModel& model) {
    if (m < 0 || m >= n) throw DomainError("type1_limit_value requires 0 <= m < n");
    Complex value = std::pow(model.kappa_plus(), m) * std::pow(t, n - m);
    for (int k = 2; k <= n - m; ++k) value /= static_cast<double>(k);
    return value;
}

std::vector<WordVertex> vertex_types_of(const SetPartition& partition) {
    std::vector<WordVertex> types(static_cast<std::size_t>(partition.n));
    for (const auto& part : partition.parts)
        for (std::size_t r = 0; r < part.size(); ++r) {
            WordVertex& v = types[static_cast<std::size_t>(part[r] - 1)];
            v.alpha = (part.size() >= 2 && r + 1 < part.size()) ? 1 : 0;
            v.beta = (part.size() >= 2 && r > 0) ? 1 : 0;
        }
    return types;
}

ContractionSet contraction_set_of(const SetPartition& partition) {
    ContractionSet cs;
    cs.n = partition.n;
    const int n = partition.n;
    for (const auto& part : partition.parts)
        for (std::size_t r = 0; r + 1 < part.size(); ++r) {
            // chronological labels i(r) < i(r+1) map to simplex indices
            // (latest first) p = n+1-i(r+1) (annihilator), q = n+1-i(r).
            cs.pairs.emplace_back(n + 1 - part[r + 1], n + 1 - part[r]);
        }
    std::sort(cs.pairs.begin(), cs.pairs.end(),
              [](const auto& a, const auto& b) { return a.second < b.second; });
    cs.validate();
    return cs;
}

Complex dyson_diagram_matrix_element(const SystemModel& sys, const SmearedAmplitude& amp1,
                                     const SmearedAmplitude& amp2,
                                     const CorrelationModel& model,
                                     const SetPartition& partition, double t, double lambda,
                                     const CVector& phi1, const CVector& phi2,
                                     double rel_tol) {
    const int n = partition.n;
    const ContractionSet cs = contraction_set_of(partition);
    const std::vector<WordVertex> chrono_types = vertex_types_of(partition);
    SimplexIntegrand integrand{cs, t, lambda, model, rel_tol};
    integrand.sys = &sys;
    integrand.amp1 = &amp1;
    integrand.amp2 = &amp2;
    integrand.phi1_row = phi1.adjoint();
    integrand.phi2 = phi2;
    integrand.vertex_types.resize(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k)  // simplex position k holds chronological vertex n+1-k
        integrand.vertex_types[static_cast<std::size_t>(k - 1)] =
            chrono_types[static_cast<std::size_t>(n - k)];
    integrand.time_at.assign(static_cast<std::size_t>(n) + 1, 0.0);
    const Complex value = integrand.recurse(1, t, integrand.phi1_row);
    return std::pow(-I, n) * value;
}

Complex dyson_term_matrix_element(const SystemModel& sys, const SmearedAmplitude& amp1,
                                  const SmearedAmplitude& amp2,
                                  const CorrelationModel& model, int n, double t,
                                  double lambda, const CVector& phi1, const CVector& phi2,
                                  DiagramFilter filter, double rel_tol) {
    sys.validate_against(model);
    if (n == 0) return phi1.dot(phi2);
    Complex total{0.0, 0.0};
    for_each_partition(n, [&](const SetPartition& p) {
        if (filter != DiagramFilter::All) {
            const DiagramType type = classify_type(p);
            if (filter == DiagramFilter::TypeI && type != DiagramType::TypeI) return;
            if (filter == DiagramFilter::TypeII && type != DiagramType::TypeII) return;
        }
        total += dyson_diagram_matrix_element(sys, amp1, amp2, model, p, t, lambda, phi1,
                                              phi2, rel_tol);
    });
    return total;
}

double BoundConstants::c_product(const std::vector<WordVertex>& types) const {
    double product = 1.0;
    for (const WordVertex& v : types) {
        if (v.alpha == 0 && v.beta == 0) product *= c00;
        else if (v.alpha == 0 && v.beta == 1) product *= c01;
        else if (v.alpha == 1 && v.beta == 0) product *= c10;
        else product *= c11;
    }
    return product;
}

BoundConstants bound_constants(const SystemModel& sys, const SmearedAmplitude& amp1,
                               const SmearedAmplitude& amp2, const CorrelationModel& model) {
    BoundConstants c;
    c.h1_bar = amp1.h_abs_bar(model);
    c.h2_bar = amp2.h_abs_bar(model);
    const double n00 = operator_norm(sys.e00);
    const double n01 = operator_norm(sys.e01);
    const double n10 = operator_norm(sys.e10);
    const double n11 = operator_norm(sys.e11);
    c.c11 = n11;
    c.c10 = n10 + n11 * c.h2_bar;
    c.c01 = n01 + n11 * c.h1_bar;
    c.c00 = n00 + n10 * c.h1_bar + n01 * c.h2_bar + n11 * c.h1_bar * c.h2_bar;
    c.cmax = std::max({c.c11, c.c10, c.c01, c.c00});
    return c;
}

double diagram_weight_level_sum(const SystemModel& sys, const SmearedAmplitude& amp1,
                                const SmearedAmplitude& amp2, const CorrelationModel& model,
                                int n, double t, double lambda) {
    const BoundConstants constants = bound_constants(sys, amp1, amp2, model);
    double total = 0.0;
    for_each_partition(n, [&](const SetPartition& p) {
        const ContractionSet cs = contraction_set_of(p);
        const Complex integral = simplex_contraction_integral(cs, t, lambda, model);
        total += constants.c_product(vertex_types_of(p)) * std::abs(integral);
    });
    return total;
}

std::vector<SweepRow> dyson_sweep(const CorrelationModel& model, int n, double t,
                                  const std::vector<double>& lambdas) {
    std::vector<SweepRow> rows;
    int diagram_id = 0;
    for_each_partition(n, [&](const SetPartition& p) {
        const ContractionSet cs = contraction_set_of(p);
        const DiagramType type = cs.type();
        const int m = cs.m();
        const Complex limit = type == DiagramType::TypeI
                                  ? type1_limit_value(n, m, t, model)
                                  : Complex{0.0, 0.0};
        const double bound = contraction_bound(n, m, t, model);
        for (double lambda : lambdas) {
            SweepRow row;
            row.n = n;
            row.diagram_id = diagram_id;
            row.type = type;
            row.lambda = lambda;
            row.value = simplex_contraction_integral(cs, t, lambda, model);
            row.abs_err_vs_limit = std::abs(row.value - limit);
            row.bound = bound;
            row.bound_margin = bound - std::abs(row.value);
            rows.push_back(row);
        }
        ++diagram_id;
    });
    return rows;
}

}  // namespace wcl
