#pragma once

#include <array>
#include <vector>

#include "wcl/combinatorics.hpp"
#include "wcl/correlation.hpp"
#include "wcl/moments.hpp"
#include "wcl/qsde.hpp"
#include "wcl/system_model.hpp"
#include "wcl/types.hpp"

namespace wcl {

/// Smearing of the interaction against a test function supported on an
/// interval. The pre-limit translation amplitude is
///   h(t, lambda) = (coupling/gamma) (1/lambda^2) int_I G((t-u)/lambda^2) du,
/// whose limit is coupling * 1_I(t).
struct SmearedAmplitude {
    Interval interval;
    Complex coupling{0.0, 0.0};  // the limit pairing (f|g)

    Complex h(double t, double lambda, const CorrelationModel& model) const;
    Complex h_limit(double t) const;
    LimitAmplitude limit() const { return {interval, coupling}; }

    /// int |<g| theta_u f>| du = |coupling| 2K / gamma, the constant entering
    /// the bound coefficients.
    double h_abs_bar(const CorrelationModel& model) const;
};

/// Contraction pairs over simplex indices 1..n where index 1 carries the
/// LATEST time (the nesting order of the iterated integrals). A pair (p, q),
/// p < q, contracts the annihilator at index p with the creator at the earlier
/// index q; type I means q = p + 1 for every pair.
struct ContractionSet {
    int n = 0;
    std::vector<std::pair<int, int>> pairs;  // q's strictly increasing

    int m() const { return static_cast<int>(pairs.size()); }
    void validate() const;
    DiagramType type() const;
};

/// All contraction sets over {1..n} with exactly m pairs.
std::vector<ContractionSet> enumerate_contraction_sets(int n, int m);

/// The four dressed system blocks E~_ab(t, lambda) (pre-limit) of the
/// translated interaction, or their limits.
struct DressedCoefficients {
    CMatrix e00, e01, e10, e11;
    const CMatrix& block(int alpha, int beta) const;
};

DressedCoefficients dressed_coefficients(const SystemModel& sys,
                                         const SmearedAmplitude& amp1,
                                         const SmearedAmplitude& amp2, double t,
                                         double lambda, const CorrelationModel& model);
DressedCoefficients dressed_coefficients_limit(const SystemModel& sys,
                                               const SmearedAmplitude& amp1,
                                               const SmearedAmplitude& amp2, double t);

/// Simplex contraction integral over t > s_1 > ... > s_n > 0 of the product of
/// rescaled two-point functions G_lambda(s_p - s_q). The stiffness in lambda is
/// removed by substituting x = (s_p - s_q)/lambda^2 at every creator index.
Complex simplex_contraction_integral(const ContractionSet& cs, double t, double lambda,
                                     const CorrelationModel& model, double rel_tol = 1e-8);

/// gamma^m t^{n-m} / (n-m)!, the uniform bound on the contraction integral.
double contraction_bound(int n, int m, double t, const CorrelationModel& model);

/// kappa_+^m t^{n-m} / (n-m)!, the type I limit of the contraction integral.
Complex type1_limit_value(int n, int m, double t, const CorrelationModel& model);

/// Unique vertex types induced by a partition: alpha = 1 unless the vertex is
/// maximal in its part, beta = 1 unless minimal; singletons are neutral.
std::vector<WordVertex> vertex_types_of(const SetPartition& partition);

/// Contraction set (in simplex index coordinates, latest first) of a partition
/// whose labels are chronological (1 = earliest).
ContractionSet contraction_set_of(const SetPartition& partition);

/// n-th Dyson term of the smeared matrix element divided by the Weyl overlap
/// factor: sum over admissible diagrams (optionally one type only) of
/// (-i)^n int <phi1| E~... |phi2> times the contraction product.
Complex dyson_term_matrix_element(const SystemModel& sys, const SmearedAmplitude& amp1,
                                  const SmearedAmplitude& amp2,
                                  const CorrelationModel& model, int n, double t,
                                  double lambda, const CVector& phi1, const CVector& phi2,
                                  DiagramFilter filter = DiagramFilter::All,
                                  double rel_tol = 1e-7);

/// Same restricted to a single diagram.
Complex dyson_diagram_matrix_element(const SystemModel& sys, const SmearedAmplitude& amp1,
                                     const SmearedAmplitude& amp2,
                                     const CorrelationModel& model,
                                     const SetPartition& partition, double t, double lambda,
                                     const CVector& phi1, const CVector& phi2,
                                     double rel_tol = 1e-7);

/// The constants C_ab = ||E_ab|| dressed with the absolute smearing integrals,
/// and their maximum; the ingredients of the series majorant.
struct BoundConstants {
    double c11 = 0.0;
    double c10 = 0.0;
    double c01 = 0.0;
    double c00 = 0.0;
    double cmax = 0.0;
    double h1_bar = 0.0;
    double h2_bar = 0.0;

    double c_product(const std::vector<WordVertex>& types) const;
};

BoundConstants bound_constants(const SystemModel& sys, const SmearedAmplitude& amp1,
                               const SmearedAmplitude& amp2, const CorrelationModel& model);

/// Per-level sum over all diagrams of C-product times |contraction integral|,
/// the quantity the Pule level bound must dominate.
double diagram_weight_level_sum(const SystemModel& sys, const SmearedAmplitude& amp1,
                                const SmearedAmplitude& amp2, const CorrelationModel& model,
                                int n, double t, double lambda);

/// One row of the lambda-sweep experiment.
struct SweepRow {
    int n = 0;
    int diagram_id = 0;
    DiagramType type = DiagramType::TypeI;
    double lambda = 0.0;
    Complex value{0.0, 0.0};
    double abs_err_vs_limit = 0.0;
    double bound = 0.0;
    double bound_margin = 0.0;
};

/// Contraction integrals of every level-n diagram over a lambda sweep,
/// compared against their type I / type II limits and the uniform bound.
std::vector<SweepRow> dyson_sweep(const CorrelationModel& model, int n, double t,
                                  const std::vector<double>& lambdas);

}  // namespace wcl
