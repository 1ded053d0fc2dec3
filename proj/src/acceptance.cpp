#include "wcl/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <unsupported/Eigen/MatrixFunctions>

#include "wcl/combinatorics.hpp"
#include "wcl/correlation.hpp"
#include "wcl/dyson.hpp"
#include "wcl/errors.hpp"
#include "wcl/fock.hpp"
#include "wcl/moments.hpp"
#include "wcl/pule_bounds.hpp"
#include "wcl/qsde.hpp"
#include "wcl/quadrature.hpp"
#include "wcl/simulator.hpp"
#include "wcl/system_model.hpp"

namespace wcl {

namespace {

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buffer[256];
    std::snprintf(buffer, sizeof(buffer), pattern, a, b, c);
    return buffer;
}

CMatrix random_gram(int modes, std::mt19937& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    CMatrix r(modes, modes);
    for (int i = 0; i < modes; ++i)
        for (int j = 0; j < modes; ++j) r(i, j) = Complex(normal(rng), normal(rng));
    return (r.adjoint() * r) / static_cast<double>(modes);
}

VertexWord random_word(int n, const CMatrix& gram, std::mt19937& rng) {
    std::uniform_int_distribution<int> bit(0, 1);
    std::uniform_int_distribution<int> mode(0, static_cast<int>(gram.rows()) - 1);
    VertexWord word;
    word.vertices.resize(static_cast<std::size_t>(n));
    for (auto& v : word.vertices) {
        v.alpha = bit(rng);
        v.beta = bit(rng);
        v.f_id = mode(rng);
        v.g_id = mode(rng);
    }
    word.inner = [gram](int g, int f) { return gram(g, f); };
    return word;
}

// --- criterion bodies ------------------------------------------------------

CriterionResult moment_oracle_equivalence() {
    CriterionResult r{1, "moment oracle equivalence (partition vs Fock vs Pule)"};
    const int modes = 3;
    double max_fock_gap = 0.0;
    double max_pule_gap = 0.0;
    int words = 0;
    for (unsigned seed = 1; seed <= 20; ++seed) {
        std::mt19937 rng(seed);
        const CMatrix gram = random_gram(modes, rng);
        const TruncatedFock fock(modes, 6, gram);
        std::uniform_int_distribution<int> length(1, 6);
        for (int w = 0; w < 10; ++w) {
            const VertexWord word = random_word(length(rng), gram, rng);
            const Complex by_partition = vacuum_moment_partition(word);
            const Complex by_pule = vacuum_moment_pule(word);
            const Complex by_fock = fock.vacuum_moment(word.vertices);
            max_fock_gap = std::max(max_fock_gap, std::abs(by_partition - by_fock));
            max_pule_gap = std::max(max_pule_gap, std::abs(by_partition - by_pule));
            ++words;
        }
    }
    r.pass = max_fock_gap < 1e-10 && max_pule_gap < 1e-12 && words == 200;
    r.measured = fmt("max |partition-fock| = %.3g, max |partition-pule| = %.3g over 200 words",
                     max_fock_gap, max_pule_gap);
    return r;
}

CriterionResult combinatorial_counts() {
    CriterionResult r{2, "partition counts, Pule counts, Stirling closed form"};
    bool pass = true;
    for (int n = 1; n <= 10; ++n) {
        std::uint64_t count = 0;
        for_each_partition(n, [&count](const SetPartition&) { ++count; });
        pass = pass && count == bell_number(n);
    }
    for (int n = 1; n <= 8; ++n) {
        std::uint64_t total = 0;
        for (const OccupationSequence& occ : enumerate_occupations(n))
            total += enumerate_pule_permutations(occ).size();
        pass = pass && total == bell_number(n);
    }
    for (int n = 0; n <= 15; ++n)
        for (int m = 0; m <= n; ++m)
            pass = pass && stirling2(n, m) == stirling2_closed_form(n, m);
    r.pass = pass;
    r.measured = "partitions == B_n (n<=10), sum over shapes == B_n (n<=8), S(n,m) == closed form (n<=15)";
    return r;
}

CriterionResult lemma61_bound() {
    CriterionResult r{3, "simplex contraction integrals obey gamma^m t^{n-m}/(n-m)!"};
    const CorrelationModel model = CorrelationModel::exponential(1.0, 0.0);
    double worst_ratio = 0.0;
    int checked = 0;
    for (int n = 1; n <= 4; ++n)
        for (int m = 0; m <= std::min(2, n - 1); ++m)
            for (const ContractionSet& cs : enumerate_contraction_sets(n, m))
                for (double t : {0.5, 1.0, 2.0})
                    for (double lambda : {1.0, 0.5, 0.25}) {
                        const Complex value =
                            simplex_contraction_integral(cs, t, lambda, model);
                        const double bound = contraction_bound(n, m, t, model);
                        worst_ratio = std::max(worst_ratio, std::abs(value) / bound);
                        ++checked;
                    }
    r.pass = worst_ratio <= 1.05;
    r.measured = fmt("worst |integral|/bound = %.6f over %.0f cases", worst_ratio,
                     static_cast<double>(checked));
    return r;
}

CriterionResult type_limits() {
    CriterionResult r{4, "type I integrals reach kappa_+^m t^{n-m}/(n-m)!, type II vanish"};
    const CorrelationModel model = CorrelationModel::exponential(1.0, 0.0);
    const std::vector<double> lambdas{1.0, 0.5, 0.25, 0.125};
    const double t = 1.0;
    // Type I errors must fall strictly along the whole sweep; type II errors
    // are only claimed to vanish, and indeed need not fall from lambda = 1
    // where no scale separation exists yet, so monotonicity is enforced from
    // the second sweep point on.
    bool type1_decreasing = true;
    bool type2_vanishing = true;
    double worst_type1_rel = 0.0;
    for (int n = 2; n <= 3; ++n)
        for (int m = 1; m <= n - 1; ++m)
            for (const ContractionSet& cs : enumerate_contraction_sets(n, m)) {
                const bool type1 = cs.type() == DiagramType::TypeI;
                const Complex limit =
                    type1 ? type1_limit_value(n, cs.m(), t, model) : Complex{0.0, 0.0};
                std::vector<double> errs;
                for (double lambda : lambdas)
                    errs.push_back(std::abs(
                        simplex_contraction_integral(cs, t, lambda, model) - limit));
                for (std::size_t i = 1; i < errs.size(); ++i) {
                    if (type1 && errs[i] >= errs[i - 1]) type1_decreasing = false;
                    if (!type1 && i >= 2 && errs[i] >= errs[i - 1]) type2_vanishing = false;
                }
                if (type1)
                    worst_type1_rel =
                        std::max(worst_type1_rel, errs.back() / std::abs(limit));
                else if (errs.back() >= 0.25 * *std::max_element(errs.begin(), errs.end()))
                    type2_vanishing = false;
            }
    r.pass = type1_decreasing && type2_vanishing && worst_type1_rel < 0.05;
    r.measured = fmt("typeI decreasing = %.0f, typeII vanishing = %.0f, worst typeI rel err = %.4f",
                     type1_decreasing ? 1.0 : 0.0, type2_vanishing ? 1.0 : 0.0,
                     worst_type1_rel);
    return r;
}

CriterionResult pule_majorant() {
    CriterionResult r{5, "level bounds sum to omega; diagram weights below level bounds"};
    BoundParameters params;
    params.a = -0.7;
    params.b = 0.5;
    double partial = 0.0;
    for (int n = 0; n <= 60; ++n) partial += level_bound(n, params);
    const double gap = std::abs(partial - omega(-0.7, 0.5));
    const double omega_e_gap = std::abs(omega(-std::log(2.0), 0.0) - std::exp(1.0));

    const CorrelationModel model = CorrelationModel::exponential(1.0, 0.0);
    SystemModel sys = random_system(3, 7, model, 0.5);
    const SmearedAmplitude amp1{{0.0, 1.0}, Complex(0.3, 0.0)};
    const SmearedAmplitude amp2{{0.0, 1.0}, Complex(0.2, 0.1)};
    const double t = 1.0;
    const BoundConstants c = bound_constants(sys, amp1, amp2, model);
    const BoundParameters derived =
        BoundParameters::from_constants(model.big_k(), c.c11, c.cmax, t, model.gamma());
    double worst_margin = 1e300;
    for (int n = 1; n <= 4; ++n)
        for (double lambda : {1.0, 0.5, 0.25}) {
            const double weights =
                diagram_weight_level_sum(sys, amp1, amp2, model, n, t, lambda);
            worst_margin = std::min(worst_margin, level_bound(n, derived) - weights);
        }
    r.pass = gap < 1e-8 && omega_e_gap < 1e-12 && worst_margin >= 0.0;
    r.measured = fmt("sum-vs-omega gap = %.3g, omega(-ln2,0)-e = %.3g, min level margin = %.3g",
                     gap, omega_e_gap, worst_margin);
    return r;
}

CriterionResult coefficient_identities() {
    CriterionResult r{6, "limit coefficient identities and geometric convergence"};
    double worst_residual = 0.0;
    double worst_rate_excess = 0.0;
    int systems = 0;
    for (unsigned seed = 1; seed <= 50; ++seed) {
        const double sigma0 = (seed % 2 == 0) ? 0.7 : 0.0;
        const CorrelationModel model = CorrelationModel::exponential(1.0, sigma0);
        const SystemModel sys = random_system(2 + static_cast<int>(seed % 3), seed, model, 0.6);
        const QsdeCoefficients coeffs = limit_coefficients(sys, model);
        worst_residual = std::max(worst_residual, coeffs.residuals().max());
        // Unitarity structure relations from the flow of the identity.
        const CMatrix id = CMatrix::Identity(sys.dim, sys.dim);
        const double g = coeffs.gamma;
        worst_residual = std::max(
            worst_residual,
            (coeffs.l00 + coeffs.l00.adjoint() + g * coeffs.l10.adjoint() * coeffs.l10)
                .cwiseAbs()
                .maxCoeff());
        worst_residual = std::max(
            worst_residual,
            (coeffs.l01 + coeffs.l10.adjoint() + g * coeffs.l10.adjoint() * coeffs.l11)
                .cwiseAbs()
                .maxCoeff());
        worst_residual = std::max(
            worst_residual,
            (coeffs.l11 + coeffs.l11.adjoint() + g * coeffs.l11.adjoint() * coeffs.l11)
                .cwiseAbs()
                .maxCoeff());
        (void)id;
        // Geometric partial sums against the printed rate.
        const Complex kappa = model.kappa_plus();
        const double q = std::abs(kappa) * operator_norm(sys.e11);
        double norm_e = 0.0;
        for (int a : {0, 1})
            for (int b : {0, 1}) norm_e = std::max(norm_e, operator_norm(sys.block(a, b)));
        for (int r_max : {2, 4, 8}) {
            for (int a : {0, 1})
                for (int b : {0, 1}) {
                    const double gap = operator_norm(
                        partial_chain_sum(sys, kappa, a, b, r_max) - coeffs.block(a, b));
                    const double allowed =
                        norm_e * norm_e * std::pow(q, r_max - 1) / (1.0 - q);
                    worst_rate_excess = std::max(worst_rate_excess, gap - allowed);
                }
        }
        ++systems;
    }
    r.pass = worst_residual < 1e-12 && worst_rate_excess <= 0.0 && systems == 50;
    r.measured = fmt("max residual = %.3g, max rate excess = %.3g over 50 systems",
                     worst_residual, worst_rate_excess);
    return r;
}

CriterionResult evans_hudson_lindblad() {
    CriterionResult r{7, "Evans-Hudson maps, Choi positivity, qubit damping oracle"};
    double worst_identity = 0.0;
    double worst_adjoint = 0.0;
    for (unsigned seed = 1; seed <= 20; ++seed) {
        const CorrelationModel model = CorrelationModel::exponential(1.0, seed % 2 ? 0.4 : 0.0);
        const SystemModel sys = random_system(2 + static_cast<int>(seed % 2), seed, model, 0.6);
        const QsdeCoefficients coeffs = limit_coefficients(sys, model);
        const EvansHudsonMaps eh = evans_hudson(coeffs);
        const CMatrix id = CMatrix::Identity(sys.dim, sys.dim);
        std::mt19937 rng(seed + 1000);
        std::normal_distribution<double> normal(0.0, 1.0);
        CMatrix x(sys.dim, sys.dim);
        for (Eigen::Index i = 0; i < sys.dim; ++i)
            for (Eigen::Index j = 0; j < sys.dim; ++j)
                x(i, j) = Complex(normal(rng), normal(rng));
        for (int a : {0, 1})
            for (int b : {0, 1}) {
                worst_identity = std::max(
                    worst_identity, eh.apply(a, b, id).cwiseAbs().maxCoeff());
                worst_adjoint = std::max(
                    worst_adjoint, (eh.apply(a, b, x.adjoint()) -
                                    eh.apply(b, a, x).adjoint())
                                       .cwiseAbs()
                                       .maxCoeff());
            }
    }
    // Choi positivity of the semigroup for a scattering-bearing random system.
    const CorrelationModel model = CorrelationModel::exponential(1.0, 0.3);
    const SystemModel sys = random_system(3, 11, model, 0.6);
    const QsdeCoefficients coeffs = limit_coefficients(sys, model);
    const CMatrix generator = lindblad_generator_matrix(coeffs);
    double min_choi = 0.0;
    for (double t : {0.1, 1.0, 10.0}) {
        const CMatrix semigroup = (t * generator).exp();
        const CMatrix choi = choi_matrix(semigroup, sys.dim);
        Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (choi + choi.adjoint()));
        min_choi = std::min(min_choi, es.eigenvalues().minCoeff());
    }
    // Qubit amplitude damping: <sigma_z>_t = 2 e^{-gamma t} - 1.
    const CorrelationModel damping_model = CorrelationModel::exponential(0.5, 0.0);
    const SystemModel qubit = qubit_damping_model();
    const QsdeCoefficients qc = limit_coefficients(qubit, damping_model);
    CMatrix sigma_z = CMatrix::Zero(2, 2);
    sigma_z(0, 0) = 1.0;
    sigma_z(1, 1) = -1.0;
    double worst_damping = 0.0;
    for (double t : {0.1, 0.5, 1.0, 2.0}) {
        const CMatrix evolved = lindblad_semigroup(qc, sigma_z, t);
        const double expected = 2.0 * std::exp(-qc.gamma * t) - 1.0;
        worst_damping = std::max(worst_damping, std::abs(evolved(0, 0).real() - expected));
    }
    r.pass = worst_identity < 1e-12 && worst_adjoint < 1e-12 && min_choi >= -1e-10 &&
             worst_damping < 1e-10;
    r.measured = fmt("max |L(1)| = %.3g, min Choi eig = %.3g, damping gap = %.3g",
                     worst_identity, min_choi, worst_damping);
    return r;
}

CriterionResult ito_table(const AcceptanceOptions& options) {
    CriterionResult r{8, "two-level slice increments realize the Ito table on vacuum"};
    // Dyadic dt makes sqrt(gamma dt) exactly representable, so the identities
    // hold with residual exactly zero rather than a rounding ulp.
    const SliceSpace slices = build_slices(1.0, 0.0625);
    const ItoAuditReport report = ito_table_audit(slices, options.ito_corruption);
    bool classified = report.table_pairs == 4 && report.vanishing_pairs == 12;
    int exact_zero = 0;
    for (const ItoPairRecord& rec : report.pairs)
        if (!rec.table_pair && rec.vanishes_exactly) ++exact_zero;
    const double higher_order_cap = std::sqrt(slices.gamma * slices.dt) * 1.000001;
    r.pass = classified && report.max_table_residual == 0.0 && exact_zero == 9 &&
             report.max_higher_order_ratio <= higher_order_cap;
    r.measured = fmt("table residual = %.3g, exact-zero pairs = %.0f/9, max higher-order ratio = %.3g",
                     report.max_table_residual, static_cast<double>(exact_zero),
                     report.max_higher_order_ratio);
    return r;
}

CriterionResult simulator_weak_convergence() {
    CriterionResult r{9, "order-1 weak convergence of the repeated-interaction simulator"};
    const CorrelationModel model = CorrelationModel::exponential(0.5, 0.0);  // gamma = 1
    const SystemModel sys = qubit_damping_model();
    const QsdeCoefficients coeffs = limit_coefficients(sys, model);
    CMatrix sigma_z = CMatrix::Zero(2, 2);
    sigma_z(0, 0) = 1.0;
    sigma_z(1, 1) = -1.0;
    CVector excited = CVector::Zero(2);
    excited(0) = 1.0;
    const double t = 1.0;
    const double exact = 2.0 * std::exp(-coeffs.gamma * t) - 1.0;
    std::vector<double> heisenberg_errors;
    for (double dt : {0.02, 0.01, 0.005}) {
        const SliceSpace slices = build_slices(coeffs.gamma, dt);
        const Trajectory traj =
            evolve_heisenberg(coeffs, slices, sigma_z, static_cast<int>(std::lround(t / dt)),
                              excited, excited, NoiseState::vacuum());
        heisenberg_errors.push_back(std::abs(traj.final_value.real() - exact));
    }
    const double ratio_h1 = heisenberg_errors[0] / heisenberg_errors[1];
    const double ratio_h2 = heisenberg_errors[1] / heisenberg_errors[2];

    // Coherent-state unitary route against the exact amplitude-dressed ODE.
    const LimitAmplitude h1{{0.0, 1.0}, Complex(0.4, 0.0)};
    const LimitAmplitude h2{{0.0, 1.0}, Complex(0.3, 0.2)};
    CVector ground = CVector::Zero(2);
    ground(1) = 1.0;
    const Complex oracle =
        matrix_element_ode(coeffs, excited, ground, h1, h2, t).value;
    std::vector<double> unitary_errors;
    for (double dt : {0.02, 0.01, 0.005}) {
        const SliceSpace slices = build_slices(coeffs.gamma, dt);
        const Trajectory traj =
            evolve_unitary(coeffs, slices, static_cast<int>(std::lround(t / dt)), excited,
                           ground, NoiseState::coherent(h1, h2));
        unitary_errors.push_back(std::abs(traj.final_value - oracle));
    }
    const double ratio_u1 = unitary_errors[0] / unitary_errors[1];
    const double ratio_u2 = unitary_errors[1] / unitary_errors[2];

    const SliceSpace slices = build_slices(coeffs.gamma, 0.01);
    const Trajectory identity_traj = evolve_heisenberg(
        coeffs, slices, CMatrix::Identity(2, 2), 100, excited, excited, NoiseState::vacuum());
    const double identity_gap =
        (identity_traj.final_matrix - CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff();

    auto in_range = [](double x) { return x >= 1.7 && x <= 2.3; };
    r.pass = in_range(ratio_h1) && in_range(ratio_h2) && in_range(ratio_u1) &&
             in_range(ratio_u2) && identity_gap == 0.0;
    r.measured = fmt("heisenberg ratios %.2f/%.2f, unitary ratios ", ratio_h1, ratio_h2) +
                 fmt("%.2f/%.2f, J(1)-1 = %.1g", ratio_u1, ratio_u2, identity_gap);
    return r;
}

CriterionResult prelimit_limit_matching() {
    CriterionResult r{10, "type I Dyson terms extrapolate to the limit chaotic expansion"};
    const CorrelationModel model = CorrelationModel::exponential(1.0, 0.0);
    SystemModel sys;
    sys.dim = 2;
    sys.e00 = CMatrix::Zero(2, 2);
    sys.e00(0, 1) = 0.2;
    sys.e00(1, 0) = 0.2;
    sys.e11 = CMatrix::Zero(2, 2);
    sys.e11(0, 0) = 0.3;
    sys.e11(1, 1) = -0.3;
    sys.e10 = CMatrix::Zero(2, 2);
    sys.e10(1, 0) = 1.0;
    sys.e01 = sys.e10.adjoint();
    const SmearedAmplitude amp1{{0.0, 0.6}, Complex(0.7, 0.0)};
    const SmearedAmplitude amp2{{0.2, 1.0}, Complex(0.5, 0.2)};
    CVector phi1 = CVector::Zero(2);
    phi1(0) = 1.0;
    CVector phi2(2);
    phi2(0) = Complex(0.6, 0.0);
    phi2(1) = Complex(0.8, 0.0);
    const double t = 1.0;
    const std::vector<double> lambdas{1.0, 0.5, 0.25, 0.125};
    double worst_rel = 0.0;
    for (int n = 1; n <= 3; ++n) {
        std::vector<Complex> sweep;
        for (double lambda : lambdas)
            sweep.push_back(dyson_term_matrix_element(sys, amp1, amp2, model, n, t, lambda,
                                                      phi1, phi2, DiagramFilter::TypeI));
        const Complex extrapolated = richardson_extrapolate(sweep, 2.0);
        const CMatrix term =
            limit_chaotic_order_term(sys, model, amp1.limit(), amp2.limit(), t, n);
        const Complex expected = phi1.dot(term * phi2);
        worst_rel = std::max(worst_rel,
                             std::abs(extrapolated - expected) / std::abs(expected));
    }
    r.pass = worst_rel < 0.10;
    r.measured = fmt("worst relative gap = %.4f over n = 1..3", worst_rel);
    return r;
}

CriterionResult normal_ordering() {
    CriterionResult r{11, "normal-ordered form reproduces the limit coefficients"};
    double worst = 0.0;
    for (unsigned seed = 1; seed <= 50; ++seed) {
        const CorrelationModel model =
            CorrelationModel::exponential(1.0, seed % 3 == 0 ? 0.5 : 0.0);
        const SystemModel sys = random_system(2 + static_cast<int>(seed % 3), seed, model, 0.6);
        const QsdeCoefficients coeffs = limit_coefficients(sys, model);
        const NormalOrderReport report =
            normal_order_identity_check(coeffs, sys, model.kappa_plus());
        worst = std::max(worst, report.max_residual);
    }
    r.pass = worst < 1e-12;
    r.measured = fmt("max coefficient residual = %.3g over 50 systems", worst);
    return r;
}

}  // namespace

int criterion_count() { return 11; }

CriterionResult run_criterion(int id, const AcceptanceOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    CriterionResult result;
    switch (id) {
        case 1: result = moment_oracle_equivalence(); break;
        case 2: result = combinatorial_counts(); break;
        case 3: result = lemma61_bound(); break;
        case 4: result = type_limits(); break;
        case 5: result = pule_majorant(); break;
        case 6: result = coefficient_identities(); break;
        case 7: result = evans_hudson_lindblad(); break;
        case 8: result = ito_table(options); break;
        case 9: result = simulator_weak_convergence(); break;
        case 10: result = prelimit_limit_matching(); break;
        case 11: result = normal_ordering(); break;
        default: throw DomainError("unknown acceptance criterion id");
    }
    result.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

std::vector<CriterionResult> run_acceptance_suite(const AcceptanceOptions& options) {
    std::vector<CriterionResult> results;
    for (int id = 1; id <= criterion_count(); ++id) results.push_back(run_criterion(id, options));
    return results;
}

}  // namespace wcl
