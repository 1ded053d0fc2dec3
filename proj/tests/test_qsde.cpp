#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <unsupported/Eigen/MatrixFunctions>

#include "wcl/errors.hpp"
#include "wcl/qsde.hpp"

using namespace wcl;

namespace {

CMatrix sigma_z() {
    CMatrix z = CMatrix::Zero(2, 2);
    z(0, 0) = 1.0;
    z(1, 1) = -1.0;
    return z;
}

CMatrix random_matrix(Eigen::Index dim, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    CMatrix m(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) m(i, j) = Complex(normal(rng), normal(rng));
    return m;
}

}  // namespace

TEST_CASE("chain coefficients") {
    const CorrelationModel model = CorrelationModel::exponential(1.0, 0.0);
    const SystemModel sys = random_system(3, 5, model, 0.5);
    CHECK((chain_coefficient(sys, 0, 1, 1) - sys.e01).cwiseAbs().maxCoeff() == 0.0);
    CHECK((chain_coefficient(sys, 1, 0, 2) - sys.e11 * sys.e10).cwiseAbs().maxCoeff() <
          1e-15);
    CHECK((chain_coefficient(sys, 0, 0, 3) - sys.e01 * sys.e11 * sys.e10)
              .cwiseAbs()
              .maxCoeff() < 1e-14);
    CHECK_THROWS_AS(chain_coefficient(sys, 0, 0, 0), DomainError);

    // Nilpotent scattering block truncates the chain.
    SystemModel nil;
    nil.dim = 2;
    nil.e00 = CMatrix::Zero(2, 2);
    nil.e11 = CMatrix::Zero(2, 2);
    nil.e11(0, 1) = 1.0;  // not Hermitian, but chain_coefficient does not validate
    nil.e10 = CMatrix::Identity(2, 2);
    nil.e01 = CMatrix::Identity(2, 2);
    CHECK(chain_coefficient(nil, 0, 0, 4).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("limit coefficients without scattering truncate at second order") {
    const CorrelationModel model = CorrelationModel::exponential(1.0, 0.3);
    SystemModel sys = qubit_damping_model();
    sys.e00 = 0.4 * sigma_z();
    const QsdeCoefficients c = limit_coefficients(sys, model);
    const Complex kappa = model.kappa_plus();
    CHECK((c.w - CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((c.l00 - (-I * sys.e00 - kappa * sys.e01 * sys.e10)).cwiseAbs().maxCoeff() <
          1e-15);
    CHECK((c.l10 - (-I * sys.e10)).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((c.l01 - (-I * sys.e01)).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((c.l11).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("scalar system: W is a phase") {
    // dim = 1, E11 = e real; W = (1 - sigma e - i gamma e / 2)/(1 - sigma e + i gamma e / 2).
    const CorrelationModel model = CorrelationModel::exponential(0.8, 0.9);
    SystemModel sys;
    sys.dim = 1;
    const double e = 0.7;
    sys.e00 = CMatrix::Zero(1, 1);
    sys.e01 = CMatrix::Zero(1, 1);
    sys.e10 = CMatrix::Zero(1, 1);
    sys.e11 = CMatrix::Constant(1, 1, e);
    const QsdeCoefficients c = limit_coefficients(sys, model);
    const double g = model.gamma();
    const double s = model.sigma();
    const Complex expected =
        (Complex(1.0 - s * e, -0.5 * g * e)) / (Complex(1.0 - s * e, 0.5 * g * e));
    CHECK(std::abs(c.w(0, 0) - expected) < 1e-14);
    CHECK(std::abs(std::abs(c.w(0, 0)) - 1.0) < 1e-14);
}

TEST_CASE("qubit damping: L is the lowering operator, H vanishes") {
    const CorrelationModel model = CorrelationModel::exponential(0.5, 0.0);  // sigma = 0
    const SystemModel sys = qubit_damping_model();
    const QsdeCoefficients c = limit_coefficients(sys, model);
    CHECK((c.l - (-I * sys.e10)).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(c.h.cwiseAbs().maxCoeff() < 1e-15);
    CHECK(c.residuals().max() < 1e-14);
}

TEST_CASE("coefficient residuals vanish over random systems") {
    for (unsigned seed = 1; seed <= 25; ++seed) {
        const CorrelationModel model =
            CorrelationModel::exponential(1.0, seed % 2 ? 0.8 : 0.0);
        const SystemModel sys = random_system(2 + static_cast<int>(seed % 3), seed, model);
        const QsdeCoefficients c = limit_coefficients(sys, model);
        CHECK(c.residuals().max() < 1e-12);
    }
}

TEST_CASE("geometric partial sums approach the closed form at the expected rate") {
    const CorrelationModel model = CorrelationModel::exponential(1.0, 0.4);
    const SystemModel sys = random_system(3, 9, model, 0.7);
    const QsdeCoefficients c = limit_coefficients(sys, model);
    const Complex kappa = model.kappa_plus();
    const double q = std::abs(kappa) * operator_norm(sys.e11);
    REQUIRE(q < 1.0);
    double previous = 1e300;
    for (int r_max : {2, 4, 6, 10, 14}) {
        double worst = 0.0;
        for (int a : {0, 1})
            for (int b : {0, 1})
                worst = std::max(worst,
                                 operator_norm(partial_chain_sum(sys, kappa, a, b, r_max) -
                                               c.block(a, b)));
        CHECK(worst <= previous);
        const double norm01 = operator_norm(sys.e01);
        const double norm10 = operator_norm(sys.e10);
        const double norm11 = operator_norm(sys.e11);
        const double front = std::max({norm01, norm10, norm11, operator_norm(sys.e00)});
        CHECK(worst <= front * front * std::pow(q, r_max - 1) / (1.0 - q) + 1e-15);
        previous = worst;
    }
}

TEST_CASE("spectral violation raises a divergence error") {
    SystemModel sys;
    sys.dim = 1;
    sys.e00 = CMatrix::Zero(1, 1);
    sys.e01 = CMatrix::Zero(1, 1);
    sys.e10 = CMatrix::Zero(1, 1);
    sys.e11 = CMatrix::Constant(1, 1, 3.0);
    CHECK_THROWS_AS(limit_coefficients(sys, Complex(0.5, 0.0), Complex(0.5, 0.0)),
                    DivergenceError);
}

TEST_CASE("Evans-Hudson maps: identity, adjoint symmetry, standard forms") {
    const CorrelationModel model = CorrelationModel::exponential(1.0, 0.6);
    const SystemModel sys = random_system(3, 12, model, 0.6);
    const QsdeCoefficients c = limit_coefficients(sys, model);
    const EvansHudsonMaps eh = evans_hudson(c);
    const CMatrix id = CMatrix::Identity(3, 3);
    const CMatrix x = random_matrix(3, 4);
    for (int a : {0, 1})
        for (int b : {0, 1}) {
            CHECK(eh.apply(a, b, id).cwiseAbs().maxCoeff() < 1e-13);
            CHECK((eh.apply(a, b, x.adjoint()) - eh.apply(b, a, x).adjoint())
                      .cwiseAbs()
                      .maxCoeff() < 1e-13);
        }
    // Standard forms in terms of (W, L, H).
    const double g = c.gamma;
    CHECK((eh.apply(1, 1, x) - (c.w.adjoint() * x * c.w - x) / g).cwiseAbs().maxCoeff() <
          1e-12);
    CHECK((eh.apply(1, 0, x) - c.w.adjoint() * (x * c.l - c.l * x)).cwiseAbs().maxCoeff() <
          1e-12);
    CHECK((eh.apply(0, 1, x) + (x * c.l.adjoint() - c.l.adjoint() * x) * c.w)
              .cwiseAbs()
              .maxCoeff() < 1e-12);
    const CMatrix dissipator =
        g * (c.l.adjoint() * x * c.l - 0.5 * (c.l.adjoint() * c.l * x + x * c.l.adjoint() * c.l));
    CHECK((eh.apply(0, 0, x) - (dissipator - I * (x * c.h - c.h * x)))
              .cwiseAbs()
              .maxCoeff() < 1e-12);
}

TEST_CASE("W = 1 makes the gauge map vanish") {
    const CorrelationModel model = CorrelationModel::exponential(1.0, 0.0);
    const SystemModel sys = qubit_damping_model();
    const EvansHudsonMaps eh = evans_hudson(limit_coefficients(sys, model));
    CHECK(eh.map(1, 1).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("qubit damping: L00(sigma_z) = -gamma (sigma_z + 1)") {
    const CorrelationModel model = CorrelationModel::exponential(0.5, 0.0);
    const QsdeCoefficients c = limit_coefficients(qubit_damping_model(), model);
    const EvansHudsonMaps eh = evans_hudson(c);
    const CMatrix expected = -c.gamma * (sigma_z() + CMatrix::Identity(2, 2));
    CHECK((eh.apply(0, 0, sigma_z()) - expected).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("lindblad semigroup: oracle values, semigroup law, positivity, trace") {
    const CorrelationModel model = CorrelationModel::exponential(0.5, 0.0);
    const QsdeCoefficients c = limit_coefficients(qubit_damping_model(), model);
    SUBCASE("t = 0 and the identity are fixed") {
        const CMatrix x = random_matrix(2, 8);
        CHECK((lindblad_semigroup(c, x, 0.0) - x).cwiseAbs().maxCoeff() < 1e-14);
        CHECK((lindblad_semigroup(c, CMatrix::Identity(2, 2), 3.0) - CMatrix::Identity(2, 2))
                  .cwiseAbs()
                  .maxCoeff() < 1e-13);
    }
    SUBCASE("excited-state damping curve") {
        for (double t : {0.2, 1.0, 2.5}) {
            const CMatrix evolved = lindblad_semigroup(c, sigma_z(), t);
            CHECK(std::abs(evolved(0, 0).real() - (2.0 * std::exp(-c.gamma * t) - 1.0)) <
                  1e-12);
        }
    }
    SUBCASE("semigroup property") {
        const CorrelationModel scattering_model = CorrelationModel::exponential(1.0, 0.4);
        const SystemModel sys = random_system(3, 31, scattering_model, 0.6);
        const QsdeCoefficients cs = limit_coefficients(sys, scattering_model);
        const CMatrix x = random_matrix(3, 14);
        const CMatrix two_step = lindblad_semigroup(cs, lindblad_semigroup(cs, x, 0.7), 0.5);
        CHECK((two_step - lindblad_semigroup(cs, x, 1.2)).cwiseAbs().maxCoeff() < 1e-10);
    }
    SUBCASE("Choi positivity and predual trace preservation") {
        const CorrelationModel scattering_model = CorrelationModel::exponential(1.0, 0.2);
        const SystemModel sys = random_system(2, 77, scattering_model, 0.6);
        const QsdeCoefficients cs = limit_coefficients(sys, scattering_model);
        const CMatrix generator = lindblad_generator_matrix(cs);
        for (double t : {0.1, 1.0, 10.0}) {
            const CMatrix semigroup_matrix = (t * generator).exp();
            const CMatrix choi = choi_matrix(semigroup_matrix, 2);
            Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (choi + choi.adjoint()));
            CHECK(es.eigenvalues().minCoeff() >= -1e-10);
            // Predual on a density matrix keeps unit trace.
            CMatrix rho(2, 2);
            rho << 0.7, Complex(0.1, 0.2), Complex(0.1, -0.2), 0.3;
            const CMatrix evolved_rho =
                unvec(CMatrix((t * generator).exp()).adjoint() * vec(rho), 2);
            CHECK(std::abs(evolved_rho.trace() - Complex(1.0, 0.0)) < 1e-10);
        }
    }
}

TEST_CASE("matrix element ODE: closed-form special cases") {
    const CorrelationModel model = CorrelationModel::exponential(1.0, 0.5);
    const SystemModel sys = random_system(2, 3, model, 0.6);
    const QsdeCoefficients c = limit_coefficients(sys, model);
    CVector phi1(2), phi2(2);
    phi1 << Complex(1.0, 0.0), Complex(0.0, 0.0);
    phi2 << Complex(0.6, 0.0), Complex(0.0, 0.8);

    SUBCASE("no amplitudes: only the time component survives") {
        const LimitAmplitude zero{{0.0, 1.0}, Complex{0.0, 0.0}};
        const MatrixElementResult r = matrix_element_ode(c, phi1, phi2, zero, zero, 1.3);
        CHECK(std::abs(r.overlap - Complex(1.0, 0.0)) < 1e-15);
        const CMatrix expected = (1.3 * c.l00).exp();
        CHECK(std::abs(r.value - phi1.dot(expected * phi2)) < 1e-12);
    }
    SUBCASE("t = 0 is the bare overlap") {
        const LimitAmplitude h1{{0.0, 1.0}, Complex(0.4, 0.1)};
        const LimitAmplitude h2{{0.0, 2.0}, Complex(0.2, -0.3)};
        const MatrixElementResult r = matrix_element_ode(c, phi1, phi2, h1, h2, 0.0);
        CHECK(std::abs(r.system_part - phi1.dot(phi2)) < 1e-15);
        CHECK(std::abs(r.value - r.overlap * phi1.dot(phi2)) < 1e-15);
    }
}

TEST_CASE("truncated chaotic expansion matches the propagator at small times") {
    const CorrelationModel model = CorrelationModel::exponential(1.0, 0.3);
    const SystemModel sys = random_system(2, 21, model, 0.6);
    const QsdeCoefficients c = limit_coefficients(sys, model);
    const LimitAmplitude h1{{0.0, 0.4}, Complex(0.5, 0.1)};
    const LimitAmplitude h2{{0.1, 0.6}, Complex(0.3, -0.2)};
    for (double t : {0.2, 0.5}) {
        const CMatrix exact = dressed_propagator(c, h1, h2, t);
        const CMatrix truncated = chaotic_expansion_propagator(c, h1, h2, t, 6);
        CHECK((exact - truncated).cwiseAbs().maxCoeff() < 1e-8);
    }
    // m_max = 0 is the identity.
    CHECK((chaotic_expansion_propagator(c, h1, h2, 1.0, 0) - CMatrix::Identity(2, 2))
              .cwiseAbs()
              .maxCoeff() == 0.0);
}

TEST_CASE("order terms of the limit chaotic expansion sum to the propagator") {
    const CorrelationModel model = CorrelationModel::exponential(1.0, 0.0);
    SystemModel sys;
    sys.dim = 2;
    sys.e00 = 0.3 * sigma_z();
    sys.e11 = CMatrix::Zero(2, 2);
    sys.e11(0, 0) = 0.25;
    sys.e11(1, 1) = -0.25;
    sys.e10 = CMatrix::Zero(2, 2);
    sys.e10(1, 0) = 1.0;
    sys.e01 = sys.e10.adjoint();
    const QsdeCoefficients c = limit_coefficients(sys, model);
    const LimitAmplitude h1{{0.0, 0.5}, Complex(0.6, 0.0)};
    const LimitAmplitude h2{{0.0, 0.5}, Complex(0.4, 0.2)};
    const double t = 0.4;
    CMatrix sum = CMatrix::Zero(2, 2);
    for (int n = 0; n <= 10; ++n)
        sum += limit_chaotic_order_term(sys, model, h1, h2, t, n);
    CHECK((sum - dressed_propagator(c, h1, h2, t)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("normal ordering identity") {
    SUBCASE("no scattering reduces to L10 = -i E10") {
        const CorrelationModel model = CorrelationModel::exponential(1.0, 0.0);
        const SystemModel sys = qubit_damping_model();
        const QsdeCoefficients c = limit_coefficients(sys, model);
        const NormalOrderReport report =
            normal_order_identity_check(c, sys, model.kappa_plus());
        CHECK(report.max_residual < 1e-14);
        CHECK((c.l10 - (-I * sys.e10)).cwiseAbs().maxCoeff() < 1e-15);
    }
    SUBCASE("kappa = 0 gives bare coefficients") {
        const CorrelationModel model = CorrelationModel::exponential(1.0, 0.0);
        const SystemModel sys = random_system(3, 17, model, 0.5);
        const QsdeCoefficients c =
            limit_coefficients(sys, Complex{0.0, 0.0}, Complex{0.0, 0.0});
        for (int a : {0, 1})
            for (int b : {0, 1})
                CHECK((c.block(a, b) - (-I * sys.block(a, b))).cwiseAbs().maxCoeff() <
                      1e-15);
        CHECK(normal_order_identity_check(c, sys, Complex{0.0, 0.0}).max_residual < 1e-14);
    }
    SUBCASE("random systems") {
        for (unsigned seed = 100; seed < 110; ++seed) {
            const CorrelationModel model = CorrelationModel::exponential(1.0, 0.35);
            const SystemModel sys = random_system(3, seed, model, 0.6);
            const QsdeCoefficients c = limit_coefficients(sys, model);
            CHECK(normal_order_identity_check(c, sys, model.kappa_plus()).max_residual <
                  1e-12);
        }
    }
}

TEST_CASE("limit weyl overlap") {
    const LimitAmplitude h1{{0.0, 1.0}, Complex(0.5, 0.0)};
    const LimitAmplitude h2{{0.5, 1.5}, Complex(0.3, 0.4)};
    const double gamma = 2.0;
    const Complex cross = Complex(0.5, 0.0) * std::conj(Complex(0.3, 0.4)) / gamma * 0.5;
    const double n1 = 0.25 / gamma;
    const double n2 = 0.25 / gamma;
    CHECK(std::abs(limit_weyl_overlap(h1, h2, gamma) -
                   std::exp(cross - 0.5 * (n1 + n2))) < 1e-14);
    CHECK(limit_weyl_overlap({{0.0, 1.0}, {0.0, 0.0}}, {{0.0, 1.0}, {0.0, 0.0}}, gamma) ==
          Complex{1.0, 0.0});
}
