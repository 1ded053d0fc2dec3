#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "wcl/errors.hpp"
#include "wcl/fock.hpp"

using namespace wcl;

namespace {

CMatrix identity_gram(int modes) { return CMatrix::Identity(modes, modes); }

CMatrix random_psd(int modes, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    CMatrix r(modes, modes);
    for (int i = 0; i < modes; ++i)
        for (int j = 0; j < modes; ++j) r(i, j) = Complex(normal(rng), normal(rng));
    return (r.adjoint() * r) / static_cast<double>(modes);
}

}  // namespace

TEST_CASE("dimensions and vacuum") {
    const TruncatedFock single(1, 2, identity_gram(1));
    CHECK(single.dimension() == 3);
    const TruncatedFock pair(2, 1, identity_gram(2));
    CHECK(pair.dimension() == 4);
    CHECK(std::abs(pair.vacuum().norm() - 1.0) < 1e-15);
}

TEST_CASE("CCR hold exactly below the truncation sector") {
    SUBCASE("orthogonal modes commute") {
        const TruncatedFock space(2, 1, identity_gram(2));
        CHECK(space.ccr_defect(0, 1).cwiseAbs().maxCoeff() == 0.0);
        CHECK(space.ccr_defect(0, 0).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("non-orthogonal modes pick up the Gram entry") {
        CMatrix gram(2, 2);
        gram << 1.0, 0.5, 0.5, 1.0;
        const TruncatedFock space(2, 3, gram);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                CHECK(space.ccr_defect(i, j).cwiseAbs().maxCoeff() < 1e-13);
        // The commutator itself equals 0.5 I on the low sector.
        const CMatrix comm = space.annihilator(0) * space.creator(1) -
                             space.creator(1) * space.annihilator(0);
        CHECK(std::abs(comm(0, 0) - Complex(0.5, 0.0)) < 1e-14);
    }
    SUBCASE("random complex Gram") {
        const CMatrix gram = random_psd(3, 5);
        const TruncatedFock space(3, 2, gram);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                CHECK(space.ccr_defect(i, j).cwiseAbs().maxCoeff() < 1e-13);
    }
}

TEST_CASE("model validation rejects bad grams") {
    CMatrix not_hermitian(2, 2);
    not_hermitian << 1.0, 0.5, 0.2, 1.0;
    CHECK_THROWS_AS(TruncatedFock(2, 2, not_hermitian), ModelError);
    CMatrix not_psd(2, 2);
    not_psd << 1.0, 2.0, 2.0, 1.0;
    CHECK_THROWS_AS(TruncatedFock(2, 2, not_psd), ModelError);
}

TEST_CASE("vacuum moments of simple words") {
    CMatrix gram = random_psd(2, 9);
    const TruncatedFock space(2, 4, gram);

    SUBCASE("single contraction gives <g|f>") {
        // vertex 1 = creator f (rightmost), vertex 2 = annihilator g.
        std::vector<WordVertex> word{{1, 0, 0, 0}, {0, 1, 0, 1}};
        CHECK(std::abs(space.vacuum_moment(word) - gram(1, 0)) < 1e-13);
    }
    SUBCASE("two scattering vertices kill the vacuum") {
        std::vector<WordVertex> word{{1, 1, 0, 0}, {1, 1, 1, 1}};
        CHECK(std::abs(space.vacuum_moment(word)) == 0.0);
    }
    SUBCASE("empty word gives 1") {
        CHECK(space.vacuum_moment({}) == Complex{1.0, 0.0});
    }
    SUBCASE("cutoff below word length is refused") {
        const TruncatedFock small(2, 2, gram);
        std::vector<WordVertex> word(3, WordVertex{1, 0, 0, 0});
        CHECK_THROWS_AS(small.vacuum_moment(word), PrecisionError);
    }
}

TEST_CASE("number conservation: unbalanced words vanish") {
    const CMatrix gram = random_psd(2, 13);
    const TruncatedFock space(2, 5, gram);
    std::mt19937 rng(17);
    std::uniform_int_distribution<int> bit(0, 1);
    std::uniform_int_distribution<int> mode(0, 1);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<WordVertex> word(4);
        int balance = 0;
        for (auto& v : word) {
            v.alpha = bit(rng);
            v.beta = bit(rng);
            v.f_id = mode(rng);
            v.g_id = mode(rng);
            balance += v.alpha - v.beta;
        }
        if (balance != 0) CHECK(std::abs(space.vacuum_moment(word)) < 1e-14);
    }
}

TEST_CASE("hermiticity: adjoint-reversed word conjugates the moment") {
    const CMatrix gram = random_psd(3, 21);
    const TruncatedFock space(3, 5, gram);
    std::mt19937 rng(23);
    std::uniform_int_distribution<int> bit(0, 1);
    std::uniform_int_distribution<int> mode(0, 2);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<WordVertex> word(5);
        for (auto& v : word) {
            v.alpha = bit(rng);
            v.beta = bit(rng);
            v.f_id = mode(rng);
            v.g_id = mode(rng);
        }
        std::vector<WordVertex> reversed;
        for (auto it = word.rbegin(); it != word.rend(); ++it)
            reversed.push_back(WordVertex{it->beta, it->alpha, it->g_id, it->f_id});
        CHECK(std::abs(space.vacuum_moment(word) -
                       std::conj(space.vacuum_moment(reversed))) < 1e-12);
    }
}

TEST_CASE("coherent vectors match the Gaussian overlap formula") {
    const TruncatedFock space(1, 12, identity_gram(1));
    SUBCASE("zero amplitude is the vacuum") {
        const CVector coh = space.coherent_vector({Complex{0.0, 0.0}});
        CHECK(std::abs(TruncatedFock::overlap(coh, space.vacuum()) - 1.0) < 1e-14);
    }
    SUBCASE("normalization at z = 0.3") {
        const CVector coh = space.coherent_vector({Complex{0.3, 0.0}});
        CHECK(std::abs(TruncatedFock::overlap(coh, coh) - 1.0) < 1e-10);
    }
    SUBCASE("overlap of 0.2 and 0.3") {
        const CVector u = space.coherent_vector({Complex{0.2, 0.0}});
        const CVector v = space.coherent_vector({Complex{0.3, 0.0}});
        const double expected = std::exp(0.06 - 0.5 * (0.04 + 0.09));
        CHECK(std::abs(TruncatedFock::overlap(u, v) - expected) < 1e-10);
    }
    SUBCASE("complex amplitudes and non-orthogonal modes") {
        CMatrix gram(2, 2);
        gram << 1.0, Complex(0.3, 0.1), Complex(0.3, -0.1), 1.0;
        const TruncatedFock two(2, 9, gram);
        const std::vector<Complex> z1{Complex(0.2, 0.1), Complex(-0.1, 0.05)};
        const std::vector<Complex> z2{Complex(0.1, -0.2), Complex(0.15, 0.0)};
        CVector a(2), b(2);
        a << z1[0], z1[1];
        b << z2[0], z2[1];
        const Complex cross = (a.adjoint() * gram * b)(0);
        const double n1 = (a.adjoint() * gram * a)(0).real();
        const double n2 = (b.adjoint() * gram * b)(0).real();
        const Complex expected = std::exp(cross - 0.5 * n1 - 0.5 * n2);
        CHECK(std::abs(TruncatedFock::overlap(two.coherent_vector(z1),
                                              two.coherent_vector(z2)) -
                       expected) < 1e-9);
    }
    SUBCASE("amplitude too large for the cutoff is refused") {
        const TruncatedFock tiny(1, 2, identity_gram(1));
        CHECK_THROWS_AS(tiny.coherent_vector({Complex{2.5, 0.0}}), PrecisionError);
    }
}
