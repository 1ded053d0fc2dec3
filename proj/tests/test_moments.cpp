#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "wcl/errors.hpp"
#include "wcl/fock.hpp"
#include "wcl/moments.hpp"

using namespace wcl;

namespace {

CMatrix random_psd(int modes, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    CMatrix r(modes, modes);
    for (int i = 0; i < modes; ++i)
        for (int j = 0; j < modes; ++j) r(i, j) = Complex(normal(rng), normal(rng));
    return (r.adjoint() * r) / static_cast<double>(modes);
}

VertexWord word_from(std::vector<WordVertex> vertices, const CMatrix& gram) {
    VertexWord w;
    w.vertices = std::move(vertices);
    w.inner = [gram](int g, int f) { return gram(g, f); };
    return w;
}

VertexWord random_word(int n, const CMatrix& gram, std::mt19937& rng) {
    std::uniform_int_distribution<int> bit(0, 1);
    std::uniform_int_distribution<int> mode(0, static_cast<int>(gram.rows()) - 1);
    std::vector<WordVertex> vs(static_cast<std::size_t>(n));
    for (auto& v : vs) v = {bit(rng), bit(rng), mode(rng), mode(rng)};
    return word_from(std::move(vs), gram);
}

}  // namespace

TEST_CASE("simple words have the textbook values") {
    const CMatrix gram = random_psd(3, 3);
    SUBCASE("single pair") {
        const VertexWord w = word_from({{1, 0, 0, 0}, {0, 1, 0, 2}}, gram);
        CHECK(std::abs(vacuum_moment_partition(w) - gram(2, 0)) < 1e-14);
    }
    SUBCASE("emission-scattering-absorption chain") {
        const VertexWord w = word_from({{1, 0, 0, 0}, {1, 1, 1, 1}, {0, 1, 2, 2}}, gram);
        // <g3|f2><g2|f1>
        CHECK(std::abs(vacuum_moment_partition(w) - gram(2, 1) * gram(1, 0)) < 1e-14);
    }
    SUBCASE("all-neutral word gives 1") {
        const VertexWord w =
            word_from({{0, 0, 0, 0}, {0, 0, 1, 1}, {0, 0, 2, 2}, {0, 0, 0, 1}}, gram);
        CHECK(vacuum_moment_partition(w) == Complex{1.0, 0.0});
        CHECK(vacuum_moment_pule(w) == Complex{1.0, 0.0});
    }
    SUBCASE("leftmost unmatched creator vanishes") {
        const VertexWord w = word_from({{0, 0, 0, 0}, {1, 0, 1, 1}}, gram);
        CHECK(vacuum_moment_partition(w) == Complex{0.0, 0.0});
        CHECK(vacuum_moment_pule(w) == Complex{0.0, 0.0});
    }
    SUBCASE("empty word") {
        const VertexWord w = word_from({}, gram);
        CHECK(vacuum_moment_partition(w) == Complex{1.0, 0.0});
    }
}

TEST_CASE("partition, Pule and Fock evaluations agree on random words") {
    for (unsigned seed = 1; seed <= 6; ++seed) {
        std::mt19937 rng(seed);
        const CMatrix gram = random_psd(3, seed + 100);
        const TruncatedFock fock(3, 6, gram);
        std::uniform_int_distribution<int> length(1, 6);
        for (int trial = 0; trial < 8; ++trial) {
            const VertexWord w = random_word(length(rng), gram, rng);
            const Complex p = vacuum_moment_partition(w);
            CHECK(std::abs(p - vacuum_moment_pule(w)) < 1e-12);
            CHECK(std::abs(p - fock.vacuum_moment(w.vertices)) < 1e-10);
        }
    }
}

TEST_CASE("admissible diagrams equal the leg-matching construction for n <= 5") {
    std::mt19937 rng(41);
    const CMatrix gram = random_psd(2, 77);
    std::uniform_int_distribution<int> length(1, 5);
    for (int trial = 0; trial < 60; ++trial) {
        const VertexWord w = random_word(length(rng), gram, rng);
        std::set<std::vector<std::vector<int>>> by_filter;
        for_each_partition(w.size(), [&](const SetPartition& p) {
            if (diagram_admissible(p, w)) by_filter.insert(p.parts);
        });
        std::set<std::vector<std::vector<int>>> by_matching;
        for (const SetPartition& p : diagrams_by_leg_matching(w)) by_matching.insert(p.parts);
        CHECK(by_filter == by_matching);
    }
}

TEST_CASE("summed over all vertex types, the moment is the unfiltered partition sum") {
    const CMatrix gram = random_psd(2, 55);
    const int n = 4;
    Complex summed{0.0, 0.0};
    for (int mask = 0; mask < (1 << (2 * n)); ++mask) {
        std::vector<WordVertex> vs(n);
        for (int i = 0; i < n; ++i) {
            vs[static_cast<std::size_t>(i)].alpha = (mask >> (2 * i)) & 1;
            vs[static_cast<std::size_t>(i)].beta = (mask >> (2 * i + 1)) & 1;
            vs[static_cast<std::size_t>(i)].f_id = i % 2;
            vs[static_cast<std::size_t>(i)].g_id = (i + 1) % 2;
        }
        summed += vacuum_moment_partition(word_from(std::move(vs), gram));
    }
    std::vector<WordVertex> base(n);
    for (int i = 0; i < n; ++i) base[static_cast<std::size_t>(i)] = {0, 0, i % 2, (i + 1) % 2};
    CHECK(std::abs(summed - partition_sum_all_types(word_from(std::move(base), gram))) <
          1e-12);
}

TEST_CASE("moment is linear in each pairing entry") {
    const CMatrix gram = random_psd(3, 91);
    std::mt19937 rng(7);
    const VertexWord w = random_word(5, gram, rng);
    const Complex base = vacuum_moment_partition(w);
    // Perturb one Gram entry along +h and -h; the second difference must vanish.
    const double h = 0.01;
    for (int gi = 0; gi < 3; ++gi)
        for (int fi = 0; fi < 3; ++fi) {
            auto perturbed = [&](double eps) {
                VertexWord v = w;
                v.inner = [gram, gi, fi, eps](int g, int f) {
                    Complex value = gram(g, f);
                    if (g == gi && f == fi) value += eps;
                    return value;
                };
                return vacuum_moment_partition(v);
            };
            const Complex plus = perturbed(h);
            const Complex minus = perturbed(-h);
            CHECK(std::abs(plus + minus - 2.0 * base) < 1e-12);
        }
}

TEST_CASE("type filters partition the moment") {
    const CMatrix gram = random_psd(2, 19);
    std::mt19937 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const VertexWord w = random_word(4, gram, rng);
        const Complex all = vacuum_moment_partition(w, DiagramFilter::All);
        const Complex type1 = vacuum_moment_partition(w, DiagramFilter::TypeI);
        const Complex type2 = vacuum_moment_partition(w, DiagramFilter::TypeII);
        CHECK(std::abs(all - type1 - type2) < 1e-13);
    }
}

TEST_CASE("capacity cap propagates") {
    const CMatrix gram = random_psd(2, 1);
    std::vector<WordVertex> vs(13, WordVertex{0, 0, 0, 0});
    CHECK_THROWS_AS(vacuum_moment_partition(word_from(std::move(vs), gram)), CapacityError);
}

TEST_CASE("poisson moments: Stirling expansion vs characteristic function") {
    SUBCASE("unit intensity, third moment is the Bell number 5") {
        const PoissonMomentCheck check = poisson_moment_check(1.0, 3);
        CHECK(check.stirling_sum == doctest::Approx(5.0).epsilon(1e-14));
        CHECK(check.relative_gap < 1e-8);
    }
    SUBCASE("first moment is the intensity") {
        for (double intensity : {0.3, 1.7, 4.0}) {
            const PoissonMomentCheck check = poisson_moment_check(intensity, 1);
            CHECK(check.stirling_sum == doctest::Approx(intensity).epsilon(1e-14));
            CHECK(check.relative_gap < 1e-8);
        }
    }
    SUBCASE("second moment at intensity 2 is 6") {
        const PoissonMomentCheck check = poisson_moment_check(2.0, 2);
        CHECK(check.stirling_sum == doctest::Approx(6.0).epsilon(1e-14));
        CHECK(check.relative_gap < 1e-8);
    }
    SUBCASE("high order stays within tolerance") {
        for (int order : {10, 15, 20})
            CHECK(poisson_moment_check(0.8, order).relative_gap < 1e-8);
    }
    SUBCASE("domain errors") {
        CHECK_THROWS_AS(poisson_moment_check(-1.0, 2), DomainError);
        CHECK_THROWS_AS(poisson_moment_check(1.0, 21), DomainError);
    }
}
