#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "wcl/combinatorics.hpp"
#include "wcl/errors.hpp"

using namespace wcl;

TEST_CASE("partition enumeration counts match Bell numbers") {
    CHECK(enumerate_partitions(1).size() == 1);
    CHECK(enumerate_partitions(3).size() == 5);
    CHECK(enumerate_partitions(4).size() == 15);
    for (int n = 1; n <= 10; ++n) {
        std::uint64_t count = 0;
        for_each_partition(n, [&count](const SetPartition&) { ++count; });
        CHECK(count == bell_number(n));
    }
}

TEST_CASE("partitions are canonical: sorted parts, sorted by minimum, unique") {
    std::set<std::vector<std::vector<int>>> seen;
    for (const SetPartition& p : enumerate_partitions(5)) {
        std::vector<int> all;
        for (std::size_t i = 0; i < p.parts.size(); ++i) {
            const auto& part = p.parts[i];
            CHECK(!part.empty());
            CHECK(std::is_sorted(part.begin(), part.end()));
            if (i > 0) CHECK(p.parts[i - 1].front() < part.front());
            all.insert(all.end(), part.begin(), part.end());
        }
        std::sort(all.begin(), all.end());
        std::vector<int> ground(5);
        for (int i = 0; i < 5; ++i) ground[i] = i + 1;
        CHECK(all == ground);
        CHECK(seen.insert(p.parts).second);
    }
    CHECK(seen.size() == 52);
}

TEST_CASE("enumeration cap refuses oversized requests") {
    CHECK_THROWS_AS(enumerate_partitions(13), CapacityError);
    CHECK_THROWS_AS(enumerate_partitions(5, 4), CapacityError);
    CHECK_THROWS_AS(enumerate_partitions(0), DomainError);
}

TEST_CASE("stirling2 and bell against the closed form and known values") {
    CHECK(stirling2(4, 2) == 7);
    CHECK(stirling2(0, 0) == 1);
    for (int n = 1; n <= 20; ++n) CHECK(stirling2(n, n) == 1);
    CHECK(bell_number(5) == 52);
    CHECK(bell_number(0) == 1);
    CHECK(bell_number(25) == 4638590332229999353ull);
    for (int n = 0; n <= 15; ++n)
        for (int m = 0; m <= n; ++m) CHECK(stirling2(n, m) == stirling2_closed_form(n, m));
    CHECK_THROWS_AS(stirling2(26, 3), DomainError);
    CHECK_THROWS_AS(stirling2(5, 6), DomainError);
    CHECK_THROWS_AS(stirling2_closed_form(24, 10), DomainError);
}

TEST_CASE("occupation_of counts part sizes") {
    SetPartition p;
    p.n = 3;
    p.parts = {{1}, {2}, {3}};
    CHECK(occupation_of(p).counts == std::map<int, int>{{1, 3}});

    p.n = 4;
    p.parts = {{1, 2}, {3, 4}};
    CHECK(occupation_of(p).counts == std::map<int, int>{{2, 2}});

    p.n = 5;
    p.parts = {{1, 3, 5}, {2}, {4}};
    OccupationSequence occ = occupation_of(p);
    CHECK(occ.counts == std::map<int, int>{{1, 2}, {3, 1}});
    CHECK(occ.weight() == 5);
    CHECK(occ.part_count() == 3);
}

TEST_CASE("canonical labelling is the expected bijection") {
    OccupationSequence singles;
    singles.counts = {{1, 2}};
    CHECK(canonical_labelling(singles, 1, 1, 1) == 1);
    CHECK(canonical_labelling(singles, 1, 2, 1) == 2);

    OccupationSequence pairs;
    pairs.counts = {{2, 2}};
    CHECK(canonical_labelling(pairs, 2, 1, 1) == 1);
    CHECK(canonical_labelling(pairs, 2, 1, 2) == 2);
    CHECK(canonical_labelling(pairs, 2, 2, 1) == 3);
    CHECK(canonical_labelling(pairs, 2, 2, 2) == 4);

    OccupationSequence mixed;
    mixed.counts = {{1, 1}, {2, 1}};
    CHECK(canonical_labelling(mixed, 1, 1, 1) == 1);
    CHECK(canonical_labelling(mixed, 2, 1, 1) == 2);
    CHECK(canonical_labelling(mixed, 2, 1, 2) == 3);
}

TEST_CASE("canonical labelling is onto {1..E} for random occupations") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        OccupationSequence occ;
        std::uniform_int_distribution<int> count(0, 2);
        for (int j = 1; j <= 4; ++j) {
            const int c = count(rng);
            if (c > 0) occ.counts[j] = c;
        }
        if (occ.weight() == 0) continue;
        std::set<int> image;
        for (const auto& [j, nj] : occ.counts)
            for (int k = 1; k <= nj; ++k)
                for (int r = 1; r <= j; ++r) image.insert(canonical_labelling(occ, j, k, r));
        CHECK(static_cast<int>(image.size()) == occ.weight());
        CHECK(*image.begin() == 1);
        CHECK(*image.rbegin() == occ.weight());
    }
}

TEST_CASE("pule permutations satisfy both ordering conditions and hit every shape") {
    for (int n = 1; n <= 8; ++n) {
        std::uint64_t total = 0;
        for (const OccupationSequence& occ : enumerate_occupations(n)) {
            const auto perms = enumerate_pule_permutations(occ);
            CHECK(perms.size() == partition_shape_count(occ));
            total += perms.size();
            std::set<std::vector<std::vector<int>>> partitions;
            for (const PulePermutation& rho : perms) {
                // (2.4): order of the j-tuples preserved; (2.5): within-tuple order.
                for (const auto& [j, nj] : occ.counts) {
                    for (int k = 1; k + 1 <= nj; ++k)
                        CHECK(rho.mapping[canonical_labelling(occ, j, k, 1) - 1] <
                              rho.mapping[canonical_labelling(occ, j, k + 1, 1) - 1]);
                    for (int k = 1; k <= nj; ++k)
                        for (int r = 1; r + 1 <= j; ++r)
                            CHECK(rho.mapping[canonical_labelling(occ, j, k, r) - 1] <
                                  rho.mapping[canonical_labelling(occ, j, k, r + 1) - 1]);
                }
                const SetPartition induced = partition_from_pule(rho);
                CHECK(occupation_of(induced).counts == occ.counts);
                CHECK(partitions.insert(induced.parts).second);  // injective onto shapes
            }
        }
        CHECK(total == bell_number(n));
    }
}

TEST_CASE("pule permutations: singletons only give the identity") {
    OccupationSequence occ;
    occ.counts = {{1, 4}};
    const auto perms = enumerate_pule_permutations(occ);
    REQUIRE(perms.size() == 1);
    CHECK(perms[0].mapping == std::vector<int>{1, 2, 3, 4});
}

TEST_CASE("pule permutations for two pairs match the three pairings of 4") {
    OccupationSequence occ;
    occ.counts = {{2, 2}};
    CHECK(enumerate_pule_permutations(occ).size() == 3);
}

TEST_CASE("classify_type: intervals are type I, anything else type II") {
    SetPartition p;
    p.n = 3;
    p.parts = {{1, 2}, {3}};
    CHECK(classify_type(p) == DiagramType::TypeI);
    p.parts = {{1, 3}, {2}};
    CHECK(classify_type(p) == DiagramType::TypeII);
    p.parts = {{1}, {2}, {3}};
    CHECK(classify_type(p) == DiagramType::TypeI);
}

TEST_CASE("consecutive-breaking relabellings flip some type I partition") {
    std::mt19937 rng(11);
    for (int n = 3; n <= 6; ++n) {
        std::vector<int> sigma(n);
        for (int i = 0; i < n; ++i) sigma[i] = i + 1;
        for (int trial = 0; trial < 20; ++trial) {
            // Draw until sigma breaks some adjacent pair into a non-interval.
            bool breaking = false;
            while (!breaking) {
                std::shuffle(sigma.begin(), sigma.end(), rng);
                for (int i = 0; i + 1 < n; ++i)
                    if (std::abs(sigma[i + 1] - sigma[i]) >= 2) breaking = true;
            }
            bool flipped = false;
            for (const SetPartition& p : enumerate_partitions(n)) {
                if (classify_type(p) != DiagramType::TypeI) continue;
                if (classify_type(relabel(p, sigma)) == DiagramType::TypeII) flipped = true;
            }
            CHECK(flipped);
        }
    }
}
