#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

namespace wcl {

/// Partition of {1..n} into disjoint nonempty parts. Parts are stored with
/// elements increasing and are ordered by their minimal element, which makes
/// enumeration output canonical and diffable.
struct SetPartition {
    int n = 0;
    std::vector<std::vector<int>> parts;
};

/// Occupation numbers of a partition: counts[j] = number of parts of size j.
struct OccupationSequence {
    std::map<int, int> counts;

    int weight() const;       // E(n) = sum j * n_j
    int part_count() const;   // N(n) = sum n_j
};

enum class DiagramType { TypeI, TypeII };

/// Permutation rho of {1..n} reordering the canonical occupation-labelled
/// partition into an arbitrary partition of the same shape while preserving
/// block order and within-block chronology.
struct PulePermutation {
    int n = 0;
    std::vector<int> mapping;  // 1-based: mapping[i-1] = rho(i)
    OccupationSequence occupation;
};

inline constexpr int kDefaultEnumerationCap = 12;
inline constexpr int kExactIntegerCap = 25;       // Stirling/Bell via recurrence
inline constexpr int kClosedFormCap = 23;         // alternating-sum formula, 128-bit safe

/// All partitions of {1..n} in canonical (restricted-growth-string) order.
std::vector<SetPartition> enumerate_partitions(int n, int cap = kDefaultEnumerationCap);

/// Streaming variant; avoids materializing B_n partitions.
void for_each_partition(int n, const std::function<void(const SetPartition&)>& visit,
                        int cap = kDefaultEnumerationCap);

/// Stirling number of the second kind, exact for 0 <= m <= n <= 25.
std::uint64_t stirling2(int n, int m);

/// The alternating-sum closed form (1/m!) sum_l (-1)^(l+m) l^n C(m,l),
/// exact for n <= 23; kept separate so it can serve as an independent oracle.
std::uint64_t stirling2_closed_form(int n, int m);

/// Bell number B_n = sum_m S(n,m), exact for n <= 25.
std::uint64_t bell_number(int n);

OccupationSequence occupation_of(const SetPartition& p);

/// Canonical labelling: the (j,k,r) slot of the reference partition that lists
/// n_1 singletons first, then n_2 pairs, and so on. The stride per k-step is j,
/// so the map is a bijection onto {1..E}.
int canonical_labelling(const OccupationSequence& occ, int j, int k, int r);

/// All Pule permutations for the given occupation sequence, paired with the
/// partition each one describes (rho applied to the canonical labelling).
std::vector<PulePermutation> enumerate_pule_permutations(
    const OccupationSequence& occ, int cap = kDefaultEnumerationCap);

/// Reconstruct the partition described by rho composed with the canonical
/// labelling of rho.occupation.
SetPartition partition_from_pule(const PulePermutation& rho);

/// Multinomial count n! / (prod_j (j!)^{n_j} n_j!) of partitions with the
/// given shape, exact in 64-bit for the supported range.
std::uint64_t partition_shape_count(const OccupationSequence& occ);

/// TypeI iff every part is an interval of consecutive integers.
DiagramType classify_type(const SetPartition& p);

/// All occupation sequences with weight E = n (integer partitions of n).
std::vector<OccupationSequence> enumerate_occupations(int n);

/// Relabel a partition through a permutation sigma of {1..n} (1-based vector).
SetPartition relabel(const SetPartition& p, const std::vector<int>& sigma);

}  // namespace wcl
