#pragma once

#include <functional>
#include <vector>

#include "wcl/combinatorics.hpp"
#include "wcl/fock.hpp"
#include "wcl/types.hpp"

namespace wcl {

/// Word of emission/absorption/scattering/neutral vertices with an abstract
/// pairing <g|f> between test-function ids. Vertex n is leftmost, matching the
/// operator product convention of the vacuum-moment expansion.
struct VertexWord {
    std::vector<WordVertex> vertices;                     // index 0 = vertex 1
    std::function<Complex(int, int)> inner;               // (g_id, f_id) -> <g|f>

    int size() const { return static_cast<int>(vertices.size()); }
};

/// Which diagrams to keep in a partition-sum evaluation.
enum class DiagramFilter { All, TypeI, TypeII };

/// True when the partition's chain structure matches the word's vertex types:
/// each part of size >= 2 is an emission, scatterings, absorption chain and
/// every singleton sits on a neutral vertex.
bool diagram_admissible(const SetPartition& partition, const VertexWord& word);

/// Contribution of one admissible partition: the product of <g|f> links.
Complex diagram_weight(const SetPartition& partition, const VertexWord& word);

/// Vacuum moment by the sum over set partitions.
Complex vacuum_moment_partition(const VertexWord& word,
                                DiagramFilter filter = DiagramFilter::All,
                                int cap = kDefaultEnumerationCap);

/// Vacuum moment by the sum over occupation sequences and Pule permutations.
Complex vacuum_moment_pule(const VertexWord& word, int cap = kDefaultEnumerationCap);

/// Unfiltered partition sum (every partition contributes its link product):
/// equals the sum of vacuum_moment_partition over all 4^n vertex-type
/// assignments, which is the left-hand side summed over alpha, beta.
Complex partition_sum_all_types(const VertexWord& word, int cap = kDefaultEnumerationCap);

/// Admissible diagrams reconstructed independently by joining annihilator legs
/// to strictly earlier creator legs (the vertex-joining rules); used to
/// cross-check diagram_admissible.
std::vector<SetPartition> diagrams_by_leg_matching(const VertexWord& word);

struct PoissonMomentCheck {
    double stirling_sum = 0.0;      // sum_m S(n,m) lambda^m
    double derivative_value = 0.0;  // n-th moment from the characteristic function
    double relative_gap = 0.0;
};

/// n-th moment of Poisson(intensity) two ways: the Stirling expansion versus a
/// numerical n-th derivative of the characteristic function (Cauchy-circle
/// differentiation, stable at high order).
PoissonMomentCheck poisson_moment_check(double intensity, int order);

}  // namespace wcl
