#include "wcl/moments.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wcl/errors.hpp"

namespace wcl {

bool diagram_admissible(const SetPartition& partition, const VertexWord& word) {
    for (const auto& part : partition.parts) {
        const std::size_t k = part.size();
        for (std::size_t r = 0; r < k; ++r) {
            const WordVertex& v = word.vertices[static_cast<std::size_t>(part[r] - 1)];
            const int want_alpha = (k >= 2 && r + 1 < k) ? 1 : 0;  // creator unless last
            const int want_beta = (k >= 2 && r > 0) ? 1 : 0;       // annihilator unless first
            if (v.alpha != want_alpha || v.beta != want_beta) return false;
        }
    }
    return true;
}

Complex diagram_weight(const SetPartition& partition, const VertexWord& word) {
    Complex weight{1.0, 0.0};
    for (const auto& part : partition.parts) {
        for (std::size_t r = 0; r + 1 < part.size(); ++r) {
            const WordVertex& cre = word.vertices[static_cast<std::size_t>(part[r] - 1)];
            const WordVertex& ann = word.vertices[static_cast<std::size_t>(part[r + 1] - 1)];
            weight *= word.inner(ann.g_id, cre.f_id);
        }
    }
    return weight;
}

Complex vacuum_moment_partition(const VertexWord& word, DiagramFilter filter, int cap) {
    if (word.size() == 0) return {1.0, 0.0};
    Complex total{0.0, 0.0};
    for_each_partition(word.size(), [&](const SetPartition& p) {
        if (!diagram_admissible(p, word)) return;
        if (filter != DiagramFilter::All) {
            const DiagramType type = classify_type(p);
            if (filter == DiagramFilter::TypeI && type != DiagramType::TypeI) return;
            if (filter == DiagramFilter::TypeII && type != DiagramType::TypeII) return;
        }
        total += diagram_weight(p, word);
    }, cap);
    return total;
}

Complex vacuum_moment_pule(const VertexWord& word, int cap) {
    const int n = word.size();
    if (n == 0) return {1.0, 0.0};
    Complex total{0.0, 0.0};
    for (const OccupationSequence& occ : enumerate_occupations(n)) {
        for (const PulePermutation& rho : enumerate_pule_permutations(occ, cap)) {
            const SetPartition p = partition_from_pule(rho);
            if (!diagram_admissible(p, word)) continue;
            Complex weight{1.0, 0.0};
            for (const auto& [j, nj] : occ.counts) {
                if (j < 2) continue;
                for (int k = 1; k <= nj; ++k)
                    for (int r = 1; r <= j - 1; ++r) {
                        const int ann =
                            rho.mapping[static_cast<std::size_t>(
                                            canonical_labelling(occ, j, k, r + 1)) -
                                        1];
                        const int cre =
                            rho.mapping[static_cast<std::size_t>(
                                            canonical_labelling(occ, j, k, r)) -
                                        1];
                        weight *= word.inner(
                            word.vertices[static_cast<std::size_t>(ann - 1)].g_id,
                            word.vertices[static_cast<std::size_t>(cre - 1)].f_id);
                    }
            }
            total += weight;
        }
    }
    return total;
}

Complex partition_sum_all_types(const VertexWord& word, int cap) {
    if (word.size() == 0) return {1.0, 0.0};
    Complex total{0.0, 0.0};
    for_each_partition(word.size(), [&](const SetPartition& p) {
        total += diagram_weight(p, word);
    }, cap);
    return total;
}

namespace {

void match_legs(const VertexWord& word, std::size_t next_ann,
                const std::vector<std::size_t>& ann_legs,
                const std::vector<std::size_t>& cre_legs, std::vector<int>& partner,
                std::vector<bool>& used, std::vector<SetPartition>& out) {
    if (next_ann == ann_legs.size()) {
        // Chains: follow creator -> its annihilator's vertex, which may carry
        // the next creator of the same chain.
        const int n = word.size();
        std::vector<int> chain_next(static_cast<std::size_t>(n), -1);
        for (std::size_t a = 0; a < ann_legs.size(); ++a)
            chain_next[static_cast<std::size_t>(partner[a])] =
                static_cast<int>(ann_legs[a]);
        SetPartition p;
        p.n = n;
        std::vector<bool> seen(static_cast<std::size_t>(n), false);
        for (int v = 0; v < n; ++v) {
            if (seen[static_cast<std::size_t>(v)]) continue;
            const WordVertex& wv = word.vertices[static_cast<std::size_t>(v)];
            if (wv.beta == 1) continue;  // not a chain head
            std::vector<int> part;
            int cur = v;
            while (cur >= 0 && !seen[static_cast<std::size_t>(cur)]) {
                seen[static_cast<std::size_t>(cur)] = true;
                part.push_back(cur + 1);
                cur = word.vertices[static_cast<std::size_t>(cur)].alpha == 1
                          ? chain_next[static_cast<std::size_t>(cur)]
                          : -1;
            }
            p.parts.push_back(std::move(part));
        }
        std::sort(p.parts.begin(), p.parts.end(),
                  [](const auto& a, const auto& b) { return a.front() < b.front(); });
        out.push_back(std::move(p));
        return;
    }
    const std::size_t ann_vertex = ann_legs[next_ann];
    for (std::size_t c = 0; c < cre_legs.size(); ++c) {
        if (used[c] || cre_legs[c] >= ann_vertex) continue;  // creator strictly earlier
        used[c] = true;
        partner[next_ann] = static_cast<int>(cre_legs[c]);
        match_legs(word, next_ann + 1, ann_legs, cre_legs, partner, used, out);
        used[c] = false;
    }
}

}  // namespace

std::vector<SetPartition> diagrams_by_leg_matching(const VertexWord& word) {
    std::vector<std::size_t> ann_legs, cre_legs;
    for (std::size_t i = 0; i < word.vertices.size(); ++i) {
        if (word.vertices[i].beta == 1) ann_legs.push_back(i);
        if (word.vertices[i].alpha == 1) cre_legs.push_back(i);
    }
    std::vector<SetPartition> out;
    if (ann_legs.size() != cre_legs.size()) return out;  // number conservation
    std::vector<int> partner(ann_legs.size(), -1);
    std::vector<bool> used(cre_legs.size(), false);
    match_legs(word, 0, ann_legs, cre_legs, partner, used, out);
    return out;
}

PoissonMomentCheck poisson_moment_check(double intensity, int order) {
    if (intensity <= 0.0) throw DomainError("poisson_moment_check requires intensity > 0");
    if (order < 0 || order > 20)
        throw DomainError("poisson_moment_check supports orders 0..20");
    PoissonMomentCheck result;
    for (int m = 0; m <= order; ++m)
        result.stirling_sum +=
            static_cast<double>(stirling2(order, m)) * std::pow(intensity, m);

    // E[X^n] = phi^(n)(0) / i^n with phi(u) = exp{lambda (e^{iu} - 1)}; the
    // derivative is taken by the Cauchy integral over a circle of radius r,
    // the only stable way to differentiate 20 times numerically.
    const int samples = 512;
    const double radius = 1.0;
    Complex sum{0.0, 0.0};
    for (int k = 0; k < samples; ++k) {
        const double theta = 2.0 * M_PI * k / samples;
        const Complex z = radius * std::exp(I * theta);
        const Complex phi = std::exp(intensity * (std::exp(I * z) - 1.0));
        sum += phi * std::exp(-I * static_cast<double>(order) * theta);
    }
    double factorial = 1.0;
    for (int k = 2; k <= order; ++k) factorial *= k;
    const Complex derivative =
        factorial * sum / (static_cast<double>(samples) * std::pow(radius, order));
    result.derivative_value = (derivative / std::pow(I, order)).real();
    result.relative_gap = std::abs(result.derivative_value - result.stirling_sum) /
                          std::max(1.0, std::abs(result.stirling_sum));
    return result;
}

}  // namespace wcl
