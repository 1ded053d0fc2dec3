#include "wcl/combinatorics.hpp"

#include <algorithm>
#include <string>

#include "wcl/errors.hpp"

namespace wcl {

namespace {

using uint128 = unsigned __int128;

void check_enumeration_cap(int n, int cap) {
    if (n < 1)
        throw DomainError("partition enumeration requires n >= 1, got " + std::to_string(n));
    if (n > cap)
        throw CapacityError("partition enumeration of n = " + std::to_string(n) +
                            " exceeds the cap " + std::to_string(cap));
}

SetPartition partition_from_rgs(const std::vector<int>& rgs) {
    SetPartition p;
    p.n = static_cast<int>(rgs.size());
    int blocks = 0;
    for (int v : rgs) blocks = std::max(blocks, v + 1);
    p.parts.assign(blocks, {});
    for (int i = 0; i < p.n; ++i) p.parts[rgs[i]].push_back(i + 1);
    return p;
}

uint128 binomial128(int n, int k) {
    uint128 result = 1;
    for (int i = 1; i <= k; ++i) {
        result *= static_cast<uint128>(n - k + i);
        result /= static_cast<uint128>(i);
    }
    return result;
}

uint128 pow128(int base, int exp) {
    uint128 result = 1;
    for (int i = 0; i < exp; ++i) result *= static_cast<uint128>(base);
    return result;
}

uint128 factorial128(int n) {
    uint128 result = 1;
    for (int i = 2; i <= n; ++i) result *= static_cast<uint128>(i);
    return result;
}

}  // namespace

int OccupationSequence::weight() const {
    int e = 0;
    for (const auto& [j, nj] : counts) e += j * nj;
    return e;
}

int OccupationSequence::part_count() const {
    int n = 0;
    for (const auto& [j, nj] : counts) n += nj;
    return n;
}

void for_each_partition(int n, const std::function<void(const SetPartition&)>& visit, int cap) {
    check_enumeration_cap(n, cap);
    // Restricted growth strings in lexicographic order: a[0] = 0 and
    // a[i] <= 1 + max(a[0..i-1]). Block index = order of first appearance,
    // so parts come out sorted by minimal element.
    std::vector<int> rgs(n, 0);
    std::vector<int> prefix_max(n, 0);
    while (true) {
        visit(partition_from_rgs(rgs));
        int i = n - 1;
        while (i > 0 && rgs[i] == prefix_max[i - 1] + 1) --i;
        if (i == 0) break;
        ++rgs[i];
        prefix_max[i] = std::max(prefix_max[i - 1], rgs[i]);
        for (int k = i + 1; k < n; ++k) {
            rgs[k] = 0;
            prefix_max[k] = prefix_max[i];
        }
    }
}

std::vector<SetPartition> enumerate_partitions(int n, int cap) {
    std::vector<SetPartition> out;
    out.reserve(static_cast<std::size_t>(n <= 12 ? bell_number(n) : 0));
    for_each_partition(n, [&out](const SetPartition& p) { out.push_back(p); }, cap);
    return out;
}

std::uint64_t stirling2(int n, int m) {
    if (n < 0 || m < 0 || m > n || n > kExactIntegerCap)
        throw DomainError("stirling2 requires 0 <= m <= n <= " +
                          std::to_string(kExactIntegerCap));
    if (n == 0) return m == 0 ? 1 : 0;
    if (m == 0) return 0;
    // Triangle recurrence S(n,m) = m S(n-1,m) + S(n-1,m-1); intermediates stay
    // far below the 128-bit limit for n <= 25.
    std::vector<uint128> row(static_cast<std::size_t>(n) + 1, 0);
    row[0] = 1;  // S(0,0)
    for (int nn = 1; nn <= n; ++nn) {
        for (int mm = std::min(nn, m); mm >= 1; --mm)
            row[mm] = static_cast<uint128>(mm) * row[mm] + row[mm - 1];
        row[0] = 0;
    }
    return static_cast<std::uint64_t>(row[m]);
}

std::uint64_t stirling2_closed_form(int n, int m) {
    if (n < 0 || m < 0 || m > n || n > kClosedFormCap)
        throw DomainError("stirling2_closed_form requires 0 <= m <= n <= " +
                          std::to_string(kClosedFormCap));
    if (n == 0) return m == 0 ? 1 : 0;
    if (m == 0) return 0;
    __int128 sum = 0;
    for (int l = 1; l <= m; ++l) {
        const __int128 term =
            static_cast<__int128>(binomial128(m, l) * pow128(l, n));
        sum += ((l + m) % 2 == 0) ? term : -term;
    }
    sum /= static_cast<__int128>(factorial128(m));
    return static_cast<std::uint64_t>(sum);
}

std::uint64_t bell_number(int n) {
    if (n < 0 || n > kExactIntegerCap)
        throw DomainError("bell_number requires 0 <= n <= " +
                          std::to_string(kExactIntegerCap));
    std::uint64_t total = 0;
    for (int m = 0; m <= n; ++m) total += stirling2(n, m);
    return total;
}

OccupationSequence occupation_of(const SetPartition& p) {
    OccupationSequence occ;
    for (const auto& part : p.parts) ++occ.counts[static_cast<int>(part.size())];
    return occ;
}

int canonical_labelling(const OccupationSequence& occ, int j, int k, int r) {
    const auto it = occ.counts.find(j);
    if (it == occ.counts.end() || it->second == 0)
        throw DomainError("canonical_labelling: no parts of size " + std::to_string(j));
    if (k < 1 || k > it->second || r < 1 || r > j)
        throw DomainError("canonical_labelling: slot (j,k,r) out of range");
    int offset = 0;
    for (const auto& [l, nl] : occ.counts) {
        if (l >= j) break;
        offset += l * nl;
    }
    return offset + (k - 1) * j + r;
}

SetPartition partition_from_pule(const PulePermutation& rho) {
    SetPartition p;
    p.n = rho.n;
    for (const auto& [j, nj] : rho.occupation.counts) {
        for (int k = 1; k <= nj; ++k) {
            std::vector<int> part(static_cast<std::size_t>(j));
            for (int r = 1; r <= j; ++r)
                part[static_cast<std::size_t>(r - 1)] =
                    rho.mapping[static_cast<std::size_t>(
                                    canonical_labelling(rho.occupation, j, k, r)) -
                                1];
            p.parts.push_back(std::move(part));
        }
    }
    std::sort(p.parts.begin(), p.parts.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return p;
}

std::vector<PulePermutation> enumerate_pule_permutations(const OccupationSequence& occ,
                                                         int cap) {
    const int n = occ.weight();
    check_enumeration_cap(n, cap);
    std::vector<PulePermutation> out;
    // A Pule permutation is exactly a partition with this occupation sequence:
    // list the size-j parts by minimal element as k = 1..n_j and send the slot
    // (j,k,r) to the r-th element. Both ordering conditions hold by
    // construction and the map is onto.
    for_each_partition(n, [&](const SetPartition& p) {
        const OccupationSequence this_occ = occupation_of(p);
        if (this_occ.counts != occ.counts) return;
        PulePermutation rho;
        rho.n = n;
        rho.occupation = occ;
        rho.mapping.assign(static_cast<std::size_t>(n), 0);
        std::map<int, std::vector<const std::vector<int>*>> by_size;
        for (const auto& part : p.parts)
            by_size[static_cast<int>(part.size())].push_back(&part);
        for (auto& [j, parts] : by_size) {
            std::sort(parts.begin(), parts.end(),
                      [](const auto* a, const auto* b) { return a->front() < b->front(); });
            for (int k = 1; k <= static_cast<int>(parts.size()); ++k)
                for (int r = 1; r <= j; ++r)
                    rho.mapping[static_cast<std::size_t>(
                                    canonical_labelling(occ, j, k, r)) -
                                1] = (*parts[static_cast<std::size_t>(k - 1)])
                        [static_cast<std::size_t>(r - 1)];
        }
        out.push_back(std::move(rho));
    }, cap);
    return out;
}

std::uint64_t partition_shape_count(const OccupationSequence& occ) {
    const int n = occ.weight();
    if (n > 20) throw DomainError("partition_shape_count supports weight <= 20");
    uint128 numerator = factorial128(n);
    uint128 denominator = 1;
    for (const auto& [j, nj] : occ.counts) {
        for (int k = 0; k < nj; ++k) denominator *= factorial128(j);
        denominator *= factorial128(nj);
    }
    return static_cast<std::uint64_t>(numerator / denominator);
}

DiagramType classify_type(const SetPartition& p) {
    for (const auto& part : p.parts)
        if (part.back() - part.front() + 1 != static_cast<int>(part.size()))
            return DiagramType::TypeII;
    return DiagramType::TypeI;
}

std::vector<OccupationSequence> enumerate_occupations(int n) {
    std::vector<OccupationSequence> out;
    OccupationSequence current;
    // Integer partitions of n with parts listed largest-first.
    std::function<void(int, int)> recurse = [&](int remaining, int max_part) {
        if (remaining == 0) {
            out.push_back(current);
            return;
        }
        for (int j = std::min(remaining, max_part); j >= 1; --j) {
            ++current.counts[j];
            recurse(remaining - j, j);
            if (--current.counts[j] == 0) current.counts.erase(j);
        }
    };
    recurse(n, n);
    return out;
}

SetPartition relabel(const SetPartition& p, const std::vector<int>& sigma) {
    if (static_cast<int>(sigma.size()) != p.n)
        throw DomainError("relabel: permutation size does not match partition");
    SetPartition out;
    out.n = p.n;
    for (const auto& part : p.parts) {
        std::vector<int> mapped;
        mapped.reserve(part.size());
        for (int x : part) mapped.push_back(sigma[static_cast<std::size_t>(x - 1)]);
        std::sort(mapped.begin(), mapped.end());
        out.parts.push_back(std::move(mapped));
    }
    std::sort(out.parts.begin(), out.parts.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return out;
}

}  // namespace wcl
