#pragma once

// Invariant factors by determinant divisors, independent of the Hermite/Smith
// code. Small presentations only.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

namespace treeforms::minors {

using Small = std::vector<std::vector<std::int64_t>>;

// Leibniz expansion; fine for k <= 6 with single-digit entries.
inline std::int64_t det_leibniz(const Small& a) {
    const std::size_t k = a.size();
    std::vector<std::size_t> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    std::int64_t total = 0;
    do {
        std::int64_t term = 1;
        for (std::size_t i = 0; i < k && term != 0; ++i) term *= a[i][perm[i]];
        if (term == 0) continue;
        int inversions = 0;
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i + 1; j < k; ++j)
                if (perm[i] > perm[j]) ++inversions;
        total += (inversions % 2) ? -term : term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

inline void subsets(std::size_t n, std::size_t k, std::size_t start, std::vector<std::size_t>& cur,
                    std::vector<std::vector<std::size_t>>& out) {
    if (cur.size() == k) {
        out.push_back(cur);
        return;
    }
    for (std::size_t i = start; i < n; ++i) {
        cur.push_back(i);
        subsets(n, k, i + 1, cur, out);
        cur.pop_back();
    }
}

// Determinant divisors: D_k = gcd of all k x k minors; d_k = D_k / D_{k-1}.
// Returns the nonzero invariant factors (including ones).
inline std::vector<std::int64_t> invariant_factors_by_minors(const Small& a) {
    const std::size_t r = a.size(), c = r ? a[0].size() : 0;
    std::vector<std::int64_t> divisors{1};
    for (std::size_t k = 1; k <= std::min(r, c); ++k) {
        std::vector<std::vector<std::size_t>> rs, cs;
        std::vector<std::size_t> cur;
        subsets(r, k, 0, cur, rs);
        subsets(c, k, 0, cur, cs);
        std::int64_t g = 0;
        for (const auto& ri : rs)
            for (const auto& ci : cs) {
                Small m(k, std::vector<std::int64_t>(k));
                for (std::size_t i = 0; i < k; ++i)
                    for (std::size_t j = 0; j < k; ++j) m[i][j] = a[ri[i]][ci[j]];
                g = std::gcd(g, det_leibniz(m));
            }
        if (g == 0) break;
        divisors.push_back(g);
    }
    std::vector<std::int64_t> out;
    for (std::size_t k = 1; k < divisors.size(); ++k) out.push_back(divisors[k] / divisors[k - 1]);
    return out;
}

// Rank and torsion (factors > 1) of Z^g / rowspace(a).
struct GroupShape {
    std::size_t rank = 0;
    std::vector<std::int64_t> torsion;
    friend bool operator==(const GroupShape&, const GroupShape&) = default;
};

inline GroupShape shape_by_minors(const Small& relations, std::size_t generators) {
    GroupShape s;
    auto d = relations.empty() ? std::vector<std::int64_t>{} : invariant_factors_by_minors(relations);
    s.rank = generators - d.size();
    for (auto x : d)
        if (x > 1) s.torsion.push_back(x);
    return s;
}

}  // namespace treeforms::minors
