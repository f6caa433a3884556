#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library's linear algebra.

#include "treeforms/integer.hpp"
#include "treeforms/minors.hpp"

#include <random>
#include <vector>

namespace oracle {

using namespace treeforms::minors;

inline Small random_small(std::mt19937_64& rng, std::size_t rows, std::size_t cols, int bound, int zero_bias = 0) {
    Small a(rows, std::vector<std::int64_t>(cols));
    for (auto& row : a)
        for (auto& x : row) {
            if (zero_bias && static_cast<int>(rng() % 10) < zero_bias) continue;
            x = static_cast<std::int64_t>(rng() % (2 * bound + 1)) - bound;
        }
    return a;
}

inline std::vector<treeforms::Vector> to_vectors(const Small& a) {
    std::vector<treeforms::Vector> out;
    for (const auto& row : a) out.emplace_back(row.begin(), row.end());
    return out;
}

}  // namespace oracle
