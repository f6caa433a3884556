#include "treeforms/errors.hpp"
#include "treeforms/matrix.hpp"

#include "oracles.hpp"

#include <doctest.h>

using namespace treeforms;

namespace {

IntMatrix from_small(const oracle::Small& a, std::size_t cols) {
    return IntMatrix::from_rows(oracle::to_vectors(a), cols);
}

}  // namespace

TEST_CASE("smith normal form examples") {
    auto z = smith_normal_form(IntMatrix(2, 3));
    CHECK(z.s.is_zero());
    CHECK(z.u == IntMatrix::identity(2));
    CHECK(z.v == IntMatrix::identity(3));

    IntMatrix a{{2, 0}, {0, 3}};
    auto d = smith_normal_form(a);
    CHECK(d.invariant_factors() == std::vector<Integer>{1, 6});
    CHECK(d.verify(a));

    auto one = smith_normal_form(IntMatrix{{-7}});
    CHECK(one.s == IntMatrix{{7}});
    CHECK(smith_normal_form(IntMatrix{{5}}).s == IntMatrix{{5}});
}

TEST_CASE("smith normal form agrees with determinant divisors") {
    std::mt19937_64 rng(20261015);
    int cases = 0;
    for (; cases < 1200; ++cases) {
        std::size_t r = 1 + rng() % 6, c = 1 + rng() % 6;
        auto small = oracle::random_small(rng, r, c, 9, static_cast<int>(rng() % 7));
        // Occasionally force rank deficiency.
        if (r > 2 && rng() % 4 == 0)
            for (std::size_t j = 0; j < c; ++j) small[r - 1][j] = small[0][j] * 2 - small[1][j];
        IntMatrix a = from_small(small, c);
        auto d = smith_normal_form(a);
        REQUIRE(d.verify(a));
        auto expected = oracle::invariant_factors_by_minors(small);
        std::vector<Integer> got = d.invariant_factors();
        REQUIRE(got.size() == expected.size());
        for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == expected[i]);
    }
    CHECK(cases >= 1000);
}

TEST_CASE("smith normal form is deterministic") {
    IntMatrix a{{4, 6, 2}, {2, 8, -4}, {6, 2, 10}};
    auto x = smith_normal_form(a), y = smith_normal_form(a);
    CHECK(x.u == y.u);
    CHECK(x.v == y.v);
    CHECK(x.s == y.s);
}

TEST_CASE("hermite rows and lattice membership") {
    std::vector<Vector> rows{{2, 4, 6}, {1, 1, 1}, {3, 5, 7}};
    auto e = hermite_rows(rows, 3, true);
    CHECK(e.rank() == 2);
    CHECK(e.pivots == std::vector<std::size_t>{0, 1});
    CHECK(e.basis[0][0] > 0);
    // transform * A = [basis; 0]
    IntMatrix t = IntMatrix::from_rows(e.transform, 3);
    IntMatrix prod = t * IntMatrix::from_rows(rows, 3);
    for (std::size_t i = 0; i < 2; ++i) CHECK(prod.row(i) == e.basis[i]);
    CHECK(is_zero(prod.row(2)));
    CHECK(determinant(t) * determinant(t) == 1);

    Vector y;
    CHECK(solve_in_lattice(e, Vector{5, 9, 13}, y));
    CHECK(y * IntMatrix::from_rows(e.basis, 3) == Vector{5, 9, 13});
    CHECK_FALSE(solve_in_lattice(e, Vector{1, 0, 0}, y));

    std::mt19937_64 rng(3);
    for (int k = 0; k < 200; ++k) {
        std::size_t r = 1 + rng() % 7, c = 1 + rng() % 5;
        auto a = oracle::to_vectors(oracle::random_small(rng, r, c, 5, 4));
        auto ech = hermite_rows(a, c);
        for (const auto& row : a) CHECK(solve_in_lattice(ech, row, y));
        for (std::size_t i = 0; i < ech.rank(); ++i) {
            CHECK(ech.basis[i][ech.pivots[i]] > 0);
            for (std::size_t j = 0; j < i; ++j) {
                CHECK(ech.basis[j][ech.pivots[i]] >= 0);
                CHECK(ech.basis[j][ech.pivots[i]] < ech.basis[i][ech.pivots[i]]);
            }
        }
    }
}

TEST_CASE("left kernel") {
    IntMatrix a{{1, 2}, {2, 4}, {0, 1}};
    auto k = left_kernel(a);
    REQUIRE(k.size() == 1);
    CHECK(is_zero(k[0] * a));
    CHECK(k[0] == Vector{2, -1, 0});
}

TEST_CASE("determinant") {
    CHECK(determinant(IntMatrix{{2, 0}, {0, 3}}) == 6);
    CHECK(determinant(IntMatrix{{0, 1}, {1, 0}}) == -1);
    CHECK(determinant(IntMatrix{{1, 2}, {2, 4}}) == 0);
    std::mt19937_64 rng(9);
    for (int k = 0; k < 100; ++k) {
        std::size_t n = 1 + rng() % 5;
        auto small = oracle::random_small(rng, n, n, 9);
        CHECK(determinant(from_small(small, n)) == oracle::det_leibniz(small));
    }
}

TEST_CASE("resource caps") {
    MatrixLimits tight;
    tight.max_cols = 3;
    CHECK_THROWS_AS(hermite_rows({{1, 2, 3, 4}}, 4, false, tight), ResourceLimit);
    CHECK_THROWS_AS(smith_normal_form(IntMatrix(4, 4), tight), ResourceLimit);
    CHECK_THROWS_AS(IntMatrix::from_rows({{1, 2}}, 3), InvalidInput);
}
