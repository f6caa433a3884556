#include "treeforms/errors.hpp"
#include "treeforms/lattice.hpp"
#include "treeforms/suites.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>
#include <optional>
#include <random>

using namespace treeforms;
using namespace treeforms::gen;

namespace {

Vector V(std::initializer_list<long long> xs) { return Vector(xs.begin(), xs.end()); }

oracle::Small to_small(const SymIntForm& f) {
    oracle::Small a(f.rank(), std::vector<std::int64_t>(f.rank()));
    for (std::size_t i = 0; i < f.rank(); ++i)
        for (std::size_t j = 0; j < f.rank(); ++j) a[i][j] = static_cast<std::int64_t>(f.matrix()(i, j));
    return a;
}

// Jacobi: with all leading principal minors nonzero, the number of negative
// eigenvalues is the number of sign changes in 1, D1, ..., Dn.
std::optional<int> signature_by_minors(const oracle::Small& a) {
    const std::size_t n = a.size();
    int changes = 0;
    std::int64_t prev = 1;
    for (std::size_t k = 1; k <= n; ++k) {
        oracle::Small m(k, std::vector<std::int64_t>(k));
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) m[i][j] = a[i][j];
        std::int64_t d = oracle::det_leibniz(m);
        if (d == 0) return std::nullopt;
        if ((d < 0) != (prev < 0)) ++changes;
        prev = d;
    }
    return static_cast<int>(n) - 2 * changes;
}

/// Floating-point Gauss sum, used only to read off the phase.
int brown_by_phase(const Z4Refinement& r) {
    std::complex<double> s = 0;
    const std::complex<double> i(0, 1);
    for (unsigned x = 0; x < (1u << r.dim()); ++x) {
        std::vector<int> v(r.dim());
        for (std::size_t k = 0; k < r.dim(); ++k) v[k] = (x >> k) & 1;
        s += std::pow(i, r.value(v));
    }
    double beta = std::arg(s) / (M_PI / 4);
    return static_cast<int>(std::lround(beta) % 8 + 8) % 8;
}

Cyclotomic8 multiply(const Cyclotomic8& a, const Cyclotomic8& b) {
    Cyclotomic8 out{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            if (i + j < 4) out[i + j] += a[i] * b[j];
            else out[i + j - 4] -= a[i] * b[j];
        }
    return out;
}

}  // namespace

TEST_CASE("signature") {
    CHECK(signature(SymIntForm::diagonal({1, -1})) == 0);
    CHECK(signature(SymIntForm::diagonal({1, 1, 1})) == 3);
    CHECK(signature(SymIntForm::hyperbolic()) == 0);
    auto e8 = SymIntForm::E8();
    CHECK(signature(e8) == 8);
    CHECK(e8.determinant() == 1);
    CHECK(e8.even());
    CHECK(signature_by_minors(to_small(e8)) == 8);
    CHECK_THROWS_AS(signature(SymIntForm::diagonal({1, 0})), InvalidInput);
    CHECK(signature(SymIntForm(IntMatrix{{0, 1, 0}, {1, 0, 0}, {0, 0, -1}})) == -1);

    std::mt19937_64 rng(17);
    int compared = 0;
    for (int trial = 0; trial < 400; ++trial) {
        const std::size_t n = 1 + rng() % 5;
        oracle::Small a(n, std::vector<std::int64_t>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) a[i][j] = a[j][i] = static_cast<std::int64_t>(rng() % 7) - 3;
        auto expected = signature_by_minors(a);
        if (!expected) continue;
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m(i, j) = a[i][j];
        CHECK(signature(SymIntForm(m)) == *expected);
        // A congruent copy has the same signature.
        IntMatrix u = IntMatrix::identity(n);
        if (n > 1) u(0, n - 1) = 2;
        CHECK(signature(SymIntForm(u.transpose() * m * u)) == *expected);
        ++compared;
    }
    CHECK(compared > 200);
}

TEST_CASE("named forms and JSON") {
    CHECK(named_form("E8").matrix() == SymIntForm::E8().matrix());
    CHECK(named_form("diag(1, -1, 1)").matrix() == SymIntForm::diagonal({1, -1, 1}).matrix());
    CHECK(named_form("H").matrix() == IntMatrix{{0, 1}, {1, 0}});
    CHECK_THROWS_AS(named_form("diag(1,x)"), InvalidInput);
    CHECK_THROWS_AS(named_form("E7"), InvalidInput);
    auto f = sym_form_from_json(nlohmann::json::parse(R"({"matrix": [[2, 1], [1, 1]]})"));
    CHECK(f.unimodular());
    CHECK_THROWS_AS(sym_form_from_json(nlohmann::json::parse(R"({"matrix": [[2, 1], [0, 1]]})")), InvalidInput);
    CHECK_THROWS_AS(sym_form_from_json(nlohmann::json::parse(R"({"matrix": [[2, 1]]})")), InvalidInput);
    CHECK_THROWS_AS(SymIntForm(IntMatrix(2, 3)), InvalidInput);
}

TEST_CASE("characteristic vectors") {
    auto one = SymIntForm::diagonal({1});
    CHECK(is_characteristic(one, V({1})));
    CHECK_FALSE(is_characteristic(one, V({0})));
    CHECK(is_characteristic(SymIntForm::E8(), zero_vector(8)));
    CHECK(is_characteristic(SymIntForm::diagonal({1, -1}), V({1, 1})));
    CHECK(find_characteristic(SymIntForm::E8()) == zero_vector(8));
    CHECK(find_characteristic(SymIntForm::diagonal({1, -1})) == V({1, 1}));
    CHECK_THROWS_AS(find_characteristic(SymIntForm::diagonal({2})), InvalidInput);

    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 40; ++trial) {
        auto f = random_unimodular(rng);
        auto c = find_characteristic(f);
        CHECK(is_characteristic(f, c));
        for (const auto& x : c) CHECK((x == 0 || x == 1));
    }
}

TEST_CASE("tau and ks") {
    CHECK(tau(SymIntForm::diagonal({1}), V({1})) == 0);
    CHECK(tau(SymIntForm::E8(), zero_vector(8)) == 1);
    CHECK(ks(SymIntForm::E8(), zero_vector(8), 0) == 1);
    CHECK(tau(SymIntForm::diagonal({1, -1}), V({1, 1})) == 0);
    CHECK(ks(SymIntForm::diagonal({1}), V({1}), 0) == 0);
    CHECK(tau(SymIntForm::diagonal({1}), V({3})) == 1);
    CHECK_THROWS_AS(tau(SymIntForm::diagonal({1}), V({0})), InvalidInput);
    CHECK_THROWS_AS(tau(SymIntForm::diagonal({3}), V({1})), InvalidInput);
}

TEST_CASE("eight divides lambda(c,c) - signature on random unimodular forms") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 60; ++trial) {
        auto f = random_unimodular(rng);
        auto c = find_characteristic(f);
        for (int k = 0; k < 5; ++k) {
            Vector x(f.rank());
            for (auto& e : x) e = static_cast<long long>(rng() % 5) - 2;
            CHECK_NOTHROW(tau(f, c + 2 * x));
        }
    }
}

TEST_CASE("torsor relation, exhaustively on diagonal forms") {
    std::size_t checks = 0;
    CHECK(torsor_check(SymIntForm::diagonal({1}), V({1}), V({0})).ok());
    auto r = torsor_check(SymIntForm::diagonal({1}), V({1}), V({1}));
    CHECK(r.lhs == 1);
    CHECK(r.rhs == 1);
    for (const auto& f : diagonal_pm1_forms(4)) {
        auto c0 = find_characteristic(f);
        for (const auto& x : integer_box(f.rank(), 2)) {
            auto rep = torsor_check(f, c0, x);
            CHECK(rep.ok());
            ++checks;
        }
    }
    CHECK(checks > 10000);
}

TEST_CASE("ks is constant along a consistent torsor orbit") {
    for (const auto& f : diagonal_pm1_forms(3)) {
        auto c0 = find_characteristic(f);
        for (int t0 = 0; t0 <= 1; ++t0) {
            const int expected = ks(f, c0, t0);
            for (const auto& x : integer_box(f.rank(), 2)) {
                Integer step = (f(c0, x) + f(x, x)) / 2;
                int tx = static_cast<int>(mod_floor(t0 + step, 2));
                CHECK(ks(f, c0 + 2 * x, tx) == expected);
            }
        }
    }
}

TEST_CASE("parity and refinements over Z2") {
    Z2Matrix h{{0, 1}, {1, 0}};
    CHECK(parity(h) == Parity::even);
    CHECK(has_z2_refinement(h));
    CHECK(parity(Z2Matrix{{1}}) == Parity::odd);
    CHECK_FALSE(has_z2_refinement(Z2Matrix{{1}}));
    CHECK(parity(Z2Matrix{{1, 0}, {0, 1}}) == Parity::odd);
    CHECK_THROWS_AS(parity(Z2Matrix{{0}}), InvalidInput);
    CHECK_THROWS_AS(parity(Z2Matrix{{0, 1}, {0, 0}}), InvalidInput);
    // [1] has Z4 refinements with mu(1) = 1 or 3.
    CHECK(brown_z8(Z4Refinement{{{1}}, {1}}) == 1);
    CHECK(brown_z8(Z4Refinement{{{1}}, {3}}) == 7);
    CHECK_THROWS_AS(brown_z8(Z4Refinement{{{1}}, {2}}), InvalidInput);
}

TEST_CASE("Arf invariant: symplectic formula against the democratic count") {
    CHECK(arf_z2(Z2QuadraticSpace::hyperbolic(1, {0, 0})) == 0);
    CHECK(arf_z2(Z2QuadraticSpace::hyperbolic(1, {1, 1})) == 1);
    CHECK(arf_democratic(Z2QuadraticSpace::hyperbolic(1, {1, 1})) == 1);
    CHECK_THROWS_AS(arf_z2(Z2QuadraticSpace{{{1}}, {1}}), InvalidInput);
    CHECK_THROWS_AS(arf_z2(Z2QuadraticSpace{{{0, 0}, {0, 0}}, {0, 0}}), InvalidInput);

    std::size_t spaces = 0;
    for (std::size_t d : {2, 4}) {
        for (const auto& form : nonsingular_z2_forms(d)) {
            if (parity(form) != Parity::even) continue;
            for (const auto& q : all_assignments(d, 2)) {
                Z2QuadraticSpace v{form, q};
                CHECK(arf_z2(v) == arf_democratic(v));
                ++spaces;
            }
        }
    }
    CHECK(spaces > 16);
}

TEST_CASE("Arf invariant is invariant under change of basis") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t copies = 1 + rng() % 3, d = 2 * copies;
        std::vector<int> q(d);
        for (auto& x : q) x = static_cast<int>(rng() % 2);
        auto v = Z2QuadraticSpace::hyperbolic(copies, q);
        // Random invertible P via elementary row operations; new basis f_i = row i of P.
        std::vector<std::vector<int>> p(d, std::vector<int>(d, 0));
        for (std::size_t i = 0; i < d; ++i) p[i][i] = 1;
        for (int s = 0; s < 12; ++s) {
            std::size_t i = rng() % d, j = rng() % d;
            if (i == j) continue;
            for (std::size_t k = 0; k < d; ++k) p[i][k] ^= p[j][k];
        }
        Z2QuadraticSpace w;
        w.form.assign(d, std::vector<int>(d, 0));
        for (std::size_t i = 0; i < d; ++i) {
            w.q.push_back(v.value(p[i]));
            for (std::size_t j = 0; j < d; ++j) {
                int s = 0;
                for (std::size_t a = 0; a < d; ++a)
                    for (std::size_t b = 0; b < d; ++b) s ^= p[i][a] & v.form[a][b] & p[j][b];
                w.form[i][j] = s;
            }
        }
        CHECK(arf_z2(w) == arf_z2(v));
    }
}

TEST_CASE("Brown invariant") {
    Z4Refinement one{{{1}}, {1}};
    CHECK(brown_z8(one) == 1);
    CHECK(gauss_sum(one) == Cyclotomic8{1, 0, 1, 0});
    CHECK(brown_z8(orthogonal_sum(one, one)) == 2);

    // Every refinement of dimension <= 2, and sums of pairs of them.
    std::vector<Z4Refinement> small;
    for (std::size_t d = 1; d <= 2; ++d)
        for (const auto& form : nonsingular_z2_forms(d))
            for (const auto& mu : all_assignments(d, 4)) {
                bool ok = true;
                for (std::size_t i = 0; i < d; ++i) ok = ok && mu[i] % 2 == form[i][i];
                if (ok) small.push_back(Z4Refinement{form, mu});
            }
    std::mt19937_64 rng(1);
    for (const auto& a : small) {
        CHECK(brown_z8(a) == brown_by_phase(a));
        CHECK(validate_form(to_form_data(a), rng, 4).ok());
        for (const auto& b : small) {
            auto s = orthogonal_sum(a, b);
            CHECK(brown_z8(s) == (brown_z8(a) + brown_z8(b)) % 8);
            CHECK(gauss_sum(s) == multiply(gauss_sum(a), gauss_sum(b)));
        }
    }

    // Z2-valued refinements of even forms embed by doubling.
    for (std::size_t d : {2, 4})
        for (const auto& form : nonsingular_z2_forms(d)) {
            if (parity(form) != Parity::even) continue;
            for (const auto& q : all_assignments(d, 2)) {
                Z2QuadraticSpace v{form, q};
                CHECK(brown_z8(Z4Refinement::doubled(v)) == 4 * arf_z2(v));
            }
        }
}

TEST_CASE("Z4 refinements of all forms up to dimension 3 are valid quadratic forms") {
    std::mt19937_64 rng(2);
    for (std::size_t d = 1; d <= 3; ++d)
        for (const auto& form : nonsingular_z2_forms(d))
            for (const auto& mu : all_assignments(d, 4)) {
                bool ok = true;
                for (std::size_t i = 0; i < d; ++i) ok = ok && mu[i] % 2 == form[i][i];
                if (!ok) continue;
                Z4Refinement r{form, mu};
                CHECK(validate_form(to_form_data(r), rng, 3).ok());
                CHECK(brown_z8(r) == brown_by_phase(r));
            }
}
