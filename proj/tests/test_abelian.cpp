#include "treeforms/abelian.hpp"
#include "treeforms/errors.hpp"

#include "oracles.hpp"

#include <doctest.h>

using namespace treeforms;

namespace {

GroupPtr G(std::size_t g, std::vector<Vector> rels = {}) { return make_group(g, std::move(rels)); }

oracle::GroupShape shape(const FPAbelianGroup& g) {
    oracle::GroupShape s;
    s.rank = g.rank();
    for (const auto& d : g.torsion()) s.torsion.push_back(static_cast<std::int64_t>(d));
    return s;
}

}  // namespace

TEST_CASE("presentations") {
    auto z2 = G(2);
    CHECK(z2->rank() == 2);
    CHECK(z2->torsion().empty());
    CHECK(z2->describe() == "Z^2");

    auto c2 = G(1, {{2}});
    CHECK(c2->rank() == 0);
    CHECK(c2->torsion() == std::vector<Integer>{2});
    CHECK(c2->describe() == "Z2");

    auto g = G(2, {{2, 0}, {0, 2}, {1, 1}});
    CHECK(shape(*g) == oracle::shape_by_minors({{2, 0}, {0, 2}, {1, 1}}, 2));
    CHECK(g->describe() == "Z2");

    CHECK(G(3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}})->describe() == "0");
    CHECK_THROWS_AS(G(2, {{1, 2, 3}}), InvalidInput);
    CHECK_THROWS_AS(make_group(2, {}, {"a", "a"}), InvalidInput);
    auto named = make_group(2, {}, {"x", "y"});
    CHECK(named->index_of("y") == 1u);
    CHECK_FALSE(named->index_of("z").has_value());
}

TEST_CASE("presentations agree with determinant divisors") {
    std::mt19937_64 rng(77);
    for (int k = 0; k < 300; ++k) {
        std::size_t g = 1 + rng() % 5, r = rng() % 7;
        auto rels = oracle::random_small(rng, r, g, 6, 5);
        auto grp = G(g, oracle::to_vectors(rels));
        CHECK(shape(*grp) == oracle::shape_by_minors(rels, g));
    }
}

TEST_CASE("element normal forms") {
    auto c2 = G(1, {{2}});
    CHECK(c2->element_nf({3}).torsion == std::vector<Integer>{1});
    CHECK(c2->element_nf({-3}).torsion == std::vector<Integer>{1});
    CHECK(c2->is_zero({4}));

    std::mt19937_64 rng(5);
    for (int k = 0; k < 200; ++k) {
        std::size_t g = 1 + rng() % 5, r = 1 + rng() % 5;
        auto rels = oracle::to_vectors(oracle::random_small(rng, r, g, 6, 4));
        auto grp = G(g, rels);
        for (const auto& rel : rels) CHECK(grp->element_nf(rel).is_zero());
        Vector v = oracle::to_vectors(oracle::random_small(rng, 1, g, 9))[0];
        Vector w = v;
        for (const auto& rel : rels) add_scaled(w, rel, Integer(static_cast<long long>(rng() % 7) - 3));
        CHECK(grp->element_nf(v) == grp->element_nf(w));
        CHECK(grp->is_zero(v - w));
        for (std::size_t i = 0; i < grp->torsion().size(); ++i) {
            CHECK(grp->element_nf(v).torsion[i] >= 0);
            CHECK(grp->element_nf(v).torsion[i] < grp->torsion()[i]);
        }
        // element_nf and is_zero agree
        CHECK(grp->element_nf(v).is_zero() == grp->is_zero(v));
    }
    CHECK(G(2, {{4, 0}})->element_order({2, 0}) == 2);
    CHECK(G(2, {{4, 0}})->element_order({1, 1}) == 0);
    CHECK(G(2, {{2, 0}, {0, 3}})->element_order({1, 1}) == 6);

    // x0 = -2 x1 is eliminated before the Smith step.
    auto g = G(3, {{1, 2, 0}, {0, 0, 2}});
    CHECK(g->kept_generators() == std::vector<std::size_t>{1, 2});
    CHECK(g->describe() == "Z + Z2");
    CHECK(g->element_nf({1, 0, 0}) == g->element_nf({0, -2, 0}));
    CHECK(g->element_nf({1, 2, 1}) == g->element_nf({0, 0, 1}));
    CHECK_FALSE(g->element_nf({0, 0, 1}).is_zero());
}

TEST_CASE("homomorphisms") {
    auto z = G(1), c2 = G(1, {{2}});
    auto id = GroupHom::identity(c2);
    CHECK(equal_homs(id, GroupHom(c2, c2, IntMatrix{{3}})));
    GroupHom red(z, c2, IntMatrix{{1}});
    CHECK(red({5}) == Vector{5});
    try {
        GroupHom bad(c2, z, IntMatrix{{1}});
        FAIL("expected NotWellDefined");
    } catch (const NotWellDefined& e) {
        CHECK(e.relation_index() == 0);
    }
    auto g = G(2, {{0, 0}, {0, 3}});
    try {
        GroupHom bad(g, z, IntMatrix{{0}, {1}});
        FAIL("expected NotWellDefined");
    } catch (const NotWellDefined& e) {
        CHECK(e.relation_index() == 1);
    }
    CHECK_THROWS_AS(GroupHom(z, z, IntMatrix{{1, 2}}), InvalidInput);
}

TEST_CASE("kernel, image, cokernel") {
    auto z = G(1);
    GroupHom two(z, z, IntMatrix{{2}});
    CHECK(kernel(two).group->is_trivial());
    CHECK(cokernel(two).group->describe() == "Z2");
    CHECK(image(two).group->describe() == "Z");

    auto z2 = G(2);
    GroupHom sum(z2, z, IntMatrix{{1}, {1}});
    CHECK(image(sum).group->describe() == "Z");
    auto k = kernel(sum);
    CHECK(k.group->describe() == "Z");
    CHECK(is_zero(k.inclusion.matrix().row(0) * sum.matrix()));

    // Z2 -> Z4, 1 -> 2 is injective with cokernel Z2.
    auto c2 = G(1, {{2}}), c4 = G(1, {{4}});
    GroupHom incl(c2, c4, IntMatrix{{2}});
    CHECK(is_injective(incl));
    CHECK_FALSE(is_surjective(incl));
    CHECK(cokernel(incl).group->describe() == "Z2");
    // Z4 -> Z2 reduction has kernel Z2.
    GroupHom red(c4, c2, IntMatrix{{1}});
    CHECK(kernel(red).group->describe() == "Z2");
    CHECK(is_surjective(red));

    std::mt19937_64 rng(41);
    for (int t = 0; t < 100; ++t) {
        auto small = oracle::random_small(rng, 4, 4, 5, 3);
        auto src = G(4), tgt = G(4);
        GroupHom f(src, tgt, IntMatrix::from_rows(oracle::to_vectors(small), 4));
        CHECK(shape(*cokernel(f).group) == oracle::shape_by_minors(small, 4));
        // rank-nullity over Q
        CHECK(kernel(f).group->rank() + image(f).group->rank() == 4);
        CHECK(image(f).group->torsion().empty());
    }
}

TEST_CASE("exactness") {
    auto zero = G(0), z = G(1), c2 = G(1, {{2}});
    GroupHom in(zero, z, IntMatrix(0, 1));
    GroupHom two(z, z, IntMatrix{{2}});
    GroupHom red(z, c2, IntMatrix{{1}});
    GroupHom out(c2, zero, IntMatrix(1, 0));
    CHECK(is_exact(in, two).exact);
    CHECK(is_exact(two, red).exact);
    CHECK(is_exact(red, out).exact);

    auto rep = is_exact(two, two);
    CHECK_FALSE(rep.exact);
    CHECK(rep.failure == "composite");
    CHECK(rep.witness == Vector{2});

    GroupHom zmap = GroupHom::zero(z, z);
    CHECK(is_exact(zmap, two).exact);
    auto rep3 = is_exact(zmap, zmap);
    CHECK_FALSE(rep3.exact);
    CHECK(rep3.failure == "kernel");
    CHECK(rep3.witness == Vector{1});
    CHECK_THROWS_AS(is_exact(red, two), InvalidInput);
}

TEST_CASE("tensor with Z2") {
    CHECK(tensor_Z2(G(2)).group->describe() == "Z2 + Z2");
    CHECK(tensor_Z2(G(1, {{3}})).group->describe() == "0");
    CHECK(tensor_Z2(G(2, {{0, 2}})).group->describe() == "Z2 + Z2");
}

TEST_CASE("isomorphisms") {
    auto z = G(1);
    CHECK(hom_is_isomorphism(GroupHom::identity(z)));
    CHECK_FALSE(hom_is_isomorphism(GroupHom(z, z, IntMatrix{{2}})));
    // Z6 -> Z2 + Z3 by 1 -> (1,1)
    auto c6 = G(1, {{6}}), c23 = G(2, {{2, 0}, {0, 3}});
    CHECK(hom_is_isomorphism(GroupHom(c6, c23, IntMatrix{{1, 1}})));
    CHECK(hom_is_isomorphism(compose(GroupHom(c6, c23, IntMatrix{{1, 1}}), GroupHom::identity(c6))));
}

TEST_CASE("json") {
    auto g = group_from_json(nlohmann::json::parse(R"({"generators": 2, "relations": [[2, 0], [0, "3"]]})"));
    CHECK(g->describe() == "Z6");
    auto s = group_summary_json(*g);
    CHECK(s.dump() == R"({"rank":0,"torsion":[6]})");
    CHECK_THROWS_AS(group_from_json(nlohmann::json::parse(R"({"generators": 2, "relations": [[1]]})")), InvalidInput);
    CHECK_THROWS_AS(group_from_json(nlohmann::json::parse(R"({"relations": []})")), InvalidInput);
    CHECK(to_json(Integer("123456789012345678901234567890")) == "123456789012345678901234567890");
}
