#include "treeforms/errors.hpp"
#include "treeforms/tree_groups.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>
#include <thread>

using namespace treeforms;

namespace {

RootedTree R(const char* s) { return parse_rooted(s); }

oracle::GroupShape shape(const FPAbelianGroup& g) {
    oracle::GroupShape s;
    s.rank = g.rank();
    for (const auto& d : g.torsion()) s.torsion.push_back(static_cast<std::int64_t>(d));
    return s;
}

oracle::GroupShape minors_shape(const FPAbelianGroup& g) {
    oracle::Small rels;
    for (const auto& r : g.relations()) {
        rels.emplace_back();
        for (const auto& x : r) rels.back().push_back(static_cast<std::int64_t>(x));
    }
    return oracle::shape_by_minors(rels, g.generator_count());
}

void check_shape(const TreeGroupPtr& g, std::size_t rank, std::vector<std::int64_t> torsion) {
    CAPTURE(to_string(g->kind));
    CAPTURE(g->order);
    CAPTURE(g->labels);
    oracle::GroupShape expected{rank, std::move(torsion)};
    CHECK(shape(*g->group) == expected);
    CHECK(minors_shape(*g->group) == expected);
}

RootedTree relabel(const RootedTree& t, const std::vector<Label>& sigma) {
    if (t.is_leaf()) return RootedTree::leaf(sigma[t.label() - 1]);
    return RootedTree::node(relabel(t.first(), sigma), relabel(t.second(), sigma));
}

RootedVector leaf_combination(std::mt19937_64& rng, Label m) {
    RootedVector v;
    while (v.empty())
        for (Label i = 1; i <= m; ++i) v.add(RootedTree::leaf(i), static_cast<long long>(rng() % 5) - 2);
    return v;
}

}  // namespace

TEST_CASE("small tree groups match the minors oracle") {
    for (Label m = 1; m <= 3; ++m) check_shape(build_L(0, m), m, {});
    check_shape(build_L(1, 2), 1, {2, 2});
    check_shape(build_L(1, 1), 0, {2});
    for (Label m = 1; m <= 4; ++m) check_shape(build_T(0, m), m * (m + 1) / 2, {});
    check_shape(build_T(1, 2), 0, {2, 2, 2, 2});
    CHECK(build_T(1, 2)->generator_count() == 4);
    for (Label m = 1; m <= 3; ++m) check_shape(build_Tinf(0, m), m * (m + 1) / 2, {});
    auto t01 = build_Tinf(0, 1);
    CHECK(t01->generator_count() == 2);
    CHECK(t01->group->relations().size() == 1);
}

TEST_CASE("generator layout") {
    auto ti = build_Tinf(1, 2);
    auto unrooted = enumerate_unrooted(2, 2);
    auto bodies = enumerate_rooted(1, 2);
    REQUIRE(ti->generator_count() == unrooted.size() + bodies.size());
    for (std::size_t i = 0; i < unrooted.size(); ++i) CHECK(ti->index(unrooted[i]) == i);
    for (std::size_t i = 0; i < bodies.size(); ++i) CHECK(ti->index(InfTree(bodies[i])) == unrooted.size() + i);
    CHECK_THROWS_AS(ti->index(R("(1,2)")), InvalidInput);

    auto j = ti->to_json();
    CHECK(j["kind"] == "Tinf");
    CHECK(j["order"] == 1);
    CHECK(j["labels"] == 2);
    CHECK(j["generators"].size() == ti->generator_count());
    CHECK(j["generators"].back() == InfTree(bodies.back()).text());
}

TEST_CASE("every emitted relation vanishes") {
    for (std::size_t n = 0; n <= 2; ++n)
        for (Label m = 1; m <= 2; ++m)
            for (auto kind : {GroupKind::L, GroupKind::T, GroupKind::Tinf}) {
                auto g = build_tree_group(kind, n, m);
                REQUIRE(g->relation_kinds.size() == g->group->relations().size());
                for (const auto& r : g->group->relations()) CHECK(g->group->is_zero(r));
            }
}

TEST_CASE("twisted identities hold in Tinf") {
    for (std::size_t n = 0; n <= 2; ++n)
        for (Label m = 1; m <= 2; ++m) {
            auto ti = build_Tinf(n, m);
            const auto& g = *ti->group;
            auto pair = [&](const RootedTree& a, const RootedTree& b) { return ti->vector(UnrootedVector(inner_product(a, b))); };
            for (const auto& j : ti->rooted) {
                CHECK(g.equal(2 * ti->inf_vector(j), pair(j, j)));
                for (std::size_t v = 0; v < trivalent_count(j); ++v)
                    CHECK(g.equal(ti->inf_vector(as_variant(j, v)), ti->inf_vector(j)));
                for (std::size_t e = 0; e < internal_edge_count(j); ++e) {
                    auto [i, h, x] = ihx_triple(j, e);
                    Vector first = ti->inf_vector(i) - ti->inf_vector(h) - ti->inf_vector(x) + pair(h, x);
                    Vector second = ti->inf_vector(i) + ti->inf_vector(h) + ti->inf_vector(x) - pair(i, h) + pair(i, x) -
                                    pair(h, x);
                    CHECK(g.is_zero(first));
                    CHECK(g.is_zero(second));
                }
            }
        }
}

TEST_CASE("bracket") {
    TreeGroupCache cache;
    auto l0 = cache.L(0, 2);
    auto x = lie_element(l0, RootedVector(R("1")));
    auto y = lie_element(l0, RootedVector(R("2")));
    auto b = bracket(x, y, cache);
    CHECK(b.home->order == 1);
    CHECK(b.value == RootedVector(R("(1,2)")));

    RootedVector sum = bracket(x, y, cache).value;
    sum.add(bracket(y, x, cache).value);
    CHECK(is_zero(lie_element(b.home, sum)));

    TreeGroupCache c1;
    auto one = lie_element(c1.L(0, 1), RootedVector(R("1")));
    auto b11 = bracket(one, one, c1);
    CHECK_FALSE(is_zero(b11));
    CHECK(b11.home->group->element_order(b11.coordinates()) == 2);

    CHECK_THROWS_AS(lie_element(cache.T(0, 2), RootedVector(R("1"))), InvalidInput);
    CHECK_THROWS_AS(lie_element(l0, RootedVector(R("(1,2)"))), InvalidInput);
}

TEST_CASE("pairing is symmetric and invariant") {
    TreeGroupCache cache;
    for (Label i = 1; i <= 2; ++i)
        for (Label j = 1; j <= 2; ++j) {
            auto p = pairing(lie_element(cache.L(0, 2), RootedVector(RootedTree::leaf(i))),
                             lie_element(cache.L(0, 2), RootedVector(RootedTree::leaf(j))), cache);
            CHECK(p.value == UnrootedVector(inner_product(RootedTree::leaf(i), RootedTree::leaf(j))));
        }

    std::mt19937_64 rng(11);
    auto random_element = [&](std::size_t order) {
        auto gens = cache.L(order, 2)->rooted;
        RootedVector v;
        for (int k = 0; k < 3; ++k) v.add(gens[rng() % gens.size()], static_cast<long long>(rng() % 5) - 2);
        return lie_element(cache.L(order, 2), v);
    };
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t a = rng() % 2, b = rng() % 2;
        auto x = random_element(a), y = random_element(b);
        CHECK(equal(pairing(x, y, cache), pairing(y, x, cache)));
    }
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t a = rng() % 2;
        auto x = random_element(a), y = random_element(0), z = random_element(0);
        CHECK(equal(pairing(bracket(x, y, cache), z, cache), pairing(x, bracket(y, z, cache), cache)));
    }
}

TEST_CASE("psi: identity and relabeling") {
    TreeGroupCache cache;
    for (std::size_t n = 0; n <= 2; ++n) {
        LabelMap id{3, 3, {}};
        for (Label i = 1; i <= 3; ++i) id.images.emplace_back(RootedTree::leaf(i));
        CHECK(equal_homs(psi(id, n, cache), GroupHom::identity(cache.T(n, 3)->group)));

        std::vector<Label> sigma{2, 3, 1};
        LabelMap perm{3, 3, {}};
        for (Label i = 1; i <= 3; ++i) perm.images.emplace_back(RootedTree::leaf(sigma[i - 1]));
        auto src = cache.T(n, 3);
        IntMatrix direct(src->generator_count(), src->generator_count());
        for (std::size_t i = 0; i < src->unrooted.size(); ++i) {
            const auto& t = src->unrooted[i];
            direct(i, src->index(UnrootedTree::from_split(relabel(t.first(), sigma), relabel(t.second(), sigma)))) = 1;
        }
        CHECK(equal_homs(psi(perm, n, cache), GroupHom(src->group, src->group, direct)));
    }
}

TEST_CASE("psi raises the order as expected") {
    TreeGroupCache cache;
    LabelMap alpha{2, 2, {RootedVector(R("(1,2)")), RootedVector(R("(2,1)"))}};
    alpha.images[1].add(R("(1,1)"), 1);
    CHECK(alpha.degree() == 1);
    auto f = psi(alpha, 0, cache);
    CHECK(f.target()->generator_count() == cache.T(2, 2)->generator_count());
    auto f1 = psi(alpha, 1, cache);
    CHECK(f1.target()->generator_count() == cache.T(4, 2)->generator_count());

    LabelMap mixed{2, 2, {RootedVector(R("1")), RootedVector(R("(1,2)"))}};
    CHECK_THROWS_AS(mixed.degree(), InvalidInput);
    LabelMap wide{1, 1, {RootedVector(R("2"))}};
    CHECK_THROWS_AS(psi(wide, 0, cache), InvalidInput);
}

TEST_CASE("psi is independent of the split") {
    TreeGroupCache cache;
    std::mt19937_64 rng(5);
    int trees = 0;
    for (int trial = 0; trial < 120; ++trial) {
        std::size_t n = rng() % 5;
        Label m = static_cast<Label>(1 + rng() % 3);
        auto gens = cache.T(n, m)->unrooted;
        const auto& t = gens[rng() % gens.size()];
        LabelMap alpha{m, 3, {}};
        const bool raise = n <= 1 && rng() % 2;
        for (Label i = 0; i < m; ++i) {
            if (raise) {
                RootedVector img;
                img.add(RootedTree::node(RootedTree::leaf(1 + rng() % 3), RootedTree::leaf(1 + rng() % 3)), 1);
                img.add(RootedTree::node(RootedTree::leaf(1 + rng() % 3), RootedTree::leaf(1 + rng() % 3)), -2);
                if (img.empty()) img.add(R("(1,2)"), 1);
                alpha.images.push_back(img);
            } else {
                alpha.images.push_back(leaf_combination(rng, 3));
            }
        }
        auto values = psi_by_splits(alpha, t, cache);
        REQUIRE(values.size() == 2 * n + 1);
        for (const auto& v : values) {
            CHECK(v.torsion == values.front().torsion);
            CHECK(v.free == values.front().free);
        }
        ++trees;
    }
    CHECK(trees >= 100);
}

TEST_CASE("maps of the exact sequence") {
    TreeGroupCache cache;
    for (std::size_t n = 0; n <= 1; ++n)
        for (Label m = 1; m <= 2; ++m) {
            auto p = map_p(n, m, cache), h = map_h(n, m, cache), q = map_q(n, m, cache), b = map_bound(n, m, cache);
            auto t = cache.T(2 * n, m);
            CHECK(equal_homs(compose(h, p), combine(GroupHom::identity(t->group), 2, GroupHom::identity(t->group), 0)));
            CHECK(equal_homs(compose(b, p), GroupHom::zero(t->group, b.target())));
            auto l = cache.L(n, m);
            for (std::size_t i = 0; i < l->rooted.size(); ++i) {
                const auto& j = l->rooted[i];
                CHECK(t->group->equal(h(q(l->group->generator(i))), t->vector(UnrootedVector(inner_product(j, j)))));
            }
        }
}

TEST_CASE("exactness on a small grid") {
    TreeGroupCache cache;
    auto p = map_p(0, 1, cache);
    CHECK(p.source()->describe() == "Z");
    CHECK(p.target()->describe() == "Z");
    CHECK(cokernel(p).group->describe() == "Z2");

    for (std::size_t n = 0; n <= 1; ++n)
        for (Label m = 1; m <= 3; ++m) {
            CAPTURE(n);
            CAPTURE(m);
            auto r = verify_exact(n, m, cache);
            CHECK(r.p_injective);
            CHECK(r.middle.exact);
            CHECK(r.bound_surjective);
            CHECK(r.to_json()["pass"] == true);
        }
    CHECK(verify_exact(2, 2, cache).pass());
}

TEST_CASE("universal symmetric refinement matches Tinf") {
    TreeGroupCache cache;
    for (auto [n, m] : {std::pair<std::size_t, Label>{0, 1}, {0, 2}, {1, 1}, {1, 2}}) {
        CAPTURE(n);
        CAPTURE(m);
        auto u = build_Tinf_universal(n, m, cache);
        CHECK(u.isomorphism);
        CHECK(u.p_square);
        CHECK(u.h_square);
        CHECK(u.same_invariants);
        CHECK(u.to_json()["pass"] == true);
    }
    auto u = build_Tinf_universal(0, 1, cache);
    CHECK(u.universal->describe() == "Z");
}

TEST_CASE("cache shares groups between threads") {
    TreeGroupCache cache;
    std::vector<TreeGroupPtr> got(4);
    std::vector<std::thread> threads;
    for (std::size_t i = 0; i < got.size(); ++i) threads.emplace_back([&, i] { got[i] = cache.Tinf(1, 2); });
    for (auto& t : threads) t.join();
    for (const auto& g : got) CHECK(g == got.front());
}

TEST_CASE("limits and bad input") {
    TreeGroupLimits tight;
    tight.max_generators = 10;
    CHECK_THROWS_AS(build_T(2, 3, tight), ResourceLimit);
    CHECK_THROWS_AS(build_L(1, 0), InvalidInput);
    CHECK_THROWS_AS(group_kind_from_string("X"), InvalidInput);
    CHECK(group_kind_from_string("Tinf") == GroupKind::Tinf);
}
