#include "treeforms/suites.hpp"

#include "treeforms/errors.hpp"
#include "treeforms/minors.hpp"

#include <array>
#include <sstream>
#include <stdexcept>

namespace treeforms {

nlohmann::json SuiteResult::to_json() const { return {{"name", name}, {"pass", pass}, {"detail", detail}}; }

namespace {

GroupPtr G(std::size_t g, std::vector<Vector> rels = {}) { return make_group(g, std::move(rels)); }

Vector V(std::initializer_list<long long> xs) { return Vector(xs.begin(), xs.end()); }

constexpr std::size_t kKeptFailures = 10;

/// Failure list capped at kKeptFailures, with a total count.
struct Failures {
    std::size_t count = 0;
    nlohmann::json kept = nlohmann::json::array();

    void add(const std::string& what) {
        if (count++ < kKeptFailures) kept.push_back(what);
    }
    void add(const AxiomReport& rep, const std::string& context) {
        for (const auto& f : rep.failures) add(context + ": " + f);
    }
    nlohmann::json to_json() const { return {{"count", count}, {"first", kept}}; }
};

std::string group_name(GroupKind kind, std::size_t n, Label m) {
    return to_string(kind) + "(" + std::to_string(n) + "," + std::to_string(m) + ")";
}

nlohmann::json shape_json(std::size_t rank, const std::vector<std::int64_t>& torsion) {
    return {{"rank", rank}, {"torsion", torsion}};
}

}  // namespace

// ---- random instances -------------------------------------------------------------------

namespace gen {

GroupWithInvolution random_involution(std::mt19937_64& rng) {
    switch (rng() % 7) {
        case 0: return GroupWithInvolution::trivial(G(1));
        case 1: return GroupWithInvolution::make(G(1), IntMatrix{{-1}});
        case 2: return GroupWithInvolution::make(G(2), IntMatrix{{0, 1}, {1, 0}});
        case 3: return GroupWithInvolution::trivial(G(2));
        case 4: return GroupWithInvolution::trivial(G(2, {V({0, 2})}));
        case 5: return GroupWithInvolution::trivial(G(1, {V({2})}));
        default: return GroupWithInvolution::make(G(2), IntMatrix{{0, -1}, {-1, 0}});
    }
}

Vector random_coords(std::mt19937_64& rng, std::size_t n, int bound) {
    Vector v(n);
    for (auto& x : v) x = static_cast<long long>(rng() % (2 * bound + 1)) - bound;
    return v;
}

HermitianForm random_form(std::mt19937_64& rng, const GroupWithInvolution& m, std::size_t k) {
    const auto& mg = *m.group;
    std::vector<std::vector<Vector>> values(k, std::vector<Vector>(k));
    for (std::size_t i = 0; i < k; ++i) {
        // Diagonal values must be self-conjugate.
        Vector w = random_coords(rng, mg.generator_count());
        if (!mg.equal(m.star(w), w)) w = w + m.star(w);
        values[i][i] = w;
        for (std::size_t j = i + 1; j < k; ++j) {
            values[i][j] = random_coords(rng, mg.generator_count());
            values[j][i] = m.star(values[i][j]);
        }
    }
    return HermitianForm(G(k), m, std::move(values));
}

QuadraticFormData random_even_form(std::mt19937_64& rng, const GroupWithInvolution& m, std::size_t k) {
    const std::size_t g = m.group->generator_count();
    std::vector<std::vector<Vector>> nu(k, std::vector<Vector>(k));
    for (auto& row : nu)
        for (auto& x : row) x = random_coords(rng, g);
    std::vector<std::vector<Vector>> values(k, std::vector<Vector>(k));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) values[i][j] = nu[i][j] + m.star(nu[j][i]);
    std::vector<Vector> mu;
    for (std::size_t i = 0; i < k; ++i) mu.push_back(nu[i][i]);
    return QuadraticFormData{HermitianForm(G(k), m, std::move(values)), from_involution(m), std::move(mu)};
}

QuadraticFormData random_z4_form(std::mt19937_64& rng, std::size_t k) {
    auto target = z4_quadratic_group();
    auto m = GroupWithInvolution::trivial(target.mee);
    std::vector<std::vector<Vector>> values(k, std::vector<Vector>(k));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i; j < k; ++j) values[i][j] = values[j][i] = V({static_cast<long long>(rng() % 2)});
    std::vector<Vector> mu;
    for (std::size_t i = 0; i < k; ++i) mu.push_back(values[i][i] + V({2 * static_cast<long long>(rng() % 2)}));
    return QuadraticFormData{HermitianForm(G(k), m, std::move(values)), target, std::move(mu)};
}

QuadraticFormData random_target(std::mt19937_64& rng) {
    const std::size_t k = 1 + rng() % 3;
    switch (rng() % 3) {
        case 0: return random_even_form(rng, random_involution(rng), k);
        case 1: return random_z4_form(rng, k);
        default: return universal_commutative(random_form(rng, random_involution(rng), k));
    }
}

RandomMorphism random_morphism_into(std::mt19937_64& rng, const HermitianForm& target) {
    const auto& m = target.m();
    const std::size_t k = 1 + rng() % 3;
    auto a = G(k);
    IntMatrix alpha(k, target.rank());
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < target.rank(); ++j) alpha(i, j) = static_cast<long long>(rng() % 5) - 2;
    GroupHom alpha_hom(a, target.a(), alpha);
    const int sign = rng() % 2 ? 1 : -1;
    GroupHom beta = rng() % 2 ? combine(GroupHom::identity(m.group), sign, m.star, 0) : combine(m.star, sign, m.star, 0);
    std::vector<std::vector<Vector>> values(k, std::vector<Vector>(k));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            values[i][j] = beta(target(alpha_hom(a->generator(i)), alpha_hom(a->generator(j))));
    return RandomMorphism{HermitianForm(a, m, std::move(values)), FormMorphism{alpha_hom, beta}};
}

SymIntForm random_unimodular(std::mt19937_64& rng) {
    std::vector<IntMatrix> blocks;
    std::size_t n = 0;
    const std::size_t pieces = 1 + rng() % 3;
    for (std::size_t p = 0; p < pieces; ++p) {
        switch (rng() % 5) {
            case 0: blocks.push_back(IntMatrix{{1}}); break;
            case 1: blocks.push_back(IntMatrix{{-1}}); break;
            case 2: blocks.push_back(SymIntForm::hyperbolic().matrix()); break;
            case 3: blocks.push_back(SymIntForm::E8().matrix()); break;
            default: blocks.push_back(IntMatrix{{1}}); break;
        }
        n += blocks.back().rows();
    }
    IntMatrix d(n, n);
    std::size_t off = 0;
    for (const auto& b : blocks) {
        for (std::size_t i = 0; i < b.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j) d(off + i, off + j) = b(i, j);
        off += b.rows();
    }
    IntMatrix u = IntMatrix::identity(n);
    for (int step = 0; step < 6 && n > 1; ++step) {
        const std::size_t i = rng() % n, j = rng() % n;
        if (i == j) continue;
        const long long c = static_cast<long long>(rng() % 3) - 1;
        for (std::size_t k = 0; k < n; ++k) u(i, k) += c * u(j, k);
    }
    return SymIntForm(u.transpose() * d * u);
}

std::vector<SymIntForm> diagonal_pm1_forms(std::size_t max_rank) {
    std::vector<SymIntForm> out;
    for (std::size_t r = 1; r <= max_rank; ++r)
        for (unsigned signs = 0; signs < (1u << r); ++signs) {
            std::vector<long long> d;
            for (std::size_t i = 0; i < r; ++i) d.push_back((signs >> i) & 1 ? -1 : 1);
            out.push_back(SymIntForm::diagonal(d));
        }
    return out;
}

std::vector<Vector> integer_box(std::size_t r, int bound) {
    std::vector<Vector> out{zero_vector(r)};
    for (std::size_t i = 0; i < r; ++i) {
        std::vector<Vector> next;
        for (const auto& v : out)
            for (int x = -bound; x <= bound; ++x) {
                Vector w = v;
                w[i] = x;
                next.push_back(std::move(w));
            }
        out = std::move(next);
    }
    return out;
}

std::vector<Z2Matrix> nonsingular_z2_forms(std::size_t d) {
    std::vector<Z2Matrix> out;
    const unsigned entries = static_cast<unsigned>(d * (d + 1) / 2);
    for (unsigned bits = 0; bits < (1u << entries); ++bits) {
        Z2Matrix m(d, std::vector<int>(d, 0));
        unsigned k = 0;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = i; j < d; ++j, ++k) m[i][j] = m[j][i] = static_cast<int>((bits >> k) & 1);
        try {
            parity(m);
            out.push_back(std::move(m));
        } catch (const InvalidInput&) {
        }
    }
    return out;
}

std::vector<std::vector<int>> all_assignments(std::size_t d, int values) {
    std::vector<std::vector<int>> out{{}};
    for (std::size_t i = 0; i < d; ++i) {
        std::vector<std::vector<int>> next;
        for (const auto& a : out)
            for (int v = 0; v < values; ++v) {
                auto b = a;
                b.push_back(v);
                next.push_back(std::move(b));
            }
        out = std::move(next);
    }
    return out;
}

}  // namespace gen

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    std::array<std::uint32_t, 2> out{};
    seq.generate(out.begin(), out.end());
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

// ---- tree groups ---------------------------------------------------------------------

SuiteResult suite_exact(std::size_t n, Label m, TreeGroupCache& cache) {
    auto rep = verify_exact(n, m, cache);
    return {"exact n=" + std::to_string(n) + " m=" + std::to_string(m), rep.pass(), {{"n", n}, {"m", m}, {"report", rep.to_json()}}};
}

SuiteResult suite_universal(std::size_t n, Label m, TreeGroupCache& cache) {
    auto u = build_Tinf_universal(n, m, cache);
    return {"universal n=" + std::to_string(n) + " m=" + std::to_string(m), u.pass(),
            {{"n", n}, {"m", m}, {"report", u.to_json()}}};
}

SuiteResult suite_small_groups(TreeGroupCache& cache) {
    struct Case {
        GroupKind kind;
        std::size_t n;
        Label m;
        std::size_t rank;
        std::vector<std::int64_t> torsion;
    };
    std::vector<Case> cases;
    for (Label m = 1; m <= 3; ++m) cases.push_back({GroupKind::L, 0, m, static_cast<std::size_t>(m), {}});
    cases.push_back({GroupKind::L, 1, 2, 1, {2, 2}});
    for (Label m = 1; m <= 3; ++m)
        cases.push_back({GroupKind::T, 0, m, static_cast<std::size_t>(m * (m + 1) / 2), {}});
    cases.push_back({GroupKind::T, 1, 2, 0, {2, 2, 2, 2}});
    for (Label m = 1; m <= 3; ++m)
        cases.push_back({GroupKind::Tinf, 0, m, static_cast<std::size_t>(m * (m + 1) / 2), {}});

    bool pass = true;
    auto rows = nlohmann::json::array();
    for (const auto& c : cases) {
        auto g = cache.get(c.kind, c.n, c.m);
        const auto& grp = *g->group;
        std::vector<std::int64_t> torsion;
        for (const auto& d : grp.torsion()) torsion.push_back(static_cast<std::int64_t>(d));
        minors::Small rels;
        for (const auto& r : grp.relations()) {
            rels.emplace_back();
            for (const auto& x : r) rels.back().push_back(static_cast<std::int64_t>(x));
        }
        auto oracle = minors::shape_by_minors(rels, grp.generator_count());
        const bool matches_expected = grp.rank() == c.rank && torsion == c.torsion;
        const bool matches_minors = oracle.rank == grp.rank() && oracle.torsion == torsion;
        pass = pass && matches_expected && matches_minors;
        rows.push_back({{"group", group_name(c.kind, c.n, c.m)},
                        {"computed", shape_json(grp.rank(), torsion)},
                        {"expected", shape_json(c.rank, c.torsion)},
                        {"minors", shape_json(oracle.rank, oracle.torsion)},
                        {"generators", grp.generator_count()},
                        {"pass", matches_expected && matches_minors}});
    }
    return {"small groups", pass, {{"cases", rows}}};
}

SuiteResult suite_split_independence(Label m, std::size_t samples, std::uint64_t seed, TreeGroupCache& cache) {
    if (m < 1) throw InvalidInput("labels must be positive");
    std::mt19937_64 rng(seed);
    const Label target = std::max<Label>(m, 3);
    Failures failures;
    std::size_t splits = 0;
    for (std::size_t trial = 0; trial < samples; ++trial) {
        const std::size_t n = rng() % 5;
        const auto& gens = cache.T(n, m)->unrooted;
        const auto& t = gens[rng() % gens.size()];
        LabelMap alpha{m, target, {}};
        // Degree-one images only where the target group stays small.
        const bool raise = n <= 1 && rng() % 2;
        for (Label i = 0; i < m; ++i) {
            RootedVector img;
            while (img.empty()) {
                if (raise) {
                    for (int s : {1, -2})
                        img.add(RootedTree::node(RootedTree::leaf(static_cast<Label>(1 + rng() % target)),
                                                 RootedTree::leaf(static_cast<Label>(1 + rng() % target))),
                                s);
                } else {
                    for (Label l = 1; l <= target; ++l)
                        img.add(RootedTree::leaf(l), static_cast<long long>(rng() % 5) - 2);
                }
            }
            alpha.images.push_back(std::move(img));
        }
        auto values = psi_by_splits(alpha, t, cache);
        splits += values.size();
        if (values.size() != 2 * n + 1) failures.add(t.text() + ": wrong split count");
        for (const auto& v : values)
            if (!(v == values.front())) {
                failures.add(t.text() + ": value depends on the split");
                break;
            }
    }
    return {"split independence m=" + std::to_string(m),
            failures.count == 0,
            {{"labels", m}, {"trees", samples}, {"splits", splits}, {"failures", failures.to_json()}}};
}

SuiteResult suite_invariance(Label m, TreeGroupCache& cache) {
    if (m < 1) throw InvalidInput("labels must be positive");
    Failures failures;
    std::size_t checks = 0;
    auto element = [&](std::size_t order, const RootedTree& t) { return lie_element(cache.L(order, m), RootedVector(t)); };
    for (std::size_t a = 0; a <= 2; ++a)
        for (std::size_t b = 0; a + b <= 2; ++b)
            for (std::size_t c = 0; a + b + c <= 2; ++c)
                for (const auto& i : cache.L(a, m)->rooted)
                    for (const auto& j : cache.L(b, m)->rooted)
                        for (const auto& k : cache.L(c, m)->rooted) {
                            auto x = element(a, i), y = element(b, j), z = element(c, k);
                            auto left = pairing(bracket(x, y, cache), z, cache);
                            auto right = pairing(x, bracket(y, z, cache), cache);
                            ++checks;
                            if (!equal(left, right))
                                failures.add("<(" + i.text() + "," + j.text() + ")," + k.text() + ">");
                        }
    return {"invariance m=" + std::to_string(m),
            failures.count == 0,
            {{"labels", m}, {"max_total_order", 3}, {"checks", checks}, {"failures", failures.to_json()}}};
}

// ---- quadratic -----------------------------------------------------------------------

SuiteResult suite_quadratic(std::size_t forms, std::size_t morphisms, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Failures failures;
    std::size_t checks = 0, symmetric = 0;
    auto record = [&](const AxiomReport& rep, const std::string& context) {
        checks += rep.checks;
        failures.add(rep, context);
    };
    auto expect = [&](bool ok, const std::string& what) {
        ++checks;
        if (!ok) failures.add(what);
    };

    for (std::size_t trial = 0; trial < forms; ++trial) {
        const std::string tag = "form " + std::to_string(trial);
        auto m = gen::random_involution(rng);
        const std::size_t k = 1 + rng() % 3;
        auto lam = gen::random_form(rng, m, k);
        record(validate_quadratic_group(from_involution(m)).axioms, tag + " from_involution");
        auto nc = universal_nc(lam);
        record(validate_universal_nc(nc, rng, 4), tag + " universal_nc");
        auto u = universal_commutative(lam);
        record(validate_quadratic_group(u.target).axioms, tag + " commutative group");
        record(validate_form(u, rng, 6), tag + " commutative form");
        std::vector<Vector> samples;
        for (int s = 0; s < 3; ++s) samples.push_back(gen::random_coords(rng, k));
        record(check_square_law(u, samples), tag + " square law");
        record(validate_form(gen::random_even_form(rng, m, k), rng, 6), tag + " even form");
        auto z4 = gen::random_z4_form(rng, k);
        record(validate_quadratic_group(z4.target).axioms, tag + " Z4 group");
        record(validate_form(z4, rng, 6), tag + " Z4 form");
        if (m.is_trivial()) {
            ++symmetric;
            expect(is_injective(u.target.p), tag + ": p not injective");
            expect(exact_sequence_symmetric(lam).pass(), tag + ": symmetric sequence not exact");
        }
    }

    for (std::size_t t = 0; t < morphisms; ++t) {
        const std::string tag = "morphism " + std::to_string(t);
        auto target = gen::random_target(rng);
        auto rm = gen::random_morphism_into(rng, target.lambda);
        record(validate_form_morphism(rm.morphism, rm.source, target.lambda), tag + " definition");
        auto source = universal_nc(rm.source);
        auto induced = induced_morphism(rm.morphism, source, target);
        record(induced.check(rng, 6), tag + " into abelian target");
        if (!target.target.me->is_trivial())
            expect(induced.uniqueness_probe() == 0, tag + ": uniqueness probe undetected");
        auto into_pairs = induced_morphism(rm.morphism, source, universal_nc(target.lambda));
        record(into_pairs.check(rng, 6), tag + " into pair group");
        expect(into_pairs.uniqueness_probe() == 0, tag + ": pair uniqueness probe undetected");
        try {
            induced_commutative(rm.morphism, universal_commutative(rm.source), target);
            ++checks;
        } catch (const NotWellDefined& e) {
            failures.add(tag + ": commutative factorization: " + e.what());
        }
    }

    return {"quadratic axioms",
            failures.count == 0 && symmetric > 0,
            {{"forms", forms},
             {"morphisms", morphisms},
             {"symmetric_instances", symmetric},
             {"checks", checks},
             {"failures", failures.to_json()}}};
}

SuiteResult suite_symmetric_sequence(std::size_t forms, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Failures failures;
    for (std::size_t trial = 0; trial < forms; ++trial) {
        GroupWithInvolution m = [&] {
            switch (rng() % 4) {
                case 0: return GroupWithInvolution::trivial(G(1));
                case 1: return GroupWithInvolution::trivial(G(2));
                case 2: return GroupWithInvolution::trivial(G(2, {V({0, 2})}));
                default: return GroupWithInvolution::trivial(G(1, {V({2})}));
            }
        }();
        auto lam = gen::random_form(rng, m, 1 + rng() % 3);
        const std::string tag = "form " + std::to_string(trial);
        if (!is_injective(universal_symmetric(lam).target.p)) failures.add(tag + ": p not injective");
        auto seq = exact_sequence_symmetric(lam);
        if (!seq.p_injective) failures.add(tag + ": sequence fails at M");
        if (!seq.middle.exact) failures.add(tag + ": sequence fails in the middle (" + seq.middle.failure + ")");
        if (!seq.surjective) failures.add(tag + ": sequence fails at Z2 (x) A");
    }
    return {"symmetric sequence", failures.count == 0, {{"forms", forms}, {"failures", failures.to_json()}}};
}

// ---- lattices ---------------------------------------------------------------------

SuiteResult suite_lattice(std::uint64_t seed) {
    Failures failures;
    std::size_t divisibility_trips = 0;
    auto expect = [&](bool ok, const std::string& what) {
        if (!ok) failures.add(what);
    };

    const auto e8 = SymIntForm::E8();
    expect(tau(e8, zero_vector(8)) == 1, "tau(E8, 0) != 1");
    expect(ks(e8, zero_vector(8), 0) == 1, "ks(E8) != 1");
    expect(tau(SymIntForm::diagonal({1}), Vector{1}) == 0, "tau(<1>, 1) != 0");

    std::size_t torsor = 0;
    for (const auto& f : gen::diagonal_pm1_forms(4)) {
        const auto c = find_characteristic(f);
        for (const auto& x : gen::integer_box(f.rank(), 2)) {
            ++torsor;
            try {
                if (!torsor_check(f, c, x).ok()) failures.add("torsor relation fails at x = " + to_json(x).dump());
            } catch (const std::logic_error&) {
                ++divisibility_trips;
            }
        }
    }
    std::mt19937_64 rng(seed);
    std::size_t unimodular = 0;
    for (int trial = 0; trial < 40; ++trial) {
        auto f = gen::random_unimodular(rng);
        auto c = find_characteristic(f);
        for (int k = 0; k < 5; ++k) {
            ++unimodular;
            try {
                tau(f, c + 2 * gen::random_coords(rng, f.rank()));
            } catch (const std::logic_error&) {
                ++divisibility_trips;
            }
        }
    }
    expect(divisibility_trips == 0, "8 does not divide lambda(c,c) - signature");

    std::size_t arf_spaces = 0, doubled = 0;
    for (std::size_t d : {2, 4})
        for (const auto& form : gen::nonsingular_z2_forms(d)) {
            if (parity(form) != Parity::even) continue;
            for (const auto& q : gen::all_assignments(d, 2)) {
                Z2QuadraticSpace v{form, q};
                ++arf_spaces;
                const int arf = arf_z2(v);
                expect(arf == arf_democratic(v), "Arf formula disagrees with the democratic count");
                ++doubled;
                expect(brown_z8(Z4Refinement::doubled(v)) == 4 * arf, "doubled refinement: brown != 4 arf");
            }
        }

    std::vector<std::vector<Z4Refinement>> by_dim(4);
    for (std::size_t d = 1; d <= 3; ++d)
        for (const auto& form : gen::nonsingular_z2_forms(d))
            for (const auto& mu : gen::all_assignments(d, 4)) {
                bool ok = true;
                for (std::size_t i = 0; i < d; ++i) ok = ok && mu[i] % 2 == form[i][i];
                if (ok) by_dim[d].push_back(Z4Refinement{form, mu});
            }
    std::size_t additivity = 0;
    for (std::size_t da = 1; da <= 3; ++da)
        for (std::size_t db = 1; da + db <= 4; ++db)
            for (const auto& a : by_dim[da])
                for (const auto& b : by_dim[db]) {
                    ++additivity;
                    expect(brown_z8(orthogonal_sum(a, b)) == (brown_z8(a) + brown_z8(b)) % 8, "brown is not additive");
                }

    return {"lattice invariants",
            failures.count == 0,
            {{"torsor_checks", torsor},
             {"random_unimodular_checks", unimodular},
             {"divisibility_trips", divisibility_trips},
             {"arf_spaces", arf_spaces},
             {"doubled_refinements", doubled},
             {"additivity_pairs", additivity},
             {"failures", failures.to_json()}}};
}

}  // namespace treeforms
