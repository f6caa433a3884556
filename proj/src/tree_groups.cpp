#include "treeforms/tree_groups.hpp"

#include "treeforms/errors.hpp"
#include "treeforms/quadratic.hpp"

#include <future>
#include <set>

namespace treeforms {

std::string to_string(GroupKind kind) {
    switch (kind) {
        case GroupKind::L: return "L";
        case GroupKind::T: return "T";
        case GroupKind::Tinf: return "Tinf";
    }
    return "?";
}

GroupKind group_kind_from_string(const std::string& s) {
    if (s == "L") return GroupKind::L;
    if (s == "T") return GroupKind::T;
    if (s == "Tinf") return GroupKind::Tinf;
    throw InvalidInput("unknown group kind '" + s + "' (expected L, T or Tinf)");
}

// ---- TreeGroup ------------------------------------------------------------------

std::size_t TreeGroup::lookup(const std::string& name) const {
    if (auto i = group->index_of(name)) return *i;
    throw InvalidInput(name + " is not a generator of " + to_string(kind) + "(" + std::to_string(order) + ", " +
                       std::to_string(labels) + ")");
}

std::size_t TreeGroup::index(const RootedTree& t) const { return lookup(t.text()); }
std::size_t TreeGroup::index(const UnrootedTree& t) const { return lookup(t.text()); }
std::size_t TreeGroup::index(const InfTree& t) const { return lookup(t.text()); }

Vector TreeGroup::vector(const RootedVector& v) const {
    Vector out = group->zero();
    for (const auto& [t, c] : v) out[index(t)] += c;
    return out;
}

Vector TreeGroup::vector(const UnrootedVector& v) const {
    Vector out = group->zero();
    for (const auto& [t, c] : v) out[index(t)] += c;
    return out;
}

Vector TreeGroup::inf_vector(const RootedTree& body, const Integer& c) const {
    Vector out = group->zero();
    out[index(InfTree(body))] += c;
    return out;
}

nlohmann::json TreeGroup::to_json() const {
    nlohmann::json j = group_summary_json(*group);
    j["kind"] = to_string(kind);
    j["order"] = order;
    j["labels"] = labels;
    j["generators"] = group->names();
    return j;
}

namespace {

/// Relation rows with duplicates (up to sign) and zero rows dropped.
class RelationSet {
  public:
    void add(Vector row, const char* kind) {
        auto lead = std::find_if(row.begin(), row.end(), [](const Integer& x) { return x != 0; });
        if (lead == row.end()) return;
        if (*lead < 0) row = -row;
        if (!seen_.insert(row).second) return;
        rows_.push_back(std::move(row));
        kinds_.emplace_back(kind);
    }
    std::vector<Vector> rows_;
    std::vector<std::string> kinds_;

  private:
    std::set<Vector> seen_;
};

void check_arguments(Label m) {
    if (m < 1) throw InvalidInput("label count must be at least 1");
}

template <class Tree>
void add_as_ihx(const std::vector<Tree>& gens, std::size_t offset, std::size_t cols,
                const std::map<std::string, std::size_t>& index, RelationSet& rels) {
    auto col = [&](const Tree& t) {
        auto it = index.find(t.text());
        if (it == index.end()) throw std::logic_error("tree outside the generator set: " + t.text());
        return it->second;
    };
    for (std::size_t g = 0; g < gens.size(); ++g) {
        const Tree& t = gens[g];
        for (std::size_t v = 0; v < trivalent_count(t); ++v) {
            Vector row = zero_vector(cols);
            row[offset + g] += 1;
            row[col(as_variant(t, v))] += 1;
            rels.add(std::move(row), "AS");
        }
        for (std::size_t e = 0; e < internal_edge_count(t); ++e) {
            auto tr = ihx_triple(t, e);
            Vector row = zero_vector(cols);
            row[col(tr.i)] += 1;
            row[col(tr.h)] -= 1;
            row[col(tr.x)] += 1;
            rels.add(std::move(row), "IHX");
        }
    }
}

}  // namespace

TreeGroupPtr build_L(std::size_t n, Label m, const TreeGroupLimits& limits) {
    check_arguments(m);
    auto gens = enumerate_rooted(n, m, limits.max_generators);
    std::vector<std::string> names;
    std::map<std::string, std::size_t> index;
    for (const auto& t : gens) {
        index.emplace(t.text(), names.size());
        names.push_back(t.text());
    }
    RelationSet rels;
    add_as_ihx(gens, 0, gens.size(), index, rels);
    auto g = std::make_shared<TreeGroup>();
    g->kind = GroupKind::L;
    g->order = n;
    g->labels = m;
    g->group = make_group(gens.size(), std::move(rels.rows_), std::move(names), limits.matrix);
    g->rooted = std::move(gens);
    g->relation_kinds = std::move(rels.kinds_);
    return g;
}

TreeGroupPtr build_T(std::size_t n, Label m, const TreeGroupLimits& limits) {
    check_arguments(m);
    auto gens = enumerate_unrooted(n, m, limits.max_generators);
    std::vector<std::string> names;
    std::map<std::string, std::size_t> index;
    for (const auto& t : gens) {
        index.emplace(t.text(), names.size());
        names.push_back(t.text());
    }
    RelationSet rels;
    add_as_ihx(gens, 0, gens.size(), index, rels);
    auto g = std::make_shared<TreeGroup>();
    g->kind = GroupKind::T;
    g->order = n;
    g->labels = m;
    g->group = make_group(gens.size(), std::move(rels.rows_), std::move(names), limits.matrix);
    g->unrooted = std::move(gens);
    g->relation_kinds = std::move(rels.kinds_);
    return g;
}

TreeGroupPtr build_Tinf(std::size_t n, Label m, const TreeGroupLimits& limits) {
    check_arguments(m);
    auto unrooted = enumerate_unrooted(2 * n, m, limits.max_generators);
    auto bodies = enumerate_rooted(n, m, limits.max_generators);
    const std::size_t u = unrooted.size(), cols = u + bodies.size();
    if (cols > limits.max_generators)
        throw ResourceLimit("Tinf(" + std::to_string(n) + ", " + std::to_string(m) + ") needs " +
                            std::to_string(cols) + " generators, cap is " + std::to_string(limits.max_generators));
    std::vector<std::string> names;
    std::map<std::string, std::size_t> index;
    for (const auto& t : unrooted) {
        index.emplace(t.text(), names.size());
        names.push_back(t.text());
    }
    std::map<std::string, std::size_t> body_index;
    for (const auto& j : bodies) {
        body_index.emplace(j.text(), names.size());
        index.emplace(InfTree(j).text(), names.size());
        names.push_back(InfTree(j).text());
    }
    auto col_u = [&](const UnrootedTree& t) { return index.at(t.text()); };
    auto col_inf = [&](const RootedTree& j) { return body_index.at(j.text()); };

    RelationSet rels;
    add_as_ihx(unrooted, 0, cols, index, rels);
    for (const auto& j : bodies) {
        for (std::size_t v = 0; v < trivalent_count(j); ++v) {
            Vector row = zero_vector(cols);
            row[col_inf(j)] += 1;
            row[col_inf(as_variant(j, v))] -= 1;
            rels.add(std::move(row), "sym");
        }
        Vector twist = zero_vector(cols);
        twist[col_inf(j)] += 2;
        twist[col_u(inner_product(j, j))] -= 1;
        rels.add(std::move(twist), "twist");
        // I^inf = H^inf + X^inf - <H, X>; only edges between two trivalent
        // vertices admit an IHX move, so the root edge contributes nothing.
        for (std::size_t e = 0; e < internal_edge_count(j); ++e) {
            auto tr = ihx_triple(j, e);
            Vector row = zero_vector(cols);
            row[col_inf(tr.i)] += 1;
            row[col_inf(tr.h)] -= 1;
            row[col_inf(tr.x)] -= 1;
            row[col_u(inner_product(tr.h, tr.x))] += 1;
            rels.add(std::move(row), "tIHX");
        }
    }
    auto g = std::make_shared<TreeGroup>();
    g->kind = GroupKind::Tinf;
    g->order = n;
    g->labels = m;
    g->group = make_group(cols, std::move(rels.rows_), std::move(names), limits.matrix);
    g->unrooted = std::move(unrooted);
    g->rooted = std::move(bodies);
    g->relation_kinds = std::move(rels.kinds_);
    return g;
}

TreeGroupPtr build_tree_group(GroupKind kind, std::size_t n, Label m, const TreeGroupLimits& limits) {
    switch (kind) {
        case GroupKind::L: return build_L(n, m, limits);
        case GroupKind::T: return build_T(n, m, limits);
        case GroupKind::Tinf: return build_Tinf(n, m, limits);
    }
    throw InvalidInput("unknown group kind");
}

TreeGroupPtr TreeGroupCache::get(GroupKind kind, std::size_t n, Label m) {
    std::shared_future<TreeGroupPtr> future;
    std::promise<TreeGroupPtr> promise;
    bool builder = false;
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto key = std::make_tuple(kind, n, m);
        auto it = groups_.find(key);
        if (it == groups_.end()) {
            future = promise.get_future().share();
            groups_.emplace(key, future);
            builder = true;
        } else {
            future = it->second;
        }
    }
    if (builder) {
        try {
            promise.set_value(build_tree_group(kind, n, m, limits_));
        } catch (...) {
            promise.set_exception(std::current_exception());
        }
    }
    return future.get();
}

// ---- elements -----------------------------------------------------------------------

LieElement lie_element(TreeGroupPtr home, const RootedVector& v) {
    if (home->kind != GroupKind::L) throw InvalidInput("lie_element: home group must be an L group");
    home->vector(v);
    return LieElement{std::move(home), v};
}

namespace {

void check_same_home(const TreeGroupPtr& a, const TreeGroupPtr& b) {
    if (a->kind != b->kind || a->order != b->order || a->labels != b->labels)
        throw InvalidInput("elements live in different groups");
}

}  // namespace

bool equal(const LieElement& a, const LieElement& b) {
    check_same_home(a.home, b.home);
    return a.home->group->equal(a.coordinates(), b.home->vector(b.value));
}

bool equal(const TreeElement& a, const TreeElement& b) {
    check_same_home(a.home, b.home);
    return a.home->group->equal(a.coordinates(), b.home->vector(b.value));
}

bool is_zero(const LieElement& a) { return a.home->group->is_zero(a.coordinates()); }
bool is_zero(const TreeElement& a) { return a.home->group->is_zero(a.coordinates()); }

LieElement bracket(const LieElement& x, const LieElement& y, TreeGroupCache& cache) {
    if (x.home->labels != y.home->labels) throw InvalidInput("bracket: label counts differ");
    auto target = cache.L(x.home->order + y.home->order + 1, x.home->labels);
    return LieElement{target, rooted_product(x.value, y.value)};
}

TreeElement pairing(const LieElement& x, const LieElement& y, TreeGroupCache& cache) {
    if (x.home->labels != y.home->labels) throw InvalidInput("pairing: label counts differ");
    auto target = cache.T(x.home->order + y.home->order, x.home->labels);
    return TreeElement{target, inner_product(x.value, y.value)};
}

// ---- psi -------------------------------------------------------------------------

std::size_t LabelMap::degree() const {
    std::optional<std::size_t> d;
    for (std::size_t i = 0; i < images.size(); ++i)
        for (const auto& [t, c] : images[i]) {
            (void)c;
            if (!d) d = t.order();
            else if (*d != t.order())
                throw InvalidInput("label map: image " + std::to_string(i + 1) + " mixes tree orders");
        }
    return d.value_or(0);
}

RootedVector extend(const LabelMap& alpha, const RootedTree& t) {
    if (t.is_leaf()) {
        if (t.label() < 1 || static_cast<std::size_t>(t.label()) > alpha.images.size())
            throw InvalidInput("label map has no image for label " + std::to_string(t.label()));
        return alpha.images[t.label() - 1];
    }
    return rooted_product(extend(alpha, t.first()), extend(alpha, t.second()));
}

namespace {

void check_label_map(const LabelMap& alpha) {
    if (alpha.images.size() != static_cast<std::size_t>(alpha.source_labels))
        throw InvalidInput("label map: expected " + std::to_string(alpha.source_labels) + " images");
    for (const auto& img : alpha.images)
        for (const auto& [t, c] : img) {
            (void)c;
            if (t.max_label() > alpha.target_labels)
                throw InvalidInput("label map: image uses label " + std::to_string(t.max_label()) + " > " +
                                   std::to_string(alpha.target_labels));
        }
}

/// Symmetry and invariance of the target pairing on the images.
void probe_pairing(const LabelMap& alpha, std::size_t d, TreeGroupCache& cache) {
    auto home = cache.L(d, alpha.target_labels);
    std::vector<LieElement> xs;
    for (const auto& img : alpha.images) xs.push_back(LieElement{home, img});
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = 0; j < xs.size(); ++j) {
            if (!equal(pairing(xs[i], xs[j], cache), pairing(xs[j], xs[i], cache)))
                throw AxiomViolation("target pairing is not symmetric on images " + std::to_string(i + 1) + ", " +
                                     std::to_string(j + 1));
            for (std::size_t k = 0; k < xs.size(); ++k) {
                auto lhs = pairing(bracket(xs[i], xs[j], cache), xs[k], cache);
                auto rhs = pairing(xs[i], bracket(xs[j], xs[k], cache), cache);
                if (!equal(lhs, rhs))
                    throw AxiomViolation("target pairing is not invariant on images " + std::to_string(i + 1) + ", " +
                                         std::to_string(j + 1) + ", " + std::to_string(k + 1));
            }
        }
}

}  // namespace

GroupHom psi(const LabelMap& alpha, std::size_t n, TreeGroupCache& cache) {
    check_label_map(alpha);
    const std::size_t d = alpha.degree();
    probe_pairing(alpha, d, cache);
    auto source = cache.T(n, alpha.source_labels);
    auto target = cache.T((n + 2) * (d + 1) - 2, alpha.target_labels);
    IntMatrix mat(source->generator_count(), target->generator_count());
    for (std::size_t i = 0; i < source->unrooted.size(); ++i) {
        const auto& t = source->unrooted[i];
        Vector v = target->vector(inner_product(extend(alpha, t.first()), extend(alpha, t.second())));
        for (std::size_t j = 0; j < v.size(); ++j) mat(i, j) = v[j];
    }
    return GroupHom(source->group, target->group, std::move(mat));
}

std::vector<ElementNF> psi_by_splits(const LabelMap& alpha, const UnrootedTree& t, TreeGroupCache& cache) {
    check_label_map(alpha);
    const std::size_t d = alpha.degree();
    auto target = cache.T((t.order() + 2) * (d + 1) - 2, alpha.target_labels);
    std::vector<ElementNF> out;
    for (const auto& [x, y] : splits(t))
        out.push_back(target->group->element_nf(target->vector(inner_product(extend(alpha, x), extend(alpha, y)))));
    return out;
}

// ---- maps ---------------------------------------------------------------------------

namespace {

void set_row(IntMatrix& m, std::size_t r, const Vector& v) {
    for (std::size_t j = 0; j < v.size(); ++j) m(r, j) = v[j];
}

}  // namespace

GroupHom map_p(std::size_t n, Label m, TreeGroupCache& cache) {
    auto t = cache.T(2 * n, m);
    auto ti = cache.Tinf(n, m);
    IntMatrix mat(t->generator_count(), ti->generator_count());
    for (std::size_t i = 0; i < t->unrooted.size(); ++i) mat(i, ti->index(t->unrooted[i])) = 1;
    return GroupHom(t->group, ti->group, std::move(mat));
}

GroupHom map_h(std::size_t n, Label m, TreeGroupCache& cache) {
    auto t = cache.T(2 * n, m);
    auto ti = cache.Tinf(n, m);
    IntMatrix mat(ti->generator_count(), t->generator_count());
    for (const auto& u : ti->unrooted) mat(ti->index(u), t->index(u)) = 2;
    for (const auto& j : ti->rooted) set_row(mat, ti->index(InfTree(j)), t->vector(UnrootedVector(inner_product(j, j))));
    return GroupHom(ti->group, t->group, std::move(mat));
}

GroupHom map_q(std::size_t n, Label m, TreeGroupCache& cache) {
    auto l = cache.L(n, m);
    auto ti = cache.Tinf(n, m);
    // q is quadratic, not additive on L(n), so its source is the free group on
    // the rooted generators.
    auto free = make_group(l->generator_count(), {}, l->group->names());
    IntMatrix mat(l->generator_count(), ti->generator_count());
    for (std::size_t i = 0; i < l->rooted.size(); ++i) mat(i, ti->index(InfTree(l->rooted[i]))) = 1;
    return GroupHom(free, ti->group, std::move(mat));
}

GroupHom map_bound(std::size_t n, Label m, TreeGroupCache& cache) {
    auto l = cache.L(n, m);
    auto ti = cache.Tinf(n, m);
    auto z2l = tensor_Z2(l->group).group;
    IntMatrix mat(ti->generator_count(), l->generator_count());
    for (const auto& j : ti->rooted) mat(ti->index(InfTree(j)), l->index(j)) = 1;
    return GroupHom(ti->group, z2l, std::move(mat));
}

nlohmann::json ExactReport::to_json() const {
    nlohmann::json middle_json = {{"exact", middle.exact}};
    if (!middle.exact) {
        middle_json["failure"] = middle.failure;
        middle_json["witness"] = treeforms::to_json(middle.witness);
    }
    return {{"p_injective", p_injective},
            {"image_equals_kernel", middle_json},
            {"bound_surjective", bound_surjective},
            {"pass", pass()}};
}

ExactReport verify_exact(std::size_t n, Label m, TreeGroupCache& cache) {
    auto p = map_p(n, m, cache);
    auto b = map_bound(n, m, cache);
    ExactReport rep;
    rep.p_injective = is_injective(p);
    rep.middle = is_exact(p, b);
    rep.bound_surjective = is_surjective(b);
    return rep;
}

nlohmann::json UniversalTinf::to_json() const {
    return {{"universal", group_summary_json(*universal)},
            {"isomorphism", isomorphism},
            {"p_square", p_square},
            {"h_square", h_square},
            {"same_invariants", same_invariants},
            {"pass", pass()}};
}

UniversalTinf build_Tinf_universal(std::size_t n, Label m, TreeGroupCache& cache) {
    auto l = cache.L(n, m);
    auto t = cache.T(2 * n, m);
    auto ti = cache.Tinf(n, m);
    const std::size_t k = l->rooted.size();
    std::vector<std::vector<Vector>> values(k, std::vector<Vector>(k));
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b)
            values[a][b] = t->vector(UnrootedVector(inner_product(l->rooted[a], l->rooted[b])));
    HermitianForm form(l->group, GroupWithInvolution::trivial(t->group), std::move(values));
    auto u = universal_symmetric(form);

    const std::size_t gm = t->generator_count();
    IntMatrix mat(gm + k, ti->generator_count());
    for (std::size_t i = 0; i < gm; ++i) mat(i, ti->index(t->unrooted[i])) = 1;
    for (std::size_t a = 0; a < k; ++a) mat(gm + a, ti->index(InfTree(l->rooted[a]))) = 1;
    GroupHom to_tinf(u.target.me, ti->group, std::move(mat));

    UniversalTinf out{u.target.me, to_tinf};
    out.isomorphism = hom_is_isomorphism(to_tinf);
    out.p_square = equal_homs(compose(to_tinf, u.target.p), map_p(n, m, cache));
    out.h_square = equal_homs(compose(map_h(n, m, cache), to_tinf), u.target.h);
    out.same_invariants =
        u.target.me->rank() == ti->group->rank() && u.target.me->torsion() == ti->group->torsion();
    return out;
}

}  // namespace treeforms
