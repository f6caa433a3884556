#pragma once

#include "treeforms/abelian.hpp"
#include "treeforms/tree.hpp"

#include <json.hpp>

#include <cstddef>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

namespace treeforms {

enum class GroupKind { L, T, Tinf };

std::string to_string(GroupKind kind);
GroupKind group_kind_from_string(const std::string& s);

/// One of the graded tree groups, presented on its tree generators.
///
/// L(n, m): rooted trees of order n. T(n, m): unrooted trees of order n.
/// Tinf(n, m): unrooted trees of order 2n, then infinity trees of order n.
struct TreeGroup {
    GroupKind kind;
    std::size_t order;
    Label labels;
    GroupPtr group;
    std::vector<RootedTree> rooted;      // L generators, or the infinity bodies of Tinf
    std::vector<UnrootedTree> unrooted;  // T generators, or the first block of Tinf
    /// Short tag per relation row ("AS", "IHX", "sym", "twist", "tIHX").
    std::vector<std::string> relation_kinds;

    std::size_t generator_count() const { return group->generator_count(); }

    /// Column of a generator; throws InvalidInput if the tree is not one.
    std::size_t index(const RootedTree& t) const;    // L
    std::size_t index(const UnrootedTree& t) const;  // T, Tinf
    std::size_t index(const InfTree& t) const;       // Tinf

    Vector vector(const RootedVector& v) const;    // L
    Vector vector(const UnrootedVector& v) const;  // T, Tinf
    Vector inf_vector(const RootedTree& body, const Integer& c = 1) const;  // Tinf

    /// {"kind", "order", "labels", "rank", "torsion", "generators"}
    nlohmann::json to_json() const;

  private:
    std::size_t lookup(const std::string& name) const;
};

using TreeGroupPtr = std::shared_ptr<const TreeGroup>;

struct TreeGroupLimits {
    std::size_t max_generators = kDefaultTreeCap;
    MatrixLimits matrix;
};

TreeGroupPtr build_L(std::size_t n, Label m, const TreeGroupLimits& limits = {});
TreeGroupPtr build_T(std::size_t n, Label m, const TreeGroupLimits& limits = {});
TreeGroupPtr build_Tinf(std::size_t n, Label m, const TreeGroupLimits& limits = {});
TreeGroupPtr build_tree_group(GroupKind kind, std::size_t n, Label m, const TreeGroupLimits& limits = {});

/// Memoizes built groups; safe to share between threads.
class TreeGroupCache {
  public:
    explicit TreeGroupCache(TreeGroupLimits limits = {}) : limits_(limits) {}
    TreeGroupPtr get(GroupKind kind, std::size_t n, Label m);
    TreeGroupPtr L(std::size_t n, Label m) { return get(GroupKind::L, n, m); }
    TreeGroupPtr T(std::size_t n, Label m) { return get(GroupKind::T, n, m); }
    TreeGroupPtr Tinf(std::size_t n, Label m) { return get(GroupKind::Tinf, n, m); }
    const TreeGroupLimits& limits() const { return limits_; }

  private:
    TreeGroupLimits limits_;
    std::mutex mutex_;
    std::map<std::tuple<GroupKind, std::size_t, Label>, std::shared_future<TreeGroupPtr>> groups_;
};

// ---- elements ----------------------------------------------------------------

/// An element of some L(n, m), kept as a representative combination.
struct LieElement {
    TreeGroupPtr home;
    RootedVector value;
    Vector coordinates() const { return home->vector(value); }
};

/// An element of some T(n, m).
struct TreeElement {
    TreeGroupPtr home;
    UnrootedVector value;
    Vector coordinates() const { return home->vector(value); }
};

LieElement lie_element(TreeGroupPtr home, const RootedVector& v);
bool equal(const LieElement& a, const LieElement& b);
bool equal(const TreeElement& a, const TreeElement& b);
bool is_zero(const LieElement& a);
bool is_zero(const TreeElement& a);

/// Bilinear extension of the rooted product, landing in L(n1 + n2 + 1, m).
LieElement bracket(const LieElement& x, const LieElement& y, TreeGroupCache& cache);
/// Bilinear extension of the inner product, landing in T(n1 + n2, m). The
/// orders may differ.
TreeElement pairing(const LieElement& x, const LieElement& y, TreeGroupCache& cache);

// ---- universality of the inner product ------------------------------------------

/// Images of the labels 1..m: combinations of rooted trees of one common
/// order d over labels 1..target_labels.
struct LabelMap {
    Label source_labels;
    Label target_labels;
    std::vector<RootedVector> images;
    std::size_t degree() const;
};

/// Extends a label map to rooted trees through the rooted product.
RootedVector extend(const LabelMap& alpha, const RootedTree& t);

/// Psi(t) = <alpha(X), alpha(Y)> for t = <X, Y>, computed on the canonical
/// split of each generator of T(n, m). The target is T(n', m') with
/// n' = (n + 2)(d + 1) - 2. Throws AxiomViolation if the target pairing fails
/// a symmetry or invariance probe on the images.
GroupHom psi(const LabelMap& alpha, std::size_t n, TreeGroupCache& cache);

/// Psi evaluated through every split of t, reduced in the target.
std::vector<ElementNF> psi_by_splits(const LabelMap& alpha, const UnrootedTree& t, TreeGroupCache& cache);

// ---- maps of the exact sequence -----------------------------------------------------

/// T(2n) -> Tinf(n): t -> t.
GroupHom map_p(std::size_t n, Label m, TreeGroupCache& cache);
/// Tinf(n) -> T(2n): t -> 2t, J^inf -> <J, J>.
GroupHom map_h(std::size_t n, Label m, TreeGroupCache& cache);
/// J -> J^inf on generators. q is a quadratic refinement, not a
/// homomorphism on L(n), so the source is free on the rooted generators.
GroupHom map_q(std::size_t n, Label m, TreeGroupCache& cache);
/// Tinf(n) -> Z2 (x) L(n): t -> 0, J^inf -> 1 (x) J.
GroupHom map_bound(std::size_t n, Label m, TreeGroupCache& cache);

struct ExactReport {
    bool p_injective = false;
    ExactnessReport middle;
    bool bound_surjective = false;
    bool pass() const { return p_injective && middle.exact && bound_surjective; }
    nlohmann::json to_json() const;
};

/// 0 -> T(2n) -p-> Tinf(n) -bound-> Z2 (x) L(n) -> 0.
ExactReport verify_exact(std::size_t n, Label m, TreeGroupCache& cache);

struct UniversalTinf {
    /// Universal symmetric refinement group of the pairing L(n) x L(n) -> T(2n).
    GroupPtr universal;
    /// universal -> Tinf(n), identity on the shared generator layout.
    GroupHom to_tinf;
    bool isomorphism = false;
    bool p_square = false;
    bool h_square = false;
    bool same_invariants = false;
    bool pass() const { return isomorphism && p_square && h_square && same_invariants; }
    nlohmann::json to_json() const;
};

UniversalTinf build_Tinf_universal(std::size_t n, Label m, TreeGroupCache& cache);

}  // namespace treeforms
