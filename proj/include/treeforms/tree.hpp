#pragma once

#include "treeforms/integer.hpp"

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace treeforms {

/// Leaf label, 1..m.
using Label = int;

enum class TreeKind { rooted, unrooted, inf };

std::string to_string(TreeKind kind);

/// Oriented, labeled, rooted unitrivalent tree stored as an ordered binary tree.
///
/// A node (first, second) is a trivalent vertex whose cyclic order is
/// (edge toward the root, first, second), so two rooted oriented trees are
/// isomorphic exactly when their encodings are equal. Nodes are shared and
/// immutable; comparison is by the printed form.
class RootedTree {
  public:
    static RootedTree leaf(Label label);
    static RootedTree node(const RootedTree& first, const RootedTree& second);

    bool is_leaf() const { return node_->label != 0; }
    Label label() const { return node_->label; }
    RootedTree first() const { return RootedTree(node_->first); }
    RootedTree second() const { return RootedTree(node_->second); }

    /// Number of trivalent vertices.
    std::size_t order() const { return node_->order; }
    const std::string& text() const { return node_->text; }
    Label max_label() const { return node_->max_label; }
    std::vector<Label> leaf_labels() const;

    friend bool operator==(const RootedTree& a, const RootedTree& b) {
        return a.node_ == b.node_ || a.text() == b.text();
    }
    friend std::strong_ordering operator<=>(const RootedTree& a, const RootedTree& b) {
        return a.text() <=> b.text();
    }

  private:
    struct Node {
        Label label = 0;
        std::shared_ptr<const Node> first, second;
        std::size_t order = 0;
        Label max_label = 0;
        std::string text;
    };
    explicit RootedTree(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

/// A rooted tree whose root carries the label infinity.
class InfTree {
  public:
    explicit InfTree(RootedTree body) : body_(std::move(body)) {}

    const RootedTree& body() const { return body_; }
    std::size_t order() const { return body_.order(); }
    std::string text() const { return "inf(" + body_.text() + ")"; }

    friend bool operator==(const InfTree& a, const InfTree& b) { return a.body_ == b.body_; }
    friend std::strong_ordering operator<=>(const InfTree& a, const InfTree& b) {
        return a.body_ <=> b.body_;
    }

  private:
    RootedTree body_;
};

/// Unrooted oriented tree, stored as its canonical split <I, J>: over every
/// edge, the pair with text(I) <= text(J) minimizing (text(I), text(J)).
class UnrootedTree {
  public:
    /// Glue along the root edges and canonicalize.
    static UnrootedTree from_split(const RootedTree& a, const RootedTree& b);

    const RootedTree& first() const { return first_; }
    const RootedTree& second() const { return second_; }
    std::size_t order() const { return first_.order() + second_.order(); }
    std::string text() const { return "<" + first_.text() + "," + second_.text() + ">"; }
    std::vector<Label> leaf_labels() const;

    friend bool operator==(const UnrootedTree& a, const UnrootedTree& b) {
        return a.first_ == b.first_ && a.second_ == b.second_;
    }
    friend std::strong_ordering operator<=>(const UnrootedTree& a, const UnrootedTree& b) {
        if (auto c = a.first_ <=> b.first_; c != 0) return c;
        return a.second_ <=> b.second_;
    }

  private:
    UnrootedTree(RootedTree a, RootedTree b) : first_(std::move(a)), second_(std::move(b)) {}
    RootedTree first_, second_;
};

using AnyTree = std::variant<RootedTree, UnrootedTree, InfTree>;

// ---- parsing and printing -------------------------------------------------

/// Parses `leaf | (r,r) | <r,r> | inf(r)`; whitespace is ignored. When
/// `max_label` is given, labels above it are rejected.
AnyTree parse_tree(std::string_view text, std::optional<Label> max_label = std::nullopt);
RootedTree parse_rooted(std::string_view text, std::optional<Label> max_label = std::nullopt);
UnrootedTree parse_unrooted(std::string_view text, std::optional<Label> max_label = std::nullopt);
InfTree parse_inf(std::string_view text, std::optional<Label> max_label = std::nullopt);

std::string print(const AnyTree& t);
std::size_t order(const AnyTree& t);

// ---- products --------------------------------------------------------------

RootedTree rooted_product(const RootedTree& a, const RootedTree& b);
UnrootedTree inner_product(const RootedTree& a, const RootedTree& b);
UnrootedTree canonical_unrooted(const RootedTree& a, const RootedTree& b);

/// One (I, J) per edge, each with inner_product(I, J) == t. The order is
/// deterministic: edges in the vertex numbering of the canonical split.
std::vector<std::pair<RootedTree, RootedTree>> splits(const UnrootedTree& t);

// ---- local moves -----------------------------------------------------------
//
// Trivalent vertices are numbered in preorder of the encoding (for an
// unrooted tree, preorder of first() then second()). Internal edges join two
// trivalent vertices and are numbered by scanning vertices in that order; for
// rooted and infinity trees the root edge is never internal.

std::size_t trivalent_count(const RootedTree& t);
std::size_t trivalent_count(const UnrootedTree& t);
std::size_t internal_edge_count(const RootedTree& t);
std::size_t internal_edge_count(const UnrootedTree& t);

/// Reverses the cyclic orientation at one trivalent vertex.
RootedTree as_variant(const RootedTree& t, std::size_t vertex);
UnrootedTree as_variant(const UnrootedTree& t, std::size_t vertex);
InfTree as_variant(const InfTree& t, std::size_t vertex);

/// Local IHX rewrite around an internal edge; the relation is i - h + x = 0
/// and `i` is the input tree itself.
template <class Tree>
struct IhxTriple {
    Tree i, h, x;
};

IhxTriple<RootedTree> ihx_triple(const RootedTree& t, std::size_t edge);
IhxTriple<UnrootedTree> ihx_triple(const UnrootedTree& t, std::size_t edge);
IhxTriple<InfTree> ihx_triple(const InfTree& t, std::size_t edge);

// ---- enumeration -----------------------------------------------------------

/// Default cap on the number of trees an enumeration may produce.
inline constexpr std::size_t kDefaultTreeCap = 20000;

std::vector<RootedTree> enumerate_rooted(std::size_t order, Label labels,
                                         std::size_t cap = kDefaultTreeCap);
std::vector<UnrootedTree> enumerate_unrooted(std::size_t order, Label labels,
                                             std::size_t cap = kDefaultTreeCap);
std::vector<InfTree> enumerate_inf(std::size_t order, Label labels,
                                   std::size_t cap = kDefaultTreeCap);
std::vector<AnyTree> enumerate_trees(TreeKind kind, std::size_t order, Label labels,
                                     std::size_t cap = kDefaultTreeCap);

// ---- formal linear combinations ---------------------------------------------

/// Formal Z-linear combination of trees; zero coefficients are never stored.
template <class Tree>
class TreeVector {
  public:
    using Map = std::map<Tree, Integer>;

    TreeVector() = default;
    TreeVector(const Tree& t, Integer c = 1) { add(t, std::move(c)); }

    void add(const Tree& t, const Integer& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.try_emplace(t, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }
    void add(const TreeVector& other, const Integer& c = 1) {
        for (const auto& [t, k] : other.terms_) add(t, k * c);
    }

    bool empty() const { return terms_.empty(); }
    const Map& terms() const { return terms_; }
    auto begin() const { return terms_.begin(); }
    auto end() const { return terms_.end(); }

    friend bool operator==(const TreeVector&, const TreeVector&) = default;

  private:
    Map terms_;
};

using RootedVector = TreeVector<RootedTree>;
using UnrootedVector = TreeVector<UnrootedTree>;

/// Bilinear extension of rooted_product.
RootedVector rooted_product(const RootedVector& a, const RootedVector& b);
/// Bilinear extension of inner_product.
UnrootedVector inner_product(const RootedVector& a, const RootedVector& b);

}  // namespace treeforms
