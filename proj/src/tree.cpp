#include "treeforms/tree.hpp"

#include "treeforms/errors.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace treeforms {

std::string to_string(TreeKind kind) {
    switch (kind) {
        case TreeKind::rooted: return "rooted";
        case TreeKind::unrooted: return "unrooted";
        case TreeKind::inf: return "inf";
    }
    return "?";
}

RootedTree RootedTree::leaf(Label label) {
    if (label < 1) throw InvalidInput("leaf label must be >= 1, got " + std::to_string(label));
    auto n = std::make_shared<Node>();
    n->label = label;
    n->max_label = label;
    n->text = std::to_string(label);
    return RootedTree(std::move(n));
}

RootedTree RootedTree::node(const RootedTree& first, const RootedTree& second) {
    auto n = std::make_shared<Node>();
    n->first = first.node_;
    n->second = second.node_;
    n->order = first.order() + second.order() + 1;
    n->max_label = std::max(first.max_label(), second.max_label());
    n->text.reserve(first.text().size() + second.text().size() + 3);
    n->text += '(';
    n->text += first.text();
    n->text += ',';
    n->text += second.text();
    n->text += ')';
    return RootedTree(std::move(n));
}

std::vector<Label> RootedTree::leaf_labels() const {
    if (is_leaf()) return {label()};
    auto a = first().leaf_labels();
    auto b = second().leaf_labels();
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

std::vector<Label> UnrootedTree::leaf_labels() const {
    auto a = first_.leaf_labels();
    auto b = second_.leaf_labels();
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

namespace {

constexpr Label kRootMark = -1;

// Explicit vertex/edge form of a tree. Trivalent vertices store their three
// neighbours in cyclic order; leaves store their single neighbour.
struct Graph {
    std::vector<Label> label;  // 0 marks a trivalent vertex
    std::vector<std::vector<int>> adj;
    std::vector<int> trivalent;  // preorder

    int add_vertex(Label l) {
        label.push_back(l);
        adj.emplace_back();
        return static_cast<int>(label.size()) - 1;
    }
    bool is_trivalent(int v) const { return label[v] == 0; }
};

int build(Graph& g, const RootedTree& t, int parent) {
    if (t.is_leaf()) {
        int v = g.add_vertex(t.label());
        g.adj[v] = {parent};
        return v;
    }
    int v = g.add_vertex(0);
    g.trivalent.push_back(v);
    g.adj[v] = {parent, -1, -1};
    int a = build(g, t.first(), v);
    int b = build(g, t.second(), v);
    g.adj[v][1] = a;
    g.adj[v][2] = b;
    return v;
}

Graph rooted_graph(const RootedTree& t) {
    Graph g;
    int r = g.add_vertex(kRootMark);
    int top = build(g, t, r);
    g.adj[r] = {top};
    return g;
}

Graph unrooted_graph(const RootedTree& a, const RootedTree& b) {
    Graph g;
    int ta = build(g, a, -1);
    int tb = build(g, b, ta);
    g.adj[ta][0] = tb;
    return g;
}

// The rooted tree on v's side of the edge (from, v).
RootedTree read(const Graph& g, int v, int from) {
    if (!g.is_trivalent(v)) {
        if (g.label[v] == kRootMark) throw std::logic_error("tree read crossed the root");
        return RootedTree::leaf(g.label[v]);
    }
    const auto& n = g.adj[v];
    int k = 0;
    while (n[k] != from) ++k;
    return RootedTree::node(read(g, n[(k + 1) % 3], v), read(g, n[(k + 2) % 3], v));
}

RootedTree read_rooted(const Graph& g) { return read(g, g.adj[0][0], 0); }

std::vector<std::pair<int, int>> all_edges(const Graph& g) {
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < static_cast<int>(g.label.size()); ++u)
        for (int v : g.adj[u])
            if (u < v) edges.emplace_back(u, v);
    return edges;
}

std::pair<RootedTree, RootedTree> canonical_pair(const Graph& g) {
    std::optional<std::pair<RootedTree, RootedTree>> best;
    for (auto [u, v] : all_edges(g)) {
        RootedTree x = read(g, u, v);
        RootedTree y = read(g, v, u);
        if (y < x) std::swap(x, y);
        if (!best || x < best->first || (x == best->first && y < best->second))
            best.emplace(std::move(x), std::move(y));
    }
    return *best;
}

std::vector<std::pair<int, int>> internal_edges(const Graph& g) {
    std::vector<int> position(g.label.size(), -1);
    for (std::size_t i = 0; i < g.trivalent.size(); ++i) position[g.trivalent[i]] = static_cast<int>(i);
    std::vector<std::pair<int, int>> edges;
    for (int u : g.trivalent)
        for (int w : g.adj[u])
            if (w >= 0 && g.is_trivalent(w) && position[w] > position[u]) edges.emplace_back(u, w);
    return edges;
}

void reverse_vertex(Graph& g, std::size_t vertex) {
    if (vertex >= g.trivalent.size())
        throw InvalidInput("invalid vertex id " + std::to_string(vertex) + " (tree has " +
                           std::to_string(g.trivalent.size()) + " trivalent vertices)");
    auto& n = g.adj[g.trivalent[vertex]];
    std::swap(n[1], n[2]);
}

void rotate_to(std::vector<int>& cyc, int first) {
    auto it = std::find(cyc.begin(), cyc.end(), first);
    std::rotate(cyc.begin(), it, cyc.end());
}

void repoint(Graph& g, int vertex, int from, int to) {
    auto& n = g.adj[vertex];
    *std::find(n.begin(), n.end(), from) = to;
}

// Returns (H, X) graphs for the IHX move at an internal edge. With the cyclic
// orders u = (w, a, b) and w = (u, c, d), reading from a gives
//   I = (S,(P,Q)),  H = ((S,P),Q),  X = (P,(Q,S))
// for S, P, Q the subtrees at b, c, d; the Jacobi identity gives I - H + X = 0.
std::pair<Graph, Graph> ihx_graphs(const Graph& g, std::size_t edge) {
    auto edges = internal_edges(g);
    if (edge >= edges.size())
        throw InvalidInput("edge " + std::to_string(edge) + " is not internal (tree has " +
                           std::to_string(edges.size()) + " internal edges)");
    auto [u, w] = edges[edge];
    Graph base = g;
    rotate_to(base.adj[u], w);
    rotate_to(base.adj[w], u);
    int a = base.adj[u][1], b = base.adj[u][2];
    int c = base.adj[w][1], d = base.adj[w][2];

    Graph h = base;
    h.adj[u] = {a, w, d};
    h.adj[w] = {u, b, c};
    repoint(h, b, u, w);
    repoint(h, d, w, u);

    Graph x = base;
    x.adj[u] = {a, c, w};
    x.adj[w] = {u, d, b};
    repoint(x, c, w, u);
    repoint(x, b, u, w);
    return {std::move(h), std::move(x)};
}

UnrootedTree unrooted_from_graph(const Graph& g);

}  // namespace

UnrootedTree UnrootedTree::from_split(const RootedTree& a, const RootedTree& b) {
    auto [x, y] = canonical_pair(unrooted_graph(a, b));
    return UnrootedTree(std::move(x), std::move(y));
}

namespace {
UnrootedTree unrooted_from_graph(const Graph& g) {
    auto [x, y] = canonical_pair(g);
    return UnrootedTree::from_split(x, y);
}
}  // namespace

// ---- parsing ---------------------------------------------------------------

namespace {

class Parser {
  public:
    Parser(std::string_view s, std::optional<Label> max_label) : s_(s), max_(max_label) {}

    AnyTree any() {
        skip();
        AnyTree out = [&]() -> AnyTree {
            if (peek() == '<') {
                ++pos_;
                RootedTree a = rooted();
                expect(',');
                RootedTree b = rooted();
                expect('>');
                return UnrootedTree::from_split(a, b);
            }
            if (s_.substr(pos_, 3) == "inf") {
                pos_ += 3;
                expect('(');
                RootedTree body = rooted();
                expect(')');
                return InfTree(body);
            }
            return rooted();
        }();
        skip();
        if (pos_ != s_.size()) throw ParseError("unexpected trailing input", pos_);
        return out;
    }

  private:
    RootedTree rooted() {
        skip();
        if (peek() == '(') {
            ++pos_;
            RootedTree a = rooted();
            expect(',');
            RootedTree b = rooted();
            expect(')');
            return RootedTree::node(a, b);
        }
        return leaf();
    }

    RootedTree leaf() {
        skip();
        std::size_t start = pos_;
        if (!std::isdigit(static_cast<unsigned char>(peek())))
            throw ParseError(peek() == '\0' ? "unexpected end of input" : "expected a label", pos_);
        long long value = 0;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
            value = value * 10 + (s_[pos_] - '0');
            if (value > 1000000) throw ParseError("label too large", start);
            ++pos_;
        }
        if (value < 1) throw ParseError("labels start at 1", start);
        if (max_ && value > *max_)
            throw ParseError("label " + std::to_string(value) + " out of range 1.." + std::to_string(*max_),
                             start);
        return RootedTree::leaf(static_cast<Label>(value));
    }

    void expect(char c) {
        skip();
        if (peek() != c) throw ParseError(std::string("expected '") + c + "'", pos_);
        ++pos_;
    }
    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    std::string_view s_;
    std::optional<Label> max_;
    std::size_t pos_ = 0;
};

}  // namespace

AnyTree parse_tree(std::string_view text, std::optional<Label> max_label) {
    return Parser(text, max_label).any();
}

template <class T>
static T parse_as(std::string_view text, std::optional<Label> max_label, const char* what) {
    AnyTree t = parse_tree(text, max_label);
    if (auto* p = std::get_if<T>(&t)) return *p;
    throw InvalidInput(std::string("expected a ") + what + " tree, got '" + std::string(text) + "'");
}

RootedTree parse_rooted(std::string_view text, std::optional<Label> max_label) {
    return parse_as<RootedTree>(text, max_label, "rooted");
}
UnrootedTree parse_unrooted(std::string_view text, std::optional<Label> max_label) {
    return parse_as<UnrootedTree>(text, max_label, "unrooted");
}
InfTree parse_inf(std::string_view text, std::optional<Label> max_label) {
    return parse_as<InfTree>(text, max_label, "infinity");
}

std::string print(const AnyTree& t) {
    return std::visit([](const auto& x) -> std::string { return x.text(); }, t);
}

std::size_t order(const AnyTree& t) {
    return std::visit([](const auto& x) { return x.order(); }, t);
}

// ---- products ----------------------------------------------------------------

RootedTree rooted_product(const RootedTree& a, const RootedTree& b) { return RootedTree::node(a, b); }

UnrootedTree inner_product(const RootedTree& a, const RootedTree& b) { return UnrootedTree::from_split(a, b); }

UnrootedTree canonical_unrooted(const RootedTree& a, const RootedTree& b) { return UnrootedTree::from_split(a, b); }

std::vector<std::pair<RootedTree, RootedTree>> splits(const UnrootedTree& t) {
    Graph g = unrooted_graph(t.first(), t.second());
    std::vector<std::pair<RootedTree, RootedTree>> out;
    for (auto [u, v] : all_edges(g)) out.emplace_back(read(g, u, v), read(g, v, u));
    return out;
}

// ---- local moves -------------------------------------------------------------

std::size_t trivalent_count(const RootedTree& t) { return t.order(); }
std::size_t trivalent_count(const UnrootedTree& t) { return t.order(); }

std::size_t internal_edge_count(const RootedTree& t) { return internal_edges(rooted_graph(t)).size(); }
std::size_t internal_edge_count(const UnrootedTree& t) {
    return internal_edges(unrooted_graph(t.first(), t.second())).size();
}

RootedTree as_variant(const RootedTree& t, std::size_t vertex) {
    Graph g = rooted_graph(t);
    reverse_vertex(g, vertex);
    return read_rooted(g);
}

UnrootedTree as_variant(const UnrootedTree& t, std::size_t vertex) {
    Graph g = unrooted_graph(t.first(), t.second());
    reverse_vertex(g, vertex);
    return unrooted_from_graph(g);
}

InfTree as_variant(const InfTree& t, std::size_t vertex) { return InfTree(as_variant(t.body(), vertex)); }

IhxTriple<RootedTree> ihx_triple(const RootedTree& t, std::size_t edge) {
    auto [h, x] = ihx_graphs(rooted_graph(t), edge);
    return {t, read_rooted(h), read_rooted(x)};
}

IhxTriple<UnrootedTree> ihx_triple(const UnrootedTree& t, std::size_t edge) {
    auto [h, x] = ihx_graphs(unrooted_graph(t.first(), t.second()), edge);
    return {t, unrooted_from_graph(h), unrooted_from_graph(x)};
}

IhxTriple<InfTree> ihx_triple(const InfTree& t, std::size_t edge) {
    auto r = ihx_triple(t.body(), edge);
    return {InfTree(r.i), InfTree(r.h), InfTree(r.x)};
}

// ---- enumeration ---------------------------------------------------------------

namespace {

// Catalan(n) * m^(n+1), saturating at cap + 1.
std::size_t rooted_count(std::size_t n, Label m, std::size_t cap) {
    Integer catalan = 1;
    for (std::size_t k = 0; k < n; ++k) catalan = catalan * 2 * (2 * k + 1) / (k + 2);
    Integer total = catalan * boost::multiprecision::pow(Integer(m), static_cast<unsigned>(n + 1));
    return total > cap ? cap + 1 : static_cast<std::size_t>(total);
}

void check_cap(std::size_t count, std::size_t cap, const std::string& what) {
    if (count > cap)
        throw ResourceLimit("enumerating " + what + " exceeds the generator cap of " + std::to_string(cap));
}

}  // namespace

std::vector<RootedTree> enumerate_rooted(std::size_t order, Label labels, std::size_t cap) {
    if (labels < 1) throw InvalidInput("label count must be >= 1");
    check_cap(rooted_count(order, labels, cap), cap, "rooted trees of order " + std::to_string(order));
    std::vector<std::vector<RootedTree>> by_order(order + 1);
    for (Label i = 1; i <= labels; ++i) by_order[0].push_back(RootedTree::leaf(i));
    for (std::size_t n = 1; n <= order; ++n)
        for (std::size_t k = 0; k < n; ++k)
            for (const auto& a : by_order[k])
                for (const auto& b : by_order[n - 1 - k]) by_order[n].push_back(RootedTree::node(a, b));
    auto out = std::move(by_order[order]);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<UnrootedTree> enumerate_unrooted(std::size_t order, Label labels, std::size_t cap) {
    // Every unrooted tree has a leaf edge, so <leaf, J> with J of full order
    // reaches every isomorphism class.
    auto bodies = enumerate_rooted(order, labels, cap);
    std::set<UnrootedTree> seen;
    for (Label i = 1; i <= labels; ++i)
        for (const auto& b : bodies) seen.insert(UnrootedTree::from_split(RootedTree::leaf(i), b));
    check_cap(seen.size(), cap, "unrooted trees of order " + std::to_string(order));
    return {seen.begin(), seen.end()};
}

std::vector<InfTree> enumerate_inf(std::size_t order, Label labels, std::size_t cap) {
    std::vector<InfTree> out;
    for (auto& b : enumerate_rooted(order, labels, cap)) out.emplace_back(std::move(b));
    return out;
}

std::vector<AnyTree> enumerate_trees(TreeKind kind, std::size_t order, Label labels, std::size_t cap) {
    std::vector<AnyTree> out;
    auto append = [&](auto&& v) {
        for (auto& t : v) out.emplace_back(std::move(t));
    };
    switch (kind) {
        case TreeKind::rooted: append(enumerate_rooted(order, labels, cap)); break;
        case TreeKind::unrooted: append(enumerate_unrooted(order, labels, cap)); break;
        case TreeKind::inf: append(enumerate_inf(order, labels, cap)); break;
    }
    return out;
}

// ---- formal combinations ---------------------------------------------------------

RootedVector rooted_product(const RootedVector& a, const RootedVector& b) {
    RootedVector out;
    for (const auto& [x, c] : a)
        for (const auto& [y, d] : b) out.add(RootedTree::node(x, y), c * d);
    return out;
}

UnrootedVector inner_product(const RootedVector& a, const RootedVector& b) {
    UnrootedVector out;
    for (const auto& [x, c] : a)
        for (const auto& [y, d] : b) out.add(UnrootedTree::from_split(x, y), c * d);
    return out;
}

}  // namespace treeforms
