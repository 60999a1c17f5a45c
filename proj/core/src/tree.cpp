#include "mut/tree.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <set>

#include "mut/error.hpp"

namespace mut {

// ---------------------------------------------------------------------------
// RootedTree

RootedTree RootedTree::single_node(bool ordered) {
    TreeBuilder b;
    b.add_root();
    return std::move(b).build(ordered);
}

RootedTree RootedTree::from_parents(std::span<const NodeId> parents, bool ordered) {
    RootedTree t;
    t.ordered_ = ordered;
    t.parent_.assign(parents.begin(), parents.end());
    t.children_.resize(parents.size());
    std::size_t roots = 0;
    for (NodeId v = 0; v < parents.size(); ++v) {
        if (parents[v] == kNoNode) {
            ++roots;
        } else {
            if (parents[v] >= parents.size() || parents[v] == v) {
                throw ArgumentError("from_parents: bad parent of node " + std::to_string(v));
            }
            t.children_[parents[v]].push_back(v);
        }
    }
    if (!parents.empty() && roots != 1) {
        throw ArgumentError("from_parents: expected exactly one root");
    }
    // connectivity / acyclicity: every node must be reached from the root
    if (!parents.empty() && t.preorder().size() != parents.size()) {
        throw ArgumentError("from_parents: parent links contain a cycle");
    }
    return t;
}

void RootedTree::check(NodeId v) const {
    if (v >= parent_.size()) {
        throw ArgumentError("node id " + std::to_string(v) + " out of range for tree of size " +
                            std::to_string(parent_.size()));
    }
}

NodeId RootedTree::root() const {
    if (empty()) throw ArgumentError("empty tree has no root");
    // builders and from_parents never place the root anywhere but first for
    // built trees; from_parents may not, so search.
    if (parent_[0] == kNoNode) return 0;
    return static_cast<NodeId>(std::find(parent_.begin(), parent_.end(), kNoNode) - parent_.begin());
}

std::optional<NodeId> RootedTree::parent(NodeId v) const {
    check(v);
    if (parent_[v] == kNoNode) return std::nullopt;
    return parent_[v];
}

std::span<const NodeId> RootedTree::children(NodeId v) const {
    check(v);
    return children_[v];
}

std::size_t RootedTree::max_degree() const {
    std::size_t d = 0;
    for (const auto& c : children_) d = std::max(d, c.size());
    return d;
}

std::size_t RootedTree::leaf_count() const {
    return static_cast<std::size_t>(
        std::count_if(children_.begin(), children_.end(), [](const auto& c) { return c.empty(); }));
}

std::vector<NodeId> RootedTree::preorder() const {
    std::vector<NodeId> order;
    if (empty()) return order;
    order.reserve(size());
    std::vector<NodeId> stack{root()};
    while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        order.push_back(v);
        const auto& ch = children_[v];
        for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
        if (order.size() > size()) break;  // cycle guard for from_parents
    }
    return order;
}

std::vector<NodeId> RootedTree::postorder() const {
    auto order = preorder();
    // reverse preorder visits every child before its parent
    std::reverse(order.begin(), order.end());
    return order;
}

std::vector<std::size_t> RootedTree::depths() const {
    std::vector<std::size_t> d(size(), 0);
    for (NodeId v : preorder()) {
        if (parent_[v] != kNoNode) d[v] = d[parent_[v]] + 1;
    }
    return d;
}

RootedTree RootedTree::preorder_relabeled(std::vector<NodeId>* old_to_new) const {
    auto order = preorder();
    std::vector<NodeId> map(size());
    for (NodeId i = 0; i < order.size(); ++i) map[order[i]] = i;
    TreeBuilder b;
    for (NodeId v : order) {
        if (parent_[v] == kNoNode) {
            b.add_root();
        } else {
            b.add_child(map[parent_[v]]);
        }
    }
    if (old_to_new) *old_to_new = std::move(map);
    return std::move(b).build(ordered_);
}

RootedTree RootedTree::subtree(NodeId v, std::vector<NodeId>* new_to_old) const {
    check(v);
    TreeBuilder b;
    std::vector<NodeId> back;
    std::vector<std::pair<NodeId, NodeId>> stack{{v, kNoNode}};
    while (!stack.empty()) {
        auto [x, p] = stack.back();
        stack.pop_back();
        NodeId id = p == kNoNode ? b.add_root() : b.add_child(p);
        back.push_back(x);
        const auto& ch = children_[x];
        for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.emplace_back(*it, id);
    }
    if (new_to_old) *new_to_old = std::move(back);
    return std::move(b).build(ordered_);
}

RootedTree RootedTree::with_ordered(bool ordered) const {
    RootedTree t = *this;
    t.ordered_ = ordered;
    return t;
}

NodeId TreeBuilder::add_root() {
    if (!tree_.parent_.empty()) throw ArgumentError("TreeBuilder: root already added");
    tree_.parent_.push_back(kNoNode);
    tree_.children_.emplace_back();
    return 0;
}

NodeId TreeBuilder::add_child(NodeId parent) {
    tree_.check(parent);
    auto id = static_cast<NodeId>(tree_.parent_.size());
    tree_.parent_.push_back(parent);
    tree_.children_.emplace_back();
    tree_.children_[parent].push_back(id);
    return id;
}

RootedTree TreeBuilder::build(bool ordered) && {
    tree_.ordered_ = ordered;
    return std::move(tree_);
}

// ---------------------------------------------------------------------------
// text format

RootedTree parse_tree(std::string_view text, bool ordered) {
    if (text.empty()) throw ParseError("empty input", 0);
    TreeBuilder b;
    std::vector<NodeId> open;
    bool closed_root = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char ch = text[i];
        if (ch == '(') {
            if (closed_root) throw ParseError("text after the root closed", i);
            open.push_back(open.empty() ? b.add_root() : b.add_child(open.back()));
        } else if (ch == ')') {
            if (open.empty()) throw ParseError("unbalanced ')'", i);
            open.pop_back();
            if (open.empty()) closed_root = true;
        } else {
            throw ParseError(std::string("unexpected character '") + ch + "'", i);
        }
    }
    if (!open.empty()) throw ParseError("unclosed '('", text.size());
    return std::move(b).build(ordered);
}

namespace {

// Canonical strings of every subtree, children sorted.
std::vector<std::string> all_canonical(const RootedTree& t) {
    std::vector<std::string> form(t.size());
    for (NodeId v : t.postorder()) {
        std::vector<const std::string*> parts;
        for (NodeId c : t.children(v)) parts.push_back(&form[c]);
        std::sort(parts.begin(), parts.end(), [](auto* a, auto* b) { return *a < *b; });
        std::string s = "(";
        for (auto* p : parts) {
            s += *p;
        }
        s += ')';
        form[v] = std::move(s);
        for (NodeId c : t.children(v)) {
            std::string().swap(form[c]);
        }
    }
    return form;
}

std::string ordered_form(const RootedTree& t, NodeId v) {
    std::string s;
    // iterative to survive deep paths
    std::vector<std::pair<NodeId, std::size_t>> stack{{v, 0}};
    s += '(';
    while (!stack.empty()) {
        auto& [x, i] = stack.back();
        auto ch = t.children(x);
        if (i < ch.size()) {
            NodeId c = ch[i++];
            s += '(';
            stack.emplace_back(c, 0);
        } else {
            s += ')';
            stack.pop_back();
        }
    }
    return s;
}

}  // namespace

std::string canonical_form(const RootedTree& t, NodeId v) {
    if (t.ordered()) return ordered_form(t, v);
    std::vector<NodeId> back;
    RootedTree sub = t.subtree(v, &back);
    return all_canonical(sub)[sub.root()];
}

std::string canonical_form(const RootedTree& t) {
    if (t.empty()) return {};
    if (t.ordered()) return ordered_form(t, t.root());
    return all_canonical(t)[t.root()];
}

std::string serialize_tree(const RootedTree& t) {
    if (t.empty()) throw ArgumentError("serialize_tree: empty tree");
    return canonical_form(t);
}

bool isomorphic(const RootedTree& a, const RootedTree& b) {
    if (a.size() != b.size()) return false;
    if (a.empty()) return true;
    return canonical_form(a) == canonical_form(b);
}

std::vector<std::size_t> subtree_sizes(const RootedTree& t) {
    std::vector<std::size_t> sz(t.size(), 1);
    for (NodeId v : t.postorder()) {
        if (auto p = t.parent(v)) sz[*p] += sz[v];
    }
    return sz;
}

bool is_ancestor(const RootedTree& t, NodeId ancestor, NodeId v) {
    if (!t.valid(ancestor) || !t.valid(v)) throw ArgumentError("is_ancestor: invalid node");
    for (std::optional<NodeId> x = v; x; x = t.parent(*x)) {
        if (*x == ancestor) return true;
    }
    return false;
}

NodeId nca(const RootedTree& t, NodeId u, NodeId v) {
    if (!t.valid(u) || !t.valid(v)) throw ArgumentError("nca: invalid node id");
    auto depth_of = [&](NodeId x) {
        std::size_t d = 0;
        for (auto p = t.parent(x); p; p = t.parent(*p)) ++d;
        return d;
    };
    std::size_t du = depth_of(u), dv = depth_of(v);
    while (du > dv) { u = *t.parent(u); --du; }
    while (dv > du) { v = *t.parent(v); --dv; }
    while (u != v) {
        u = *t.parent(u);
        v = *t.parent(v);
    }
    return u;
}

// ---------------------------------------------------------------------------
// NcaIndex

NcaIndex::NcaIndex(const RootedTree& t) {
    const std::size_t n = t.size();
    first_.assign(n, 0);
    tin_.assign(n, 0);
    tout_.assign(n, 0);
    depth_.assign(n, 0);
    if (n == 0) return;
    euler_.reserve(2 * n);
    std::uint32_t clock = 0;
    std::vector<std::pair<NodeId, std::size_t>> stack{{t.root(), 0}};
    tin_[t.root()] = clock++;
    first_[t.root()] = 0;
    euler_.push_back(t.root());
    while (!stack.empty()) {
        auto& [v, i] = stack.back();
        auto ch = t.children(v);
        if (i < ch.size()) {
            NodeId c = ch[i++];
            depth_[c] = depth_[v] + 1;
            tin_[c] = clock++;
            first_[c] = static_cast<std::uint32_t>(euler_.size());
            euler_.push_back(c);
            stack.emplace_back(c, 0);
        } else {
            tout_[v] = clock++;
            stack.pop_back();
            if (!stack.empty()) euler_.push_back(stack.back().first);
        }
    }
    const std::size_t m = euler_.size();
    const std::size_t levels = std::bit_width(m);
    table_.resize(levels);
    table_[0] = euler_;
    for (std::size_t k = 1; k < levels; ++k) {
        const std::size_t half = std::size_t{1} << (k - 1);
        const std::size_t len = m - (std::size_t{1} << k) + 1;
        table_[k].resize(len);
        for (std::size_t i = 0; i < len; ++i) {
            NodeId a = table_[k - 1][i], b = table_[k - 1][i + half];
            table_[k][i] = depth_[a] <= depth_[b] ? a : b;
        }
    }
}

NodeId NcaIndex::query(NodeId u, NodeId v) const {
    if (u >= first_.size() || v >= first_.size()) throw ArgumentError("NcaIndex: invalid node id");
    std::size_t l = first_[u], r = first_[v];
    if (l > r) std::swap(l, r);
    const std::size_t k = std::bit_width(r - l + 1) - 1;
    NodeId a = table_[k][l], b = table_[k][r + 1 - (std::size_t{1} << k)];
    return depth_[a] <= depth_[b] ? a : b;
}

// ---------------------------------------------------------------------------
// enumeration

namespace {

// Canonical strings of all classes, grouped by weight (node count or leaves).
using Classes = std::vector<std::vector<std::string>>;

// Emit every multiset of classes whose weights sum to `total`, using between
// min_parts and max_parts parts. Parts are chosen in non-increasing
// (weight, index) order so each multiset appears once.
void multisets(const Classes& classes, std::size_t total, std::size_t min_parts,
               std::size_t max_parts, std::size_t max_w, std::size_t max_i,
               std::vector<const std::string*>& parts,
               const std::function<void(const std::vector<const std::string*>&)>& emit) {
    if (total == 0) {
        if (parts.size() >= min_parts) emit(parts);
        return;
    }
    if (parts.size() == max_parts) return;
    for (std::size_t w = std::min(total, max_w); w >= 1; --w) {
        const auto& list = classes[w];
        std::size_t top = (w == max_w) ? std::min(max_i + 1, list.size()) : list.size();
        for (std::size_t i = 0; i < top; ++i) {
            parts.push_back(&list[i]);
            multisets(classes, total - w, min_parts, max_parts, w, i, parts, emit);
            parts.pop_back();
        }
    }
}

std::string wrap(std::vector<const std::string*> parts) {
    std::sort(parts.begin(), parts.end(), [](auto* a, auto* b) { return *a < *b; });
    std::string s = "(";
    for (auto* p : parts) s += *p;
    s += ')';
    return s;
}

}  // namespace

std::vector<RootedTree> enumerate_trees(std::size_t n, std::optional<std::size_t> max_degree) {
    if (n == 0) throw ArgumentError("enumerate_trees: n must be >= 1");
    const std::size_t deg = max_degree.value_or(n);
    Classes classes(n + 1);
    classes[1] = {"()"};
    for (std::size_t m = 2; m <= n; ++m) {
        std::set<std::string> seen;
        std::vector<const std::string*> parts;
        multisets(classes, m - 1, 1, deg, m - 1, classes[m - 1].size(), parts,
                  [&](const auto& p) { seen.insert(wrap(p)); });
        classes[m].assign(seen.begin(), seen.end());
    }
    std::vector<RootedTree> out;
    out.reserve(classes[n].size());
    for (const auto& s : classes[n]) out.push_back(parse_tree(s));
    return out;
}

std::vector<RootedTree> enumerate_series_reduced(std::size_t leaves,
                                                 std::optional<std::size_t> max_degree) {
    if (leaves == 0) throw ArgumentError("enumerate_series_reduced: leaves must be >= 1");
    const std::size_t deg = max_degree.value_or(leaves);
    Classes classes(leaves + 1);
    classes[1] = {"()"};
    for (std::size_t m = 2; m <= leaves; ++m) {
        std::set<std::string> seen;
        std::vector<const std::string*> parts;
        multisets(classes, m, 2, deg, m - 1, classes[m - 1].size(), parts,
                  [&](const auto& p) { seen.insert(wrap(p)); });
        classes[m].assign(seen.begin(), seen.end());
    }
    std::vector<RootedTree> out;
    for (const auto& s : classes[leaves]) out.push_back(parse_tree(s));
    return out;
}

std::vector<RootedTree> enumerate_ordered_trees(std::size_t n, std::size_t max_degree) {
    if (n == 0) throw ArgumentError("enumerate_ordered_trees: n must be >= 1");
    std::vector<std::vector<std::string>> forms(n + 1);
    forms[1] = {"()"};
    for (std::size_t m = 2; m <= n; ++m) {
        // ordered sequences of subtrees with total size m - 1
        std::function<void(std::size_t, std::size_t, std::string&)> rec =
            [&](std::size_t remaining, std::size_t used, std::string& acc) {
                if (remaining == 0) {
                    forms[m].push_back("(" + acc + ")");
                    return;
                }
                if (used == max_degree) return;
                for (std::size_t w = 1; w <= remaining; ++w) {
                    for (const auto& f : forms[w]) {
                        std::size_t keep = acc.size();
                        acc += f;
                        rec(remaining - w, used + 1, acc);
                        acc.resize(keep);
                    }
                }
            };
        std::string acc;
        rec(m - 1, 0, acc);
    }
    std::vector<RootedTree> out;
    for (const auto& s : forms[n]) out.push_back(parse_tree(s, true));
    return out;
}

RootedTree random_tree(std::size_t n, std::mt19937_64& rng, std::optional<std::size_t> max_degree,
                       bool ordered) {
    if (n == 0) return RootedTree{};
    if (max_degree && *max_degree == 0 && n > 1) throw ArgumentError("random_tree: max_degree 0");
    TreeBuilder b;
    b.add_root();
    // nodes that may still take a child; swap-remove when full
    std::vector<NodeId> open{0};
    std::vector<std::size_t> deg(n, 0);
    for (std::size_t i = 1; i < n; ++i) {
        std::uniform_int_distribution<std::size_t> pick(0, open.size() - 1);
        std::size_t slot = pick(rng);
        NodeId p = open[slot];
        NodeId c = b.add_child(p);
        if (max_degree && ++deg[p] == *max_degree) {
            open[slot] = open.back();
            open.pop_back();
        }
        open.push_back(c);
    }
    return std::move(b).build(ordered);
}

// ---------------------------------------------------------------------------
// topological minor oracle

namespace {

// Maximum bipartite matching of small children onto big children.
bool match_children(std::span<const NodeId> left, std::span<const NodeId> right,
                    const std::function<bool(NodeId, NodeId)>& ok, std::vector<int>& assign) {
    const std::size_t L = left.size(), R = right.size();
    if (L > R) return false;
    std::vector<int> owner(R, -1);
    assign.assign(L, -1);
    std::vector<char> seen;
    std::function<bool(std::size_t)> augment = [&](std::size_t i) -> bool {
        for (std::size_t j = 0; j < R; ++j) {
            if (seen[j] || !ok(left[i], right[j])) continue;
            seen[j] = 1;
            if (owner[j] < 0 || augment(static_cast<std::size_t>(owner[j]))) {
                owner[j] = static_cast<int>(i);
                assign[i] = static_cast<int>(j);
                return true;
            }
        }
        return false;
    };
    for (std::size_t i = 0; i < L; ++i) {
        seen.assign(R, 0);
        if (!augment(i)) return false;
    }
    return true;
}

// Order-preserving: greedy leftmost placement is optimal.
bool match_ordered(std::span<const NodeId> left, std::span<const NodeId> right,
                   const std::function<bool(NodeId, NodeId)>& ok, std::vector<int>& assign) {
    assign.assign(left.size(), -1);
    std::size_t j = 0;
    for (std::size_t i = 0; i < left.size(); ++i) {
        while (j < right.size() && !ok(left[i], right[j])) ++j;
        if (j == right.size()) return false;
        assign[i] = static_cast<int>(j++);
    }
    return true;
}

}  // namespace

std::optional<std::vector<NodeId>> is_topological_minor(const RootedTree& small,
                                                        const RootedTree& big,
                                                        const MinorSearchOptions& options) {
    if (small.empty()) throw ArgumentError("is_topological_minor: small tree is empty");
    if (big.size() > options.cap) {
        throw SizeError("is_topological_minor: big tree has " + std::to_string(big.size()) +
                        " nodes, cap is " + std::to_string(options.cap));
    }
    if (!options.parity.empty() && options.parity.size() != small.size()) {
        throw ArgumentError("is_topological_minor: parity vector size mismatch");
    }
    if (big.empty()) return std::nullopt;
    const bool ordered = small.ordered() && big.ordered();
    const std::size_t s = small.size(), m = big.size();
    const auto big_depth = big.depths();
    // can[t*m+u]: T^t embeds into B^u with t -> u.
    // reach[t*m+u]: T^t embeds somewhere inside B^u.
    std::vector<char> can(s * m, 0), reach(s * m, 0);
    const auto big_post = big.postorder();
    auto reach_ok = [&](NodeId c, NodeId d) { return reach[std::size_t{c} * m + d] != 0; };
    std::vector<int> scratch;
    for (NodeId t : small.postorder()) {
        auto tc = small.children(t);
        const int want = options.parity.empty() ? -1 : options.parity[t];
        for (NodeId u : big_post) {
            bool ok = big.degree(u) >= tc.size();
            if (ok && want >= 0) ok = static_cast<int>(big_depth[u] % 2) == want;
            if (ok && !tc.empty()) {
                ok = ordered ? match_ordered(tc, big.children(u), reach_ok, scratch)
                             : match_children(tc, big.children(u), reach_ok, scratch);
            }
            can[std::size_t{t} * m + u] = ok;
            bool r = ok;
            for (NodeId d : big.children(u)) r = r || reach[std::size_t{t} * m + d];
            reach[std::size_t{t} * m + u] = r;
        }
    }
    const NodeId sroot = small.root();
    if (!reach[std::size_t{sroot} * m + big.root()]) return std::nullopt;

    std::vector<NodeId> map(s, kNoNode);
    // descend from u to a node z with can[t][z]
    auto locate = [&](NodeId t, NodeId u) {
        while (!can[std::size_t{t} * m + u]) {
            for (NodeId d : big.children(u)) {
                if (reach[std::size_t{t} * m + d]) {
                    u = d;
                    break;
                }
            }
        }
        return u;
    };
    std::vector<std::pair<NodeId, NodeId>> work{{sroot, locate(sroot, big.root())}};
    while (!work.empty()) {
        auto [t, u] = work.back();
        work.pop_back();
        map[t] = u;
        auto tc = small.children(t);
        if (tc.empty()) continue;
        std::vector<int> assign;
        ordered ? match_ordered(tc, big.children(u), reach_ok, assign)
                : match_children(tc, big.children(u), reach_ok, assign);
        for (std::size_t i = 0; i < tc.size(); ++i) {
            NodeId d = big.children(u)[static_cast<std::size_t>(assign[i])];
            work.emplace_back(tc[i], locate(tc[i], d));
        }
    }
    return map;
}

bool leaf_degree_identity(const RootedTree& t) {
    if (t.empty()) throw ArgumentError("leaf_degree_identity: empty tree");
    std::map<std::size_t, std::size_t> by_degree;
    for (NodeId v = 0; v < t.size(); ++v) ++by_degree[t.degree(v)];
    long long rhs = 1;
    for (auto [d, count] : by_degree) {
        if (d >= 1) rhs += static_cast<long long>(count) * (static_cast<long long>(d) - 1);
    }
    return static_cast<long long>(t.leaf_count()) == rhs;
}

}  // namespace mut
