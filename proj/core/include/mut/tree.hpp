#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mut {

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

/*
 * Rooted tree with node ids 0..size()-1. Every edge points from a parent to a
 * child. When ordered() is false the order of children carries no meaning and
 * isomorphism is decided through canonical_form().
 *
 * Immutable once built; use TreeBuilder to construct one node at a time.
 */
class RootedTree {
public:
    RootedTree() = default;  // the empty tree

    static RootedTree single_node(bool ordered = false);
    /// parents[root] == kNoNode; children are listed in increasing id order.
    static RootedTree from_parents(std::span<const NodeId> parents, bool ordered = false);

    std::size_t size() const { return parent_.size(); }
    bool empty() const { return parent_.empty(); }
    bool ordered() const { return ordered_; }
    bool valid(NodeId v) const { return v < parent_.size(); }

    NodeId root() const;
    std::optional<NodeId> parent(NodeId v) const;
    std::span<const NodeId> children(NodeId v) const;
    std::size_t degree(NodeId v) const { return children(v).size(); }
    bool is_leaf(NodeId v) const { return children(v).empty(); }

    std::size_t max_degree() const;
    bool is_binary() const { return max_degree() <= 2; }
    std::size_t leaf_count() const;

    std::vector<NodeId> preorder() const;
    std::vector<NodeId> postorder() const;
    std::vector<std::size_t> depths() const;

    /// Copy whose node ids follow preorder; old_to_new receives the relabeling.
    RootedTree preorder_relabeled(std::vector<NodeId>* old_to_new = nullptr) const;
    /// T^v as a standalone tree; new_to_old receives the node correspondence.
    RootedTree subtree(NodeId v, std::vector<NodeId>* new_to_old = nullptr) const;
    RootedTree with_ordered(bool ordered) const;

    friend bool operator==(const RootedTree&, const RootedTree&) = default;

private:
    friend class TreeBuilder;
    void check(NodeId v) const;

    std::vector<NodeId> parent_;
    std::vector<std::vector<NodeId>> children_;
    bool ordered_ = false;
};

class TreeBuilder {
public:
    NodeId add_root();
    NodeId add_child(NodeId parent);
    std::size_t size() const { return tree_.parent_.size(); }
    RootedTree build(bool ordered = false) &&;

private:
    RootedTree tree_;
};

RootedTree parse_tree(std::string_view text, bool ordered = false);
/// Unordered trees serialize in canonical child order, ordered ones as stored.
std::string serialize_tree(const RootedTree& t);
/// AHU certificate of T^v: children's certificates sorted, wrapped in parens.
std::string canonical_form(const RootedTree& t, NodeId v);
std::string canonical_form(const RootedTree& t);
bool isomorphic(const RootedTree& a, const RootedTree& b);

std::vector<std::size_t> subtree_sizes(const RootedTree& t);

/// Naive NCA by climbing; see NcaIndex for repeated queries.
NodeId nca(const RootedTree& t, NodeId u, NodeId v);
bool is_ancestor(const RootedTree& t, NodeId ancestor, NodeId v);

/*
 * Euler tour + sparse table over depths: O(n log n) preprocessing and O(1)
 * NCA queries.
 */
class NcaIndex {
public:
    NcaIndex() = default;
    explicit NcaIndex(const RootedTree& t);

    NodeId query(NodeId u, NodeId v) const;
    bool is_ancestor(NodeId ancestor, NodeId v) const {
        return tin_[ancestor] <= tin_[v] && tout_[v] <= tout_[ancestor];
    }
    std::size_t depth(NodeId v) const { return depth_[v]; }
    std::size_t size() const { return first_.size(); }

private:
    std::vector<std::uint32_t> first_;
    std::vector<std::uint32_t> tin_, tout_, depth_;
    std::vector<NodeId> euler_;
    // table_[k][i] = node of min depth in euler_[i, i + 2^k)
    std::vector<std::vector<NodeId>> table_;
};

/// One representative per isomorphism class of unordered trees on n nodes.
std::vector<RootedTree> enumerate_trees(std::size_t n,
                                        std::optional<std::size_t> max_degree = std::nullopt);
/// All ordered trees on n nodes with at most max_degree children per node.
std::vector<RootedTree> enumerate_ordered_trees(std::size_t n, std::size_t max_degree);
/// Unordered trees with the given number of leaves and no degree-1 nodes.
std::vector<RootedTree> enumerate_series_reduced(std::size_t leaves,
                                                 std::optional<std::size_t> max_degree = std::nullopt);

/// Random recursive tree: node i attaches to a uniformly chosen earlier node
/// that still has room under max_degree.
RootedTree random_tree(std::size_t n, std::mt19937_64& rng,
                       std::optional<std::size_t> max_degree = std::nullopt,
                       bool ordered = false);

struct MinorSearchOptions {
    std::size_t cap = 60;
    /// Per small-tree node: -1 unconstrained, otherwise required depth parity
    /// (absolute depth in the big tree).
    std::vector<int> parity;
};

/*
 * Exhaustive topological-minor test. Returns a map small -> big that is
 * injective and NCA preserving (order preserving too when both trees are
 * ordered), or nullopt when none exists. Throws SizeError when big exceeds
 * options.cap.
 */
std::optional<std::vector<NodeId>> is_topological_minor(const RootedTree& small,
                                                        const RootedTree& big,
                                                        const MinorSearchOptions& options = {});

/// #leaves == 1 + sum_d n(d) * (d - 1).
bool leaf_degree_identity(const RootedTree& t);

}  // namespace mut
