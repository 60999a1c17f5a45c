#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "mut/bitstring.hpp"
#include "mut/intset.hpp"
#include "mut/tree.hpp"
#include "mut/universal.hpp"
#include "mut/word.hpp"

namespace mut {

/*
 * One step of the big/small decomposition of T^root.
 *
 * A node is big when |T^u| * b >= n. Interesting nodes are the leaves and
 * branching nodes of the big part, big children of branching nodes, and the
 * root (with its only big child when it has exactly one). Each interesting
 * node u heads a chain: u followed by the non-interesting big nodes below it.
 * u receives ceil(sum of chain weights * b / n) virtual children.
 */
struct Decomposition {
    std::size_t n = 0, b = 0;
    NodeId root = kNoNode;
    std::vector<NodeId> big;           // preorder
    std::vector<NodeId> interesting;   // preorder
    std::map<NodeId, std::size_t> weight;            // big node -> size of small subtrees
    std::map<NodeId, std::size_t> virtual_children;  // interesting node -> count
    std::map<NodeId, std::vector<NodeId>> chain;     // interesting node -> chain, top first
    RootedTree contracted;                 // T^c; interesting nodes first, then virtual ones
    std::vector<NodeId> contracted_node;   // T^c node -> tree node, kNoNode when virtual

    bool is_big(NodeId v, const std::vector<std::size_t>& sizes) const { return sizes[v] * b >= n; }
};

Decomposition decompose(const RootedTree& t, std::size_t b);
Decomposition decompose(const RootedTree& t, std::size_t b, NodeId root,
                        const std::vector<std::size_t>& sizes);

/*
 * Per-encoding constants shared by all labels: the universal tree U_N the
 * contracted trees are embedded into, and the NCA table over its weighted
 * labels, bucketed by (|x|, |y|). Entry (1 << |z|) | z, 0 when unused.
 */
struct SharedBlock {
    std::size_t n = 0, b = 0;
    UniversalSpec universal;
    std::size_t max_field = 0;     // longest weighted label of U_N
    std::size_t entry_width = 0;   // bits per table entry
    std::size_t s_max = 1;         // boundary-set parameters
    std::uint64_t M = 1;
    std::vector<std::vector<std::uint64_t>> tables;  // [lx * (max_field + 1) + ly]
    std::uint64_t hash = 0;

    /// Counted as one primitive operation. Returns (length, value); length 0 if absent.
    std::pair<std::size_t, std::uint64_t> lookup(std::size_t lx, std::uint64_t x, std::size_t ly,
                                                 std::uint64_t y) const;
    std::size_t size_bits() const;
};

struct FastLabel {
    Word concat;
    std::size_t length = 0;
    IntSetEncoding boundaries;
    std::shared_ptr<const SharedBlock> shared;

    std::size_t fields() const { return boundaries.count() + 1; }
    std::vector<BitString> field_list() const;
    BitString concat_bits() const { return concat.to_bits(length); }
    /// Bits of the label proper: concatenation plus boundary set.
    std::size_t size_bits() const { return length + boundaries.size_bits(); }

    friend bool operator==(const FastLabel& a, const FastLabel& b) {
        return a.length == b.length && a.concat == b.concat && a.boundaries == b.boundaries;
    }
};

struct StepRecord {
    std::size_t n = 0;       // size of the current tree
    std::size_t next = 0;    // size of the next tree, 0 when the step is the last one
    std::size_t fields = 0;  // fields added in this step
    std::size_t bits = 0;    // their total length
};

struct FastEncoding {
    std::vector<FastLabel> labels;
    std::shared_ptr<const SharedBlock> shared;
    std::vector<std::vector<StepRecord>> steps;  // per node
    std::size_t max_contracted = 0;              // max |T^c| over all steps (a * b)
    std::size_t decompositions = 0;
};

std::size_t default_b(std::size_t n, double a = 1.0);

FastEncoding encode_fast(const RootedTree& t, std::size_t b);
/// Label of NCA(u, v) from the labels of u and v.
FastLabel decode_fast(const FastLabel& a, const FastLabel& b);

struct BudgetReport {
    double s = 0.0;
    std::size_t checked = 0;
    std::size_t violations = 0;
    std::vector<std::string> examples;  // first few violations
    bool ok() const { return violations == 0; }
};

/// Size decrease per step is at least b * 2^max(0, t - s), s = 4 + c log2(a b).
BudgetReport step_budget_check(const FastEncoding& enc, std::size_t b, double c = 2.318);

/// Label text: hex of gamma(len+1) concat gamma(blen+1) boundaries, MSB first.
std::string write_fast_label(const FastLabel& l);
FastLabel parse_fast_label(std::string_view hex, std::shared_ptr<const SharedBlock> shared);
std::string write_shared_block(const SharedBlock& s);  // JSON
std::shared_ptr<const SharedBlock> parse_shared_block(std::string_view json);

}  // namespace mut
