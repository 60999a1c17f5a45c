#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mut/tree.hpp"
#include "mut/universal.hpp"

namespace mut {

struct IntervalBound {
    double lo = 0.0, hi = 0.0;
    double width() const { return hi - lo; }
};

/// Partial sum of 1/i^c to `terms` plus the integral tail bounds, widened
/// outward by a relative 1e-12 to absorb rounding.
IntervalBound certify_zeta(double c, std::size_t terms = 1000000);

/// sum_{x,y <= limit} 1/(x y + 1)^c, row-major with compensated summation.
double double_sum(double c, std::size_t limit);
/// Same sum taken along anti-diagonals x + y = const.
double double_sum_diagonal(double c, std::size_t limit);
IntervalBound certify_double_sum(double c, std::size_t limit);

struct InequalityCheck {
    bool holds = false;
    double lhs_hi = 0.0;   // upper bound on the left side
    double rhs_lo = 0.0;   // lower bound on the right side
    double margin() const { return rhs_lo - lhs_hi; }
};

/*
 * binary:  a^c + (1-a)^c 2^{c-1}/(2^{c-1}-1)        <= 1 - 2^-c
 * general: a^c + (1-a)^c zeta(c) 2^{c-1}/(2^{c-1}-1) <= 2 - zeta(c)
 * ordered: 2a^c + (1-a)^c 2^c/(2^{c-1}-1)            <= 1
 */
InequalityCheck check_inequality(Kind kind, double c, double alpha, std::size_t zeta_terms = 1000000);
/// Plain floating margin RHS - LHS, no outward rounding.
double inequality_margin(Kind kind, double c, double alpha, double zeta = 0.0);

struct AlphaChoice {
    double alpha = 0.0;
    double margin = 0.0;
    double A = 0.0;  // alpha / (1 - alpha)
};
AlphaChoice optimize_alpha(Kind kind, double c);
/// Smallest c (to 1e-4) for which the certified inequality holds at the optimal alpha.
double min_feasible_c(Kind kind);

struct Caterpillar {
    std::size_t s = 1, d = 2;
    RootedTree tree;
    std::vector<bool> inner;  // per node
};
Caterpillar make_caterpillar(std::size_t s, std::size_t d = 2);

/// Largest s such that T^v contains a subdivided (s, d)-caterpillar; with a
/// parity, its inner nodes must sit at depths congruent to parity mod 2.
std::size_t caterpillar_level(const RootedTree& t, NodeId v, std::size_t d = 2,
                              std::optional<int> parity = std::nullopt, std::size_t cap = 60);

struct LevelReport {
    std::size_t checked = 0;
    std::vector<std::string> violations;
    std::vector<std::size_t> levels;
    bool ok() const { return violations.empty(); }
};
LevelReport level_properties_check(const RootedTree& t, std::size_t d = 2,
                                   std::optional<int> parity = std::nullopt, std::size_t cap = 60);

RootedTree cut(const RootedTree& t, NodeId a);
RootedTree contract(const RootedTree& t, NodeId b);

/// constraint[v] in {0, 1} for inner nodes, ignored on leaves. `image`
/// receives the position of every original node in the result.
RootedTree parity_transform(const RootedTree& t, const std::vector<int>& constraint,
                            std::vector<NodeId>* image = nullptr);

struct MinimalHostResult {
    std::size_t leaves = 0;            // n
    std::optional<std::size_t> b;      // exact minimum when the search finished
    std::size_t searched_up_to = 0;    // largest host leaf count examined
    RootedTree witness;
};
/// Fewest leaves of a tree containing a subdivision of every full binary
/// tree on n leaves. Best effort: hosts are series-reduced trees with at most
/// max_host_leaves leaves.
MinimalHostResult minimal_host(std::size_t n, std::size_t max_host_leaves = 12);

struct MeasureOptions {
    Kind kind = Kind::binary;
    std::size_t n_min = 1, n_max = 2000, step = 1;
    std::size_t samples = 5;       // random trees for label measurements
    std::size_t fast_b = 2;
    std::uint64_t seed = 1;
    bool sizes = true, widths = true, fast = true;
};
/// JSON-lines records: "size", "width" and "fast" rows.
std::vector<std::string> measure(const MeasureOptions& opt);

}  // namespace mut
