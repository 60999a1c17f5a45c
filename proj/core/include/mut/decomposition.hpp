#pragma once

#include <cstddef>
#include <vector>

#include "mut/tree.hpp"

namespace mut {

/// floor(x) tolerant of values that land a hair below an integer.
std::size_t floor_tol(double x);
/// floor(alpha * n) and floor((1 - alpha) * n).
std::size_t alpha_floor(double alpha, std::size_t n);
std::size_t co_alpha_floor(double alpha, std::size_t n);
/// Smallest integer size m with m >= alpha * n.
std::size_t alpha_threshold(double alpha, std::size_t n);

void check_alpha(double alpha);

struct AlphaHeavyPath {
    std::vector<NodeId> path;  // v_1 .. v_s, v_1 the start node
    double alpha = 0.0;
};

/// Top alpha-heavy path of T^start (whole tree by default). `sizes` are the
/// subtree sizes of t when the caller already has them.
AlphaHeavyPath top_alpha_heavy_path(const RootedTree& t, double alpha);
AlphaHeavyPath top_alpha_heavy_path(const RootedTree& t, double alpha, NodeId start,
                                    const std::vector<std::size_t>& sizes);

/// Node-disjoint alpha-heavy paths covering t, in discovery order.
std::vector<AlphaHeavyPath> alpha_heavy_decomposition(const RootedTree& t, double alpha);

/// Classic heavy paths: follow the largest child, ties to the smallest id.
std::vector<std::vector<NodeId>> heavy_path_decomposition(const RootedTree& t);

}  // namespace mut
