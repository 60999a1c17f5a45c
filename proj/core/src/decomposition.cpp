#include "mut/decomposition.hpp"

#include <cmath>
#include <stdexcept>

#include "mut/error.hpp"

namespace mut {

std::size_t floor_tol(double x) {
    if (x <= 0) return 0;
    return static_cast<std::size_t>(std::floor(x + 1e-9));
}

std::size_t alpha_floor(double alpha, std::size_t n) {
    return floor_tol(alpha * static_cast<double>(n));
}

std::size_t co_alpha_floor(double alpha, std::size_t n) {
    return floor_tol((1.0 - alpha) * static_cast<double>(n));
}

std::size_t alpha_threshold(double alpha, std::size_t n) {
    // |T^v| >= alpha n  <=>  |T^v| > n - floor((1-alpha) n) - 1
    return n - co_alpha_floor(alpha, n);
}

void check_alpha(double alpha) {
    if (!(alpha > 0.5 && alpha < 1.0)) {
        throw ArgumentError("alpha must lie in (1/2, 1), got " + std::to_string(alpha));
    }
}

AlphaHeavyPath top_alpha_heavy_path(const RootedTree& t, double alpha, NodeId start,
                                    const std::vector<std::size_t>& sizes) {
    check_alpha(alpha);
    if (t.empty()) throw ArgumentError("top_alpha_heavy_path: empty tree");
    AlphaHeavyPath out;
    out.alpha = alpha;
    const std::size_t thr = alpha_threshold(alpha, sizes[start]);
    NodeId cur = start;
    for (;;) {
        out.path.push_back(cur);
        NodeId next = kNoNode;
        for (NodeId c : t.children(cur)) {
            if (sizes[c] >= thr) {
                if (next != kNoNode) throw std::logic_error("two alpha-heavy children");
                next = c;
            }
        }
        if (next == kNoNode) break;
        cur = next;
    }
    return out;
}

AlphaHeavyPath top_alpha_heavy_path(const RootedTree& t, double alpha) {
    check_alpha(alpha);
    if (t.empty()) throw ArgumentError("top_alpha_heavy_path: empty tree");
    return top_alpha_heavy_path(t, alpha, t.root(), subtree_sizes(t));
}

std::vector<AlphaHeavyPath> alpha_heavy_decomposition(const RootedTree& t, double alpha) {
    check_alpha(alpha);
    if (t.empty()) throw ArgumentError("alpha_heavy_decomposition: empty tree");
    const auto sizes = subtree_sizes(t);
    std::vector<AlphaHeavyPath> out;
    std::vector<NodeId> starts{t.root()};
    while (!starts.empty()) {
        NodeId s = starts.back();
        starts.pop_back();
        auto p = top_alpha_heavy_path(t, alpha, s, sizes);
        for (std::size_t i = 0; i < p.path.size(); ++i) {
            NodeId v = p.path[i];
            NodeId on_path = i + 1 < p.path.size() ? p.path[i + 1] : kNoNode;
            auto ch = t.children(v);
            for (auto it = ch.rbegin(); it != ch.rend(); ++it) {
                if (*it != on_path) starts.push_back(*it);
            }
        }
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<std::vector<NodeId>> heavy_path_decomposition(const RootedTree& t) {
    std::vector<std::vector<NodeId>> out;
    if (t.empty()) return out;
    const auto sizes = subtree_sizes(t);
    std::vector<NodeId> starts{t.root()};
    while (!starts.empty()) {
        NodeId v = starts.back();
        starts.pop_back();
        std::vector<NodeId> path;
        for (;;) {
            path.push_back(v);
            NodeId heavy = kNoNode;
            for (NodeId c : t.children(v)) {
                if (heavy == kNoNode || sizes[c] > sizes[heavy] ||
                    (sizes[c] == sizes[heavy] && c < heavy)) {
                    heavy = c;
                }
            }
            if (heavy == kNoNode) break;
            for (NodeId c : t.children(v)) {
                if (c != heavy) starts.push_back(c);
            }
            v = heavy;
        }
        out.push_back(std::move(path));
    }
    return out;
}

}  // namespace mut
