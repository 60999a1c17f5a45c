#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "mut/decomposition.hpp"
#include "mut/error.hpp"
#include "testutil.hpp"

using namespace mut;
using mut::testing::path;
using mut::testing::star;

TEST(AlphaFloors, Arithmetic) {
    EXPECT_EQ(alpha_floor(0.704, 10), 7u);
    EXPECT_EQ(co_alpha_floor(0.704, 10), 2u);
    EXPECT_EQ(alpha_threshold(0.704, 10), 8u);
    EXPECT_EQ(co_alpha_floor(0.704, 2), 0u);
    // 0.7 * 10 is 7.000000000000001 or 6.999999999999999 depending on rounding
    EXPECT_EQ(alpha_floor(0.7, 10), 7u);
    EXPECT_EQ(co_alpha_floor(0.7, 10), 3u);
    EXPECT_EQ(floor_tol(2.9999999999999), 3u);
    EXPECT_THROW(check_alpha(0.5), ArgumentError);
    EXPECT_THROW(check_alpha(1.0), ArgumentError);
    EXPECT_NO_THROW(check_alpha(0.659));
}

TEST(TopPath, Examples) {
    EXPECT_EQ(top_alpha_heavy_path(star(4), 0.659).path, (std::vector<NodeId>{0}));
    EXPECT_EQ(top_alpha_heavy_path(path(10), 0.704).path, (std::vector<NodeId>{0, 1, 2}));
    EXPECT_EQ(top_alpha_heavy_path(RootedTree::single_node(), 0.9).path, (std::vector<NodeId>{0}));
    EXPECT_THROW(top_alpha_heavy_path(path(3), 0.4), ArgumentError);
}

TEST(Decomposition, Examples) {
    EXPECT_EQ(alpha_heavy_decomposition(RootedTree::single_node(), 0.7).size(), 1u);
    const auto d = alpha_heavy_decomposition(path(10), 0.704);
    ASSERT_GE(d.size(), 2u);
    EXPECT_EQ(d[0].path, (std::vector<NodeId>{0, 1, 2}));
    // chain of 7 below: threshold 0.704*7 = 4.93, sizes 7,6,5 qualify
    EXPECT_EQ(d[1].path, (std::vector<NodeId>{3, 4, 5}));
    const auto c = alpha_heavy_decomposition(parse_tree("(()())"), 0.704);
    EXPECT_EQ(c.size(), 3u);
    for (const auto& p : c) EXPECT_EQ(p.path.size(), 1u);
}

namespace {
void check_partition(const RootedTree& t, double alpha) {
    const auto d = alpha_heavy_decomposition(t, alpha);
    std::vector<int> seen(t.size(), 0);
    for (const auto& p : d) {
        for (NodeId v : p.path) ++seen[v];
        for (std::size_t i = 1; i < p.path.size(); ++i) ASSERT_EQ(t.parent(p.path[i]), p.path[i - 1]);
    }
    for (NodeId v = 0; v < t.size(); ++v) ASSERT_EQ(seen[v], 1) << serialize_tree(t);

    // accounting on the top path: hanging sizes + (s - 1) <= (1 - alpha) n
    const auto sizes = subtree_sizes(t);
    const auto top = top_alpha_heavy_path(t, alpha);
    const std::size_t n = t.size();
    std::size_t hanging = 0;
    for (std::size_t i = 0; i + 1 < top.path.size(); ++i) {
        hanging += sizes[top.path[i]] - sizes[top.path[i + 1]] - 1;
    }
    ASSERT_LE(static_cast<double>(hanging + top.path.size() - 1), (1.0 - alpha) * n + 1e-9);
    const NodeId last = top.path.back();
    ASSERT_GE(static_cast<double>(sizes[last]), alpha * n - 1e-9);
    for (NodeId c : t.children(last)) ASSERT_LT(static_cast<double>(sizes[c]), alpha * n);
}
}  // namespace

TEST(Decomposition, PartitionExhaustive) {
    for (double a : {0.594, 0.659, 0.704, 0.9}) {
        for (std::size_t n = 1; n <= 9; ++n) {
            for (const auto& t : enumerate_trees(n)) check_partition(t, a);
        }
    }
}

TEST(Decomposition, PartitionRandom) {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 300; ++i) check_partition(random_tree(1 + rng() % 500, rng), 0.704);
}

TEST(HeavyPath, PartitionAndHeaviness) {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 100; ++i) {
        const auto t = random_tree(1 + rng() % 300, rng);
        const auto sizes = subtree_sizes(t);
        std::vector<int> seen(t.size(), 0);
        for (const auto& p : heavy_path_decomposition(t)) {
            for (NodeId v : p) ++seen[v];
            for (std::size_t k = 1; k < p.size(); ++k) {
                for (NodeId c : t.children(p[k - 1])) ASSERT_LE(sizes[c], sizes[p[k]]);
            }
            ASSERT_TRUE(t.is_leaf(p.back()));
        }
        ASSERT_TRUE(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
    }
}
