#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "mut/codes.hpp"
#include "mut/error.hpp"
#include "mut/fastscheme.hpp"
#include "testutil.hpp"

using namespace mut;
using mut::testing::path;
using mut::testing::star;

TEST(Decompose, SingleNode) {
    const auto d = decompose(RootedTree::single_node(), 2);
    EXPECT_EQ(d.big, (std::vector<NodeId>{0}));
    EXPECT_EQ(d.interesting, (std::vector<NodeId>{0}));
}

TEST(Decompose, PathOfEight) {
    const auto d = decompose(path(8), 2);
    EXPECT_EQ(d.big, (std::vector<NodeId>{0, 1, 2, 3, 4}));
    // T' is a path: its leaf (node 4) is interesting, as are the root and its only big child
    EXPECT_NE(std::find(d.interesting.begin(), d.interesting.end(), 4u), d.interesting.end());
    EXPECT_NE(std::find(d.interesting.begin(), d.interesting.end(), 0u), d.interesting.end());
    EXPECT_NE(std::find(d.interesting.begin(), d.interesting.end(), 1u), d.interesting.end());
    EXPECT_EQ(d.interesting.size(), 3u);
}

TEST(Decompose, StarOfNine) {
    const auto d = decompose(star(9), 3);
    EXPECT_EQ(d.big, (std::vector<NodeId>{0}));
    EXPECT_EQ(d.interesting, (std::vector<NodeId>{0}));
    EXPECT_EQ(d.weight.at(0), 9u);
    EXPECT_EQ(d.virtual_children.at(0), 3u);
    EXPECT_EQ(d.contracted.size(), 4u);
}

TEST(Decompose, Errors) {
    EXPECT_THROW(decompose(path(3), 1), ArgumentError);
    EXPECT_THROW(decompose(RootedTree{}, 2), ArgumentError);
}

namespace {
void check_decomposition(const RootedTree& t, std::size_t b) {
    const auto d = decompose(t, b);
    const auto sizes = subtree_sizes(t);
    const std::set<NodeId> big(d.big.begin(), d.big.end()), inter(d.interesting.begin(), d.interesting.end());
    for (NodeId v = 0; v < t.size(); ++v) ASSERT_EQ(big.count(v) == 1, sizes[v] * b >= t.size());
    for (NodeId u : d.interesting) {
        ASSERT_TRUE(big.count(u));
        std::size_t big_plain = 0;
        for (NodeId c : t.children(u)) big_plain += big.count(c) && !inter.count(c);
        ASSERT_LE(big_plain, 1u);
        // chains start at their head and walk down through big nodes
        const auto& ch = d.chain.at(u);
        ASSERT_EQ(ch.front(), u);
        std::size_t w = 0;
        for (std::size_t k = 0; k < ch.size(); ++k) {
            if (k) ASSERT_EQ(t.parent(ch[k]), ch[k - 1]);
            w += d.weight.at(ch[k]);
        }
        ASSERT_EQ(d.virtual_children.at(u), (w * b + t.size() - 1) / t.size());
    }
    // T^c: interesting nodes keep their nearest interesting ancestor as parent
    for (std::size_t i = 0; i < d.contracted.size(); ++i) {
        const NodeId orig = d.contracted_node[i];
        const auto p = d.contracted.parent(static_cast<NodeId>(i));
        if (orig == kNoNode) {
            ASSERT_TRUE(p.has_value());
            ASSERT_TRUE(d.contracted.is_leaf(static_cast<NodeId>(i)));
            continue;
        }
        if (!p) {
            ASSERT_EQ(orig, t.root());
            continue;
        }
        NodeId a = *t.parent(orig);
        while (!inter.count(a)) a = *t.parent(a);
        ASSERT_EQ(d.contracted_node[*p], a);
    }
}
}  // namespace

TEST(Decompose, InvariantsExhaustiveAndRandom) {
    for (std::size_t b : {2u, 3u, 5u}) {
        for (std::size_t n = 1; n <= 9; ++n) {
            for (const auto& t : enumerate_trees(n)) check_decomposition(t, b);
        }
    }
    std::mt19937_64 rng(6);
    for (int i = 0; i < 100; ++i) check_decomposition(random_tree(1 + rng() % 1000, rng), 2 + rng() % 4);
}

namespace {
void check_encoding(const RootedTree& t, std::size_t b, std::size_t pairs = 0, std::mt19937_64* rng = nullptr) {
    const auto enc = encode_fast(t, b);
    const NcaIndex idx(t);
    std::set<std::string> distinct;
    const double lb = std::log(static_cast<double>(t.size())) / std::log(static_cast<double>(b));
    const auto max_fields = 3 * std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(lb - 1e-9)));
    for (const auto& l : enc.labels) {
        const auto fl = l.field_list();
        std::string key;
        for (const auto& f : fl) {
            ASSERT_FALSE(f.empty());
            key += f.to_string() + "|";
        }
        ASSERT_TRUE(distinct.insert(key).second) << serialize_tree(t);
        ASSERT_LE(l.fields(), max_fields);
        const auto bnd = l.boundaries.to_vector();
        for (std::size_t k = 0; k < bnd.size(); ++k) {
            ASSERT_LT(bnd[k], l.length);
            if (k) ASSERT_LT(bnd[k - 1], bnd[k]);
        }
    }
    ASSERT_EQ(enc.labels[t.root()].fields(), 1u);
    ASSERT_TRUE(step_budget_check(enc, b).ok()) << serialize_tree(t);
    auto query = [&](NodeId u, NodeId v) {
        const auto got = decode_fast(enc.labels[u], enc.labels[v]);
        ASSERT_EQ(got, enc.labels[idx.query(u, v)]) << serialize_tree(t) << " " << u << " " << v;
    };
    if (pairs == 0) {
        for (NodeId u = 0; u < t.size(); ++u) {
            for (NodeId v = 0; v < t.size(); ++v) query(u, v);
        }
    } else {
        std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(t.size() - 1));
        for (std::size_t k = 0; k < pairs; ++k) query(pick(*rng), pick(*rng));
    }
}
}  // namespace

TEST(FastScheme, RootHasOneField) {
    const auto enc = encode_fast(parse_tree("((()())(()))"), 2);
    EXPECT_EQ(enc.labels[0].fields(), 1u);
}

TEST(FastScheme, DecodeIdempotent) {
    const auto enc = encode_fast(path(20), 2);
    for (const auto& l : enc.labels) EXPECT_EQ(decode_fast(l, l), l);
}

TEST(FastScheme, ExhaustiveB2) {
    for (std::size_t n = 1; n <= 9; ++n) {
        for (const auto& t : enumerate_trees(n)) check_encoding(t, 2);
    }
}

TEST(FastScheme, ExhaustiveB3) {
    for (std::size_t n = 1; n <= 9; ++n) {
        for (const auto& t : enumerate_trees(n)) check_encoding(t, 3);
    }
}

TEST(FastScheme, RandomShapes) {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 30; ++i) {
        const std::size_t n = 1 + rng() % 2000;
        const auto t = i % 3 == 0 ? random_tree(n, rng, 2) : i % 3 == 1 ? random_tree(n, rng) : path(n);
        check_encoding(t, 2 + i % 3, 3000, &rng);
    }
}

TEST(FastScheme, NcaTableMatchesUniversalTree) {
    std::mt19937_64 rng(13);
    for (std::size_t b : {2u, 3u}) {
        const auto enc = encode_fast(random_tree(1500, rng), b);
        const auto& sh = *enc.shared;
        const auto ut = build_universal(sh.universal);
        const auto wl = weighted_labels(ut.tree);
        for (NodeId x = 0; x < ut.size(); ++x) {
            for (NodeId y = 0; y < ut.size(); ++y) {
                const auto& lx = wl.labels[x];
                const auto& ly = wl.labels[y];
                const auto [zl, zv] = sh.lookup(lx.size(), lx.to_uint(), ly.size(), ly.to_uint());
                const auto& lz = wl.labels[ut.index.query(x, y)];
                ASSERT_EQ(zl, lz.size());
                ASSERT_EQ(zv, lz.to_uint());
            }
        }
    }
}

TEST(FastScheme, BudgetOnRandomTrees) {
    std::mt19937_64 rng(14);
    for (int i = 0; i < 100; ++i) {
        const std::size_t n = 1 + rng() % 5000;
        const auto enc = encode_fast(random_tree(n, rng), 2);
        const auto rep = step_budget_check(enc, 2);
        ASSERT_TRUE(rep.ok()) << (rep.examples.empty() ? "" : rep.examples[0]);
    }
    EXPECT_TRUE(step_budget_check(encode_fast(RootedTree::single_node(), 2), 2).ok());
}

TEST(FastScheme, DifferentEncodingsRejected) {
    const auto e1 = encode_fast(path(10), 2);
    const auto e2 = encode_fast(star(10), 2);
    EXPECT_THROW(decode_fast(e1.labels[0], e2.labels[0]), ArgumentError);
}

TEST(FastScheme, SerializationRoundTrip) {
    std::mt19937_64 rng(15);
    const auto t = random_tree(400, rng);
    const auto enc = encode_fast(t, 2);
    const auto text = write_shared_block(*enc.shared);
    const auto shared = parse_shared_block(text);
    EXPECT_EQ(shared->hash, enc.shared->hash);
    for (const auto& l : enc.labels) {
        const auto back = parse_fast_label(write_fast_label(l), shared);
        ASSERT_EQ(back, l);
    }
    // decoding parsed labels against the parsed block still works
    const NcaIndex idx(t);
    const auto a = parse_fast_label(write_fast_label(enc.labels[17]), shared);
    const auto b = parse_fast_label(write_fast_label(enc.labels[301]), shared);
    EXPECT_EQ(decode_fast(a, b), enc.labels[idx.query(17, 301)]);
    auto tampered = text;
    tampered[tampered.find("\"b\"") + 4] = '7';
    EXPECT_ANY_THROW(parse_shared_block(tampered));
    EXPECT_THROW(parse_fast_label("zz", shared), ParseError);
}

TEST(FastScheme, BoundedOperationCount) {
    std::mt19937_64 rng(16);
    std::uint64_t worst = 0;
    for (std::size_t n : {256u, 4096u}) {
        const auto t = random_tree(n, rng);
        const auto enc = encode_fast(t, 2);
        for (int q = 0; q < 5000; ++q) {
            const NodeId u = rng() % n, v = rng() % n;
            reset_op_count();
            (void)decode_fast(enc.labels[u], enc.labels[v]);
            worst = std::max(worst, op_count());
        }
    }
    EXPECT_GT(worst, 0u);
    EXPECT_LE(worst, 200u);
}

TEST(FastScheme, DefaultB) {
    EXPECT_EQ(default_b(1), 2u);
    EXPECT_EQ(default_b(1000000), 2u);
    EXPECT_GE(default_b(1000000, 0.1), 2u);
}
