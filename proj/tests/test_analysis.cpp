#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "json.hpp"
#include "mut/analysis.hpp"
#include "mut/error.hpp"
#include "testutil.hpp"

using namespace mut;

TEST(Zeta, Enclosures) {
    const auto z2 = certify_zeta(2, 100000);
    const double pi2_6 = M_PI * M_PI / 6;
    EXPECT_LE(z2.lo, pi2_6);
    EXPECT_GE(z2.hi, pi2_6);
    EXPECT_LT(z2.width(), 1e-9);
    EXPECT_GT(certify_zeta(1.728, 1000000).lo, 2.0);
    EXPECT_GT(certify_zeta(2.185, 1000000).lo, 1.5);
    EXPECT_THROW(certify_zeta(1.0, 100), ArgumentError);
    EXPECT_THROW(certify_zeta(2.0, 5), ArgumentError);
}

TEST(Zeta, KnownValues) {
    const auto z4 = certify_zeta(4, 10000);
    const double want = std::pow(M_PI, 4) / 90;
    EXPECT_LE(z4.lo, want);
    EXPECT_GE(z4.hi, want);
}

TEST(DoubleSum, Examples) {
    EXPECT_GT(double_sum(2.174, 1000), 1.0);
    EXPECT_GT(certify_double_sum(2.174, 1000).lo, 1.0);
    EXPECT_DOUBLE_EQ(double_sum(3, 1), 1.0 / 8.0);
    EXPECT_NEAR(double_sum(3, 1000), double_sum_diagonal(3, 1000), 1e-13);
    EXPECT_NEAR(double_sum(2.5, 300), double_sum_diagonal(2.5, 300), 1e-13);
    EXPECT_THROW(double_sum(2.0, 10), ArgumentError);
}

TEST(Inequality, StatedConstants) {
    EXPECT_TRUE(check_inequality(Kind::binary, 1.894, 0.704).holds);
    EXPECT_TRUE(check_inequality(Kind::general, 2.318, 0.659).holds);
    EXPECT_TRUE(check_inequality(Kind::ordered, 2.331, 0.594).holds);
    EXPECT_FALSE(check_inequality(Kind::binary, 1.5, 0.704).holds);
    const auto r = check_inequality(Kind::binary, 1.894, 0.704);
    EXPECT_GT(r.margin(), 0.0);
    EXPECT_LE(r.lhs_hi, r.rhs_lo);
}

TEST(Inequality, CertifiedIsConservative) {
    for (Kind k : {Kind::binary, Kind::general, Kind::ordered}) {
        for (double c = 1.6; c < 3.0; c += 0.05) {
            for (double a = 0.55; a < 0.95; a += 0.05) {
                const auto z = certify_zeta(c, 100000);
                const double plain = inequality_margin(k, c, a, z.hi);
                const auto cert = check_inequality(k, c, a, 100000);
                if (cert.holds) ASSERT_GE(plain, 0.0) << to_string(k) << " " << c << " " << a;
                ASSERT_LE(cert.margin(), plain + 1e-15);
            }
        }
    }
}

TEST(OptimizeAlpha, Examples) {
    const auto b = optimize_alpha(Kind::binary, 1.894);
    EXPECT_NEAR(b.alpha, 0.704, 0.001);
    EXPECT_NEAR(b.A, 2.372, 0.002);
    const auto o = optimize_alpha(Kind::ordered, 2.331);
    EXPECT_NEAR(o.alpha, 0.594, 0.001);
    EXPECT_NEAR(o.A, 1.463, 0.002);
    const auto g = optimize_alpha(Kind::general, 2.318);
    EXPECT_NEAR(g.alpha, 0.659, 0.002);
}

TEST(OptimizeAlpha, LocallyOptimal) {
    for (Kind k : {Kind::binary, Kind::general, Kind::ordered}) {
        for (double c : {1.9, 2.2, 2.35, 2.8}) {
            const auto best = optimize_alpha(k, c);
            const double z = k == Kind::general ? 0.5 * (certify_zeta(c, 100000).lo + certify_zeta(c, 100000).hi) : 0;
            for (double d : {-0.01, 0.01}) {
                const double a = best.alpha + d;
                if (a <= 0.5 || a >= 1) continue;
                EXPECT_GE(best.margin, inequality_margin(k, c, a, z) - 1e-12) << to_string(k) << " " << c;
            }
        }
    }
}

TEST(MinFeasibleC, AtMostStatedValues) {
    EXPECT_LE(min_feasible_c(Kind::binary), 1.894);
    EXPECT_LE(min_feasible_c(Kind::general), 2.318);
    EXPECT_LE(min_feasible_c(Kind::ordered), 2.331);
    EXPECT_GT(min_feasible_c(Kind::binary), 1.85);
}

TEST(Caterpillar, Examples) {
    EXPECT_EQ(make_caterpillar(1).tree.size(), 1u);
    EXPECT_EQ(serialize_tree(make_caterpillar(2).tree), "(()())");
    const auto c33 = make_caterpillar(3, 3);
    EXPECT_EQ(c33.tree.leaf_count(), 5u);
    for (std::size_t s = 1; s <= 8; ++s) {
        for (std::size_t d = 2; d <= 5; ++d) {
            const auto c = make_caterpillar(s, d);
            ASSERT_EQ(c.tree.leaf_count(), (s - 1) * (d - 1) + 1);
            ASSERT_EQ(c.tree.size() - c.tree.leaf_count(), s - 1);
            ASSERT_TRUE(leaf_degree_identity(c.tree));
        }
    }
    EXPECT_THROW(make_caterpillar(0), ArgumentError);
    EXPECT_THROW(make_caterpillar(2, 1), ArgumentError);
}

TEST(Level, Examples) {
    const auto cb = mut::testing::complete_binary(2);
    EXPECT_EQ(caterpillar_level(cb, 0), 3u);
    EXPECT_EQ(caterpillar_level(cb, 3), 1u);
    for (std::size_t s = 1; s <= 7; ++s) EXPECT_EQ(caterpillar_level(make_caterpillar(s).tree, 0), s);
    EXPECT_EQ(caterpillar_level(make_caterpillar(4, 3).tree, 0, 3), 4u);
    EXPECT_THROW(caterpillar_level(mut::testing::path(70), 0), SizeError);
}

TEST(Level, Parity) {
    // cherry root at depth 0 cannot host an inner node of odd parity
    const auto cherry = parse_tree("(()())");
    EXPECT_EQ(caterpillar_level(cherry, 0, 2, 0), 2u);
    EXPECT_EQ(caterpillar_level(cherry, 0, 2, 1), 1u);
    const auto lifted = parse_tree("((()()))");
    EXPECT_EQ(caterpillar_level(lifted, 0, 2, 1), 2u);
}

TEST(LevelProperties, SingleNodeVacuous) {
    const auto r = level_properties_check(RootedTree::single_node());
    EXPECT_TRUE(r.ok());
    EXPECT_EQ(r.levels, (std::vector<std::size_t>{1}));
}

TEST(LevelProperties, AllBinaryTreesUpTo8) {
    for (std::size_t n = 1; n <= 8; ++n) {
        for (const auto& t : enumerate_trees(n, 2)) {
            const auto r = level_properties_check(t);
            ASSERT_TRUE(r.ok()) << serialize_tree(t) << " " << (r.violations.empty() ? "" : r.violations[0]);
            for (int p : {0, 1}) ASSERT_TRUE(level_properties_check(t, 2, p).ok()) << serialize_tree(t);
        }
    }
}

TEST(LevelProperties, GeneralDegree) {
    for (std::size_t n = 1; n <= 7; ++n) {
        for (const auto& t : enumerate_trees(n)) ASSERT_TRUE(level_properties_check(t, 3).ok()) << serialize_tree(t);
    }
}

TEST(LevelProperties, UniversalB6) {
    const auto b6 = build_universal(UniversalSpec::make(Kind::binary, 6));
    EXPECT_TRUE(level_properties_check(b6.tree).ok());
    EXPECT_TRUE(level_properties_check(b6.tree, 2, 0).ok());
}

TEST(CutContract, Examples) {
    EXPECT_EQ(serialize_tree(cut(parse_tree("(()())"), 2)), "(())");
    const auto p4 = mut::testing::path(4);
    EXPECT_EQ(contract(p4, 1).size(), 2u);  // c = node 2 is internal
    const auto p3 = mut::testing::path(3);
    EXPECT_EQ(serialize_tree(contract(p3, 1)), "(())");  // c is a leaf
    // internal c with two children: both move up to a
    EXPECT_EQ(serialize_tree(contract(parse_tree("(((()())))"), 1)), "(()())");
    EXPECT_THROW(cut(p3, 0), ArgumentError);
    EXPECT_THROW(contract(p3, 0), ArgumentError);
    EXPECT_THROW(contract(parse_tree("((()()))"), 1), ArgumentError);
}

TEST(CutContract, OrderedKeepsPositions) {
    const auto t = parse_tree("(()((()()))())", true);
    EXPECT_EQ(serialize_tree(contract(t, 2)), "(()()()())");
    EXPECT_EQ(serialize_tree(cut(t, 1)), "(((()()))())");
}

TEST(ParityTransform, Examples) {
    const auto cherry = parse_tree("(()())");
    EXPECT_EQ(serialize_tree(parity_transform(cherry, {0, -1, -1})), "(()())");
    const auto lifted = parity_transform(cherry, {1, -1, -1});
    EXPECT_EQ(lifted.leaf_count(), 3u);
    EXPECT_EQ(serialize_tree(lifted), "((()())())");
    EXPECT_THROW(parity_transform(mut::testing::path(3), {0, 0, -1}), ArgumentError);
    EXPECT_THROW(parity_transform(cherry, {-1, -1, -1}), ArgumentError);
}

TEST(ParityTransform, LeafBoundAndParities) {
    std::mt19937_64 rng(21);
    for (std::size_t l = 1; l <= 6; ++l) {
        for (const auto& t : enumerate_series_reduced(l)) {
            if (t.size() > 9) continue;
            for (int rep = 0; rep < 8; ++rep) {
                std::vector<int> c(t.size(), -1);
                for (NodeId v = 0; v < t.size(); ++v) {
                    if (!t.is_leaf(v)) c[v] = static_cast<int>(rng() % 2);
                }
                std::vector<NodeId> img;
                const auto out = parity_transform(t, c, &img);
                ASSERT_LE(out.leaf_count(), 2 * t.leaf_count() - 1);
                for (NodeId v = 0; v < out.size(); ++v) ASSERT_NE(out.degree(v), 1u);
                const auto depth = out.depths();
                for (NodeId v = 0; v < t.size(); ++v) {
                    if (c[v] >= 0) ASSERT_EQ(static_cast<int>(depth[img[v]] % 2), c[v]);
                    if (auto p = t.parent(v)) ASSERT_TRUE(is_ancestor(out, img[*p], img[v]));
                }
            }
        }
    }
}

TEST(ParityTransform, InducesConstrainedEmbedding) {
    // parity-preserving embedding of T'' restricted to T is constraint-respecting
    std::mt19937_64 rng(22);
    const auto host = build_universal(UniversalSpec::make(Kind::binary, 12)).tree;
    for (std::size_t l = 2; l <= 4; ++l) {
        for (const auto& t : enumerate_series_reduced(l, 2)) {
            std::vector<int> c(t.size(), -1);
            for (NodeId v = 0; v < t.size(); ++v) {
                if (!t.is_leaf(v)) c[v] = static_cast<int>(rng() % 2);
            }
            std::vector<NodeId> img;
            const auto tt = parity_transform(t, c, &img);
            MinorSearchOptions po;
            const auto dd = tt.depths();
            po.parity.resize(tt.size());
            for (NodeId v = 0; v < tt.size(); ++v) po.parity[v] = static_cast<int>(dd[v] % 2);
            const auto w = is_topological_minor(tt, host, po);
            if (!w) continue;
            MinorSearchOptions co;
            co.parity = c;
            ASSERT_TRUE(is_topological_minor(t, host, co).has_value());
            const auto hd = host.depths();
            const NcaIndex hidx(host), tidx(t);
            for (NodeId v = 0; v < t.size(); ++v) {
                const NodeId hv = (*w)[img[v]];
                if (c[v] >= 0) ASSERT_EQ(static_cast<int>(hd[hv] % 2), c[v]);
                for (NodeId u = 0; u < t.size(); ++u) {
                    ASSERT_EQ((*w)[img[tidx.query(u, v)]], hidx.query((*w)[img[u]], hv));
                }
            }
        }
    }
}

TEST(MinimalHost, SmallValuesConsistentWithRecurrence) {
    std::vector<std::size_t> b{0};
    for (std::size_t n = 1; n <= 6; ++n) {
        const auto r = minimal_host(n, 12);
        ASSERT_TRUE(r.b.has_value()) << n;
        b.push_back(*r.b);
        std::size_t rhs = 1;
        for (std::size_t s = 2; s <= n; ++s) rhs += b[n / s];
        EXPECT_GE(*r.b, rhs) << n;
        for (const auto& g : enumerate_series_reduced(n, 2)) ASSERT_TRUE(is_topological_minor(g, r.witness).has_value());
    }
    EXPECT_EQ(b, (std::vector<std::size_t>{0, 1, 2, 3, 5, 6, 9}));
}

TEST(Measure, DeterministicAndWithinBounds) {
    MeasureOptions o;
    o.kind = Kind::binary;
    o.n_min = 1;
    o.n_max = 300;
    o.step = 7;
    o.samples = 2;
    o.seed = 5;
    const auto a = measure(o), b = measure(o);
    EXPECT_EQ(a, b);
    for (const auto& line : a) {
        const auto j = nlohmann::json::parse(line);
        if (j.contains("ok")) EXPECT_TRUE(j["ok"].get<bool>()) << line;
    }
    o.seed = 6;
    EXPECT_NE(measure(o), a);
}

TEST(Measure, SizeSweeps) {
    for (Kind k : {Kind::binary, Kind::general}) {
        MeasureOptions o;
        o.kind = k;
        o.n_max = 2000;
        o.widths = o.fast = false;
        const auto rows = measure(o);
        ASSERT_EQ(rows.size(), 2000u);
        for (const auto& line : rows) ASSERT_TRUE(nlohmann::json::parse(line)["ok"].get<bool>()) << line;
    }
}
