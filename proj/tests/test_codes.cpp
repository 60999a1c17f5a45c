#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>

#include "mut/codes.hpp"
#include "mut/error.hpp"
#include "testutil.hpp"

using namespace mut;

namespace {
std::vector<std::uint64_t> seq(std::uint64_t n) { return build_dominating_sequence(n).entries; }
}  // namespace

TEST(Dominating, Examples) {
    EXPECT_EQ(seq(1), (std::vector<std::uint64_t>{1}));
    EXPECT_EQ(seq(2), (std::vector<std::uint64_t>{1, 2, 1}));
    EXPECT_EQ(seq(5), (std::vector<std::uint64_t>{1, 2, 1, 5, 1, 2, 1}));
    EXPECT_TRUE(seq(0).empty());
}

TEST(Dominating, MatchesRecurrence) {
    std::vector<std::vector<std::uint64_t>> a(300);
    a[1] = {1};
    for (std::uint64_t n = 2; n < 300; ++n) {
        a[n] = a[n / 2];
        a[n].push_back(n);
        a[n].insert(a[n].end(), a[n / 2].begin(), a[n / 2].end());
        ASSERT_EQ(seq(n), a[n]) << n;
    }
}

TEST(Dominating, MultisetStructure) {
    for (std::uint64_t n = 1; n <= 4096; ++n) {
        const auto s = seq(n);
        const std::size_t depth = std::bit_width(n) - 1;
        ASSERT_EQ(s.size(), (std::size_t{2} << depth) - 1);
        std::map<std::uint64_t, std::size_t> count;
        for (auto x : s) ++count[x];
        std::map<std::uint64_t, std::size_t> want;
        for (std::size_t i = 0; i <= depth; ++i) want[n >> i] += std::size_t{1} << i;
        ASSERT_EQ(count, want) << n;
    }
}

TEST(Dominate, Examples) {
    // 0-based indices; the 1-based positions are one larger
    const std::vector<std::uint64_t> b1{1}, b2{2, 1, 1}, b3{3, 2};
    EXPECT_EQ(dominate(b1, 1), (std::vector<std::size_t>{0}));
    EXPECT_EQ(dominate(b2, 4), (std::vector<std::size_t>{1, 2, 3}));
    EXPECT_EQ(dominate(b3, 5), (std::vector<std::size_t>{3, 5}));
}

TEST(Dominate, Errors) {
    const std::vector<std::uint64_t> over{3, 3}, zero{1, 0};
    EXPECT_THROW(dominate(over, 5), ContractViolation);
    EXPECT_THROW(dominate(zero, 5), ContractViolation);
}

TEST(Dominate, Randomized) {
    std::mt19937_64 rng(1);
    for (int it = 0; it < 10000; ++it) {
        const std::uint64_t n = 1 + rng() % 1024;
        std::vector<std::uint64_t> b;
        std::uint64_t left = n;
        while (left > 0 && rng() % 8 != 0) {
            const std::uint64_t cap = rng() % 4 == 0 ? left : std::min<std::uint64_t>(left, 16);
            const std::uint64_t x = 1 + rng() % cap;
            b.push_back(x);
            left -= x;
        }
        const auto s = build_dominating_sequence(n);
        const auto j = dominate(b, s);
        ASSERT_EQ(j.size(), b.size());
        for (std::size_t i = 0; i < j.size(); ++i) {
            ASSERT_LT(j[i], s.size());
            ASSERT_GE(s[j[i]], b[i]);
            if (i) ASSERT_LT(j[i - 1], j[i]);
        }
    }
}

namespace {
void check_alphabetical(const std::vector<std::uint64_t>& w) {
    const auto code = alphabetical_code(w);
    ASSERT_EQ(code.size(), w.size());
    long double total = 0;
    for (auto x : w) total += x;
    for (std::size_t i = 0; i < code.size(); ++i) {
        ASSERT_FALSE(code[i].empty());
        const long double bound = 1.0L + std::log2(total / static_cast<long double>(w[i]));
        ASSERT_LE(static_cast<long double>(code[i].size()), bound + 1e-9L);
        if (i) ASSERT_TRUE(code[i - 1] < code[i]) << code[i - 1].to_string() << " " << code[i].to_string();
    }
}
}  // namespace

TEST(Alphabetical, Examples) {
    const auto one = alphabetical_code(std::vector<std::uint64_t>{1});
    ASSERT_EQ(one.size(), 1u);
    EXPECT_LE(one[0].size(), 1u);
    EXPECT_FALSE(one[0].empty());
    check_alphabetical({1, 1});
    const auto three = alphabetical_code(std::vector<std::uint64_t>{2, 1, 1});
    EXPECT_LE(three[0].size(), 2u);
    EXPECT_LE(three[1].size(), 3u);
    EXPECT_LE(three[2].size(), 3u);
    check_alphabetical({2, 1, 1});
    EXPECT_THROW(alphabetical_code(std::vector<std::uint64_t>{}), ArgumentError);
    EXPECT_THROW(alphabetical_code(std::vector<std::uint64_t>{1, 0}), ArgumentError);
}

TEST(Alphabetical, FrozenOutputs) {
    auto strs = [](std::vector<std::uint64_t> w) {
        std::vector<std::string> out;
        for (const auto& s : alphabetical_code(w)) out.push_back(s.to_string());
        return out;
    };
    EXPECT_EQ(strs({1}), (std::vector<std::string>{"1"}));
    EXPECT_EQ(strs({1, 1}), (std::vector<std::string>{"01", "1"}));
    EXPECT_EQ(strs({2, 1, 1}), (std::vector<std::string>{"01", "1", "11"}));
}

TEST(Alphabetical, Randomized) {
    std::mt19937_64 rng(2);
    for (int it = 0; it < 10000; ++it) {
        std::vector<std::uint64_t> w(1 + rng() % 20);
        for (auto& x : w) x = 1 + (rng() % 4 == 0 ? rng() % 100000 : rng() % 10);
        check_alphabetical(w);
    }
}

TEST(Gamma, Examples) {
    EXPECT_EQ(elias_gamma(1).to_string(), "1");
    EXPECT_EQ(elias_gamma(2).to_string(), "010");
    EXPECT_EQ(elias_gamma(5).to_string(), "00101");
    EXPECT_THROW(elias_gamma(0), ArgumentError);
}

TEST(Gamma, RoundTrip) {
    for (std::uint64_t x = 1; x <= 1000000; ++x) {
        const auto g = elias_gamma(x);
        const auto [v, used] = elias_gamma_decode(g);
        ASSERT_EQ(v, x);
        ASSERT_EQ(used, g.size());
    }
    // offset decoding from a concatenation
    auto s = elias_gamma(9) + elias_gamma(3);
    EXPECT_EQ(elias_gamma_decode(s, 7).first, 3u);
}

TEST(Gamma, Malformed) {
    EXPECT_THROW(elias_gamma_decode(BitString::from_string("000")), DecodeError);
    EXPECT_THROW(elias_gamma_decode(BitString::from_string("0010")), DecodeError);
}

namespace {
void check_weighted(const RootedTree& t) {
    const auto wl = weighted_labels(t);
    std::set<std::string> seen;
    for (NodeId v = 0; v < t.size(); ++v) {
        const auto& l = wl.labels[v];
        ASSERT_FALSE(l.empty());
        ASSERT_TRUE(seen.insert(l.to_string()).second);
        const double bound = 2.0 + std::log2(static_cast<double>(t.size()) / (1.0 + t.degree(v)));
        ASSERT_LE(static_cast<double>(l.size()), bound + 1e-9);
        ASSERT_EQ(wl.node_of(l), std::optional<NodeId>(v));
    }
}
}  // namespace

TEST(WeightedLabels, Examples) {
    const auto one = weighted_labels(RootedTree::single_node());
    EXPECT_LE(one.labels[0].size(), 2u);
    const auto st = mut::testing::star(3);
    const auto w = weighted_labels(st);
    EXPECT_LE(w.labels[0].size(), 2u);
    for (NodeId v = 1; v <= 3; ++v) EXPECT_LE(w.labels[v].size(), 4u);
    const auto p = weighted_labels(mut::testing::path(4));
    for (const auto& l : p.labels) EXPECT_LE(l.size(), 4u);
}

TEST(WeightedLabels, AllSmallTrees) {
    for (std::size_t n = 1; n <= 9; ++n) {
        for (const auto& t : enumerate_trees(n)) check_weighted(t);
    }
}

TEST(WeightedLabels, RandomTrees) {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 1000; ++i) check_weighted(random_tree(1 + rng() % 500, rng));
}

TEST(Shortlex, Order) {
    EXPECT_EQ(shortlex_string(0).to_string(), "0");
    EXPECT_EQ(shortlex_string(1).to_string(), "1");
    EXPECT_EQ(shortlex_string(2).to_string(), "00");
    EXPECT_EQ(shortlex_string(5).to_string(), "11");
    EXPECT_EQ(shortlex_string(6).to_string(), "000");
    for (std::uint64_t r = 0; r < 5000; ++r) {
        const auto s = shortlex_string(r);
        ASSERT_EQ(shortlex_rank(s.size(), s.to_uint()), r);
    }
}

TEST(DegreeClass, Boundaries) {
    EXPECT_EQ(degree_class(0), 0u);
    EXPECT_EQ(degree_class(1), 1u);
    EXPECT_EQ(degree_class(2), 1u);
    EXPECT_EQ(degree_class(3), 2u);
    EXPECT_EQ(degree_class(6), 2u);
    EXPECT_EQ(degree_class(7), 3u);
}
