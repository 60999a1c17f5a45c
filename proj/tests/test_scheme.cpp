#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "mut/error.hpp"
#include "mut/scheme.hpp"
#include "testutil.hpp"

using namespace mut;

TEST(Scheme, SingleNode) {
    const SchemeInstance inst(UniversalSpec::make(Kind::binary, 1));
    EXPECT_EQ(inst.width(), 1u);
    const auto l = inst.encode(RootedTree::single_node());
    ASSERT_EQ(l.size(), 1u);
    EXPECT_EQ(l[0].to_string(), "0");
}

TEST(Scheme, CherryInB3) {
    const SchemeInstance inst(UniversalSpec::make(Kind::binary, 3));
    EXPECT_EQ(inst.width(), 2u);
    const auto l = inst.encode(parse_tree("(()())"));
    std::set<std::string> distinct;
    for (const auto& x : l) {
        EXPECT_EQ(x.size(), 2u);
        distinct.insert(x.to_string());
    }
    EXPECT_EQ(distinct.size(), 3u);
    EXPECT_EQ(inst.decode_nca(l[1], l[2]), l[0]);
    EXPECT_EQ(inst.decode_nca(l[2], l[1]), l[0]);
    EXPECT_EQ(inst.decode_nca(l[1], l[1]), l[1]);
    EXPECT_EQ(inst.encode(parse_tree("(()())")), l);
}

TEST(Scheme, MalformedLabels) {
    const SchemeInstance inst(UniversalSpec::make(Kind::binary, 5));  // |B_5| = 8, width 3
    EXPECT_EQ(inst.width(), 3u);
    EXPECT_THROW(inst.decode_nca(BitString::from_string("00"), BitString::from_string("000")), DecodeError);
    const SchemeInstance six(UniversalSpec::make(Kind::binary, 6));  // |B_6| = 9, width 4
    EXPECT_THROW(six.decode_nca(BitString::from_string("1111"), BitString::from_string("0000")), DecodeError);
}

namespace {
void round_trip(Kind k, std::size_t nmax) {
    for (std::size_t n = 1; n <= nmax; ++n) {
        const SchemeInstance inst(UniversalSpec::make(k, n));
        const auto trees = k == Kind::general   ? enumerate_trees(n)
                           : k == Kind::binary ? enumerate_trees(n, 2)
                                               : enumerate_ordered_trees(n, 2);
        for (const auto& t : trees) {
            const auto l = inst.encode(t);
            const NcaIndex idx(t);
            std::set<std::string> distinct;
            for (const auto& x : l) {
                ASSERT_EQ(x.size(), inst.width());
                distinct.insert(x.to_string());
            }
            ASSERT_EQ(distinct.size(), t.size());
            for (NodeId u = 0; u < t.size(); ++u) {
                for (NodeId v = 0; v < t.size(); ++v) {
                    ASSERT_EQ(inst.decode_nca(l[u], l[v]), l[idx.query(u, v)]) << serialize_tree(t);
                }
            }
        }
    }
}
}  // namespace

TEST(Scheme, RoundTripBinary) { round_trip(Kind::binary, 9); }
TEST(Scheme, RoundTripGeneral) { round_trip(Kind::general, 7); }
TEST(Scheme, RoundTripOrdered) { round_trip(Kind::ordered, 7); }

TEST(Scheme, WidthBound) {
    for (Kind k : {Kind::binary, Kind::general}) {
        const double c = size_exponent(k);
        for (std::size_t n = 2; n <= 2000; ++n) {
            const auto w = label_width(UniversalSpec::make(k, n));
            ASSERT_LE(w, static_cast<std::size_t>(std::ceil(c * std::log2(static_cast<double>(n)))) + 2) << n;
        }
    }
}

TEST(Scheme, LabelFileRoundTrip) {
    const SchemeInstance inst(UniversalSpec::make(Kind::general, 6));
    const auto l = inst.encode(parse_tree("(()(())())"));
    const auto parsed = parse_label_file(write_label_file(l));
    ASSERT_EQ(parsed.size(), l.size());
    for (std::size_t i = 0; i < l.size(); ++i) EXPECT_EQ(parsed.at(i), l[i]);
    EXPECT_THROW(parse_label_file("0 0101\n"), ParseError);
}

TEST(Scheme, IndexLabelRoundTrip) {
    const SchemeInstance inst(UniversalSpec::make(Kind::binary, 9));
    for (std::uint64_t i = 0; i < inst.universal().size(); ++i) EXPECT_EQ(inst.index_of(inst.label_of(i)), i);
}
