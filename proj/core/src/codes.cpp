#include "mut/codes.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "mut/error.hpp"

namespace mut {

DominatingSequence build_dominating_sequence(std::uint64_t budget) {
    DominatingSequence seq;
    seq.budget = budget;
    if (budget == 0) return seq;
    // a_N has 2^{floor(log N)+1} - 1 entries; entry at 1-based position p is
    // floor(N / 2^{v}) with v = floor(log N) - ctz(p).
    const std::size_t depth = std::bit_width(budget) - 1;
    const std::size_t len = (std::size_t{1} << (depth + 1)) - 1;
    seq.entries.resize(len);
    for (std::size_t p = 1; p <= len; ++p) {
        const std::size_t halvings = depth - static_cast<std::size_t>(std::countr_zero(p));
        seq.entries[p - 1] = budget >> halvings;
    }
    return seq;
}

std::vector<std::size_t> dominate(std::span<const std::uint64_t> demand,
                                  const DominatingSequence& seq) {
    std::uint64_t total = 0;
    for (auto d : demand) {
        if (d == 0) throw ContractViolation("dominate: demands must be positive");
        total += d;
    }
    if (total > seq.budget) {
        throw ContractViolation("dominate: demand sum " + std::to_string(total) +
                                " exceeds budget " + std::to_string(seq.budget));
    }
    std::vector<std::size_t> out;
    out.reserve(demand.size());
    std::size_t j = 0;
    for (auto d : demand) {
        while (j < seq.size() && seq[j] < d) ++j;
        // always fits; running off the end is a bug here
        if (j == seq.size()) throw std::logic_error("dominate: greedy fit failed");
        out.push_back(j++);
    }
    return out;
}

std::vector<std::size_t> dominate(std::span<const std::uint64_t> demand, std::uint64_t budget) {
    return dominate(demand, build_dominating_sequence(budget));
}

namespace {

void alphabetical_rec(std::span<const std::uint64_t> w, std::size_t lo, std::size_t hi,
                      const BitString& prefix, std::vector<BitString>& out) {
    if (lo >= hi) return;
    std::uint64_t total = 0;
    for (std::size_t i = lo; i < hi; ++i) total += w[i];
    const std::uint64_t half = total / 2;
    // largest split whose strict prefix sum stays within half
    std::size_t split = lo;
    std::uint64_t before = 0;
    while (split + 1 < hi && before + w[split] <= half) {
        before += w[split];
        ++split;
    }
    BitString left = prefix, mid = prefix, right = prefix;
    left.push_back(false);
    mid.push_back(true);
    right.push_back(true);
    out[split] = mid;
    alphabetical_rec(w, lo, split, left, out);
    alphabetical_rec(w, split + 1, hi, right, out);
}

}  // namespace

std::vector<BitString> alphabetical_code(std::span<const std::uint64_t> weights) {
    if (weights.empty()) throw ArgumentError("alphabetical_code: empty input");
    for (auto w : weights) {
        if (w == 0) throw ArgumentError("alphabetical_code: weights must be positive");
    }
    std::vector<BitString> out(weights.size());
    alphabetical_rec(weights, 0, weights.size(), BitString{}, out);
    return out;
}

BitString elias_gamma(std::uint64_t x) {
    if (x == 0) throw ArgumentError("elias_gamma: x must be >= 1");
    const std::size_t width = std::bit_width(x);
    BitString s = BitString::from_uint(0, width - 1);
    s.append(BitString::from_uint(x, width));
    return s;
}

std::pair<std::uint64_t, std::size_t> elias_gamma_decode(const BitString& bits, std::size_t offset) {
    std::size_t zeros = 0;
    while (offset + zeros < bits.size() && !bits[offset + zeros]) ++zeros;
    if (offset + zeros >= bits.size()) throw DecodeError("elias_gamma_decode: missing terminator");
    if (zeros >= 64) throw DecodeError("elias_gamma_decode: value exceeds 64 bits");
    if (offset + 2 * zeros + 1 > bits.size()) throw DecodeError("elias_gamma_decode: truncated");
    std::uint64_t v = 0;
    for (std::size_t i = 0; i <= zeros; ++i) v = (v << 1) | (bits[offset + zeros + i] ? 1U : 0U);
    return {v, 2 * zeros + 1};
}

std::size_t degree_class(std::size_t degree) { return std::bit_width(degree + 1) - 1; }

std::size_t weighted_length_bound(std::size_t n, std::size_t degree) {
    // floor(log2(4n / (1 + deg))) == floor(log2(floor(4n / (1 + deg))))
    const std::size_t q = (4 * n) / (1 + degree);
    return q == 0 ? 0 : std::bit_width(q) - 1;
}

BitString shortlex_string(std::uint64_t rank) {
    const std::size_t len = std::bit_width(rank + 2) - 1;
    return BitString::from_uint(rank + 2 - (std::uint64_t{1} << len), len);
}

std::uint64_t shortlex_rank(std::size_t length, std::uint64_t value) {
    return value + (std::uint64_t{1} << length) - 2;
}

std::optional<std::size_t> WeightedLabeling::rank_of(const BitString& label) const {
    if (label.empty() || label.size() > 63) return std::nullopt;
    const auto r = shortlex_rank(label.size(), label.to_uint());
    if (r >= by_rank.size()) return std::nullopt;
    return static_cast<std::size_t>(r);
}

std::optional<NodeId> WeightedLabeling::node_of(const BitString& label) const {
    auto r = rank_of(label);
    if (!r) return std::nullopt;
    return by_rank[*r];
}

WeightedLabeling weighted_labels(const RootedTree& t) {
    WeightedLabeling out;
    const std::size_t n = t.size();
    if (n == 0) return out;
    std::vector<NodeId> order(n);
    std::iota(order.begin(), order.end(), NodeId{0});
    std::vector<std::size_t> bound(n), cls(n);
    for (NodeId v = 0; v < n; ++v) {
        bound[v] = weighted_length_bound(n, t.degree(v));
        cls[v] = degree_class(t.degree(v));
    }
    std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
        if (bound[a] != bound[b]) return bound[a] < bound[b];
        if (cls[a] != cls[b]) return cls[a] > cls[b];
        return a < b;
    });
    out.labels.resize(n);
    for (std::size_t r = 0; r < n; ++r) out.labels[order[r]] = shortlex_string(r);
    out.by_rank = std::move(order);
    return out;
}

}  // namespace mut
