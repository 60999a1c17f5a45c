#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "mut/bitstring.hpp"
#include "mut/tree.hpp"

namespace mut {

/*
 * a_0 = (), a_1 = (1), a_N = a_{N/2} . (N) . a_{N/2}.
 *
 * Holds 2^i copies of floor(N / 2^i) for i = 0..floor(log N), so any
 * sequence of positive integers summing to at most N is pointwise dominated
 * by one of its subsequences.
 */
struct DominatingSequence {
    std::vector<std::uint64_t> entries;
    std::uint64_t budget = 0;

    std::size_t size() const { return entries.size(); }
    std::uint64_t operator[](std::size_t i) const { return entries[i]; }
};

DominatingSequence build_dominating_sequence(std::uint64_t budget);

/// Greedy leftmost fit of `demand` into a_budget. Returned indices are
/// 0-based and strictly increasing with entries[j[i]] >= demand[i].
/// Throws ContractViolation when sum(demand) > budget or an entry is 0.
std::vector<std::size_t> dominate(std::span<const std::uint64_t> demand, std::uint64_t budget);
std::vector<std::size_t> dominate(std::span<const std::uint64_t> demand,
                                  const DominatingSequence& seq);

/// Nonempty strings s_1 <lex ... <lex s_m with |s_i| <= 1 + log2(B / b_i),
/// B = sum of weights.
std::vector<BitString> alphabetical_code(std::span<const std::uint64_t> weights);

BitString elias_gamma(std::uint64_t x);
/// Decodes one code word starting at `offset`; returns (value, bits consumed).
std::pair<std::uint64_t, std::size_t> elias_gamma_decode(const BitString& bits,
                                                         std::size_t offset = 0);

/*
 * Distinct labels with |l(u)| <= 2 + log2(|T| / (1 + deg(u))).
 *
 * Each node gets the bound B_u = floor(2 + log2(|T| / (1 + deg u))); nodes are
 * ranked by (B_u, degree class descending, id) and rank r receives the r-th
 * nonempty string in shortlex order. The Kraft sum of 2^-B_u stays below 1/2,
 * which makes rank r fit in B_u bits.
 */
struct WeightedLabeling {
    std::vector<BitString> labels;   // per node
    std::vector<NodeId> by_rank;     // rank -> node

    /// Shortlex rank of a label string, or nullopt if it is not one of ours.
    std::optional<std::size_t> rank_of(const BitString& label) const;
    std::optional<NodeId> node_of(const BitString& label) const;
};

WeightedLabeling weighted_labels(const RootedTree& t);

/// Class of a degree in the weighted scheme: deg in [2^k - 1, 2^{k+1} - 1).
std::size_t degree_class(std::size_t degree);
/// floor(2 + log2(n / (1 + degree))) computed exactly.
std::size_t weighted_length_bound(std::size_t n, std::size_t degree);

/// Rank r in shortlex order over nonempty strings: "0","1","00",...
BitString shortlex_string(std::uint64_t rank);
std::uint64_t shortlex_rank(std::size_t length, std::uint64_t value);

}  // namespace mut
