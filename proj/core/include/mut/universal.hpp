#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mut/tree.hpp"

namespace mut {

enum class Kind { binary, general, ordered };

std::string_view to_string(Kind k);
Kind parse_kind(std::string_view s);  // "binary" | "general" | "ordered" (also "ordered-binary")
double default_alpha(Kind k);
/// Exponent c of the size bound |U| <= n^c for the default alpha.
double size_exponent(Kind k);

struct UniversalSpec {
    Kind kind = Kind::binary;
    std::size_t n = 0;
    double alpha = 0.704;

    static UniversalSpec make(Kind kind, std::size_t n, std::optional<double> alpha = std::nullopt);
    void validate() const;  // throws ArgumentError
    friend bool operator==(const UniversalSpec&, const UniversalSpec&) = default;
};

/*
 * Exact sizes of the constructed trees, memoized per (kind, alpha) in a
 * process-wide table. The returned snapshot covers at least 0..n_max and is
 * never mutated afterwards.
 */
using SizeTable = std::shared_ptr<const std::vector<std::uint64_t>>;
SizeTable size_table(Kind kind, double alpha, std::size_t n_max);
std::uint64_t universal_size(const UniversalSpec& spec);

/// Seeds the memo table, e.g. from an on-disk cache. Entries must be the
/// exact recurrence values; a shorter table than the current one is ignored.
void seed_size_table(Kind kind, double alpha, std::vector<std::uint64_t> sizes);

struct UniversalTree {
    UniversalSpec spec;
    RootedTree tree;      // node id == preorder number
    NcaIndex index;
    std::vector<bool> spine;  // node belongs to the top-level spine

    std::size_t size() const { return tree.size(); }
};

/// Materializes the tree; node ids follow preorder of the construction.
UniversalTree build_universal(const UniversalSpec& spec);
std::uint64_t universal_nca(const UniversalTree& ut, std::uint64_t x, std::uint64_t y);

void write_dot(std::ostream& os, const UniversalTree& ut);

}  // namespace mut
