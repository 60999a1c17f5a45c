#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mut/tree.hpp"
#include "mut/universal.hpp"

namespace mut {

struct Embedding {
    UniversalSpec spec;
    std::vector<std::uint64_t> map;  // tree node -> preorder index in the universal tree
};

/// Constructive embedding of t into the universal tree of `spec`, computed
/// from the size recurrence alone. The ordered kind honours t's child order.
Embedding embed(const RootedTree& t, const UniversalSpec& spec);

/// Injective and NCA preserving over all pairs.
bool verify_embedding(const RootedTree& t, const Embedding& e, const UniversalTree& ut);
/// Edges map to descending paths that are internally disjoint and avoid images.
bool check_subdivision(const RootedTree& t, const Embedding& e, const UniversalTree& ut);

/// "i j" per line, i the tree node and j its image.
std::string write_embedding(const Embedding& e);
std::vector<std::uint64_t> parse_embedding(std::string_view text);

}  // namespace mut
