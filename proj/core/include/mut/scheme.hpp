#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "mut/bitstring.hpp"
#include "mut/tree.hpp"
#include "mut/universal.hpp"

namespace mut {

/// max(1, ceil(log2 |U|)).
std::size_t label_width(const UniversalSpec& spec);

/*
 * Labels are fixed-width big-endian preorder indices into the universal
 * tree of `spec`. The decoder answers from the materialized universal tree.
 */
class SchemeInstance {
public:
    explicit SchemeInstance(const UniversalSpec& spec);

    const UniversalSpec& spec() const { return universal_->spec; }
    std::size_t width() const { return width_; }
    const UniversalTree& universal() const { return *universal_; }

    std::vector<BitString> encode(const RootedTree& t) const;
    BitString decode_nca(const BitString& a, const BitString& b) const;

    BitString label_of(std::uint64_t index) const;
    std::uint64_t index_of(const BitString& label) const;  // throws DecodeError

private:
    std::shared_ptr<const UniversalTree> universal_;
    std::size_t width_;
};

/// "node-index: bits" per line.
std::string write_label_file(const std::vector<BitString>& labels);
std::map<std::size_t, BitString> parse_label_file(std::string_view text);

}  // namespace mut
