#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mut/bitstring.hpp"
#include "mut/word.hpp"

namespace mut {

/*
 * Sorted set of at most s_max integers from [1, M] in one Word.
 *
 *   [gamma(bl)] [gamma(count + 1)] [count low fields] [high part, unary]
 *
 * With bl = max(1, M / s_max) and W = bit_width(bl - 1), element x is split
 * as x - 1 = y * bl + low. Low fields are W + 1 bits wide, a leading 1
 * followed by low. The high part lists 0^(y_i - y_{i-1}) 1 per element.
 * The layout depends only on the set, s_max and M.
 */
class IntSetEncoding {
public:
    IntSetEncoding() = default;
    static IntSetEncoding encode(std::span<const std::uint64_t> xs, std::size_t s_max, std::uint64_t M);

    std::size_t s_max() const { return s_max_; }
    std::uint64_t universe() const { return M_; }
    std::size_t size_bits() const { return length_; }
    BitString bits() const { return word_.to_bits(length_); }
    const Word& word() const { return word_; }

    std::size_t count() const;
    /// k-th smallest, 1-based.
    std::uint64_t extract(std::size_t k) const;
    /// Smallest element >= x with its 0-based rank; nullopt when none.
    std::optional<std::pair<std::uint64_t, std::size_t>> successor(std::uint64_t x) const;
    /// Number of elements <= x.
    std::size_t rank(std::uint64_t x) const;
    /// Encoding of the k smallest elements.
    IntSetEncoding truncate(std::size_t k) const;

    std::vector<std::uint64_t> to_vector() const;  // not constant time

    friend bool operator==(const IntSetEncoding& a, const IntSetEncoding& b) {
        return a.length_ == b.length_ && a.s_max_ == b.s_max_ && a.M_ == b.M_ && a.word_ == b.word_;
    }

private:
    struct Layout {
        std::size_t count, lows_at, highs_at;
    };
    Layout layout() const;
    std::size_t block() const;
    std::size_t field_width() const;

    Word word_;
    std::size_t length_ = 0;
    std::size_t s_max_ = 1;
    std::uint64_t M_ = 1;

    friend std::size_t first_difference(const IntSetEncoding& a, const IntSetEncoding& b);
};

/// 0-based index of the first position < min(count) where the sets differ,
/// or min(a.count(), b.count()) when one is a prefix of the other.
/// Both encodings must share s_max and M.
std::size_t first_difference(const IntSetEncoding& a, const IntSetEncoding& b);

}  // namespace mut
