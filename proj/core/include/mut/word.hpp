#pragma once

#include <array>
#include <cstdint>

#include "mut/bitstring.hpp"

namespace mut {

/*
 * Fixed 1024-bit machine word. Bit position 0 is the most significant bit,
 * so a bit string stored from position 0 compares like an integer.
 *
 * Every member that reads or produces a word counts as one primitive
 * operation on a thread-local counter; decode paths are measured with it.
 */
class Word {
public:
    static constexpr std::size_t kBits = 1024;
    static constexpr std::size_t kLimbs = kBits / 64;

    Word() = default;
    static Word from_bits(const BitString& s);  // not counted
    BitString to_bits(std::size_t length) const;  // not counted

    /// Bits [pos, pos + len) as an integer, first bit most significant; len <= 64.
    std::uint64_t extract(std::size_t pos, std::size_t len) const;
    bool bit(std::size_t pos) const;
    /// ORs `len` low bits of value into [pos, pos + len).
    Word deposit(std::size_t pos, std::size_t len, std::uint64_t value) const;

    Word shl(std::size_t k) const;  // toward position 0
    Word shr(std::size_t k) const;  // away from position 0
    Word prefix(std::size_t len) const;  // zero everything from len on
    Word range(std::size_t from, std::size_t to) const;  // keep [from, to)

    Word operator^(const Word& o) const;
    Word operator|(const Word& o) const;
    Word operator&(const Word& o) const;
    Word operator-(const Word& o) const;  // as kBits-bit unsigned integers
    Word mul(std::uint64_t k) const;      // low kBits of the product

    /// Position of the first set bit, kBits when zero.
    std::size_t first_one() const;
    std::size_t popcount_prefix(std::size_t len) const;
    /// Position of the k-th one / zero (k >= 1), kBits when absent.
    std::size_t select1(std::size_t k) const;
    std::size_t select0(std::size_t k) const;

    bool operator==(const Word& o) const;  // counted
    bool is_zero() const;

private:
    std::array<std::uint64_t, kLimbs> limb_{};
};

std::uint64_t op_count();
void reset_op_count();
void count_op(std::uint64_t k = 1);

}  // namespace mut
