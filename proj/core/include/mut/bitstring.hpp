#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mut {

/// Finite 0/1 string. Ordering is lexicographic, a proper prefix sorting first.
class BitString {
public:
    BitString() = default;
    static BitString from_string(std::string_view text);
    /// `width` low bits of value, most significant first.
    static BitString from_uint(std::uint64_t value, std::size_t width);

    std::size_t size() const { return bits_.size(); }
    bool empty() const { return bits_.empty(); }
    bool operator[](std::size_t i) const { return bits_[i]; }

    void push_back(bool bit) { bits_.push_back(bit); }
    BitString& append(const BitString& other);
    BitString prefix(std::size_t length) const;
    BitString substr(std::size_t pos, std::size_t length) const;
    bool starts_with(const BitString& p) const;

    /// Interpret as an unsigned big-endian integer (size() <= 64).
    std::uint64_t to_uint() const;
    std::string to_string() const;

    /// MSB-first packing, zero padded to whole bytes.
    std::vector<std::uint8_t> pack() const;
    static BitString unpack(const std::vector<std::uint8_t>& bytes, std::size_t length);

    friend bool operator==(const BitString&, const BitString&) = default;
    friend std::strong_ordering operator<=>(const BitString& a, const BitString& b);

private:
    std::vector<bool> bits_;
};

inline BitString operator+(BitString a, const BitString& b) { return a.append(b); }

}  // namespace mut
