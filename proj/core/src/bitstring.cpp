#include "mut/bitstring.hpp"

#include <algorithm>

#include "mut/error.hpp"

namespace mut {

BitString BitString::from_string(std::string_view text) {
    BitString s;
    s.bits_.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '0') {
            s.bits_.push_back(false);
        } else if (text[i] == '1') {
            s.bits_.push_back(true);
        } else {
            throw ParseError("bit string may only contain 0 and 1", i);
        }
    }
    return s;
}

BitString BitString::from_uint(std::uint64_t value, std::size_t width) {
    if (width > 64) throw ArgumentError("BitString::from_uint: width > 64");
    BitString s;
    s.bits_.resize(width);
    for (std::size_t i = 0; i < width; ++i) s.bits_[width - 1 - i] = (value >> i) & 1U;
    return s;
}

BitString& BitString::append(const BitString& other) {
    bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
    return *this;
}

BitString BitString::prefix(std::size_t length) const { return substr(0, length); }

BitString BitString::substr(std::size_t pos, std::size_t length) const {
    if (pos > size()) throw ArgumentError("BitString::substr: position out of range");
    length = std::min(length, size() - pos);
    BitString s;
    s.bits_.assign(bits_.begin() + static_cast<std::ptrdiff_t>(pos),
                   bits_.begin() + static_cast<std::ptrdiff_t>(pos + length));
    return s;
}

bool BitString::starts_with(const BitString& p) const {
    return p.size() <= size() && std::equal(p.bits_.begin(), p.bits_.end(), bits_.begin());
}

std::uint64_t BitString::to_uint() const {
    if (size() > 64) throw ArgumentError("BitString::to_uint: more than 64 bits");
    std::uint64_t v = 0;
    for (bool b : bits_) v = (v << 1) | (b ? 1U : 0U);
    return v;
}

std::string BitString::to_string() const {
    std::string s;
    s.reserve(size());
    for (bool b : bits_) s += b ? '1' : '0';
    return s;
}

std::vector<std::uint8_t> BitString::pack() const {
    std::vector<std::uint8_t> out((size() + 7) / 8, 0);
    for (std::size_t i = 0; i < size(); ++i) {
        if (bits_[i]) out[i / 8] |= static_cast<std::uint8_t>(0x80U >> (i % 8));
    }
    return out;
}

BitString BitString::unpack(const std::vector<std::uint8_t>& bytes, std::size_t length) {
    if (length > bytes.size() * 8) throw DecodeError("BitString::unpack: not enough bytes");
    BitString s;
    s.bits_.resize(length);
    for (std::size_t i = 0; i < length; ++i) s.bits_[i] = (bytes[i / 8] >> (7 - i % 8)) & 1U;
    return s;
}

std::strong_ordering operator<=>(const BitString& a, const BitString& b) {
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i] != b[i]) return a[i] ? std::strong_ordering::greater : std::strong_ordering::less;
    }
    return a.size() <=> b.size();
}

}  // namespace mut
