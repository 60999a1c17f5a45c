#include "mut/word.hpp"

#include <bit>

#include "mut/error.hpp"

namespace mut {

namespace {
thread_local std::uint64_t g_ops = 0;

// position of the k-th one (k >= 1, 0-based result) inside a 64-bit limb,
// counting from the most significant bit
std::size_t select_in_limb(std::uint64_t x, std::size_t k) {
    for (std::size_t i = 1; i < k; ++i) x &= ~(std::uint64_t{1} << (63 - std::countl_zero(x)));
    return static_cast<std::size_t>(std::countl_zero(x));
}
}  // namespace

std::uint64_t op_count() { return g_ops; }
void reset_op_count() { g_ops = 0; }
void count_op(std::uint64_t k) { g_ops += k; }

Word Word::from_bits(const BitString& s) {
    if (s.size() > kBits) throw ArgumentError("Word::from_bits: more than 1024 bits");
    Word w;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i]) w.limb_[i / 64] |= std::uint64_t{1} << (63 - i % 64);
    }
    return w;
}

BitString Word::to_bits(std::size_t length) const {
    BitString s;
    for (std::size_t i = 0; i < length; ++i) s.push_back((limb_[i / 64] >> (63 - i % 64)) & 1U);
    return s;
}

std::uint64_t Word::extract(std::size_t pos, std::size_t len) const {
    ++g_ops;
    if (len == 0) return 0;
    const std::size_t li = pos / 64, off = pos % 64;
    std::uint64_t v = li < kLimbs ? limb_[li] << off : 0;
    if (off != 0 && li + 1 < kLimbs) v |= limb_[li + 1] >> (64 - off);
    return v >> (64 - len);
}

bool Word::bit(std::size_t pos) const {
    ++g_ops;
    return (limb_[pos / 64] >> (63 - pos % 64)) & 1U;
}

Word Word::deposit(std::size_t pos, std::size_t len, std::uint64_t value) const {
    ++g_ops;
    Word w = *this;
    if (len == 0) return w;
    if (len < 64) value &= (std::uint64_t{1} << len) - 1;
    // value occupies [pos, pos+len); align its last bit
    const std::size_t end = pos + len;  // exclusive
    const std::size_t li = (end - 1) / 64, off = 63 - (end - 1) % 64;
    w.limb_[li] |= value << off;
    if (off != 0 && li > 0 && off + len > 64) w.limb_[li - 1] |= value >> (64 - off);
    return w;
}

Word Word::shl(std::size_t k) const {
    ++g_ops;
    Word w;
    if (k >= kBits) return w;
    const std::size_t ls = k / 64, bs = k % 64;
    for (std::size_t i = 0; i + ls < kLimbs; ++i) {
        std::uint64_t v = limb_[i + ls] << bs;
        if (bs != 0 && i + ls + 1 < kLimbs) v |= limb_[i + ls + 1] >> (64 - bs);
        w.limb_[i] = v;
    }
    return w;
}

Word Word::shr(std::size_t k) const {
    ++g_ops;
    Word w;
    if (k >= kBits) return w;
    const std::size_t ls = k / 64, bs = k % 64;
    for (std::size_t i = kLimbs; i-- > ls;) {
        std::uint64_t v = limb_[i - ls] >> bs;
        if (bs != 0 && i - ls >= 1) v |= limb_[i - ls - 1] << (64 - bs);
        w.limb_[i] = v;
    }
    return w;
}

Word Word::prefix(std::size_t len) const {
    ++g_ops;
    Word w = *this;
    for (std::size_t i = 0; i < kLimbs; ++i) {
        const std::size_t lo = i * 64;
        if (len <= lo) {
            w.limb_[i] = 0;
        } else if (len < lo + 64) {
            w.limb_[i] &= ~(~std::uint64_t{0} >> (len - lo));
        }
    }
    return w;
}

Word Word::range(std::size_t from, std::size_t to) const {
    ++g_ops;
    Word w = *this;
    for (std::size_t i = 0; i < kLimbs; ++i) {
        const std::size_t lo = i * 64;
        std::uint64_t keep = ~std::uint64_t{0};
        if (to <= lo) keep = 0;
        else if (to < lo + 64) keep &= ~(~std::uint64_t{0} >> (to - lo));
        if (from >= lo + 64) keep = 0;
        else if (from > lo) keep &= ~std::uint64_t{0} >> (from - lo);
        w.limb_[i] &= keep;
    }
    return w;
}

Word Word::operator^(const Word& o) const {
    ++g_ops;
    Word w;
    for (std::size_t i = 0; i < kLimbs; ++i) w.limb_[i] = limb_[i] ^ o.limb_[i];
    return w;
}

Word Word::operator|(const Word& o) const {
    ++g_ops;
    Word w;
    for (std::size_t i = 0; i < kLimbs; ++i) w.limb_[i] = limb_[i] | o.limb_[i];
    return w;
}

Word Word::operator&(const Word& o) const {
    ++g_ops;
    Word w;
    for (std::size_t i = 0; i < kLimbs; ++i) w.limb_[i] = limb_[i] & o.limb_[i];
    return w;
}

Word Word::operator-(const Word& o) const {
    ++g_ops;
    Word w;
    std::uint64_t borrow = 0;
    for (std::size_t i = kLimbs; i-- > 0;) {
        const std::uint64_t a = limb_[i], b = o.limb_[i];
        const std::uint64_t d = a - b - borrow;
        borrow = (a < b || (a == b && borrow)) ? 1 : 0;
        w.limb_[i] = d;
    }
    return w;
}

Word Word::mul(std::uint64_t k) const {
    ++g_ops;
    Word w;
    unsigned __int128 carry = 0;
    for (std::size_t i = kLimbs; i-- > 0;) {
        const unsigned __int128 p = static_cast<unsigned __int128>(limb_[i]) * k + carry;
        w.limb_[i] = static_cast<std::uint64_t>(p);
        carry = p >> 64;
    }
    return w;
}

std::size_t Word::first_one() const {
    ++g_ops;
    for (std::size_t i = 0; i < kLimbs; ++i) {
        if (limb_[i]) return i * 64 + static_cast<std::size_t>(std::countl_zero(limb_[i]));
    }
    return kBits;
}

std::size_t Word::popcount_prefix(std::size_t len) const {
    ++g_ops;
    std::size_t c = 0;
    for (std::size_t i = 0; i < kLimbs && i * 64 < len; ++i) {
        std::uint64_t v = limb_[i];
        if (len < i * 64 + 64) v &= ~(~std::uint64_t{0} >> (len - i * 64));
        c += static_cast<std::size_t>(std::popcount(v));
    }
    return c;
}

std::size_t Word::select1(std::size_t k) const {
    ++g_ops;
    if (k == 0) return kBits;
    for (std::size_t i = 0; i < kLimbs; ++i) {
        const std::size_t c = static_cast<std::size_t>(std::popcount(limb_[i]));
        if (k <= c) return i * 64 + select_in_limb(limb_[i], k);
        k -= c;
    }
    return kBits;
}

std::size_t Word::select0(std::size_t k) const {
    ++g_ops;
    if (k == 0) return kBits;
    for (std::size_t i = 0; i < kLimbs; ++i) {
        const std::size_t c = 64 - static_cast<std::size_t>(std::popcount(limb_[i]));
        if (k <= c) return i * 64 + select_in_limb(~limb_[i], k);
        k -= c;
    }
    return kBits;
}

bool Word::operator==(const Word& o) const {
    ++g_ops;
    return limb_ == o.limb_;
}

bool Word::is_zero() const {
    ++g_ops;
    for (auto l : limb_) {
        if (l) return false;
    }
    return true;
}

}  // namespace mut
