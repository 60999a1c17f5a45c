#include "mut/intset.hpp"

#include <algorithm>
#include <array>
#include <bit>

#include "mut/codes.hpp"
#include "mut/error.hpp"

namespace mut {

namespace {

std::size_t block_length(std::size_t s_max, std::uint64_t M) {
    return std::max<std::uint64_t>(1, M / std::max<std::size_t>(1, s_max));
}

std::size_t width_for(std::size_t bl) { return bl <= 1 ? 0 : std::bit_width(bl - 1); }

// ones at the last (or leading) bit of every fw-wide field, across the word
struct Patterns {
    std::array<Word, 65> last, lead;
    Patterns() {
        for (std::size_t fw = 1; fw <= 64; ++fw) {
            BitString a, b;
            for (std::size_t pos = 0; pos < Word::kBits; ++pos) {
                a.push_back(pos % fw == fw - 1);
                b.push_back(pos % fw == 0);
            }
            last[fw] = Word::from_bits(a);
            lead[fw] = Word::from_bits(b);
        }
    }
};

const Patterns& patterns() {
    static const Patterns p;
    return p;
}

// gamma header length for value v
std::size_t gamma_len(std::uint64_t v) { return 2 * std::bit_width(v) - 1; }

}  // namespace

std::size_t IntSetEncoding::block() const { return block_length(s_max_, M_); }
std::size_t IntSetEncoding::field_width() const { return width_for(block()) + 1; }

IntSetEncoding IntSetEncoding::encode(std::span<const std::uint64_t> xs, std::size_t s_max,
                                      std::uint64_t M) {
    if (M == 0) throw ArgumentError("intset: M must be >= 1");
    if (xs.size() > s_max) throw ArgumentError("intset: more than s_max elements");
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] < 1 || xs[i] > M) throw ArgumentError("intset: element outside [1, M]");
        if (i > 0 && xs[i] <= xs[i - 1]) throw ArgumentError("intset: elements must increase");
    }
    IntSetEncoding e;
    e.s_max_ = s_max;
    e.M_ = M;
    const std::size_t bl = block_length(s_max, M);
    const std::size_t W = width_for(bl);
    BitString s = elias_gamma(bl);
    s.append(elias_gamma(xs.size() + 1));
    for (auto x : xs) {
        s.push_back(true);
        s.append(BitString::from_uint((x - 1) % bl, W));
    }
    std::uint64_t prev = 0;
    for (auto x : xs) {
        const std::uint64_t y = (x - 1) / bl;
        for (; prev < y; ++prev) s.push_back(false);
        s.push_back(true);
    }
    if (s.size() > Word::kBits) throw SizeError("intset: encoding exceeds one word");
    e.length_ = s.size();
    e.word_ = Word::from_bits(s);
    return e;
}

IntSetEncoding::Layout IntSetEncoding::layout() const {
    const std::size_t z1 = word_.first_one();
    const std::size_t off = 2 * z1 + 1;
    const std::size_t z2 = word_.shl(off).first_one();
    const std::size_t count = word_.extract(off + z2, z2 + 1) - 1;
    const std::size_t lows_at = off + 2 * z2 + 1;
    return {count, lows_at, lows_at + count * field_width()};
}

std::size_t IntSetEncoding::count() const { return layout().count; }

std::uint64_t IntSetEncoding::extract(std::size_t k) const {
    const auto L = layout();
    if (k < 1 || k > L.count) throw ArgumentError("intset: extract index out of range");
    const std::size_t fw = field_width();
    const std::uint64_t low = word_.extract(L.lows_at + (k - 1) * fw + 1, fw - 1);
    const std::uint64_t y = word_.shl(L.highs_at).select1(k) - (k - 1);
    return y * block() + low + 1;
}

std::optional<std::pair<std::uint64_t, std::size_t>> IntSetEncoding::successor(std::uint64_t x) const {
    const auto L = layout();
    const std::size_t idx = rank(x == 0 ? 0 : x - 1);
    if (idx >= L.count) return std::nullopt;
    return std::make_pair(extract(idx + 1), idx);
}

std::size_t IntSetEncoding::rank(std::uint64_t x) const {
    // elements <= x  ==  index of the first element >= x + 1
    const auto L = layout();
    if (L.count == 0 || x == 0) return 0;
    const std::size_t bl = block();
    const std::size_t fw = field_width();
    const std::uint64_t q = x;  // (x + 1) - 1
    const std::uint64_t yq = q / bl, lq = q % bl;
    const Word highs = word_.shl(L.highs_at);
    // elements with high < yq and with high <= yq
    const std::size_t p0 = yq == 0 ? 0 : highs.select0(yq);
    const std::size_t r0 = yq == 0 ? 0 : std::min<std::size_t>(L.count, p0 - (yq - 1));
    const std::size_t p1 = highs.select0(yq + 1);
    const std::size_t r1 = std::min<std::size_t>(L.count, p1 - yq);
    if (r0 == r1) return r0;
    // first field in [r0, r1) whose low is >= lq
    const Word lows = word_.shl(L.lows_at).prefix(L.count * fw);
    const auto& pat = patterns();
    count_op(2);  // pattern table reads
    const Word ones = pat.last[fw].prefix(L.count * fw);
    const Word& lead = pat.lead[fw];
    const Word diff = (lows - ones.mul(lq)) & lead;
    const std::size_t hit = diff.range(r0 * fw, r1 * fw).first_one();
    return hit == Word::kBits ? r1 : hit / fw;
}

IntSetEncoding IntSetEncoding::truncate(std::size_t k) const {
    const auto L = layout();
    if (k > L.count) throw ArgumentError("intset: truncate beyond size");
    const std::size_t fw = field_width();
    const std::size_t bl = block();
    const std::size_t gbl = gamma_len(bl);
    const std::size_t gk = gamma_len(k + 1);
    const Word highs = word_.shl(L.highs_at);
    const std::size_t hlen = k == 0 ? 0 : highs.select1(k) + 1;
    IntSetEncoding e;
    e.s_max_ = s_max_;
    e.M_ = M_;
    // gamma(bl) is unchanged; gamma(k+1) = zeros then the value
    Word w = word_.prefix(gbl).deposit(gbl + (gk - 1) / 2, (gk + 1) / 2, k + 1);
    const std::size_t lows_at = gbl + gk;
    w = w | word_.shl(L.lows_at).prefix(k * fw).shr(lows_at);
    w = w | highs.prefix(hlen).shr(lows_at + k * fw);
    e.word_ = w;
    e.length_ = lows_at + k * fw + hlen;
    return e;
}

std::vector<std::uint64_t> IntSetEncoding::to_vector() const {
    std::vector<std::uint64_t> out;
    const std::size_t c = count();
    for (std::size_t k = 1; k <= c; ++k) out.push_back(extract(k));
    return out;
}

std::size_t first_difference(const IntSetEncoding& a, const IntSetEncoding& b) {
    const auto La = a.layout(), Lb = b.layout();
    const std::size_t m = std::min(La.count, Lb.count);
    if (m == 0) return 0;
    const std::size_t fw = a.field_width();
    const Word lx = (a.word_.shl(La.lows_at) ^ b.word_.shl(Lb.lows_at)).prefix(m * fw);
    const std::size_t pl = lx.first_one();
    const std::size_t fl = pl == Word::kBits ? m : pl / fw;
    const Word ha = a.word_.shl(La.highs_at).prefix(a.length_ - La.highs_at);
    const Word hb = b.word_.shl(Lb.highs_at).prefix(b.length_ - Lb.highs_at);
    const std::size_t ph = (ha ^ hb).first_one();
    const std::size_t fh = ph == Word::kBits ? m : ha.popcount_prefix(ph);
    return std::min({fl, fh, m});
}

}  // namespace mut
