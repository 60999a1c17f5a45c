#include "mut/fastscheme.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "json.hpp"

#include "mut/codes.hpp"
#include "mut/embed.hpp"
#include "mut/error.hpp"

namespace mut {

// ---------------------------------------------------------------- decompose

Decomposition decompose(const RootedTree& t, std::size_t b, NodeId root,
                        const std::vector<std::size_t>& sizes) {
    if (b < 2) throw ArgumentError("decompose: b must be >= 2");
    Decomposition d;
    d.n = sizes[root];
    d.b = b;
    d.root = root;
    const std::size_t n = d.n;
    auto big = [&](NodeId v) { return sizes[v] * b >= n; };
    if (!big(root)) throw std::logic_error("decompose: root is not big");

    // big part in preorder
    std::map<NodeId, std::vector<NodeId>> big_kids;
    std::vector<NodeId> stack{root};
    while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        d.big.push_back(v);
        auto& kids = big_kids[v];
        std::size_t w = 0;
        for (NodeId c : t.children(v)) {
            if (big(c)) kids.push_back(c);
            else w += sizes[c];
        }
        d.weight[v] = w;
        for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
    }

    std::map<NodeId, bool> interesting;
    for (NodeId v : d.big) {
        const auto& kids = big_kids[v];
        if (kids.size() != 1) interesting[v] = true;
        if (kids.size() >= 2) {
            for (NodeId c : kids) interesting[c] = true;
        }
    }
    interesting[root] = true;
    if (big_kids[root].size() == 1) interesting[big_kids[root][0]] = true;

    for (NodeId v : d.big) {
        if (!interesting[v]) continue;
        d.interesting.push_back(v);
        std::vector<NodeId> ch{v};
        if (big_kids[v].size() == 1) {
            for (NodeId c = big_kids[v][0]; !interesting[c]; c = big_kids[c][0]) ch.push_back(c);
        }
        std::size_t w = 0;
        for (NodeId c : ch) w += d.weight[c];
        d.virtual_children[v] = (w * b + n - 1) / n;
        d.chain[v] = std::move(ch);
    }

    // T^c: parent is the nearest interesting proper ancestor
    std::map<NodeId, NodeId> cid;
    TreeBuilder tb;
    for (NodeId v : d.interesting) {
        NodeId p = v;
        do {
            p = p == root ? kNoNode : *t.parent(p);
        } while (p != kNoNode && !interesting[p]);
        cid[v] = p == kNoNode ? tb.add_root() : tb.add_child(cid.at(p));
        d.contracted_node.push_back(v);
    }
    for (NodeId v : d.interesting) {
        for (std::size_t i = 0; i < d.virtual_children[v]; ++i) {
            tb.add_child(cid.at(v));
            d.contracted_node.push_back(kNoNode);
        }
    }
    d.contracted = std::move(tb).build();
    return d;
}

Decomposition decompose(const RootedTree& t, std::size_t b) {
    if (t.empty()) throw ArgumentError("decompose: empty tree");
    return decompose(t, b, t.root(), subtree_sizes(t));
}

// ---------------------------------------------------------------- shared block

std::pair<std::size_t, std::uint64_t> SharedBlock::lookup(std::size_t lx, std::uint64_t x, std::size_t ly,
                                                          std::uint64_t y) const {
    count_op();
    if (lx == 0 || ly == 0 || lx > max_field || ly > max_field) return {0, 0};
    const auto& tab = tables[lx * (max_field + 1) + ly];
    const std::uint64_t idx = (x << ly) | y;
    if (idx >= tab.size()) return {0, 0};
    const std::uint64_t e = tab[idx];
    if (e == 0) return {0, 0};
    const std::size_t len = std::bit_width(e) - 1;
    return {len, e ^ (std::uint64_t{1} << len)};
}

std::size_t SharedBlock::size_bits() const {
    std::size_t entries = 0;
    for (const auto& t : tables) entries += t.size();
    return entries * entry_width;
}

namespace {

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string block_payload(const SharedBlock& s) {
    nlohmann::json j;
    j["n"] = s.n;
    j["b"] = s.b;
    j["universal"] = {{"kind", std::string(to_string(s.universal.kind))},
                      {"n", s.universal.n},
                      {"alpha", s.universal.alpha}};
    j["max_field"] = s.max_field;
    j["entry_width"] = s.entry_width;
    j["s_max"] = s.s_max;
    j["M"] = s.M;
    j["tables"] = s.tables;
    return j.dump();
}

std::shared_ptr<const SharedBlock> make_shared_block(std::size_t n, std::size_t b, const UniversalSpec& spec,
                                                     const UniversalTree& ut, const WeightedLabeling& wl,
                                                     std::size_t s_max, std::uint64_t M) {
    auto s = std::make_shared<SharedBlock>();
    s->n = n;
    s->b = b;
    s->universal = spec;
    for (const auto& l : wl.labels) s->max_field = std::max(s->max_field, l.size());
    s->entry_width = s->max_field + 1;
    s->s_max = s_max;
    s->M = M;
    const std::size_t L = s->max_field;
    s->tables.resize((L + 1) * (L + 1));
    for (std::size_t lx = 1; lx <= L; ++lx) {
        for (std::size_t ly = 1; ly <= L; ++ly) {
            s->tables[lx * (L + 1) + ly].assign(std::size_t{1} << (lx + ly), 0);
        }
    }
    for (NodeId x = 0; x < ut.size(); ++x) {
        const auto& bx = wl.labels[x];
        for (NodeId y = 0; y < ut.size(); ++y) {
            const auto& by = wl.labels[y];
            const auto& bz = wl.labels[ut.index.query(x, y)];
            auto& tab = s->tables[bx.size() * (L + 1) + by.size()];
            tab[(bx.to_uint() << by.size()) | by.to_uint()] = (std::uint64_t{1} << bz.size()) | bz.to_uint();
        }
    }
    s->hash = fnv1a(block_payload(*s));
    return s;
}

// sort small children: size descending, ties by canonical form
void sort_children(const RootedTree& t, const std::vector<std::size_t>& sizes, std::vector<NodeId>& kids) {
    std::stable_sort(kids.begin(), kids.end(), [&](NodeId a, NodeId b) { return sizes[a] > sizes[b]; });
    for (std::size_t i = 0; i < kids.size();) {
        std::size_t j = i;
        while (j < kids.size() && sizes[kids[j]] == sizes[kids[i]]) ++j;
        if (j - i > 1 && sizes[kids[i]] > 1) {
            std::vector<std::pair<std::string, NodeId>> keyed;
            for (std::size_t k = i; k < j; ++k) keyed.emplace_back(canonical_form(t, kids[k]), kids[k]);
            std::stable_sort(keyed.begin(), keyed.end(),
                             [](const auto& a, const auto& b) { return a.first < b.first; });
            for (std::size_t k = i; k < j; ++k) kids[k] = keyed[k - i].second;
        }
        i = j;
    }
}

struct Field {
    BitString bits;
    std::size_t step = SIZE_MAX;  // F1 placeholder: (step, contracted node)
    std::size_t cnode = 0;
};

BitString single(bool bit) {
    BitString s;
    s.push_back(bit);
    return s;
}

}  // namespace

std::size_t default_b(std::size_t n, double a) {
    if (n < 2) return 2;
    const double v = std::pow(std::log2(static_cast<double>(n)), 1.0 / (4.0 * size_exponent(Kind::general))) / a;
    return std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(v)));
}

// ---------------------------------------------------------------- encode

FastEncoding encode_fast(const RootedTree& t, std::size_t b) {
    if (b < 2) throw ArgumentError("encode_fast: b must be >= 2");
    if (t.empty()) throw ArgumentError("encode_fast: empty tree");
    const auto sizes = subtree_sizes(t);
    const std::size_t n = t.size();

    std::vector<std::vector<Field>> fields(n);
    std::vector<std::vector<StepRecord>> steps(n);
    std::vector<Decomposition> decs;

    std::vector<NodeId> work{t.root()};
    while (!work.empty()) {
        const NodeId r = work.back();
        work.pop_back();
        const std::size_t step = decs.size();
        decs.push_back(decompose(t, b, r, sizes));
        const Decomposition& d = decs.back();

        std::map<NodeId, std::size_t> cnode;
        for (std::size_t i = 0; i < d.contracted_node.size(); ++i) {
            if (d.contracted_node[i] != kNoNode) cnode[d.contracted_node[i]] = i;
        }
        // owner (top of chain) and F2 of every big node
        std::map<NodeId, NodeId> owner;
        std::map<NodeId, BitString> f2;
        for (const auto& [u, ch] : d.chain) {
            owner[u] = u;
            f2[u] = single(true);
            if (ch.size() < 2) continue;
            // chain below u, bottom to top
            std::vector<NodeId> path(ch.rbegin(), ch.rend() - 1);
            const std::uint64_t K = 64 * ch.size();
            std::vector<std::uint64_t> w;
            for (NodeId v : path) w.push_back(d.weight.at(v) * K + 1);
            const auto codes = alphabetical_code(w);
            for (std::size_t i = 0; i < path.size(); ++i) {
                owner[path[i]] = u;
                f2[path[i]] = single(false) + codes[i];
            }
        }

        for (NodeId v : d.big) {
            const NodeId u1 = owner.at(v);
            const Field f1{BitString{}, step, cnode.at(u1)};
            fields[v].push_back(f1);
            StepRecord rec{d.n, 0, 1, 0};
            if (v != u1) {
                fields[v].push_back(Field{f2.at(v)});
                rec.fields = 2;
            }
            steps[v].push_back(rec);

            std::vector<NodeId> small;
            for (NodeId c : t.children(v)) {
                if (!d.is_big(c, sizes)) small.push_back(c);
            }
            sort_children(t, sizes, small);
            for (std::size_t k = 0; k < small.size(); ++k) {
                const NodeId c = small[k];
                const BitString f3 = BitString::from_uint(k + 1, std::bit_width(k + 1));
                std::vector<NodeId> st{c};
                while (!st.empty()) {
                    NodeId x = st.back();
                    st.pop_back();
                    fields[x].push_back(f1);
                    fields[x].push_back(Field{f2.at(v)});
                    fields[x].push_back(Field{f3});
                    steps[x].push_back(StepRecord{d.n, sizes[c], 3, 0});
                    for (NodeId y : t.children(x)) st.push_back(y);
                }
                work.push_back(c);
            }
        }
    }

    // embed every T^c into one universal tree U_N
    std::size_t N = 1;
    for (const auto& d : decs) N = std::max(N, d.contracted.size());
    const auto spec = UniversalSpec::make(Kind::general, N);
    const auto ut = build_universal(spec);
    const auto wl = weighted_labels(ut.tree);
    std::vector<std::vector<const BitString*>> f1(decs.size());
    for (std::size_t i = 0; i < decs.size(); ++i) {
        const auto e = embed(decs[i].contracted, spec);
        for (auto x : e.map) f1[i].push_back(&wl.labels[x]);
    }

    std::vector<std::vector<BitString>> flat(n);
    std::size_t s_max = 1;
    std::uint64_t M = 1;
    for (NodeId v = 0; v < n; ++v) {
        std::size_t total = 0;
        for (auto& f : fields[v]) {
            flat[v].push_back(f.step == SIZE_MAX ? f.bits : *f1[f.step][f.cnode]);
            total += flat[v].back().size();
        }
        s_max = std::max(s_max, flat[v].size() - 1);
        M = std::max<std::uint64_t>(M, total);
        std::size_t at = 0;
        for (auto& rec : steps[v]) {
            for (std::size_t i = 0; i < rec.fields; ++i) rec.bits += flat[v][at + i].size();
            at += rec.fields;
        }
    }
    if (M > Word::kBits) throw SizeError("encode_fast: label exceeds one word");

    FastEncoding out;
    out.shared = make_shared_block(n, b, spec, ut, wl, s_max, M);
    out.max_contracted = N;
    out.decompositions = decs.size();
    out.labels.resize(n);
    for (NodeId v = 0; v < n; ++v) {
        BitString concat;
        std::vector<std::uint64_t> bounds;
        for (std::size_t i = 0; i < flat[v].size(); ++i) {
            concat.append(flat[v][i]);
            if (i + 1 < flat[v].size()) bounds.push_back(concat.size());
        }
        FastLabel& l = out.labels[v];
        l.concat = Word::from_bits(concat);
        l.length = concat.size();
        l.boundaries = IntSetEncoding::encode(bounds, s_max, M);
        l.shared = out.shared;
    }
    out.steps = std::move(steps);
    return out;
}

std::vector<BitString> FastLabel::field_list() const {
    const auto bounds = boundaries.to_vector();
    std::vector<BitString> out;
    const BitString all = concat_bits();
    std::size_t at = 0;
    for (auto p : bounds) {
        out.push_back(all.substr(at, p - at));
        at = p;
    }
    out.push_back(all.substr(at, length - at));
    return out;
}

// ---------------------------------------------------------------- decode

namespace {

struct View {
    const FastLabel& l;
    std::size_t count;  // boundaries

    std::size_t fields() const { return count + 1; }
    std::size_t end(std::size_t j) const { return j <= count ? l.boundaries.extract(j) : l.length; }
    std::size_t start(std::size_t j) const { return j == 1 ? 0 : l.boundaries.extract(j - 1); }

    FastLabel truncate(std::size_t k) const {
        if (k >= fields()) return l;
        const std::size_t e = end(k);
        FastLabel out;
        out.concat = l.concat.prefix(e);
        out.length = e;
        out.boundaries = l.boundaries.truncate(k - 1);
        out.shared = l.shared;
        return out;
    }

    // nearest big ancestor within step i (0-based)
    FastLabel big_ancestor(std::size_t i) const {
        if (fields() <= 3 * i + 1) return l;
        const std::size_t s = start(3 * i + 2), e = end(3 * i + 2);
        const bool top = e - s == 1 && l.concat.bit(s);
        return truncate(top ? 3 * i + 1 : 3 * i + 2);
    }
};

}  // namespace

FastLabel decode_fast(const FastLabel& a, const FastLabel& b) {
    if (!a.shared || !b.shared || (a.shared != b.shared && a.shared->hash != b.shared->hash)) {
        throw ArgumentError("decode_fast: labels come from different encodings");
    }
    const View A{a, a.boundaries.count()};
    const View B{b, b.boundaries.count()};
    const std::size_t minlen = std::min(a.length, b.length);
    const std::size_t p = std::min((a.concat ^ b.concat).first_one(), minlen);
    if (a.length == b.length && p == a.length && a.boundaries == b.boundaries) return a;

    constexpr std::size_t kInf = SIZE_MAX;
    std::size_t f = kInf;
    const std::size_t m = std::min(A.count, B.count);
    const std::size_t dfirst = first_difference(a.boundaries, b.boundaries);
    if (dfirst < m) {
        f = dfirst + 1;
    } else if (A.end(m + 1) != B.end(m + 1)) {
        f = m + 1;
    }
    // field holding position p; one past the last field when p is the length
    const std::size_t fa = p >= a.length ? A.fields() + 1 : 1 + a.boundaries.rank(p);
    const std::size_t fb = p >= b.length ? B.fields() + 1 : 1 + b.boundaries.rank(p);
    f = std::min({f, fa, fb});

    const std::size_t i = (f - 1) / 3;
    switch ((f - 1) % 3) {
        case 0: {
            if (f > A.fields() || f > B.fields()) throw DecodeError("decode_fast: inconsistent labels");
            const std::size_t xs = A.start(f), xl = A.end(f) - xs;
            const std::size_t ys = B.start(f), yl = B.end(f) - ys;
            const std::uint64_t xv = a.concat.extract(xs, xl), yv = b.concat.extract(ys, yl);
            const auto [zl, zv] = a.shared->lookup(xl, xv, yl, yv);
            if (zl == 0) throw DecodeError("decode_fast: label not in the NCA table");
            if (zl == xl && zv == xv) return A.big_ancestor(i);
            if (zl == yl && zv == yv) return B.big_ancestor(i);
            FastLabel out;
            out.concat = a.concat.prefix(xs).deposit(xs, zl, zv);
            out.length = xs + zl;
            out.boundaries = a.boundaries.truncate(3 * i);
            out.shared = a.shared;
            return out;
        }
        case 1: {
            if (A.fields() < f) return a;
            if (B.fields() < f) return b;
            const std::size_t xs = A.start(f), xl = A.end(f) - xs;
            const std::size_t ys = B.start(f), yl = B.end(f) - ys;
            const std::uint64_t xv = a.concat.extract(xs, xl) << (64 - xl);
            const std::uint64_t yv = b.concat.extract(ys, yl) << (64 - yl);
            const bool a_higher = xv != yv ? xv > yv : xl > yl;
            return a_higher ? A.big_ancestor(i) : B.big_ancestor(i);
        }
        default:
            return A.big_ancestor(i);
    }
}

// ---------------------------------------------------------------- budget

BudgetReport step_budget_check(const FastEncoding& enc, std::size_t b, double c) {
    BudgetReport r;
    r.s = 4.0 + c * std::log2(static_cast<double>(std::max<std::size_t>(2, enc.max_contracted)));
    for (std::size_t v = 0; v < enc.steps.size(); ++v) {
        for (std::size_t i = 0; i < enc.steps[v].size(); ++i) {
            const auto& st = enc.steps[v][i];
            ++r.checked;
            const double excess = std::max(0.0, static_cast<double>(st.bits) - r.s);
            bool ok = true;
            if (st.next != 0) {
                ok = static_cast<double>(st.next) * static_cast<double>(b) * std::exp2(excess) <=
                     static_cast<double>(st.n) * (1 + 1e-12);
            } else if (st.fields == 1) {
                ok = st.bits <= r.s;
            } else {
                ok = static_cast<double>(b) * std::exp2(excess) <= static_cast<double>(st.n) * (1 + 1e-12);
            }
            if (!ok) {
                ++r.violations;
                if (r.examples.size() < 8) {
                    std::ostringstream os;
                    os << "node " << v << " step " << i + 1 << ": n=" << st.n << " next=" << st.next
                       << " fields=" << st.fields << " t=" << st.bits << " s=" << r.s;
                    r.examples.push_back(os.str());
                }
            }
        }
    }
    return r;
}

// ---------------------------------------------------------------- serialization

namespace {

std::string to_hex(const std::vector<std::uint8_t>& bytes) {
    static const char* digits = "0123456789abcdef";
    std::string s;
    for (auto b : bytes) {
        s += digits[b >> 4];
        s += digits[b & 15];
    }
    return s;
}

std::vector<std::uint8_t> from_hex(std::string_view s) {
    if (s.size() % 2) throw ParseError("hex label: odd length", s.size());
    std::vector<std::uint8_t> out;
    auto nib = [&](std::size_t i) -> std::uint8_t {
        const char c = s[i];
        if (c >= '0' && c <= '9') return static_cast<std::uint8_t>(c - '0');
        if (c >= 'a' && c <= 'f') return static_cast<std::uint8_t>(c - 'a' + 10);
        if (c >= 'A' && c <= 'F') return static_cast<std::uint8_t>(c - 'A' + 10);
        throw ParseError("hex label: bad digit", i);
    };
    for (std::size_t i = 0; i < s.size(); i += 2) out.push_back(static_cast<std::uint8_t>(nib(i) << 4 | nib(i + 1)));
    return out;
}

}  // namespace

std::string write_fast_label(const FastLabel& l) {
    BitString s = elias_gamma(l.length + 1);
    s.append(l.concat_bits());
    const BitString bnd = l.boundaries.bits();
    s.append(elias_gamma(bnd.size() + 1));
    s.append(bnd);
    return to_hex(s.pack());
}

FastLabel parse_fast_label(std::string_view hex, std::shared_ptr<const SharedBlock> shared) {
    if (!shared) throw ArgumentError("parse_fast_label: missing shared block");
    const auto bytes = from_hex(hex);
    const BitString s = BitString::unpack(bytes, bytes.size() * 8);
    auto [len1, used1] = elias_gamma_decode(s, 0);
    const std::size_t len = len1 - 1;
    if (used1 + len > s.size()) throw DecodeError("fast label: truncated concatenation");
    const BitString concat = s.substr(used1, len);
    auto [blen1, used2] = elias_gamma_decode(s, used1 + len);
    const std::size_t bstart = used1 + len + used2, blen = blen1 - 1;
    if (bstart + blen > s.size()) throw DecodeError("fast label: truncated boundaries");
    const BitString bnd = s.substr(bstart, blen);

    // re-derive the set through the canonical encoder to validate it
    std::vector<std::uint64_t> xs;
    // walk the layout: gamma(bl), gamma(count+1), lows, highs
    auto [bl, u1] = elias_gamma_decode(bnd, 0);
    auto [cnt1, u2] = elias_gamma_decode(bnd, u1);
    const std::size_t count = cnt1 - 1;
    const std::size_t W = bl <= 1 ? 0 : std::bit_width(bl - 1);
    std::size_t at = u1 + u2;
    std::vector<std::uint64_t> lows;
    for (std::size_t i = 0; i < count; ++i) {
        if (at + W + 1 > bnd.size()) throw DecodeError("fast label: truncated low fields");
        lows.push_back(bnd.substr(at + 1, W).to_uint());
        at += W + 1;
    }
    std::uint64_t y = 0;
    for (std::size_t i = 0; i < count; ++i) {
        while (at < bnd.size() && !bnd[at]) {
            ++y;
            ++at;
        }
        if (at >= bnd.size()) throw DecodeError("fast label: truncated high part");
        ++at;
        xs.push_back(y * bl + lows[i] + 1);
    }
    FastLabel l;
    l.concat = Word::from_bits(concat);
    l.length = len;
    l.boundaries = IntSetEncoding::encode(xs, shared->s_max, shared->M);
    if (l.boundaries.bits() != bnd) throw DecodeError("fast label: boundary set is not canonical");
    l.shared = std::move(shared);
    return l;
}

std::string write_shared_block(const SharedBlock& s) {
    nlohmann::json j = nlohmann::json::parse(block_payload(s));
    j["hash"] = s.hash;
    return j.dump();
}

std::shared_ptr<const SharedBlock> parse_shared_block(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("shared block: ") + e.what(), e.byte);
    }
    auto s = std::make_shared<SharedBlock>();
    try {
        s->n = j.at("n");
        s->b = j.at("b");
        const auto& u = j.at("universal");
        s->universal = UniversalSpec::make(parse_kind(u.at("kind").get<std::string>()), u.at("n"),
                                           u.at("alpha").get<double>());
        s->max_field = j.at("max_field");
        s->entry_width = j.at("entry_width");
        s->s_max = j.at("s_max");
        s->M = j.at("M");
        s->tables = j.at("tables").get<std::vector<std::vector<std::uint64_t>>>();
    } catch (const nlohmann::json::exception& e) {
        throw DecodeError(std::string("shared block: ") + e.what());
    }
    s->hash = fnv1a(block_payload(*s));
    if (j.contains("hash") && j["hash"].get<std::uint64_t>() != s->hash) {
        throw DecodeError("shared block: content hash mismatch");
    }
    return s;
}

}  // namespace mut
