#include "mut/embed.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "mut/codes.hpp"
#include "mut/decomposition.hpp"
#include "mut/error.hpp"

namespace mut {

namespace {

class Embedder {
public:
    Embedder(const RootedTree& t, const UniversalSpec& spec)
        : t_(t), spec_(spec), sizes_(subtree_sizes(t)),
          table_(size_table(spec.kind, spec.alpha, spec.n)), s_(*table_),
          map_(t.size(), 0) {}

    std::vector<std::uint64_t> run() {
        place(t_.root(), spec_.n, 0);
        return std::move(map_);
    }

private:
    std::uint64_t entry_cost(std::uint64_t x) const {
        std::uint64_t c = s_[x - 1];
        if (spec_.kind == Kind::general) {
            for (std::uint64_t j = 2; j <= x; ++j) c += s_[x / j];
        }
        return c;
    }

    // children of v other than `skip`, largest first, ties by canonical form
    std::vector<NodeId> sorted_children(NodeId v, NodeId skip) const {
        std::vector<NodeId> out;
        for (NodeId c : t_.children(v)) {
            if (c != skip) out.push_back(c);
        }
        std::stable_sort(out.begin(), out.end(), [&](NodeId a, NodeId b) {
            if (sizes_[a] != sizes_[b]) return sizes_[a] > sizes_[b];
            return canonical_form(t_, a) < canonical_form(t_, b);
        });
        return out;
    }

    void need(NodeId v, std::size_t cap) const {
        if (sizes_[v] > cap) throw std::logic_error("embed: subtree does not fit its copy");
    }

    void place(NodeId v, std::size_t n, std::uint64_t base) {
        need(v, n);
        if (spec_.kind == Kind::ordered && n == 1) {
            map_[v] = base;
            return;
        }
        const auto a = build_dominating_sequence(co_alpha_floor(spec_.alpha, n));
        const std::size_t k = a.size();
        const std::size_t top = alpha_floor(spec_.alpha, n);
        const std::size_t thr = alpha_threshold(spec_.alpha, n);

        // spine positions
        std::vector<std::uint64_t> pu(k + 1), pv(k + 1);
        pu[0] = base;
        for (std::size_t i = 0; i < k; ++i) {
            if (spec_.kind == Kind::ordered) {
                pv[i] = pu[i] + 1 + s_[a[i] - 1];
                pu[i + 1] = pv[i] + 1;
            } else {
                pu[i + 1] = pu[i] + 1 + entry_cost(a[i]);
            }
        }
        const bool ordered = spec_.kind == Kind::ordered;
        const std::uint64_t last = ordered ? pu[k] + 2 : pu[k];  // w or u_{k+1}

        if (sizes_[v] < thr) {
            place(v, top, last + 1);
            return;
        }

        std::vector<NodeId> path{v};
        for (;;) {
            NodeId next = kNoNode;
            for (NodeId c : t_.children(path.back())) {
                if (sizes_[c] >= thr) next = c;
            }
            if (next == kNoNode) break;
            path.push_back(next);
        }
        const std::size_t s = path.size();
        std::vector<std::uint64_t> demand(s - 1);
        for (std::size_t i = 0; i + 1 < s; ++i) demand[i] = sizes_[path[i]] - sizes_[path[i + 1]];
        const auto j = dominate(demand, a);

        // ordered right copies live after the spine subtree, innermost first
        std::vector<std::uint64_t> right_start(k);
        if (ordered) {
            std::uint64_t pos = last + 1 + 2 * s_[top];
            for (std::size_t i = k; i-- > 0;) {
                right_start[i] = pos;
                pos += s_[a[i] - 1];
            }
        }

        for (std::size_t i = 0; i + 1 < s; ++i) {
            const NodeId vi = path[i];
            const std::size_t ji = j[i];
            const std::uint64_t x = a[ji];
            if (ordered) {
                NodeId hang = kNoNode;
                bool left = true, past_path = false;
                for (NodeId c : t_.children(vi)) {
                    if (c == path[i + 1]) {
                        past_path = true;
                    } else {
                        hang = c;
                        left = !past_path;
                    }
                }
                if (hang == kNoNode) {
                    map_[vi] = pu[ji];
                } else if (left) {
                    map_[vi] = pu[ji];
                    place(hang, x - 1, pu[ji] + 1);
                } else {
                    map_[vi] = pv[ji];
                    place(hang, x - 1, right_start[ji]);
                }
                continue;
            }
            map_[vi] = pu[ji];
            const auto hang = sorted_children(vi, path[i + 1]);
            std::uint64_t pos = pu[ji] + 1;
            for (std::size_t c = 0; c < hang.size(); ++c) {
                const std::size_t r = c + 1;
                if (r == 1) {
                    place(hang[c], x - 1, pos);
                    pos += s_[x - 1];
                } else {
                    if (spec_.kind != Kind::general) throw std::logic_error("embed: degree > 2");
                    place(hang[c], x / r, pos);
                    pos += s_[x / r];
                }
            }
        }

        const NodeId vs = path.back();
        map_[vs] = last;
        if (ordered) {
            auto ch = t_.children(vs);
            if (ch.size() > 2) throw std::logic_error("embed: degree > 2");
            std::uint64_t pos = last + 1;
            for (NodeId c : ch) {
                place(c, top, pos);
                pos += s_[top];
            }
            return;
        }
        const auto ch = sorted_children(vs, kNoNode);
        std::uint64_t pos = last + 1;
        for (std::size_t c = 0; c < ch.size(); ++c) {
            const std::size_t cap = c == 0 ? top : (n - 1) / (c + 1);
            if (c >= 2 && spec_.kind == Kind::binary) throw std::logic_error("embed: degree > 2");
            place(ch[c], cap, pos);
            pos += s_[cap];
        }
    }

    const RootedTree& t_;
    UniversalSpec spec_;
    std::vector<std::size_t> sizes_;
    SizeTable table_;
    const std::vector<std::uint64_t>& s_;
    std::vector<std::uint64_t> map_;
};

}  // namespace

Embedding embed(const RootedTree& t, const UniversalSpec& spec) {
    spec.validate();
    if (t.empty()) throw ArgumentError("embed: empty tree");
    if (t.size() > spec.n) {
        throw ArgumentError("embed: tree has " + std::to_string(t.size()) +
                            " nodes but the universal tree is built for " + std::to_string(spec.n));
    }
    if (spec.kind != Kind::general && !t.is_binary()) {
        throw ArgumentError("embed: binary kinds need a tree with at most 2 children per node");
    }
    return Embedding{spec, Embedder(t, spec).run()};
}

bool verify_embedding(const RootedTree& t, const Embedding& e, const UniversalTree& ut) {
    if (e.map.size() != t.size()) return false;
    std::vector<std::uint64_t> seen(e.map);
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) return false;
    for (auto x : e.map) {
        if (x >= ut.size()) return false;
    }
    if (t.empty()) return true;
    NcaIndex idx(t);
    for (NodeId u = 0; u < t.size(); ++u) {
        for (NodeId v = u; v < t.size(); ++v) {
            if (e.map[idx.query(u, v)] != universal_nca(ut, e.map[u], e.map[v])) return false;
        }
    }
    if (ut.tree.ordered() && t.size() > 0) {
        // siblings must keep their left-to-right order: compare preorder numbers
        for (NodeId v = 0; v < t.size(); ++v) {
            auto ch = t.children(v);
            for (std::size_t i = 1; i < ch.size(); ++i) {
                if (e.map[ch[i - 1]] >= e.map[ch[i]]) return false;
            }
        }
    }
    return true;
}

bool check_subdivision(const RootedTree& t, const Embedding& e, const UniversalTree& ut) {
    if (e.map.size() != t.size()) return false;
    std::vector<char> used(ut.size(), 0);
    for (auto x : e.map) {
        if (x >= ut.size() || used[x]) return false;
        used[x] = 1;
    }
    for (NodeId c = 0; c < t.size(); ++c) {
        auto p = t.parent(c);
        if (!p) continue;
        const auto top = static_cast<NodeId>(e.map[*p]);
        auto cur = static_cast<NodeId>(e.map[c]);
        if (!ut.index.is_ancestor(top, cur) || top == cur) return false;
        for (auto up = ut.tree.parent(cur); up && *up != top; up = ut.tree.parent(*up)) {
            if (used[*up]) return false;  // shared with another path or an image
            used[*up] = 1;
        }
    }
    return true;
}

std::string write_embedding(const Embedding& e) {
    std::ostringstream os;
    for (std::size_t i = 0; i < e.map.size(); ++i) os << i << ' ' << e.map[i] << '\n';
    return os.str();
}

std::vector<std::uint64_t> parse_embedding(std::string_view text) {
    std::istringstream is{std::string(text)};
    std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
    std::uint64_t i = 0, j = 0;
    while (is >> i >> j) pairs.emplace_back(i, j);
    if (!is.eof()) throw ParseError("embedding: expected pairs of integers", static_cast<std::size_t>(is.tellg()));
    std::vector<std::uint64_t> out(pairs.size());
    std::vector<char> have(pairs.size(), 0);
    for (auto [a, b] : pairs) {
        if (a >= out.size() || have[a]) throw ArgumentError("embedding: bad or repeated node index");
        out[a] = b;
        have[a] = 1;
    }
    return out;
}

}  // namespace mut
