#include "mut/universal.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <ostream>

#include "mut/codes.hpp"
#include "mut/decomposition.hpp"
#include "mut/error.hpp"

namespace mut {

std::string_view to_string(Kind k) {
    switch (k) {
        case Kind::binary: return "binary";
        case Kind::general: return "general";
        case Kind::ordered: return "ordered";
    }
    return "?";
}

Kind parse_kind(std::string_view s) {
    if (s == "binary") return Kind::binary;
    if (s == "general") return Kind::general;
    if (s == "ordered" || s == "ordered-binary") return Kind::ordered;
    throw ArgumentError("unknown kind '" + std::string(s) + "'");
}

double default_alpha(Kind k) {
    switch (k) {
        case Kind::binary: return 0.704;
        case Kind::general: return 0.659;
        case Kind::ordered: return 0.594;
    }
    return 0.0;
}

double size_exponent(Kind k) {
    switch (k) {
        case Kind::binary: return 1.894;
        case Kind::general: return 2.318;
        case Kind::ordered: return 2.331;
    }
    return 0.0;
}

UniversalSpec UniversalSpec::make(Kind kind, std::size_t n, std::optional<double> alpha) {
    UniversalSpec s{kind, n, alpha.value_or(default_alpha(kind))};
    s.validate();
    return s;
}

void UniversalSpec::validate() const { check_alpha(alpha); }

namespace {

struct TableKey {
    Kind kind;
    double alpha;
    auto operator<=>(const TableKey&) const = default;
};

std::mutex g_table_mutex;
std::map<TableKey, SizeTable> g_tables;

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r = a + b;
    if (r < a) throw SizeError("universal tree size overflows 64 bits");
    return r;
}

// per-entry cost of a spine node fed by dominating entry x (excluding the node)
std::uint64_t spine_copy_size(Kind kind, const std::vector<std::uint64_t>& s, std::uint64_t x) {
    std::uint64_t t = s[x - 1];
    if (kind == Kind::general) {
        for (std::uint64_t j = 2; j <= x; ++j) t = sat_add(t, s[x / j]);
    }
    return t;
}

std::vector<std::uint64_t> extend_table(Kind kind, double alpha, std::vector<std::uint64_t> s,
                                        std::size_t n_max) {
    // copy cost for spine entry x, reused across n
    std::vector<std::uint64_t> entry_cost;
    auto cost = [&](std::uint64_t x) {
        while (entry_cost.size() <= x) {
            std::uint64_t y = entry_cost.size();
            entry_cost.push_back(y == 0 ? 0 : spine_copy_size(kind, s, y));
        }
        return entry_cost[x];
    };
    if (s.empty()) s.push_back(0);
    for (std::size_t n = s.size(); n <= n_max; ++n) {
        const std::size_t m = co_alpha_floor(alpha, n);
        const std::size_t top = alpha_floor(alpha, n);
        if (kind == Kind::ordered && n == 1) {
            s.push_back(1);
            continue;
        }
        // a_m holds 2^i copies of floor(m / 2^i)
        std::uint64_t spine = 0, copies = 0;
        for (std::size_t i = 0; m >> i; ++i) {
            const std::uint64_t x = m >> i;
            const std::uint64_t mult = std::uint64_t{1} << i;
            spine += mult;
            copies = sat_add(copies, mult * cost(x));
        }
        std::uint64_t total = 0;
        switch (kind) {
            case Kind::binary:
                total = spine + 1 + copies + s[top] + s[(n - 1) / 2];
                break;
            case Kind::general:
                total = sat_add(spine + 1 + copies, s[top]);
                for (std::size_t j = 2; j + 1 <= n; ++j) total = sat_add(total, s[(n - 1) / j]);
                break;
            case Kind::ordered:
                total = sat_add(2 * spine + 3 + 2 * copies, 2 * s[top]);
                break;
        }
        s.push_back(total);
    }
    return s;
}

}  // namespace

SizeTable size_table(Kind kind, double alpha, std::size_t n_max) {
    check_alpha(alpha);
    std::lock_guard lock(g_table_mutex);
    auto& slot = g_tables[TableKey{kind, alpha}];
    if (!slot || slot->size() <= n_max) {
        std::vector<std::uint64_t> base = slot ? *slot : std::vector<std::uint64_t>{};
        slot = std::make_shared<const std::vector<std::uint64_t>>(
            extend_table(kind, alpha, std::move(base), n_max));
    }
    return slot;
}

void seed_size_table(Kind kind, double alpha, std::vector<std::uint64_t> sizes) {
    check_alpha(alpha);
    std::lock_guard lock(g_table_mutex);
    auto& slot = g_tables[TableKey{kind, alpha}];
    if (!slot || slot->size() < sizes.size()) {
        slot = std::make_shared<const std::vector<std::uint64_t>>(std::move(sizes));
    }
}

std::uint64_t universal_size(const UniversalSpec& spec) {
    spec.validate();
    return (*size_table(spec.kind, spec.alpha, spec.n))[spec.n];
}

namespace {

struct Builder {
    Kind kind;
    double alpha;
    const std::vector<std::uint64_t>& s;
    TreeBuilder tb;
    std::vector<bool> spine;
    bool top_level = true;

    NodeId add(NodeId parent) {
        NodeId v = parent == kNoNode ? tb.add_root() : tb.add_child(parent);
        spine.push_back(top_level);
        return v;
    }

    void emit(std::size_t n, NodeId parent) {
        if (n == 0) return;
        const bool was_top = top_level;
        if (kind == Kind::ordered && n == 1) {
            add(parent);
            return;
        }
        const auto a = build_dominating_sequence(co_alpha_floor(alpha, n));
        const std::size_t top = alpha_floor(alpha, n);
        auto copy = [&](std::size_t m, NodeId at) {
            top_level = false;
            emit(m, at);
            top_level = was_top;
        };
        if (kind == Kind::ordered) {
            std::vector<NodeId> vs;
            NodeId u = add(parent);
            for (std::size_t i = 0; i < a.size(); ++i) {
                copy(a[i] - 1, u);
                NodeId v = add(u);
                vs.push_back(v);
                u = add(v);
            }
            NodeId v = add(u);
            NodeId w = add(v);
            copy(top, w);
            copy(top, w);
            for (std::size_t i = a.size(); i-- > 0;) copy(a[i] - 1, vs[i]);
            return;
        }
        NodeId u = add(parent);
        for (std::size_t i = 0; i < a.size(); ++i) {
            copy(a[i] - 1, u);
            if (kind == Kind::general) {
                for (std::uint64_t j = 2; j <= a[i]; ++j) copy(a[i] / j, u);
            }
            u = add(u);
        }
        copy(top, u);
        if (kind == Kind::binary) {
            copy((n - 1) / 2, u);
        } else {
            for (std::size_t j = 2; j + 1 <= n; ++j) copy((n - 1) / j, u);
        }
    }
};

}  // namespace

UniversalTree build_universal(const UniversalSpec& spec) {
    spec.validate();
    auto table = size_table(spec.kind, spec.alpha, spec.n);
    Builder b{spec.kind, spec.alpha, *table, {}, {}, true};
    b.emit(spec.n, kNoNode);
    UniversalTree ut;
    ut.spec = spec;
    ut.tree = std::move(b.tb).build(spec.kind == Kind::ordered);
    ut.spine = std::move(b.spine);
    if (ut.tree.size() != (*table)[spec.n]) throw std::logic_error("build_universal: size mismatch");
    if (!ut.tree.empty()) ut.index = NcaIndex(ut.tree);
    return ut;
}

std::uint64_t universal_nca(const UniversalTree& ut, std::uint64_t x, std::uint64_t y) {
    if (x >= ut.size() || y >= ut.size()) {
        throw ArgumentError("universal_nca: index out of range");
    }
    return ut.index.query(static_cast<NodeId>(x), static_cast<NodeId>(y));
}

void write_dot(std::ostream& os, const UniversalTree& ut) {
    os << "digraph universal {\n  node [shape=circle, label=\"\"];\n";
    for (NodeId v = 0; v < ut.size(); ++v) {
        os << "  n" << v << " [tooltip=\"" << v << "\"";
        if (ut.spine[v]) os << ", style=filled, fillcolor=gray";
        os << "];\n";
    }
    for (NodeId v = 0; v < ut.size(); ++v) {
        for (NodeId c : ut.tree.children(v)) os << "  n" << v << " -> n" << c << ";\n";
    }
    os << "}\n";
}

}  // namespace mut
