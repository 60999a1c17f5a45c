#include "mut/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "json.hpp"
#include "mut/decomposition.hpp"
#include "mut/error.hpp"
#include "mut/fastscheme.hpp"
#include "mut/scheme.hpp"
#include "mut/word.hpp"

namespace mut {

namespace {

constexpr double kWiden = 1e-12;

struct Kahan {
    double sum = 0.0, comp = 0.0;
    void add(double x) {
        const double y = x - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

double down(double x) { return x - std::fabs(x) * kWiden; }
double up(double x) { return x + std::fabs(x) * kWiden; }

double geometric_factor(double c) {
    const double p = std::pow(2.0, c - 1.0);
    return p / (p - 1.0);
}

}  // namespace

IntervalBound certify_zeta(double c, std::size_t terms) {
    if (!(c > 1.0)) throw ArgumentError("certify_zeta: series diverges for c <= 1");
    if (terms < 10) throw ArgumentError("certify_zeta: need at least 10 terms");
    Kahan k;
    // smallest terms first
    for (std::size_t i = terms; i >= 1; --i) k.add(std::pow(static_cast<double>(i), -c));
    const double t = static_cast<double>(terms);
    const double tail_lo = 1.0 / ((c - 1.0) * std::pow(t + 1.0, c - 1.0));
    const double tail_hi = 1.0 / ((c - 1.0) * std::pow(t, c - 1.0));
    return {down(k.sum + tail_lo), up(k.sum + tail_hi)};
}

double double_sum(double c, std::size_t limit) {
    if (!(c > 2.0)) throw ArgumentError("double_sum: needs c > 2");
    if (limit == 0) throw ArgumentError("double_sum: limit must be >= 1");
    Kahan k;
    for (std::size_t x = 1; x <= limit; ++x) {
        for (std::size_t y = 1; y <= limit; ++y) {
            k.add(std::pow(static_cast<double>(x) * static_cast<double>(y) + 1.0, -c));
        }
    }
    return k.sum;
}

double double_sum_diagonal(double c, std::size_t limit) {
    if (!(c > 2.0)) throw ArgumentError("double_sum: needs c > 2");
    if (limit == 0) throw ArgumentError("double_sum: limit must be >= 1");
    Kahan k;
    for (std::size_t d = 2; d <= 2 * limit; ++d) {
        const std::size_t xlo = d > limit ? d - limit : 1;
        const std::size_t xhi = std::min(limit, d - 1);
        for (std::size_t x = xlo; x <= xhi; ++x) {
            const double y = static_cast<double>(d - x);
            k.add(std::pow(static_cast<double>(x) * y + 1.0, -c));
        }
    }
    return k.sum;
}

IntervalBound certify_double_sum(double c, std::size_t limit) {
    const double s = double_sum(c, limit);
    // terms carry ~1 ulp each, compensated summation keeps the total near that
    const double slack = s * kWiden;
    return {s - slack, s + slack};
}

double inequality_margin(Kind kind, double c, double alpha, double zeta) {
    const double g = geometric_factor(c);
    const double a = std::pow(alpha, c), b = std::pow(1.0 - alpha, c);
    switch (kind) {
        case Kind::binary:
            return (1.0 - std::pow(0.5, c)) - (a + b * g);
        case Kind::general:
            return (2.0 - zeta) - (a + b * zeta * g);
        case Kind::ordered:
            return 1.0 - (2.0 * a + b * 2.0 * g);
    }
    return 0.0;
}

InequalityCheck check_inequality(Kind kind, double c, double alpha, std::size_t zeta_terms) {
    if (!(c > 1.0)) throw ArgumentError("check_inequality: needs c > 1");
    check_alpha(alpha);
    InequalityCheck r;
    const double g = up(geometric_factor(c));
    const double a = up(std::pow(alpha, c)), b = up(std::pow(1.0 - alpha, c));
    switch (kind) {
        case Kind::binary:
            r.lhs_hi = up(a + up(b * g));
            r.rhs_lo = down(1.0 - up(std::pow(0.5, c)));
            break;
        case Kind::general: {
            const IntervalBound z = certify_zeta(c, zeta_terms);
            r.lhs_hi = up(a + up(up(b * z.hi) * g));
            r.rhs_lo = down(2.0 - z.hi);
            break;
        }
        case Kind::ordered:
            r.lhs_hi = up(up(2.0 * a) + up(up(b * 2.0) * g));
            r.rhs_lo = 1.0;
            break;
    }
    r.holds = r.lhs_hi <= r.rhs_lo;
    return r;
}

AlphaChoice optimize_alpha(Kind kind, double c) {
    if (!(c > 1.0)) throw ArgumentError("optimize_alpha: needs c > 1");
    AlphaChoice out;
    double zeta = 0.0;
    if (kind == Kind::general) {
        const IntervalBound z = certify_zeta(c, 100000);
        zeta = 0.5 * (z.lo + z.hi);
        // golden-section search on the margin over (1/2, 1)
        const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
        double lo = 0.5, hi = 1.0;
        double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
        double f1 = inequality_margin(kind, c, x1, zeta), f2 = inequality_margin(kind, c, x2, zeta);
        for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
            if (f1 < f2) {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + phi * (hi - lo);
                f2 = inequality_margin(kind, c, x2, zeta);
            } else {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - phi * (hi - lo);
                f1 = inequality_margin(kind, c, x1, zeta);
            }
        }
        out.alpha = 0.5 * (lo + hi);
    } else {
        const double A = std::pow(geometric_factor(c), 1.0 / (c - 1.0));
        out.alpha = A / (1.0 + A);
    }
    out.A = out.alpha / (1.0 - out.alpha);
    out.margin = inequality_margin(kind, c, out.alpha, zeta);
    return out;
}

double min_feasible_c(Kind kind) {
    auto feasible = [&](double c) {
        const AlphaChoice a = optimize_alpha(kind, c);
        if (!(a.alpha > 0.5 && a.alpha < 1.0)) return false;
        return check_inequality(kind, c, a.alpha).holds;
    };
    double lo = 1.05, hi = 3.0;
    if (!feasible(hi)) throw ContractViolation("min_feasible_c: no feasible c below 3");
    while (hi - lo > 1e-4) {
        const double mid = 0.5 * (lo + hi);
        (feasible(mid) ? hi : lo) = mid;
    }
    return hi;
}

Caterpillar make_caterpillar(std::size_t s, std::size_t d) {
    if (s == 0) throw ArgumentError("make_caterpillar: s must be >= 1");
    if (d < 2) throw ArgumentError("make_caterpillar: d must be >= 2");
    Caterpillar cat;
    cat.s = s;
    cat.d = d;
    TreeBuilder tb;
    NodeId spine = tb.add_root();
    for (std::size_t i = 1; i < s; ++i) {
        const bool last = i + 1 == s;
        for (std::size_t j = 0; j < (last ? d : d - 1); ++j) tb.add_child(spine);
        if (!last) spine = tb.add_child(spine);
    }
    cat.tree = std::move(tb).build();
    cat.inner.resize(cat.tree.size());
    for (NodeId v = 0; v < cat.tree.size(); ++v) cat.inner[v] = !cat.tree.is_leaf(v);
    return cat;
}

std::size_t caterpillar_level(const RootedTree& t, NodeId v, std::size_t d,
                              std::optional<int> parity, std::size_t cap) {
    if (!t.valid(v)) throw ArgumentError("caterpillar_level: node out of range");
    if (d < 2) throw ArgumentError("caterpillar_level: d must be >= 2");
    const RootedTree sub = t.subtree(v).with_ordered(false);
    if (sub.size() > cap) throw SizeError("caterpillar_level: subtree exceeds oracle cap");
    int rel = -1;
    if (parity) {
        std::size_t depth = 0;
        for (auto p = t.parent(v); p; p = t.parent(*p)) ++depth;
        rel = static_cast<int>((static_cast<std::size_t>(*parity) + depth) % 2);
    }
    auto fits = [&](std::size_t s) {
        const Caterpillar cat = make_caterpillar(s, d);
        MinorSearchOptions opt;
        opt.cap = cap;
        if (rel >= 0) {
            opt.parity.assign(cat.tree.size(), -1);
            for (NodeId u = 0; u < cat.tree.size(); ++u) {
                if (cat.inner[u]) opt.parity[u] = rel;
            }
        }
        return is_topological_minor(cat.tree, sub, opt).has_value();
    };
    // (s,d)-caterpillars have (s-1)(d-1)+1 leaves
    const std::size_t leaves = sub.leaf_count();
    std::size_t lo = 1, hi = 1 + (leaves - 1) / (d - 1);
    while (lo < hi) {
        const std::size_t mid = (lo + hi + 1) / 2;
        if (fits(mid)) lo = mid;
        else hi = mid - 1;
    }
    return lo;
}

LevelReport level_properties_check(const RootedTree& t, std::size_t d, std::optional<int> parity,
                                   std::size_t cap) {
    LevelReport rep;
    if (t.empty()) return rep;
    const auto depth = t.depths();
    rep.levels.resize(t.size());
    for (NodeId v = 0; v < t.size(); ++v) rep.levels[v] = caterpillar_level(t, v, d, parity, cap);
    auto bad = [&](NodeId v, const std::string& what) {
        rep.violations.push_back("node " + std::to_string(v) + ": " + what);
    };
    for (NodeId v = 0; v < t.size(); ++v) {
        ++rep.checked;
        const std::size_t sv = rep.levels[v];
        const auto kids = t.children(v);
        if (kids.empty()) {
            if (sv != 1) bad(v, "leaf level " + std::to_string(sv));
            continue;
        }
        std::size_t best = 0;
        for (NodeId u : kids) {
            if (rep.levels[u] > sv) bad(v, "child " + std::to_string(u) + " has a larger level");
            best = std::max(best, rep.levels[u]);
        }
        const bool grows = kids.size() >= d &&
                           (!parity || static_cast<int>(depth[v] % 2) == *parity);
        if (grows) {
            if (best + 1 != sv) bad(v, "expected a child at level s(v)-1");
        } else {
            if (best != sv) bad(v, "expected a child at level s(v)");
        }
    }
    return rep;
}

namespace {

// Rebuilds t with `kids(v)` giving the new child lists, starting from t.root().
RootedTree rebuild(const RootedTree& t, const std::function<std::vector<NodeId>(NodeId)>& kids) {
    TreeBuilder tb;
    std::vector<std::pair<NodeId, NodeId>> stack{{t.root(), tb.add_root()}};
    while (!stack.empty()) {
        auto [v, nv] = stack.back();
        stack.pop_back();
        const auto ks = kids(v);
        std::vector<std::pair<NodeId, NodeId>> made;
        for (NodeId c : ks) made.emplace_back(c, tb.add_child(nv));
        for (auto it = made.rbegin(); it != made.rend(); ++it) stack.push_back(*it);
    }
    return std::move(tb).build(t.ordered());
}

}  // namespace

RootedTree cut(const RootedTree& t, NodeId a) {
    if (!t.valid(a)) throw ArgumentError("cut: node out of range");
    if (!t.parent(a)) throw ArgumentError("cut: cannot cut the root");
    return rebuild(t, [&](NodeId v) {
        std::vector<NodeId> out;
        for (NodeId c : t.children(v)) {
            if (c != a) out.push_back(c);
        }
        return out;
    });
}

RootedTree contract(const RootedTree& t, NodeId b) {
    if (!t.valid(b)) throw ArgumentError("contract: node out of range");
    const auto a = t.parent(b);
    if (!a) throw ArgumentError("contract: node has no parent");
    if (t.degree(b) != 1) throw ArgumentError("contract: node must have exactly one child");
    const NodeId c = t.children(b)[0];
    return rebuild(t, [&](NodeId v) {
        std::vector<NodeId> out;
        for (NodeId x : t.children(v)) {
            if (v == *a && x == b) {
                if (t.is_leaf(c)) {
                    out.push_back(c);
                } else {
                    for (NodeId g : t.children(c)) out.push_back(g);
                }
            } else {
                out.push_back(x);
            }
        }
        return out;
    });
}

RootedTree parity_transform(const RootedTree& t, const std::vector<int>& constraint,
                            std::vector<NodeId>* image) {
    if (t.empty()) throw ArgumentError("parity_transform: empty tree");
    if (constraint.size() != t.size()) throw ArgumentError("parity_transform: constraint size mismatch");
    for (NodeId v = 0; v < t.size(); ++v) {
        if (t.degree(v) == 1) throw ArgumentError("parity_transform: degree-1 node " + std::to_string(v));
        if (!t.is_leaf(v) && constraint[v] != 0 && constraint[v] != 1) {
            throw ArgumentError("parity_transform: inner node " + std::to_string(v) + " lacks a constraint");
        }
    }
    TreeBuilder tb;
    std::vector<NodeId> img(t.size(), kNoNode);
    const NodeId r = t.root();
    NodeId top;
    if (!t.is_leaf(r) && constraint[r] == 1) {
        const NodeId nr = tb.add_root();
        tb.add_child(nr);
        top = tb.add_child(nr);
    } else {
        top = tb.add_root();
    }
    img[r] = top;
    std::vector<NodeId> stack{r};
    while (!stack.empty()) {
        const NodeId u = stack.back();
        stack.pop_back();
        const auto kids = t.children(u);
        for (NodeId v : kids) {
            NodeId at = img[u];
            if (!t.is_leaf(v) && constraint[u] == constraint[v]) {
                at = tb.add_child(at);
                tb.add_child(at);
            }
            img[v] = tb.add_child(at);
        }
        for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
    }
    if (image) *image = std::move(img);
    return std::move(tb).build(t.ordered());
}

MinimalHostResult minimal_host(std::size_t n, std::size_t max_host_leaves) {
    if (n == 0) throw ArgumentError("minimal_host: n must be >= 1");
    MinimalHostResult res;
    res.leaves = n;
    const auto guests = enumerate_series_reduced(n, 2);
    for (std::size_t m = n; m <= max_host_leaves; ++m) {
        res.searched_up_to = m;
        for (const auto& host : enumerate_series_reduced(m)) {
            bool all = true;
            for (const auto& g : guests) {
                MinorSearchOptions opt;
                opt.cap = std::max<std::size_t>(60, host.size());
                if (!is_topological_minor(g, host, opt)) {
                    all = false;
                    break;
                }
            }
            if (all) {
                res.b = m;
                res.witness = host;
                return res;
            }
        }
    }
    return res;
}

std::vector<std::string> measure(const MeasureOptions& opt) {
    using nlohmann::json;
    if (opt.n_min == 0 || opt.n_max < opt.n_min || opt.step == 0) {
        throw ArgumentError("measure: bad n range");
    }
    std::vector<std::string> out;
    const double alpha = default_alpha(opt.kind);
    const double c = size_exponent(opt.kind);
    std::mt19937_64 rng(opt.seed);
    if (opt.sizes) {
        const SizeTable table = size_table(opt.kind, alpha, opt.n_max);
        for (std::size_t n = opt.n_min; n <= opt.n_max; n += opt.step) {
            const std::uint64_t sz = (*table)[n];
            const long double pw = std::pow(static_cast<long double>(n), static_cast<long double>(c));
            out.push_back(json{{"type", "size"}, {"kind", to_string(opt.kind)}, {"n", n}, {"size", sz},
                               {"power", static_cast<double>(pw)},
                               {"ok", static_cast<long double>(sz) <= pw}}
                              .dump());
        }
    }
    if (opt.widths) {
        for (std::size_t n = opt.n_min; n <= opt.n_max; n += opt.step) {
            const std::size_t w = label_width(UniversalSpec::make(opt.kind, n));
            const auto bound = static_cast<std::size_t>(std::ceil(c * std::log2(static_cast<double>(n)))) + 2;
            out.push_back(json{{"type", "width"}, {"kind", to_string(opt.kind)}, {"n", n}, {"width", w},
                               {"bound", bound}, {"ok", w <= bound}}
                              .dump());
        }
    }
    if (opt.fast) {
        for (std::size_t n = opt.n_min; n <= opt.n_max; n += opt.step) {
            std::size_t max_bits = 0, total_bits = 0, labels = 0, shared_bits = 0, max_ops = 0, queries = 0;
            std::size_t max_fields = 0, max_concat = 0;
            for (std::size_t s = 0; s < opt.samples; ++s) {
                const RootedTree t = random_tree(n, rng);
                const FastEncoding enc = encode_fast(t, opt.fast_b);
                shared_bits = std::max(shared_bits, enc.shared->size_bits());
                for (const auto& l : enc.labels) {
                    max_bits = std::max(max_bits, l.size_bits());
                    max_concat = std::max(max_concat, l.length);
                    max_fields = std::max(max_fields, l.fields());
                    total_bits += l.size_bits();
                    ++labels;
                }
                std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(n - 1));
                for (int q = 0; q < 200; ++q) {
                    const NodeId u = pick(rng), v = pick(rng);
                    reset_op_count();
                    (void)decode_fast(enc.labels[u], enc.labels[v]);
                    max_ops = std::max<std::size_t>(max_ops, op_count());
                    ++queries;
                }
            }
            out.push_back(json{{"type", "fast"}, {"n", n}, {"b", opt.fast_b}, {"samples", opt.samples},
                               {"max_bits", max_bits}, {"max_concat_bits", max_concat},
                               {"max_fields", max_fields},
                               {"mean_bits", labels ? static_cast<double>(total_bits) / labels : 0.0},
                               {"shared_bits", shared_bits}, {"queries", queries}, {"max_ops", max_ops}}
                              .dump());
        }
    }
    return out;
}

}  // namespace mut
