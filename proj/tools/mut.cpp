#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mut/analysis.hpp"
#include "mut/embed.hpp"
#include "mut/error.hpp"
#include "mut/fastscheme.hpp"
#include "mut/scheme.hpp"
#include "mut/tree.hpp"
#include "mut/universal.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct VerificationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Config {
    std::string kind = "binary";
    std::size_t n = 0;
    std::optional<double> alpha;
    std::optional<std::size_t> b;
    std::uint64_t seed = 1;
    std::size_t cap = 60;
    bool json = false;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw mut::ArgumentError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw mut::ArgumentError("cannot write " + path);
    out << text;
}

// One tree per non-empty line; '#' starts a comment.
std::vector<mut::RootedTree> read_trees(const std::string& text, bool ordered) {
    std::vector<mut::RootedTree> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
        while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
        std::size_t i = 0;
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i == line.size()) continue;
        out.push_back(mut::parse_tree(std::string_view(line).substr(i), ordered));
    }
    return out;
}

mut::RootedTree load_tree(const std::string& tree, const std::string& file, bool ordered) {
    if (!tree.empty()) return mut::parse_tree(tree, ordered);
    if (file.empty()) throw mut::ArgumentError("give --tree or --file");
    auto ts = read_trees(read_file(file), ordered);
    if (ts.size() != 1) throw mut::ArgumentError(file + ": expected exactly one tree");
    return ts.front();
}

mut::UniversalSpec spec_for(const Config& cfg, std::size_t n) {
    return mut::UniversalSpec::make(mut::parse_kind(cfg.kind), n, cfg.alpha);
}

std::string alpha_tag(double a) {
    std::ostringstream os;
    os.precision(6);
    os << a;
    return os.str();
}

// Size tables memoized on disk under $MUT_CACHE_DIR.
fs::path cache_path(mut::Kind kind, double alpha) {
    const char* dir = std::getenv("MUT_CACHE_DIR");
    if (!dir || !*dir) return {};
    return fs::path(dir) / ("sizes-" + std::string(mut::to_string(kind)) + "-" + alpha_tag(alpha) + ".json");
}

void load_cache(mut::Kind kind, double alpha) {
    const auto p = cache_path(kind, alpha);
    if (p.empty() || !fs::exists(p)) return;
    try {
        const json j = json::parse(read_file(p.string()));
        if (j.at("kind") != mut::to_string(kind) || j.at("alpha").get<double>() != alpha) return;
        mut::seed_size_table(kind, alpha, j.at("sizes").get<std::vector<std::uint64_t>>());
    } catch (const std::exception&) {
        // a stale or corrupt cache is ignored
    }
}

void store_cache(mut::Kind kind, double alpha, std::size_t n_max) {
    const auto p = cache_path(kind, alpha);
    if (p.empty()) return;
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
    const auto table = mut::size_table(kind, alpha, n_max);
    const json j{{"kind", mut::to_string(kind)}, {"alpha", alpha}, {"sizes", *table}};
    std::ofstream out(p);
    if (out) out << j.dump();
}

int cmd_build(const Config& cfg, bool dot) {
    const auto spec = spec_for(cfg, cfg.n);
    const auto ut = mut::build_universal(spec);
    if (dot) {
        mut::write_dot(std::cout, ut);
    } else if (cfg.json) {
        std::cout << json{{"kind", mut::to_string(spec.kind)}, {"n", spec.n}, {"alpha", spec.alpha},
                          {"size", ut.size()}, {"tree", mut::serialize_tree(ut.tree)}}
                         .dump()
                  << "\n";
    } else {
        std::cout << mut::serialize_tree(ut.tree) << "\n";
    }
    return 0;
}

int cmd_size(const Config& cfg) {
    const auto spec = spec_for(cfg, cfg.n);
    load_cache(spec.kind, spec.alpha);
    const auto sz = mut::universal_size(spec);
    store_cache(spec.kind, spec.alpha, spec.n);
    if (cfg.json) {
        std::cout << json{{"kind", mut::to_string(spec.kind)}, {"n", spec.n}, {"alpha", spec.alpha}, {"size", sz}}
                         .dump()
                  << "\n";
    } else {
        std::cout << sz << "\n";
    }
    return 0;
}

int cmd_embed(const Config& cfg, const mut::RootedTree& t) {
    const auto spec = spec_for(cfg, cfg.n ? cfg.n : t.size());
    const auto e = mut::embed(t, spec);
    const auto ut = mut::build_universal(spec);
    const bool ok = mut::verify_embedding(t, e, ut);
    if (cfg.json) {
        std::cout << json{{"kind", mut::to_string(spec.kind)}, {"n", spec.n}, {"map", e.map}, {"verified", ok}}
                         .dump()
                  << "\n";
    } else {
        std::cout << mut::write_embedding(e);
    }
    if (!ok) throw VerificationFailure("embedding failed verification");
    return 0;
}

int cmd_label(const Config& cfg, const mut::RootedTree& t) {
    const mut::SchemeInstance inst(spec_for(cfg, cfg.n ? cfg.n : t.size()));
    const auto labels = inst.encode(t);
    if (cfg.json) {
        json arr = json::array();
        for (const auto& l : labels) arr.push_back(l.to_string());
        std::cout << json{{"kind", mut::to_string(inst.spec().kind)}, {"n", inst.spec().n},
                          {"width", inst.width()}, {"labels", arr}}
                         .dump()
                  << "\n";
    } else {
        std::cout << mut::write_label_file(labels);
    }
    return 0;
}

int cmd_query(const Config& cfg, const std::string& x, const std::string& y) {
    if (cfg.n == 0) throw mut::ArgumentError("query needs --n");
    const mut::SchemeInstance inst(spec_for(cfg, cfg.n));
    const auto z = inst.decode_nca(mut::BitString::from_string(x), mut::BitString::from_string(y));
    if (cfg.json) {
        std::cout << json{{"x", x}, {"y", y}, {"nca", z.to_string()}}.dump() << "\n";
    } else {
        std::cout << z.to_string() << "\n";
    }
    return 0;
}

int cmd_fastlabel(const Config& cfg, const mut::RootedTree& t, const std::string& shared_out) {
    const std::size_t b = cfg.b.value_or(mut::default_b(t.size()));
    const auto enc = mut::encode_fast(t, b);
    const auto rep = mut::step_budget_check(enc, b);
    if (!shared_out.empty()) write_file(shared_out, mut::write_shared_block(*enc.shared));
    if (cfg.json) {
        json arr = json::array();
        for (const auto& l : enc.labels) arr.push_back(mut::write_fast_label(l));
        std::cout << json{{"n", t.size()}, {"b", b}, {"labels", arr}, {"budget_ok", rep.ok()},
                          {"shared", json::parse(mut::write_shared_block(*enc.shared))}}
                         .dump()
                  << "\n";
    } else {
        for (std::size_t v = 0; v < enc.labels.size(); ++v) {
            std::cout << v << ": " << mut::write_fast_label(enc.labels[v]) << "\n";
        }
    }
    if (!rep.ok()) throw VerificationFailure("step budget violated");
    return 0;
}

int cmd_fastquery(const Config& cfg, const std::string& shared, const std::string& x, const std::string& y) {
    const auto block = mut::parse_shared_block(read_file(shared));
    const auto a = mut::parse_fast_label(x, block), b = mut::parse_fast_label(y, block);
    const auto z = mut::write_fast_label(mut::decode_fast(a, b));
    if (cfg.json) {
        std::cout << json{{"x", x}, {"y", y}, {"nca", z}}.dump() << "\n";
    } else {
        std::cout << z << "\n";
    }
    return 0;
}

std::vector<mut::RootedTree> all_trees(mut::Kind kind, std::size_t n) {
    switch (kind) {
        case mut::Kind::binary: return mut::enumerate_trees(n, 2);
        case mut::Kind::general: return mut::enumerate_trees(n);
        case mut::Kind::ordered: return mut::enumerate_ordered_trees(n, 2);
    }
    return {};
}

int cmd_check_universal(const Config& cfg) {
    const auto kind = mut::parse_kind(cfg.kind);
    std::size_t checked = 0, failures = 0;
    json rows = json::array();
    for (std::size_t n = 1; n <= cfg.n; ++n) {
        const auto spec = spec_for(cfg, n);
        const auto ut = mut::build_universal(spec);
        std::size_t bad = 0, count = 0;
        for (const auto& t : all_trees(kind, n)) {
            ++count;
            bool ok = false;
            try {
                ok = mut::verify_embedding(t, mut::embed(t, spec), ut);
            } catch (const std::exception&) {
                ok = false;
            }
            if (!ok) {
                ++bad;
                if (!cfg.json) std::cout << "FAIL n=" << n << " " << mut::serialize_tree(t) << "\n";
            }
        }
        checked += count;
        failures += bad;
        if (cfg.json) {
            rows.push_back({{"n", n}, {"trees", count}, {"failures", bad}, {"size", ut.size()}});
        } else {
            std::cout << "n=" << n << " |U|=" << ut.size() << " trees=" << count << " failures=" << bad << "\n";
        }
    }
    if (cfg.json) {
        std::cout << json{{"kind", cfg.kind}, {"rows", rows}, {"checked", checked}, {"failures", failures}}.dump()
                  << "\n";
    }
    if (failures) throw VerificationFailure(std::to_string(failures) + " trees failed to embed");
    return 0;
}

int cmd_verify_constants(const Config& cfg) {
    struct Row {
        std::string name;
        bool ok;
        double lo, hi;
    };
    std::vector<Row> rows;
    auto z1 = mut::certify_zeta(1.728, 1000000);
    rows.push_back({"zeta(1.728) > 2", z1.lo > 2.0, z1.lo, z1.hi});
    auto ds = mut::certify_double_sum(2.174, 1000);
    rows.push_back({"sum_{x,y<=1000} (xy+1)^-2.174 > 1", ds.lo > 1.0, ds.lo, ds.hi});
    auto z2 = mut::certify_zeta(2.185, 1000000);
    rows.push_back({"zeta(2.185) > 1.5", z2.lo > 1.5, z2.lo, z2.hi});
    const std::tuple<mut::Kind, double, double> ineq[] = {
        {mut::Kind::binary, 1.894, 0.704}, {mut::Kind::general, 2.318, 0.659}, {mut::Kind::ordered, 2.331, 0.594}};
    for (auto [k, c, a] : ineq) {
        const auto r = mut::check_inequality(k, c, a);
        std::ostringstream name;
        name << "inequality " << mut::to_string(k) << " c=" << c << " alpha=" << a;
        rows.push_back({name.str(), r.holds, r.lhs_hi, r.rhs_lo});
    }
    bool all = true;
    json arr = json::array();
    for (const auto& r : rows) {
        all = all && r.ok;
        if (cfg.json) {
            arr.push_back({{"check", r.name}, {"pass", r.ok}, {"lo", r.lo}, {"hi", r.hi}});
        } else {
            std::printf("%s  %-44s [%.12f, %.12f]\n", r.ok ? "PASS" : "FAIL", r.name.c_str(), r.lo, r.hi);
        }
    }
    if (cfg.json) std::cout << json{{"checks", arr}, {"pass", all}}.dump() << "\n";
    if (!all) throw VerificationFailure("constant certification failed");
    return 0;
}

int cmd_measure(const Config& cfg, mut::MeasureOptions opt) {
    opt.kind = mut::parse_kind(cfg.kind);
    opt.seed = cfg.seed;
    if (cfg.b) opt.fast_b = *cfg.b;
    const double alpha = mut::default_alpha(opt.kind);
    load_cache(opt.kind, alpha);
    for (const auto& line : mut::measure(opt)) std::cout << line << "\n";
    store_cache(opt.kind, alpha, opt.n_max);
    return 0;
}

int cmd_enumerate(const Config& cfg, std::size_t leaves) {
    std::vector<mut::RootedTree> ts;
    if (leaves) {
        ts = mut::enumerate_series_reduced(leaves, cfg.kind == "binary" ? std::optional<std::size_t>(2) : std::nullopt);
    } else {
        ts = all_trees(mut::parse_kind(cfg.kind), cfg.n);
    }
    if (cfg.json) {
        json arr = json::array();
        for (const auto& t : ts) arr.push_back(mut::serialize_tree(t));
        std::cout << json{{"count", ts.size()}, {"trees", arr}}.dump() << "\n";
    } else {
        for (const auto& t : ts) std::cout << mut::serialize_tree(t) << "\n";
    }
    return 0;
}

struct GadgetArgs {
    std::string what;
    std::size_t s = 2, d = 2, leaves = 4;
    std::string tree, file, constraint;
    int parity = -1;
};

int cmd_gadgets(const Config& cfg, const GadgetArgs& g) {
    if (g.what == "caterpillar") {
        const auto cat = mut::make_caterpillar(g.s, g.d);
        if (cfg.json) {
            std::cout << json{{"s", g.s}, {"d", g.d}, {"leaves", cat.tree.leaf_count()},
                              {"tree", mut::serialize_tree(cat.tree)}}
                             .dump()
                      << "\n";
        } else {
            std::cout << mut::serialize_tree(cat.tree) << "\n";
        }
        return 0;
    }
    if (g.what == "levels") {
        const auto t = load_tree(g.tree, g.file, false);
        std::optional<int> par;
        if (g.parity >= 0) par = g.parity;
        const auto rep = mut::level_properties_check(t, g.d, par, cfg.cap);
        if (cfg.json) {
            std::cout << json{{"levels", rep.levels}, {"violations", rep.violations}, {"ok", rep.ok()}}.dump() << "\n";
        } else {
            for (std::size_t v = 0; v < rep.levels.size(); ++v) std::cout << v << ": " << rep.levels[v] << "\n";
            for (const auto& s : rep.violations) std::cout << "violation " << s << "\n";
        }
        if (!rep.ok()) throw VerificationFailure("level properties violated");
        return 0;
    }
    if (g.what == "parity") {
        const auto t = load_tree(g.tree, g.file, false);
        std::vector<int> c(t.size(), -1);
        // constraint string: one 0/1 per inner node in preorder
        std::size_t k = 0;
        for (mut::NodeId v : t.preorder()) {
            if (t.is_leaf(v)) continue;
            if (k >= g.constraint.size()) throw mut::ArgumentError("--constraint needs one digit per inner node");
            const char ch = g.constraint[k++];
            if (ch != '0' && ch != '1') throw mut::ArgumentError("--constraint must be 0/1 digits");
            c[v] = ch - '0';
        }
        if (k != g.constraint.size()) throw mut::ArgumentError("--constraint has extra digits");
        const auto out = mut::parity_transform(t, c);
        const bool bound = out.leaf_count() <= 2 * t.leaf_count() - 1;
        if (cfg.json) {
            std::cout << json{{"tree", mut::serialize_tree(out)}, {"leaves", out.leaf_count()},
                              {"bound_ok", bound}}
                             .dump()
                      << "\n";
        } else {
            std::cout << mut::serialize_tree(out) << "\n";
        }
        if (!bound) throw VerificationFailure("leaf bound violated");
        return 0;
    }
    if (g.what == "hosts") {
        json arr = json::array();
        std::vector<std::optional<std::size_t>> b(g.leaves + 1);
        b[0] = 0;
        bool consistent = true;
        for (std::size_t n = 1; n <= g.leaves; ++n) {
            const auto r = mut::minimal_host(n, std::max<std::size_t>(12, 2 * n));
            b[n] = r.b;
            std::optional<std::size_t> rhs = 1;
            for (std::size_t s = 2; s <= n; ++s) {
                if (!b[n / s]) {
                    rhs.reset();
                    break;
                }
                *rhs += *b[n / s];
            }
            const bool ok = !r.b || !rhs || *r.b >= *rhs;
            consistent = consistent && ok;
            if (cfg.json) {
                arr.push_back({{"n", n}, {"b", r.b ? json(*r.b) : json(nullptr)},
                               {"searched_up_to", r.searched_up_to}, {"recurrence", rhs ? json(*rhs) : json(nullptr)},
                               {"consistent", ok}, {"best_effort", true}});
            } else {
                std::cout << "n=" << n << " b=" << (r.b ? std::to_string(*r.b) : "> " + std::to_string(r.searched_up_to))
                          << " recurrence>=" << (rhs ? std::to_string(*rhs) : "?") << (ok ? "" : "  INCONSISTENT")
                          << "  (best effort)\n";
            }
        }
        if (cfg.json) std::cout << json{{"hosts", arr}, {"consistent", consistent}}.dump() << "\n";
        if (!consistent) throw VerificationFailure("minimal hosts contradict the recurrence");
        return 0;
    }
    throw mut::ArgumentError("unknown gadget " + g.what);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mut: minor-universal trees and NCA labeling schemes"};
    app.require_subcommand(1);
    Config cfg;
    auto common = [&](CLI::App* sc, bool with_n) {
        sc->add_option("--kind", cfg.kind, "binary | general | ordered")
            ->check(CLI::IsMember({"binary", "general", "ordered", "ordered-binary"}));
        if (with_n) sc->add_option("--n", cfg.n, "tree size bound");
        sc->add_option("--alpha", cfg.alpha, "override the construction's alpha");
        sc->add_option("--seed", cfg.seed, "random seed");
        sc->add_option("--cap", cfg.cap, "oracle size limit");
        sc->add_flag("--json", cfg.json, "machine-readable output");
    };

    auto* build = app.add_subcommand("build", "materialize a universal tree");
    common(build, true);
    bool dot = false;
    build->add_flag("--dot", dot, "emit Graphviz");

    auto* size = app.add_subcommand("size", "size of a universal tree");
    common(size, true);

    std::string tree, file;
    auto tree_opts = [&](CLI::App* sc) {
        sc->add_option("--tree", tree, "tree in balanced parentheses");
        sc->add_option("--file", file, "file holding one tree");
    };
    auto* embed = app.add_subcommand("embed", "embed a tree into a universal tree");
    common(embed, true);
    tree_opts(embed);

    auto* label = app.add_subcommand("label", "simple-scheme labels of a tree");
    common(label, true);
    tree_opts(label);

    std::string x, y;
    auto* query = app.add_subcommand("query", "NCA label from two simple-scheme labels");
    common(query, true);
    query->add_option("--x", x, "first label (0/1)")->required();
    query->add_option("--y", y, "second label (0/1)")->required();

    std::string shared_path;
    auto* fastlabel = app.add_subcommand("fastlabel", "fast-scheme labels of a tree");
    common(fastlabel, false);
    tree_opts(fastlabel);
    fastlabel->add_option("--b", cfg.b, "decomposition parameter");
    fastlabel->add_option("--shared-out", shared_path, "write the shared block here");

    auto* fastquery = app.add_subcommand("fastquery", "NCA label from two fast-scheme labels");
    common(fastquery, false);
    fastquery->add_option("--shared", shared_path, "shared block file")->required();
    fastquery->add_option("--x", x, "first label (hex)")->required();
    fastquery->add_option("--y", y, "second label (hex)")->required();

    auto* check = app.add_subcommand("check-universal", "embed every tree up to --n");
    common(check, true);

    auto* verify = app.add_subcommand("verify-constants", "certify the numeric constants");
    common(verify, false);

    mut::MeasureOptions mopt;
    auto* measure = app.add_subcommand("measure", "JSON-lines measurements");
    common(measure, false);
    measure->add_option("--n-min", mopt.n_min);
    measure->add_option("--n-max", mopt.n_max);
    measure->add_option("--step", mopt.step);
    measure->add_option("--samples", mopt.samples);
    measure->add_option("--b", cfg.b, "fast-scheme parameter");
    bool no_sizes = false, no_widths = false, no_fast = false;
    measure->add_flag("--no-sizes", no_sizes);
    measure->add_flag("--no-widths", no_widths);
    measure->add_flag("--no-fast", no_fast);

    std::size_t leaves = 0;
    auto* enumerate = app.add_subcommand("enumerate", "list trees");
    common(enumerate, true);
    enumerate->add_option("--leaves", leaves, "series-reduced trees with this many leaves");

    GadgetArgs g;
    auto* gadgets = app.add_subcommand("gadgets", "lower-bound gadgets");
    common(gadgets, false);
    gadgets->add_option("what", g.what, "caterpillar | levels | parity | hosts")
        ->required()
        ->check(CLI::IsMember({"caterpillar", "levels", "parity", "hosts"}));
    gadgets->add_option("--s", g.s);
    gadgets->add_option("--d", g.d);
    gadgets->add_option("--leaves", g.leaves);
    gadgets->add_option("--tree", g.tree);
    gadgets->add_option("--file", g.file);
    gadgets->add_option("--constraint", g.constraint, "0/1 per inner node in preorder");
    gadgets->add_option("--parity", g.parity);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        const bool ordered = cfg.kind == "ordered" || cfg.kind == "ordered-binary";
        if (*build) return cmd_build(cfg, dot);
        if (*size) return cmd_size(cfg);
        if (*embed) return cmd_embed(cfg, load_tree(tree, file, ordered));
        if (*label) return cmd_label(cfg, load_tree(tree, file, ordered));
        if (*query) return cmd_query(cfg, x, y);
        if (*fastlabel) return cmd_fastlabel(cfg, load_tree(tree, file, false), shared_path);
        if (*fastquery) return cmd_fastquery(cfg, shared_path, x, y);
        if (*check) return cmd_check_universal(cfg);
        if (*verify) return cmd_verify_constants(cfg);
        if (*measure) {
            mopt.sizes = !no_sizes;
            mopt.widths = !no_widths;
            mopt.fast = !no_fast;
            return cmd_measure(cfg, mopt);
        }
        if (*enumerate) return cmd_enumerate(cfg, leaves);
        if (*gadgets) return cmd_gadgets(cfg, g);
    } catch (const VerificationFailure& e) {
        std::cerr << "verification failed: " << e.what() << "\n";
        return 1;
    } catch (const mut::ContractViolation& e) {
        std::cerr << "contract violation: " << e.what() << "\n";
        return 1;
    } catch (const mut::DecodeError& e) {
        std::cerr << "decode error: " << e.what() << "\n";
        return 1;
    } catch (const mut::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const mut::ArgumentError& e) {
        std::cerr << "usage: " << e.what() << "\n";
        return 2;
    } catch (const mut::SizeError& e) {
        std::cerr << "usage: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
