// Command-line front end: tree census, flip resolution, FM limits and strata,
// wall enumeration, wall-crossing terms, localization and the bracket parser.
//
// Exit codes: 0 success, 2 usage, 3 validation, 4 internal audit failure.

#include "bubbletree/algebra_io.hpp"
#include "bubbletree/flip.hpp"
#include "bubbletree/fm_config.hpp"
#include "bubbletree/json_io.hpp"
#include "bubbletree/localization.hpp"
#include "bubbletree/notation.hpp"
#include "bubbletree/wallcross.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace bubbletree;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitValidation = 3;
constexpr int kExitAudit = 4;

class AuditFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

// "1,-1,2/3" -> rationals
RatVec parse_rat_vec(const std::string& s) {
    RatVec out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(Rational::parse(item));
    if (out.empty()) throw std::invalid_argument("empty vector '" + s + "'");
    return out;
}

IntVec parse_int_vec(const std::string& s) {
    IntVec out;
    for (const auto& r : parse_rat_vec(s)) {
        if (!r.is_integer()) throw std::invalid_argument("integer vector expected, got '" + s + "'");
        out.push_back(static_cast<long>(r.to_int64()));
    }
    return out;
}

void print_json(const json& j) { std::cout << j.dump(2) << "\n"; }

// ---------------------------------------------------------------- trees

struct TreesArgs {
    int K = 0;
    bool hasse = false;
    std::string format = "table";
};

int cmd_trees(const TreesArgs& a) {
    const auto trees = enumerate_trees(a.K);
    int ghosts = 0;
    for (const auto& t : trees) ghosts += is_ghost_tree(t);
    if (a.format == "dot" || a.hasse) {
        // Hasse diagram of the contraction order; dimensions need no chi, sigma here.
        std::cout << "digraph trees {\n  rankdir=BT;\n";
        for (std::size_t i = 0; i < trees.size(); ++i) {
            std::cout << "  n" << i << " [label=\"" << print_tree(trees[i]) << "\"";
            if (is_ghost_tree(trees[i])) std::cout << ", shape=box";
            std::cout << "];\n";
        }
        for (std::size_t i = 0; i < trees.size(); ++i)
            for (const auto& c : single_contractions(trees[i])) {
                auto it = std::lower_bound(trees.begin(), trees.end(), c);
                std::cout << "  n" << i << " -> n" << (it - trees.begin()) << ";\n";
            }
        std::cout << "}\n";
        return 0;
    }
    if (a.format == "json") {
        json list = json::array();
        for (const auto& t : trees)
            list.push_back({{"tree", print_tree(t)},
                            {"ghost", is_ghost_tree(t)},
                            {"edges", t.edge_count()},
                            {"ghost_vertices", ghost_vertices(t).size()},
                            {"dimension_expr", dimension_expr(t).str()}});
        print_json({{"schema", kSchemaVersion}, {"K", a.K}, {"count", trees.size()}, {"ghost_count", ghosts},
                    {"trees", list}});
        return 0;
    }
    std::cout << trees.size() << " trees, " << ghosts << " ghost\n";
    for (const auto& t : trees)
        std::cout << std::left << std::setw(24) << print_tree(t) << (is_ghost_tree(t) ? " ghost " : "       ")
                  << "dim " << dimension_expr(t).str() << "\n";
    return 0;
}

// ---------------------------------------------------------------- flip

struct FlipArgs {
    int K = 0;
    long chi = 0;
    long sigma = 0;
    std::string format = "json";
};

int cmd_flip(const FlipArgs& a) {
    Resolution r;
    try {
        r = resolve(a.K, a.chi, a.sigma);
    } catch (const std::runtime_error& e) {
        throw AuditFailure(e.what());
    }
    if (a.format == "dot") {
        std::cout << poset_dot(r.initial) << poset_dot(r.poset, true);
        return 0;
    }
    if (a.format == "table") {
        std::cout << "K=" << a.K << " chi=" << a.chi << " sigma=" << a.sigma << ": " << r.log.size()
                  << " events in " << r.rounds << " rounds\n";
        for (const auto& e : r.log) {
            std::cout << "m=" << e.energy << "  " << std::left << std::setw(24) << print_tree(e.tree);
            for (const auto& end : e.ends)
                std::cout << " end v" << end.vertex << " S^" << end.sphere_dim << "/" << end.group << " fiber "
                          << end.fiber_dim;
            if (e.merged_into) std::cout << "  merged into " << print_tree(*e.merged_into);
            std::cout << (e.ok() ? "  audit ok" : "  AUDIT FAILED") << "\n";
        }
        int active = 0;
        for (bool b : r.poset.active) active += b;
        std::cout << active << " strata remain, all ghost-free\n";
        return 0;
    }
    json events = json::array();
    for (const auto& e : r.log) events.push_back(event_to_json(e));
    print_json({{"schema", kSchemaVersion},
                {"K", a.K},
                {"rounds", r.rounds},
                {"events", events},
                {"final", poset_to_json(r.poset)}});
    return 0;
}

// ---------------------------------------------------------------- FM

struct FmLimitArgs {
    std::string input;
    std::string format = "json";
};

int cmd_fm_limit(const FmLimitArgs& a) {
    const LimitStratum s = limit_stratum(family_from_json(read_json_file(a.input)));
    if (a.format == "table") {
        std::cout << "tree   " << print_tree(s.tree) << "\nformat " << stratum_format(s.tree) << "\n";
        for (const auto& [v, sc] : s.screens) {
            std::cout << "screen v" << v << " order " << sc.order << " scale^2 " << sc.scale_squared << ":";
            for (const auto& p : sc.config.points) {
                std::cout << " (";
                for (int i = 0; i < 4; ++i) std::cout << (i ? "," : "") << p.z[i];
                std::cout << ")x" << p.weight;
            }
            std::cout << "\n";
        }
        return 0;
    }
    print_json(limit_to_json(s));
    return 0;
}

struct FmStrataArgs {
    std::vector<int> weights;
    std::string format = "table";
};

int cmd_fm_strata(const FmStrataArgs& a) {
    const auto strata = enumerate_fm_strata(a.weights);
    if (a.format == "json") {
        json list = json::array();
        for (const auto& t : strata) list.push_back({{"tree", print_tree(t)}, {"format", stratum_format(t)}});
        print_json({{"schema", kSchemaVersion}, {"weights", a.weights}, {"count", strata.size()}, {"strata", list}});
        return 0;
    }
    std::cout << strata.size() << " strata\n";
    for (const auto& t : strata) std::cout << std::left << std::setw(28) << print_tree(t) << stratum_format(t) << "\n";
    return 0;
}

// ---------------------------------------------------------------- walls

struct FormArgs {
    std::string form_file;
    bool hyperbolic = false;
    std::string diagonal;
};

IntersectionForm load_form(const FormArgs& f) {
    const int given = !f.form_file.empty() + f.hyperbolic + !f.diagonal.empty();
    if (given != 1) throw CLI::ValidationError("form", "give exactly one of --form, --hyperbolic, --diag");
    if (f.hyperbolic) return IntersectionForm::hyperbolic();
    if (!f.diagonal.empty()) return IntersectionForm::diagonal(parse_int_vec(f.diagonal));
    return IntersectionForm::from_json(read_json_file(f.form_file));
}

struct WallsArgs {
    FormArgs form;
    std::string c, from, to;
    long p1 = 0;
    bool keep_signs = false;
    bool unsigned_eps = false;
    std::string format = "table";
};

int cmd_walls(const WallsArgs& a) {
    const IntersectionForm Q = load_form(a.form);
    WallSearchOptions opt;
    opt.collapse_sign = !a.keep_signs;
    const IntVec c = parse_int_vec(a.c);
    const WallSearch res = enumerate_walls(Q, c, a.p1, parse_rat_vec(a.from), parse_rat_vec(a.to), opt);
    const EpsilonConvention conv = a.unsigned_eps ? EpsilonConvention::Unsigned : EpsilonConvention::Signed;
    auto eps_json = [&](const Wall& w) -> json {
        try {
            return epsilon(c, w.alpha, Q, conv);
        } catch (const std::domain_error&) {
            return nullptr;
        }
    };
    if (a.format == "json") {
        json walls = json::array(), degenerate = json::array();
        for (const auto& w : res.walls) {
            json j = wall_to_json(w);
            j["epsilon"] = eps_json(w);
            walls.push_back(j);
        }
        for (const auto& w : res.degenerate) degenerate.push_back(wall_to_json(w));
        print_json({{"schema", kSchemaVersion},
                    {"form", Q.to_json()},
                    {"p1", a.p1},
                    {"box", res.box},
                    {"walls", walls},
                    {"degenerate", degenerate}});
        return 0;
    }
    std::cout << res.walls.size() << " walls";
    if (!res.degenerate.empty()) std::cout << ", " << res.degenerate.size() << " on-wall degeneracies";
    std::cout << "\n";
    std::cout << std::left << std::setw(18) << "alpha" << std::setw(8) << "a^2" << std::setw(10) << "t*"
              << std::setw(6) << "eps" << "r d N\n";
    for (const auto& w : res.walls) {
        std::ostringstream av;
        for (std::size_t i = 0; i < w.alpha.size(); ++i) av << (i ? "," : "(") << w.alpha[i];
        av << ")";
        json e = eps_json(w);
        std::cout << std::setw(18) << av.str() << std::setw(8) << w.alpha_sq << std::setw(10) << w.t_star.str()
                  << std::setw(6) << (e.is_null() ? "odd" : e.dump());
        if (w.invariants) std::cout << w.invariants->r << " " << w.invariants->d << " " << w.invariants->N;
        else std::cout << "-";
        std::cout << "\n";
    }
    for (const auto& w : res.degenerate) {
        std::cout << "degenerate alpha (";
        for (std::size_t i = 0; i < w.alpha.size(); ++i) std::cout << (i ? "," : "") << w.alpha[i];
        std::cout << ") lies on a period point\n";
    }
    return 0;
}

// ---------------------------------------------------------------- delta

struct DeltaArgs {
    FormArgs form;
    std::string alpha;
    std::optional<long> alpha_sq;
    long p1 = 0;
    std::optional<std::string> chi, sigma;
    std::optional<std::string> gamma_u, gamma_u_r0;
    std::vector<std::string> block_constants;
    std::string format = "table";
};

int cmd_delta(const DeltaArgs& a) {
    long alpha_sq;
    if (!a.alpha.empty()) {
        if (a.alpha_sq) throw CLI::ValidationError("alpha", "give --alpha or --alpha-sq, not both");
        const IntersectionForm Q = load_form(a.form);
        const IntVec alpha = parse_int_vec(a.alpha);
        alpha_sq = Q.pair(alpha, alpha);
    } else if (a.alpha_sq) {
        alpha_sq = *a.alpha_sq;
    } else {
        throw CLI::ValidationError("alpha", "one of --alpha (with a form) or --alpha-sq is required");
    }
    DeltaParams params;
    if (a.chi) params.chi = Rational::parse(*a.chi);
    if (a.sigma) params.sigma = Rational::parse(*a.sigma);
    if (a.gamma_u) params.gamma_u = Rational::parse(*a.gamma_u);
    if (a.gamma_u_r0) params.gamma_u_r0 = Rational::parse(*a.gamma_u_r0);
    for (const auto& bc : a.block_constants) {
        auto eq = bc.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("--C expects t=value, got '" + bc + "'");
        params.block_constant[std::stoi(bc.substr(0, eq))] = Rational::parse(bc.substr(eq + 1));
    }
    const WallInvariants inv = wall_invariants(alpha_sq, a.p1);
    if (inv.obstructed) throw std::invalid_argument("alpha^2 = -1 lies outside the residue computation");
    if (alpha_sq >= 0) throw std::invalid_argument("alpha^2 must be negative");
    const DeltaPolynomial d = delta_assemble(static_cast<int>(inv.r), static_cast<int>(inv.d), params);
    if (a.format == "json") {
        json j = delta_to_json(d);
        j["alpha_sq"] = alpha_sq;
        j["p1"] = a.p1;
        j["N"] = inv.N;
        print_json(j);
        return 0;
    }
    std::cout << "r=" << d.r << " d=" << d.d << " N=" << inv.N << "\n";
    std::cout << "delta = " << d.poly.str() << "\n";
    const auto coeffs = d.coefficients();
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        std::cout << "a_" << i << " [Qsym^" << d.r - static_cast<int>(i) << " Aalpha^"
                  << d.d - 2 * d.r + 2 * static_cast<int>(i) << "] = " << coeffs[i].str() << "\n";
    return 0;
}

// ---------------------------------------------------------------- localize

struct LocalizeArgs {
    std::string input;
    std::string format = "table";
};

int cmd_localize(const LocalizeArgs& a) {
    const LocusDataset ds = dataset_from_json(read_json_file(a.input));
    const EquivariantLaurent sum = localize_sum(ds.loci);
    std::optional<GradedPolynomial> pairing;
    if (ds.gamma || ds.pairing_m) {
        if (!ds.gamma || !ds.pairing_m) throw std::invalid_argument("boundary pairing needs both gamma and pairing_m");
        pairing = boundary_pairing(ds.loci, *ds.gamma, *ds.pairing_m);
    }
    if (a.format == "json") {
        json j = {{"schema", kSchemaVersion},
                  {"sum", sum.str()},
                  {"sum_terms", to_json(sum)},
                  {"negative_u_powers", sum.has_negative_powers()}};
        if (pairing) j["boundary_pairing"] = pairing->str();
        print_json(j);
        return 0;
    }
    std::cout << "sum = " << (sum.is_zero() ? "0" : sum.str()) << "\n";
    if (pairing) std::cout << "boundary pairing = " << pairing->str() << "\n";
    return 0;
}

// ---------------------------------------------------------------- parse

struct ParseArgs {
    std::string text;
    bool config = false;
    std::string format = "table";
};

int cmd_parse(const ParseArgs& a) {
    if (a.config) {
        const ConfigExpr c = parse_config(a.text);
        const BubbleTree t = config_to_tree(c);
        if (a.format == "json") {
            print_json({{"schema", kSchemaVersion}, {"config", print_config(c)}, {"tree", print_tree(t)}});
        } else {
            std::cout << print_config(c) << "\n" << print_tree(t) << "\n";
        }
        return 0;
    }
    const BubbleTree t = parse_tree(a.text);
    if (a.format == "json") {
        json j = tree_to_json(t);
        j["schema"] = kSchemaVersion;
        print_json(j);
    } else if (a.format == "dot") {
        std::cout << "digraph tree {\n";
        for (int v = 0; v < t.size(); ++v) {
            std::cout << "  v" << v << " [label=\"" << (v == 0 && t.root_barred() ? "0~" : std::to_string(t.weight(v)));
            for (int m : t.marks(v)) std::cout << " *" << m;
            std::cout << "\"];\n";
        }
        for (const auto& e : t.edges()) std::cout << "  v" << e.parent << " -> v" << e.child << ";\n";
        std::cout << "}\n";
    } else {
        std::cout << print_tree(t) << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bubble-tree strata, flip resolution and wall-crossing calculator"};
    app.require_subcommand(1);
    const std::vector<std::string> formats{"json", "table", "dot"};

    TreesArgs trees;
    auto* c_trees = app.add_subcommand("trees", "census of bubble trees of charge K");
    c_trees->add_option("K", trees.K, "total charge")->required()->check(CLI::Range(1, 64));
    c_trees->add_flag("--hasse", trees.hasse, "print the contraction Hasse diagram as DOT");
    c_trees->add_option("--format", trees.format)->check(CLI::IsMember(formats));

    FlipArgs flip;
    auto* c_flip = app.add_subcommand("flip", "flip resolution of the ghost strata");
    c_flip->add_option("K", flip.K, "total charge")->required()->check(CLI::Range(1, 64));
    c_flip->add_option("--chi", flip.chi, "Euler number of X")->required();
    c_flip->add_option("--sigma", flip.sigma, "signature of X")->required();
    c_flip->add_option("--format", flip.format)->check(CLI::IsMember(formats));

    FmLimitArgs fml;
    auto* c_fml = app.add_subcommand("fm-limit", "limit stratum of a polynomial family of points");
    c_fml->add_option("input", fml.input, "family JSON")->required();
    c_fml->add_option("--format", fml.format)->check(CLI::IsMember({"json", "table"}));

    FmStrataArgs fms;
    auto* c_fms = app.add_subcommand("fm-strata", "weighted FM strata for the given point weights");
    c_fms->add_option("weights", fms.weights, "positive point weights")->required()->check(CLI::Range(1, 1 << 20));
    c_fms->add_option("--format", fms.format)->check(CLI::IsMember({"json", "table"}));

    WallsArgs walls;
    std::string walls_action = "list";
    auto* c_walls = app.add_subcommand("walls", "P-type walls crossed by a path of period points");
    c_walls->add_option("action", walls_action)->check(CLI::IsMember({"list"}));
    c_walls->add_option("--form", walls.form.form_file, "intersection form JSON");
    c_walls->add_flag("--hyperbolic", walls.form.hyperbolic, "use the hyperbolic plane");
    c_walls->add_option("--diag", walls.form.diagonal, "diagonal form, e.g. 1,-1,-1");
    c_walls->add_option("--c", walls.c, "class c reducing w2")->required();
    c_walls->add_option("--p1", walls.p1)->required();
    c_walls->add_option("--from", walls.from, "period point w_-")->required();
    c_walls->add_option("--to", walls.to, "period point w_+")->required();
    c_walls->add_flag("--keep-signs", walls.keep_signs, "list alpha and -alpha separately");
    c_walls->add_flag("--unsigned-epsilon", walls.unsigned_eps, "report (c-alpha)^2/2 instead of its sign");
    c_walls->add_option("--format", walls.format)->check(CLI::IsMember({"json", "table"}));

    DeltaArgs delta;
    auto* c_delta = app.add_subcommand("delta", "wall-crossing term of a P-type wall");
    c_delta->add_option("--form", delta.form.form_file);
    c_delta->add_flag("--hyperbolic", delta.form.hyperbolic);
    c_delta->add_option("--diag", delta.form.diagonal);
    c_delta->add_option("--alpha", delta.alpha, "wall class (needs a form)");
    c_delta->add_option("--alpha-sq", delta.alpha_sq, "alpha^2 directly");
    c_delta->add_option("--p1", delta.p1)->required();
    c_delta->add_option("--chi", delta.chi, "substitute chi");
    c_delta->add_option("--sigma", delta.sigma, "substitute the signature");
    c_delta->add_option("--gamma-u", delta.gamma_u, "u-coefficient of gamma on level r >= 1 loci (default 1/2)");
    c_delta->add_option("--gamma-u-r0", delta.gamma_u_r0, "u-coefficient of gamma at r = 0 (default -1/2)");
    c_delta->add_option("--C", delta.block_constants, "block constant t=value (repeatable)");
    c_delta->add_option("--format", delta.format)->check(CLI::IsMember({"json", "table"}));

    LocalizeArgs loc;
    auto* c_loc = app.add_subcommand("localize", "fixed-point localization of a locus dataset");
    c_loc->add_option("input", loc.input, "dataset JSON")->required();
    c_loc->add_option("--format", loc.format)->check(CLI::IsMember({"json", "table"}));

    ParseArgs parse;
    auto* c_parse = app.add_subcommand("parse", "parse a bracket tree or configuration");
    c_parse->add_option("text", parse.text)->required();
    c_parse->add_flag("--config", parse.config, "read a configuration bracket");
    c_parse->add_option("--format", parse.format)->check(CLI::IsMember(formats));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (*c_trees) return cmd_trees(trees);
        if (*c_flip) return cmd_flip(flip);
        if (*c_fml) return cmd_fm_limit(fml);
        if (*c_fms) return cmd_fm_strata(fms);
        if (*c_walls) return cmd_walls(walls);
        if (*c_delta) return cmd_delta(delta);
        if (*c_loc) return cmd_localize(loc);
        if (*c_parse) return cmd_parse(parse);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const AuditFailure& e) {
        std::cerr << "audit failure: " << e.what() << "\n";
        return kExitAudit;
    } catch (const std::logic_error& e) {
        // invalid_argument, domain_error and friends: bad input.
        if (dynamic_cast<const std::invalid_argument*>(&e) || dynamic_cast<const std::domain_error*>(&e) ||
            dynamic_cast<const std::out_of_range*>(&e)) {
            std::cerr << "error: " << e.what() << "\n";
            return kExitValidation;
        }
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitAudit;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitAudit;
    }
    return kExitUsage;
}
