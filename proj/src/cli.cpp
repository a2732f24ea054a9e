#include "folnerlab/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "folnerlab/amdim.hpp"
#include "folnerlab/bounds.hpp"
#include "folnerlab/cover.hpp"
#include "folnerlab/folner.hpp"
#include "folnerlab/markers.hpp"
#include "folnerlab/report.hpp"

namespace folnerlab {

namespace {

int verdict_exit(Verdict v) {
    switch (v) {
        case Verdict::Yes: return 0;
        case Verdict::No: return 2;
        case Verdict::Indeterminate: return 3;
    }
    return 1;
}

GroupPtr parse_group(const std::string& s) {
    if (!s.empty() && s.front() == '{') return GroupSpec::from_json(nlohmann::json::parse(s));
    if (s == "z") return GroupSpec::free_abelian(1);
    if (s.rfind("heisenberg:", 0) == 0)
        return GroupSpec::heisenberg(std::stoi(s.substr(11)));
    if (s.rfind("heis", 0) == 0) {
        const int n = s.size() == 4 ? 1 : std::stoi(s.substr(4));
        return GroupSpec::semidirect_product(GroupSpec::free_abelian(2 * n),
                                             GroupSpec::free_abelian(1),
                                             ActionRule::heisenberg_shear());
    }
    if (s.front() == 'z') return GroupSpec::free_abelian(std::stoi(s.substr(1)));
    throw precondition_error("unknown group descriptor: " + s);
}

bool parse_int(const std::string& s, long long& out) {
    try {
        std::size_t pos = 0;
        out = std::stoll(s, &pos);
        return pos == s.size();
    } catch (...) {
        return false;
    }
}

FiniteSubset parse_set(const GroupPtr& g, const std::string& s) {
    long long v = 0;
    if (parse_int(s, v)) {
        if (g->dim() != 1) throw precondition_error("--set <integer> needs a rank-1 group");
        return FiniteSubset(g, {GroupElement{v}});
    }
    const auto dots = s.find("..");
    if (dots != std::string::npos) {
        if (g->dim() != 1) throw precondition_error("--set a..b needs a rank-1 group");
        long long lo = 0, hi = 0;
        if (!parse_int(s.substr(0, dots), lo) || !parse_int(s.substr(dots + 2), hi) || lo > hi)
            throw precondition_error("bad interval: " + s);
        std::vector<GroupElement> e;
        for (long long x = lo; x <= hi; ++x) e.push_back(GroupElement{x});
        return FiniteSubset(g, std::move(e));
    }
    if (s.rfind("ball:", 0) == 0) {
        const int r = std::stoi(s.substr(5));
        return ball(g, GeneratingSet::standard(g), r);
    }
    if (s.rfind("box:", 0) == 0) {
        const Coord r = std::stoll(s.substr(4));
        std::vector<GroupElement> e;
        std::vector<Coord> cur(static_cast<std::size_t>(g->dim()), -r);
        while (true) {
            e.emplace_back(cur);
            int i = g->dim() - 1;
            while (i >= 0 && cur[static_cast<std::size_t>(i)] == r) {
                cur[static_cast<std::size_t>(i)] = -r;
                --i;
            }
            if (i < 0) break;
            cur[static_cast<std::size_t>(i)]++;
        }
        return FiniteSubset(g, std::move(e));
    }
    return FiniteSubset::from_json(g, nlohmann::json::parse(s));
}

GroupElement parse_elem(const GroupPtr& g, const std::string& s) {
    long long v = 0;
    if (parse_int(s, v)) {
        if (g->dim() != 1) throw precondition_error("element needs full coordinates");
        return GroupElement{v};
    }
    auto j = nlohmann::json::parse(s);
    GroupElement e(j.get<std::vector<Coord>>());
    g->validate(e);
    return e;
}

FolnerFamily parse_family(const std::string& name, int m, int n, const std::string& group) {
    if (name == "zm_box") return FolnerFamily::zm_box(m);
    if (name == "heisenberg_sqrt") return FolnerFamily::heisenberg_sqrt(n);
    if (name == "singletons") return FolnerFamily::singletons(parse_group(group));
    throw precondition_error("unknown family: " + name);
}

struct Output {
    std::string path;
    void emit(std::ostream& console, const ojson& report) const {
        const auto text = dump_report(report);
        if (path.empty()) {
            console << text;
        } else {
            std::ofstream f(path, std::ios::app); // reports are append-only
            if (!f) throw error("cannot open report file: " + path);
            f << text;
        }
    }
};

struct CoverArgs {
    std::string group = "z";
    std::string set;
    std::string family;
    int m = 1, n = 1;
    long index = 1;
    std::string check = "number";
    long long L = 0;
    CoverBudget budget;
};

int cmd_cover(const CoverArgs& a, const Output& out, std::ostream& console) {
    GroupPtr g;
    FiniteSubset A;
    ojson cfg;
    cfg["check"] = a.check;
    if (!a.family.empty()) {
        auto fam = parse_family(a.family, a.m, a.n, a.group);
        g = fam.owner();
        A = fam.at(a.index);
        cfg["family"] = fam.descriptor();
        cfg["index"] = a.index;
    } else {
        g = parse_group(a.group);
        A = parse_set(g, a.set);
        cfg["group"] = ojson(g->to_json());
        cfg["set"] = a.set;
    }
    if (a.L > 0) cfg["L"] = a.L;
    cfg["max_universe"] = a.budget.max_universe;
    cfg["max_nodes"] = a.budget.max_nodes;

    ojson res;
    int code = 0;
    if (a.check == "number") {
        auto w = covering_number(A, a.budget);
        res["witness"] = ojson(w.to_json());
        code = 0;
    } else if (a.check == "approx" || a.check == "strong") {
        const long long L = a.L > 0 ? a.L : 1;
        auto r = a.check == "approx" ? is_approximate(A, L, a.budget)
                                     : is_strongly_approximate(A, L, a.budget);
        res["verdict"] = verdict_name(r.verdict);
        if (r.witness) res["witness"] = ojson(r.witness->to_json());
        code = verdict_exit(r.verdict);
    } else if (a.check == "symmetrization") {
        auto r = symmetrization_bound_check(A, a.budget);
        res = ojson(r.to_json());
        code = r.certified ? (r.holds ? 0 : 2) : 3;
    } else {
        throw precondition_error("unknown --check: " + a.check);
    }
    out.emit(console, report_envelope("cover", std::move(cfg), std::move(res)));
    return code;
}

struct FolnerArgs {
    std::string family = "zm_box";
    int m = 1, n = 1;
    std::string group;
    std::string check = "wafc";
    long lmin = 1, lmax = 5;
    long long L_budget = 0;
    std::string g_elem;
    std::string sdp_data = "heisenberg";
    long scale_cap = 8;
    std::string format = "json";
    CoverBudget budget;
};

int cmd_folner(const FolnerArgs& a, const Output& out, std::ostream& console) {
    auto fam = parse_family(a.family, a.m, a.n, a.group);
    ojson cfg;
    cfg["family"] = fam.descriptor();
    cfg["check"] = a.check;
    cfg["lmin"] = a.lmin;
    cfg["lmax"] = a.lmax;

    ojson res;
    int code = 0;
    if (a.check == "wafc") {
        const long long budget_L = a.L_budget > 0 ? a.L_budget : (1LL << 30);
        cfg["L_budget"] = budget_L;
        auto rep = check_wafc(fam, a.lmin, a.lmax, budget_L, a.budget);
        if (a.format == "csv") {
            std::ostringstream csv;
            csv << "l,size,L,mode,symmetric,verdict\n";
            for (const auto& e : rep.entries)
                csv << e.l << ',' << e.size << ',' << e.witness.L << ','
                    << (e.witness.mode == CoverMode::Exact ? "exact" : "greedy") << ','
                    << (e.symmetric ? "true" : "false") << ',' << verdict_name(e.verdict) << '\n';
            console << csv.str();
            return verdict_exit(rep.verdict);
        }
        res = rep.to_json();
        code = verdict_exit(rep.verdict);
    } else if (a.check == "afc") {
        std::vector<std::pair<long, long>> pairs;
        for (long l1 = a.lmin; l1 <= a.lmax; ++l1)
            for (long l2 = a.lmin; l2 <= a.lmax; ++l2) pairs.emplace_back(l1, l2);
        auto rep = check_afc_containment(fam, pairs);
        res = rep.to_json();
        code = rep.all_hold ? 0 : 2;
    } else if (a.check == "safc") {
        auto rep = check_safc_witnesses(fam, a.lmin, a.lmax, a.budget);
        res = rep.to_json();
        code = verdict_exit(rep.verdict);
    } else if (a.check == "defect") {
        auto g = parse_elem(fam.owner(), a.g_elem);
        cfg["g"] = g.coords;
        if (a.format == "csv") {
            std::ostringstream csv;
            csv << "l,size,defect\n";
            for (long l = a.lmin; l <= a.lmax; ++l) {
                auto F = fam.at(l);
                csv << l << ',' << F.size() << ',' << rational_str(folner_defect(F, g)) << '\n';
            }
            console << csv.str();
            return 0;
        }
        ojson rows = ojson::array();
        for (long l = a.lmin; l <= a.lmax; ++l) {
            auto F = fam.at(l);
            ojson row;
            row["l"] = l;
            row["size"] = F.size();
            row["defect"] = rational_str(folner_defect(F, g));
            rows.push_back(std::move(row));
        }
        res["profile"] = std::move(rows);
        code = 0;
    } else if (a.check == "sdp") {
        SdpData data = a.sdp_data == "trivial" ? SdpData::trivial_product_example()
                                               : SdpData::heisenberg_example(a.n);
        cfg["sdp_data"] = a.sdp_data;
        cfg["scale_cap"] = a.scale_cap;
        auto rep = check_sdp_hypotheses(data, a.scale_cap);
        res = rep.to_json();
        code = rep.all_pass ? 0 : 2;
    } else {
        throw precondition_error("unknown --check: " + a.check);
    }
    out.emit(console, report_envelope("folner", std::move(cfg), std::move(res)));
    return code;
}

struct MarkerArgs {
    std::string group = "z";
    std::string F;
    int R = 50, rcore = 40;
};

int cmd_marker(const MarkerArgs& a, const Output& out, std::ostream& console) {
    auto g = parse_group(a.group);
    auto F = parse_set(g, a.F);
    auto w = OrbitWindow::make(g, GeneratingSet::standard(g), a.R, a.rcore);
    auto sep = SeparationShape::from_set(set_product(set_inverse(F), F));
    auto m = build_marker(w, F, sep);

    ojson cfg;
    cfg["group"] = ojson(g->to_json());
    cfg["F"] = a.F;
    cfg["R"] = a.R;
    cfg["r_core"] = a.rcore;
    ojson res;
    res["marker_size"] = m.D.size();
    res["marker"] = ojson(m.D.to_json());
    res["separation_verified"] = m.separation_verified;
    res["coverage_complete"] = m.coverage_complete;
    res["covered_core"] = m.covered_core.size();
    out.emit(console, report_envelope("marker", std::move(cfg), std::move(res)));
    return m.separation_verified && m.coverage_complete ? 0 : 2;
}

struct CastleArgs {
    std::string family = "zm_box";
    int m = 1, n_param = 1;
    std::string group;
    long n = 3;
    int R = 200, rcore = 180, dextra = 0;
    bool strong = false;
    std::string format = "json";
    CoverBudget budget;
};

CastleReport run_castle(const CastleArgs& a, OrbitWindow& w_out) {
    auto fam = parse_family(a.family, a.m, a.n_param, a.group);
    w_out = OrbitWindow::make(fam.owner(), GeneratingSet::standard(fam.owner()), a.R, a.rcore);
    return build_castle(w_out, fam, a.n, a.dextra, a.strong, a.budget);
}

ojson castle_config(const CastleArgs& a) {
    ojson cfg;
    cfg["family"] = a.family;
    if (a.family == "zm_box") cfg["m"] = a.m;
    if (a.family == "heisenberg_sqrt") cfg["n_param"] = a.n_param;
    cfg["n"] = a.n;
    cfg["R"] = a.R;
    cfg["r_core"] = a.rcore;
    cfg["d_extra"] = a.dextra;
    cfg["strong"] = a.strong;
    return cfg;
}

int cmd_castle(const CastleArgs& a, const Output& out, std::ostream& console) {
    OrbitWindow w;
    auto rep = run_castle(a, w);
    if (a.format == "csv") {
        std::ostringstream csv;
        csv << "i,j,base_size,shape_disjoint\n";
        for (const auto& t : rep.towers)
            csv << t.i << ',' << t.j << ',' << t.base.size() << ','
                << (t.shape_disjoint ? "true" : "false") << '\n';
        console << csv.str();
    } else {
        out.emit(console, report_envelope("castle", castle_config(a), rep.to_json()));
    }
    return rep.all_disjoint && rep.coverage_complete ? 0 : 2;
}

struct AmdimArgs {
    CastleArgs castle;
    std::string g_elem = "[1]";
};

int cmd_amdim(const AmdimArgs& a, const Output& out, std::ostream& console) {
    CastleArgs c = a.castle;
    c.strong = true; // the witness construction needs a strong castle
    OrbitWindow w;
    auto castle = run_castle(c, w);
    auto mu = mu_from_castle(castle, w);
    const bool part = check_partition_of_unity(mu);
    const bool orth = check_orthogonality(mu);
    auto g = parse_elem(w.spec, a.g_elem);
    auto eq = equivariance_defect(mu, g, w);

    ojson cfg = castle_config(c);
    cfg["g"] = g.coords;
    ojson res;
    res["tower_count"] = mu.tower_count;
    res["denominator"] = mu.denom;
    res["verified_core"] = mu.verified_core.size();
    res["excluded_window"] = mu.excluded_window;
    res["excluded_uncovered"] = mu.excluded_uncovered;
    res["partition_of_unity"] = part;
    res["orthogonal"] = orth;
    res["equivariance"] = eq.to_json();
    out.emit(console, report_envelope("amdim", std::move(cfg), std::move(res)));
    return part && orth && eq.within_bound ? 0 : 2;
}

struct BoundsArgs {
    long long Lg = 1, d = 0, m = 1;
};

int cmd_bounds(const BoundsArgs& a, const Output& out, std::ostream& console) {
    ojson cfg;
    cfg["L_G"] = a.Lg;
    cfg["d"] = a.d;
    cfg["m"] = a.m;
    out.emit(console, report_envelope("bounds", std::move(cfg), bounds_report(a.Lg, a.d, a.m)));
    return 0;
}

void add_budget_opts(CLI::App* app, CoverBudget& b) {
    app->add_option("--max-universe", b.max_universe, "universe size cap");
    app->add_option("--max-nodes", b.max_nodes, "branch-and-bound node cap");
    app->add_option("--time-cap", b.time_cap_seconds,
                    "wall-clock cap in seconds for the exact search (0 = off)");
}

int run_once(const std::vector<std::string>& args, std::ostream& out_stream, std::ostream& err);

int run_config(const std::string& path, const Output& out, std::ostream& console,
               std::ostream& err) {
    std::ifstream f(path);
    if (!f) throw error("cannot open config: " + path);
    nlohmann::json j = nlohmann::json::parse(f);
    auto run_entry = [&](const nlohmann::json& entry) {
        std::vector<std::string> argv;
        argv.push_back(entry.at("command").get<std::string>());
        for (const auto& [k, v] : entry.items()) {
            if (k == "command") continue;
            if (v.is_boolean()) {
                if (v.get<bool>()) argv.push_back("--" + k);
            } else {
                argv.push_back("--" + k);
                argv.push_back(v.is_string() ? v.get<std::string>() : v.dump());
            }
        }
        if (!out.path.empty()) {
            argv.push_back("--out");
            argv.push_back(out.path);
        }
        return run_once(argv, console, err);
    };
    int worst = 0;
    if (j.is_array()) {
        for (const auto& entry : j) worst = std::max(worst, run_entry(entry));
    } else {
        worst = run_entry(j);
    }
    return worst;
}

int run_once(const std::vector<std::string>& args, std::ostream& out_stream, std::ostream& err) {
    CLI::App app{"folnerlab: covering constants, Folner families, markers, castles, and "
                 "dimension bounds for computable groups"};
    app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
    app.require_subcommand(0, 1);

    Output out;
    app.add_option("--out", out.path, "append the JSON report to this file");
    std::string config_path;
    app.add_option("--config", config_path, "run a JSON campaign file");
    CoverArgs cov;
    auto* c_cover = app.add_subcommand("cover", "covering constants and approximate-group checks");
    c_cover->add_option("--group", cov.group);
    c_cover->add_option("--set", cov.set);
    c_cover->add_option("--family", cov.family);
    c_cover->add_option("--m", cov.m);
    c_cover->add_option("--n", cov.n);
    c_cover->add_option("--index", cov.index);
    c_cover->add_option("--check", cov.check, "number|approx|strong|symmetrization");
    c_cover->add_option("--L", cov.L);
    add_budget_opts(c_cover, cov.budget);

    FolnerArgs fol;
    auto* c_folner = app.add_subcommand("folner", "Folner family diagnostics");
    c_folner->add_option("--family", fol.family);
    c_folner->add_option("--m", fol.m);
    c_folner->add_option("--n", fol.n);
    c_folner->add_option("--group", fol.group);
    c_folner->add_option("--check", fol.check, "wafc|afc|safc|defect|sdp");
    c_folner->add_option("--lmin", fol.lmin);
    c_folner->add_option("--lmax", fol.lmax);
    c_folner->add_option("--L-budget", fol.L_budget);
    c_folner->add_option("--g", fol.g_elem);
    c_folner->add_option("--sdp-data", fol.sdp_data, "heisenberg|trivial");
    c_folner->add_option("--scale-cap", fol.scale_cap);
    c_folner->add_option("--format", fol.format, "json|csv");
    add_budget_opts(c_folner, fol.budget);

    MarkerArgs mar;
    auto* c_marker = app.add_subcommand("marker", "greedy maximal markers on an orbit window");
    c_marker->add_option("--group", mar.group);
    c_marker->add_option("--F", mar.F);
    c_marker->add_option("--R", mar.R);
    c_marker->add_option("--rcore", mar.rcore);

    CastleArgs cas;
    auto* c_castle = app.add_subcommand("castle", "Rokhlin castles on an orbit window");
    c_castle->add_option("--family", cas.family);
    c_castle->add_option("--m", cas.m);
    c_castle->add_option("--n-param", cas.n_param);
    c_castle->add_option("--group", cas.group);
    c_castle->add_option("--n", cas.n);
    c_castle->add_option("--R", cas.R);
    c_castle->add_option("--rcore", cas.rcore);
    c_castle->add_option("--dextra", cas.dextra);
    c_castle->add_flag("--strong", cas.strong);
    c_castle->add_option("--format", cas.format, "json|csv");
    add_budget_opts(c_castle, cas.budget);

    AmdimArgs amd;
    auto* c_amdim = app.add_subcommand("amdim", "amenability witness checks on a strong castle");
    c_amdim->add_option("--family", amd.castle.family);
    c_amdim->add_option("--m", amd.castle.m);
    c_amdim->add_option("--n-param", amd.castle.n_param);
    c_amdim->add_option("--group", amd.castle.group);
    c_amdim->add_option("--n", amd.castle.n);
    c_amdim->add_option("--R", amd.castle.R);
    c_amdim->add_option("--rcore", amd.castle.rcore);
    c_amdim->add_option("--dextra", amd.castle.dextra);
    c_amdim->add_option("--g", amd.g_elem);
    add_budget_opts(c_amdim, amd.castle.budget);

    BoundsArgs bnd;
    auto* c_bounds = app.add_subcommand("bounds", "dimension-bound evaluators");
    c_bounds->add_option("--Lg", bnd.Lg);
    c_bounds->add_option("--d", bnd.d);
    c_bounds->add_option("--m", bnd.m);

    // parent options (--out, --config) remain usable after a subcommand name
    for (auto* s : {c_cover, c_folner, c_marker, c_castle, c_amdim, c_bounds}) s->fallthrough();

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        std::stringstream so, se;
        const int rc = app.exit(e, so, se);
        out_stream << so.str();
        err << se.str();
        return rc == 0 ? 0 : 1;
    }

    try {
        if (!config_path.empty()) return run_config(config_path, out, out_stream, err);
        if (c_cover->parsed()) return cmd_cover(cov, out, out_stream);
        if (c_folner->parsed()) return cmd_folner(fol, out, out_stream);
        if (c_marker->parsed()) return cmd_marker(mar, out, out_stream);
        if (c_castle->parsed()) return cmd_castle(cas, out, out_stream);
        if (c_amdim->parsed()) return cmd_amdim(amd, out, out_stream);
        if (c_bounds->parsed()) return cmd_bounds(bnd, out, out_stream);
        err << app.help();
        return 1;
    } catch (const budget_exceeded_error& e) {
        err << "indeterminate: " << e.what() << "\n";
        return 3;
    } catch (const error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    return run_once(args, out, err);
}

} // namespace folnerlab
