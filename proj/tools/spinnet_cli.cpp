#include "cli.hpp"

#include "spinnet/asymptotics.hpp"
#include "spinnet/errors.hpp"
#include "spinnet/evaluator.hpp"
#include "spinnet/haar.hpp"
#include "spinnet/series.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace spinnet;
using cli::json;

namespace {

constexpr uint64_t kDefaultSeed = 20231101;
constexpr const char* kVersion = "0.1.0";

struct Common {
    std::string graph, coloring, holonomy;
};

json base_report(const std::string& command, const std::vector<std::string>& argv, const Graph& g) {
    json r;
    r["command"] = command;
    r["argv"] = argv;
    r["version"] = kVersion;
    r["input"] = {{"graph", g.name}, {"graph_digest", cli::digest(graph_to_json(g).dump())}};
    return r;
}

void emit(const json& report) { std::cout << report.dump(2) << "\n"; }

int cmd_eval(const Common& o, const std::vector<std::string>& argv) {
    Graph g = cli::resolve_graph(o.graph);
    Coloring c = cli::resolve_coloring(g, o.coloring);
    Holonomy psi = cli::resolve_holonomy(g, o.holonomy);
    json r = base_report("eval", argv, g);
    r["input"]["coloring"] = coloring_to_json(g, c);
    bool adm = is_admissible(g, c);
    CQ v = eval_spin_network(g, c, psi);
    json res;
    res["admissible"] = adm;
    res["value"] = cli::cq_json(v);
    res["abs"] = std::sqrt(v.norm2().get_d());
    res["crossing_sign"] = crossing_sign(g, c);
    if (adm) {
        res["renormalized"] = cli::cq_json(renormalize(g, c, v));
        res["bracket_square"] = to_string(bracket_square(g, c, psi));
    }
    r["result"] = res;
    emit(r);
    return 0;
}

bool is_diagonal(const Holonomy& psi, int nh, std::vector<Rational>& t) {
    t.assign(nh, Rational(1));
    if (psi.is_trivial()) return true;
    if (psi.regime != Regime::Exact) return false;
    for (int h = 0; h < nh; ++h) {
        Mat2Q m = psi.exact_at(h);
        if (!m.b.is_zero() || !m.c.is_zero() || !m.a.is_real()) return false;
        t[h] = m.a.re;
    }
    return true;
}

int cmd_series(const Common& o, const std::string& method, int degree, bool check, const std::vector<std::string>& argv) {
    Graph g = cli::resolve_graph(o.graph);
    Holonomy psi = cli::resolve_holonomy(g, o.holonomy);
    if (degree < 0) throw InputError("--degree must be non-negative");
    json r = base_report("series", argv, g);
    r["input"]["method"] = method;
    r["input"]["degree"] = degree;
    bool planar_trivial = g.crossings.empty() && psi.is_trivial();
    TruncSeries s;
    json extra;
    if (method == "det") {
        s = series_Z(g, psi, degree);
        if (!g.crossings.empty()) s = nonplanar_fix(s, g);
    } else if (method == "westbury" || method == "pfaffian") {
        if (!planar_trivial) throw InputError("--method " + method + " needs a presentation without crossings and trivial holonomy");
        MPoly p = method == "westbury" ? westbury_polynomial(g) : pfaffian_dimer_sum(g);
        extra["polynomial"] = cli::series_json(p);
        s = inv_series(mul_truncated(p, p, degree), degree);
    } else if (method == "curves") {
        std::vector<Rational> t;
        if (!g.crossings.empty()) throw InputError("--method curves needs a presentation without crossings");
        if (!is_diagonal(psi, g.num_half(), t)) throw InputError("--method curves needs a diagonal holonomy with rational entries");
        MPoly a = abelian_curve_sum(g, t);
        extra["curve_sum"] = cli::series_json(a);
        s = inv_series(a, degree);
    } else {
        throw InputError("unknown --method '" + method + "'");
    }
    json res;
    res["variables"] = s.poly.space ? s.poly.space->names : std::vector<std::string>{};
    res["terms"] = cli::series_json(s.poly);
    res["num_terms"] = s.poly.size();
    // denominators of the coefficients, for the integrality question
    mpz_class lcm = 1;
    for (auto& [m, c] : s.poly.terms) {
        mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.re.get_den_mpz_t());
        mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.im.get_den_mpz_t());
    }
    res["denominator_lcm"] = lcm.get_str();
    for (auto& [k, v] : extra.items()) res[k] = v;
    int code = 0;
    if (check) {
        json table = json::array();
        bool all = true;
        int maxc = degree;
        for (auto& c : admissible_colorings(g, maxc)) {
            int deg = 0;
            for (int a : internal_coloring(g, c)) deg += a;
            if (deg > degree) continue;
            CQ a = series_coefficient(g, s, c), b = renormalize(g, c, eval_spin_network(g, c, psi));
            all = all && a == b;
            table.push_back({{"coloring", coloring_to_json(g, c)}, {"series", cli::cq_json(a)}, {"evaluation", cli::cq_json(b)}, {"equal", a == b}});
        }
        // every series monomial must come from an admissible coloring
        for (auto& [m, c] : s.poly.terms) {
            InternalColoring a(m.e.begin(), m.e.begin() + g.angles().size());
            Coloring ce = edge_colors_from_angles(g, a);
            if (!is_admissible(g, ce) || internal_coloring(g, ce) != a) all = false;
        }
        res["comparison"] = table;
        res["all_equal"] = all;
        if (!all) code = 1;
    }
    r["result"] = res;
    emit(r);
    return code;
}

json mc_json(const MCEstimate& e, const json& target) {
    json j{{"mean", e.mean}, {"stderr", e.stderr_}, {"mean_im", e.mean_im}, {"stderr_im", e.stderr_im},
           {"count", e.count}, {"seed", e.seed}, {"workers", e.workers}, {"target", target}};
    if (target.is_number() && e.stderr_ > 0) j["z_score"] = (e.mean - target.get<double>()) / e.stderr_;
    else if (target.is_number() && e.mean == target.get<double>()) j["z_score"] = 0.0;
    else j["z_score"] = nullptr;
    return j;
}

double rational_double(const json& s) { return parse_rational(s.get<std::string>()).get_d(); }

int cmd_integrate(const Common& o, const std::string& target, long long samples, uint64_t seed, int workers,
                  const std::vector<std::string>& ys, const std::vector<std::string>& argv) {
    Graph g = cli::resolve_graph(o.graph);
    Holonomy psi = cli::resolve_holonomy(g, o.holonomy);
    if (workers < 1) workers = default_workers();
    if (samples < 10000) throw InputError("--samples must be at least 10000");
    json r = base_report("integrate", argv, g);
    r["input"]["target"] = target;
    r["seed"] = seed;
    json res;
    if (target == "bracket" || target == "orthogonality") {
        Coloring c = cli::resolve_coloring(g, o.coloring);
        for (int x : c)
            if (x > 10) throw InputError("colors above 10 are not supported by plain Monte Carlo");
        r["input"]["coloring"] = coloring_to_json(g, c);
        if (target == "bracket") {
            json t = nullptr;
            if (psi.regime != Regime::Float) {
                if (psi.is_trivial()) {
                    json ex = cli::exact_bracket(g, c);
                    if (!ex.is_null()) t = rational_double(ex);
                } else {
                    t = bracket_square(g, c, psi).get_d();
                }
            }
            res = mc_json(mc_bracket(g, c, psi, samples, seed, workers), t);
        } else {
            if (!o.holonomy.empty()) throw InputError("orthogonality integrates over holonomies; do not pass one");
            res = mc_json(mc_orthogonality(g, c, samples, seed, workers), orthogonality_target(g, c));
        }
    } else if (target == "W") {
        std::vector<double> y(g.edges.size(), 0.0);
        for (auto& s : ys) {
            auto eq = s.find('=');
            if (eq == std::string::npos) throw InputError("--y expects edge=value, got '" + s + "'");
            int e = g.edge_index(s.substr(0, eq));
            try {
                y[e] = std::stod(s.substr(eq + 1));
            } catch (const std::logic_error&) {
                throw InputError("--y: '" + s.substr(eq + 1) + "' is not a number");
            }
        }
        json yj = json::object();
        for (size_t e = 0; e < y.size(); ++e) yj[g.edges[e].id] = y[e];
        r["input"]["y"] = yj;
        json t = nullptr;
        if (g.vertices.size() == 2 && psi.is_trivial()) t = theta_W_target(y);
        res = mc_json(mc_W_point(g, psi, y, samples, seed, workers), t);
    } else {
        throw InputError("unknown --target '" + target + "'");
    }
    r["result"] = res;
    emit(r);
    return 0;
}

std::vector<int> parse_k_list(const std::string& s) {
    std::vector<int> ks;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            int k = std::stoi(item);
            if (k < 1) throw std::invalid_argument(item);
            ks.push_back(k);
        } catch (const std::logic_error&) {
            throw InputError("--k-list: '" + item + "' is not a positive integer");
        }
    }
    if (ks.empty()) throw InputError("--k-list is empty");
    return ks;
}

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }
json complex_json(cdouble z) { return json::array({z.real(), z.imag()}); }

json report_json(const HypothesisReport& h) {
    json j;
    j["H1"] = h.h1;
    j["H2"] = h.h2;
    j["H3"] = h.h3;
    j["qP_kernel"] = h.qP_kernel;
    j["qP_gap"] = json::array();
    for (double x : h.qP_gap) j["qP_gap"].push_back(std::isfinite(x) ? json(x) : json(nullptr));
    j["qkappa_kernel"] = h.qk_kernel;
    j["qpp_kernel"] = h.qpp_kernel;
    j["min_tau_distance"] = h.min_tau_distance;
    j["pairs"] = h.pairs;
    j["witnesses"] = h.witnesses;
    return j;
}

json configs_json(const Graph& g, const FindResult& f) {
    json a = json::array();
    for (size_t k = 0; k < f.configs.size(); ++k) {
        json p = json::object();
        for (size_t e = 0; e < g.edges.size(); ++e) p[g.edges[e].id] = vec_json(f.configs[k].P[e]);
        a.push_back({{"P", p}, {"residual", f.configs[k].residual}, {"hits", f.hits[k]}});
    }
    return a;
}

int cmd_check(const Common& o, int restarts, double tol, uint64_t seed, const std::vector<std::string>& argv) {
    Graph g = cli::resolve_graph(o.graph);
    Coloring c = o.coloring.empty() ? Coloring(g.edges.size(), 2) : cli::resolve_coloring(g, o.coloring);
    json r = base_report("check", argv, g);
    r["input"]["coloring"] = coloring_to_json(g, c);
    r["seed"] = seed;
    FindResult f = find_configs(g, c, restarts, tol, seed);
    json res;
    res["configurations"] = configs_json(g, f);
    res["restarts"] = f.restarts;
    res["converged"] = f.converged;
    res["warnings"] = f.warnings;
    bool ok = false;
    if (f.configs.empty()) {
        res["hypotheses"] = nullptr;
    } else {
        HypothesisReport h = check_hypotheses(g, c, f.configs);
        res["hypotheses"] = report_json(h);
        ok = h.ok();
    }
    res["pass"] = ok;
    r["result"] = res;
    emit(r);
    return ok ? 0 : 1;
}

int cmd_asymptote(const Common& o, const std::string& klist, int restarts, double tol, uint64_t seed, const std::string& format,
                  const std::vector<std::string>& argv) {
    Graph g = cli::resolve_graph(o.graph);
    Coloring c = cli::resolve_coloring(g, o.coloring);
    std::vector<int> ks = parse_k_list(klist);
    if (format != "json" && format != "csv") throw InputError("--report must be json or csv");
    FindResult f = find_configs(g, c, restarts, tol, seed);
    for (auto& w : f.warnings) std::cerr << "warning: " << w << "\n";
    AsymptoticData d = prepare_asymptotics(g, c, f.configs);
    json rows = json::array();
    for (int k : ks) {
        AsymptoticEstimate e = asymptotic_estimate(d, c, k);
        Coloring kc = c;
        for (int& x : kc) x *= k;
        json ex = cli::exact_bracket(g, kc);
        json row{{"k", k}, {"estimate", e.value}, {"prefactor", e.prefactor}, {"first_sum", e.first_sum},
                 {"second_sum", e.second_sum}, {"pair_terms", e.pair_terms}, {"convention_dependent", k % 2 == 1}};
        if (ex.is_null()) {
            row["exact"] = nullptr;
            row["relative_error"] = nullptr;
        } else {
            double x = rational_double(ex);
            row["exact"] = ex;
            row["exact_float"] = x;
            row["relative_error"] = x != 0 ? json(std::abs(e.value / x - 1)) : json(nullptr);
        }
        rows.push_back(row);
    }
    if (format == "csv") {
        std::cout << "k,estimate,exact,relative_error\n" << std::setprecision(17);
        for (auto& row : rows) {
            std::cout << row["k"].get<int>() << "," << row["estimate"].get<double>() << ",";
            if (row["exact"].is_null()) std::cout << ",\n";
            else std::cout << row["exact_float"].get<double>() << "," << row["relative_error"].get<double>() << "\n";
        }
        return 0;
    }
    json r = base_report("asymptote", argv, g);
    r["input"]["coloring"] = coloring_to_json(g, c);
    r["seed"] = seed;
    json res;
    res["N"] = d.N;
    res["configurations"] = configs_json(g, f);
    res["warnings"] = f.warnings;
    res["hypotheses"] = report_json(d.report);
    res["det_r"] = d.det_r;
    res["detprime_qP"] = d.detprime_qP;
    json pairs = json::array();
    for (auto& p : d.pairs)
        pairs.push_back({{"P", p.p}, {"Q", p.q}, {"theta", p.theta}, {"sqrt_detprime", complex_json(p.sqrt_detprime)},
                         {"detprime_error", p.detprime_error}, {"conjugation_defect", p.conjugation_defect}});
    res["pairs"] = pairs;
    res["estimates"] = rows;
    r["result"] = res;
    emit(r);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    CLI::App app{"Exact and asymptotic evaluation of SU(2) spin networks"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    Common o;
    auto add_common = [&](CLI::App* s, bool coloring) {
        s->add_option("-g,--graph", o.graph, "bundled graph name or JSON file")->required();
        if (coloring) s->add_option("-c,--coloring", o.coloring, "coloring: JSON file, inline JSON, e=v list or value list");
    };

    auto* ev = app.add_subcommand("eval", "exact evaluation");
    add_common(ev, true);
    ev->add_option("--holonomy", o.holonomy, "holonomy JSON file or inline JSON");

    std::string method = "det";
    int degree = 6;
    bool check = false;
    auto* se = app.add_subcommand("series", "generating series");
    add_common(se, false);
    se->add_option("--holonomy", o.holonomy, "holonomy JSON file or inline JSON");
    se->add_option("--method", method, "det, westbury, curves or pfaffian")->check(CLI::IsMember({"det", "westbury", "curves", "pfaffian"}));
    se->add_option("--degree", degree, "total degree bound");
    se->add_flag("--check-against-eval", check, "compare every coefficient with the exact evaluation");

    std::string target = "bracket";
    long long samples = 100000;
    uint64_t seed = kDefaultSeed;
    int workers = 0;
    std::vector<std::string> ys;
    auto* in = app.add_subcommand("integrate", "Monte Carlo integration over SU(2)^V");
    add_common(in, true);
    in->add_option("--holonomy", o.holonomy, "holonomy JSON file or inline JSON");
    in->add_option("--target", target, "bracket, W or orthogonality")->check(CLI::IsMember({"bracket", "W", "orthogonality"}));
    in->add_option("--samples", samples, "sample count");
    in->add_option("--seed", seed, "random seed");
    in->add_option("--workers", workers, "worker threads (default: SPINNET_WORKERS or 1)");
    in->add_option("--y", ys, "edge=value for the W target")->take_all();

    std::string klist = "10,20,40", format = "json";
    int restarts = 200;
    double tol = 1e-10;
    auto* as = app.add_subcommand("asymptote", "leading-order asymptotics");
    add_common(as, true);
    as->add_option("--k-list", klist, "comma separated scale factors");
    as->add_option("--restarts", restarts, "multistart count");
    as->add_option("--tol", tol, "closure tolerance");
    as->add_option("--seed", seed, "random seed");
    as->add_option("--report", format, "json or csv");

    auto* ch = app.add_subcommand("check", "critical configurations and hypotheses H1-H3");
    add_common(ch, true);
    ch->add_option("--restarts", restarts, "multistart count");
    ch->add_option("--tol", tol, "closure tolerance");
    ch->add_option("--seed", seed, "random seed");

    bool verbose = false;
    auto* st = app.add_subcommand("selftest", "acceptance checks at reduced scale");
    st->add_flag("-v,--verbose", verbose, "print each check");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    auto start = std::chrono::steady_clock::now();
    int code = 0;
    try {
        if (*ev) code = cmd_eval(o, args);
        else if (*se) code = cmd_series(o, method, degree, check, args);
        else if (*in) code = cmd_integrate(o, target, samples, seed, workers, ys, args);
        else if (*as) code = cmd_asymptote(o, klist, restarts, tol, seed, format, args);
        else if (*ch) code = cmd_check(o, restarts, tol, seed, args);
        else if (*st) code = cli::run_selftest(verbose);
    } catch (const HypothesisError& e) {
        std::cerr << "hypothesis failure: " << e.what() << "\n";
        return 1;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 1;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const AdmissibilityError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const RegimeError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const PreconditionError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cerr << "elapsed " << std::fixed << std::setprecision(3) << secs << " s\n";
    return code;
}
