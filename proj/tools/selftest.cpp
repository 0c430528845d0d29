#include "cli.hpp"

#include "oracles/racah.hpp"
#include "spinnet/asymptotics.hpp"
#include "spinnet/bundled.hpp"
#include "spinnet/evaluator.hpp"
#include "spinnet/haar.hpp"
#include "spinnet/series.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>

namespace cli {

using namespace spinnet;

namespace {

bool within(const MCEstimate& e, double target, double k = 3) { return std::abs(e.mean - target) <= k * e.stderr_; }

bool series_matches(const Graph& g, const TruncSeries& s, const Holonomy& psi) {
    for (auto& c : admissible_colorings(g, s.D)) {
        int deg = 0;
        for (int a : internal_coloring(g, c)) deg += a;
        if (deg <= s.D && series_coefficient(g, s, c) != renormalize(g, c, eval_spin_network(g, c, psi))) return false;
    }
    return true;
}

Holonomy sample_exact_holonomy(const Graph& g) {
    // fixed SL2 matrices with Gaussian rational entries
    Mat2Q a{CQ(1), CQ(Rational(1, 2), Rational(1)), CQ(0), CQ(1)};
    Mat2Q b{CQ(1), CQ(0), CQ(Rational(-2, 3), Rational(1, 3)), CQ(1)};
    Mat2Q d{CQ(Rational(2)), CQ(0), CQ(0), CQ(Rational(1, 2))};
    std::vector<Mat2Q> m;
    for (int h = 0; h < g.num_half(); ++h) m.push_back(h % 3 == 0 ? a * b : (h % 3 == 1 ? b * d : d * a));
    return make_exact_holonomy(m);
}

}  // namespace

int run_selftest(bool verbose) {
    Graph theta = bundled_graph("theta"), tet = bundled_graph("tetrahedron"), cross = bundled_graph("tetrahedron_crossing");
    struct Check {
        int criterion;
        std::string name;
        std::function<bool()> run;
    };
    std::vector<Check> checks{
        {1, "theta modulus, colors <= 6", [&] {
             for (auto& c : admissible_colorings(theta, 6))
                 if (eval_spin_network(theta, c).norm2() != theta_value(c[0], c[1], c[2]) * theta_value(c[0], c[1], c[2])) return false;
             return true;
         }},
        {2, "tetrahedron single sum, colors <= 3", [&] {
             for (auto& c : admissible_colorings(tet, 3))
                 if (eval_spin_network(tet, c) != CQ(oracle::racah(tet, c))) return false;
             return true;
         }},
        {3, "series equals evaluations, theta degree 6", [&] {
             Holonomy psi = sample_exact_holonomy(theta);
             return series_matches(theta, series_Z(theta, Holonomy::trivial(), 6), Holonomy::trivial()) &&
                    series_matches(theta, series_Z(theta, psi, 6), psi);
         }},
        {4, "determinant is the fourth power of the cycle polynomial", [&] {
             for (const Graph* g : {&theta, &tet})
                 if (det_poly(build_pq(*g).full) != pow(westbury_polynomial(*g), 4)) return false;
             return true;
         }},
        {5, "dimers and curves", [&] {
             MPoly p = pfaffian_dimer_sum(theta);
             std::vector<Rational> t{Rational(2), Rational(-1, 3), Rational(5, 2), Rational(1), Rational(3), Rational(-2)};
             return p * p == abelian_curve_sum(theta, std::vector<Rational>(6, Rational(1))) &&
                    abelian_curve_sum(theta, t) == det_poly(build_w1(theta, t));
         }},
        {6, "crossing sign fix, degree 4", [&] {
             TruncSeries s = nonplanar_fix(series_Z(cross, Holonomy::trivial(), 4), cross);
             return series_matches(cross, s, Holonomy::trivial());
         }},
        {7, "theta bracket integral", [&] {
             return within(mc_bracket(theta, {2, 2, 2}, Holonomy::trivial(), 100000, 7), 1.0) &&
                    within(mc_bracket(theta, {1, 1, 1}, Holonomy::trivial(), 100000, 8), 0.0);
         }},
        {8, "W at a point", [&] {
             std::vector<double> y{0.3, 0.2, 0.1};
             return within(mc_W_point(theta, Holonomy::trivial(), y, 100000, 9), theta_W_target(y));
         }},
        {9, "character identities", [&] {
             Rng rng(10);
             Mat2D a = sample_haar(rng).matrix(), b = sample_haar(rng).matrix();
             cd t = char_value(2, a * b.inverse()) / 3.0;
             MCEstimate e = mc_prodtrace(2, a, b, 100000, 11);
             MCEstimate f = mc_coherent(2, a, 100000, 12);
             cd ta = char_value(2, a);
             return within(e, t.real()) && std::abs(f.mean - ta.real()) <= 3 * f.stderr_ && std::abs(f.mean_im - ta.imag()) <= 3 * f.stderr_im;
         }},
        {10, "tetrahedron asymptotics", [&] {
             Coloring c(6, 2);
             FindResult f = find_configs(tet, c, 40);
             AsymptoticData d = prepare_asymptotics(tet, c, f.configs);
             std::vector<double> err;
             for (int k : {10, 20, 40}) {
                 mpq_class r = oracle::racah_uniform(2 * k), th = theta_value(2 * k, 2 * k, 2 * k);
                 double ex = mpq_class(r * r / (th * th * th * th)).get_d();
                 err.push_back(std::abs(asymptotic_estimate(d, c, k).value / ex - 1));
             }
             return err[1] <= err[0] && err[2] <= err[1] && err[2] <= 0.15;
         }},
        {11, "orthogonality norm", [&] { return within(mc_orthogonality(theta, {2, 2, 2}, 100000, 13), 1.0 / 3); }},
        {12, "determinism", [&] {
             auto a = mc_bracket(theta, {2, 2, 2}, Holonomy::trivial(), 20000, 14, 2);
             auto b = mc_bracket(theta, {2, 2, 2}, Holonomy::trivial(), 20000, 14, 2);
             auto x = find_configs(tet, Coloring(6, 2), 10, 1e-10, 3);
             auto y = find_configs(tet, Coloring(6, 2), 10, 1e-10, 3);
             bool same = a.mean == b.mean && a.stderr_ == b.stderr_ && x.hits == y.hits && x.configs.size() == y.configs.size();
             for (size_t k = 0; same && k < x.configs.size(); ++k) same = x.configs[k].signature == y.configs[k].signature;
             return same;
         }},
    };
    json out = json::array();
    bool all = true;
    for (auto& c : checks) {
        auto start = std::chrono::steady_clock::now();
        bool ok = false;
        std::string error;
        try {
            ok = c.run();
        } catch (const std::exception& e) {
            error = e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        all = all && ok;
        json row{{"criterion", c.criterion}, {"name", c.name}, {"pass", ok}};
        if (!error.empty()) row["error"] = error;
        out.push_back(row);
        if (verbose) std::cerr << (ok ? "PASS " : "FAIL ") << c.criterion << " " << c.name << " (" << secs << " s)\n";
    }
    std::cout << json{{"command", "selftest"}, {"checks", out}, {"pass", all}}.dump(2) << "\n";
    return all ? 0 : 1;
}

}  // namespace cli
