// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
// argv[1] is the path of the spinnet executable (used by the determinism criterion).

#include "oracles/cycles.hpp"
#include "oracles/racah.hpp"
#include "spinnet/asymptotics.hpp"
#include "spinnet/bundled.hpp"
#include "spinnet/evaluator.hpp"
#include "spinnet/haar.hpp"
#include "spinnet/series.hpp"
#include "support.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>

using namespace spinnet;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            if (pass) detail << "first failure: " << what;
            pass = false;
        }
    }
};

bool within(const MCEstimate& e, double target, std::ostringstream& log, const std::string& name) {
    double z = e.stderr_ > 0 ? (e.mean - target) / e.stderr_ : (e.mean == target ? 0 : INFINITY);
    log << " " << name << " z=" << std::fixed << std::setprecision(2) << z;
    return std::abs(z) <= 3;
}

Rational theta_formula(int a, int b, int c) {
    int s = (a + b + c) / 2;
    Rational r(oracle::fact(s + 1) * oracle::fact(s - a) * oracle::fact(s - b) * oracle::fact(s - c), oracle::fact(a) * oracle::fact(b) * oracle::fact(c));
    r.canonicalize();
    return r;
}

int angle_degree(const Graph& g, const Coloring& c) {
    int d = 0;
    for (int a : internal_coloring(g, c)) d += a;
    return d;
}

// Every coefficient against the renormalized evaluation, and no monomial outside admissible colorings.
void compare_series(Outcome& o, const Graph& g, const TruncSeries& s, const Holonomy& psi, const std::string& tag) {
    int checked = 0;
    for (auto& c : admissible_colorings(g, s.D)) {
        if (angle_degree(g, c) > s.D) continue;
        ++checked;
        o.require(series_coefficient(g, s, c) == renormalize(g, c, eval_spin_network(g, c, psi)), tag + " coefficient mismatch");
    }
    for (auto& [m, coef] : s.poly.terms) {
        InternalColoring a(m.e.begin(), m.e.begin() + g.angles().size());
        Coloring ce = edge_colors_from_angles(g, a);
        o.require(is_admissible(g, ce) && internal_coloring(g, ce) == a, tag + " monomial off the admissible set");
    }
    o.detail << " " << tag << ":" << checked;
}

std::string run_capture(const std::string& cmd, int& status) {
    std::array<char, 4096> buf;
    std::string out;
    FILE* p = popen((cmd + " 2>/dev/null").c_str(), "r");
    if (!p) {
        status = -1;
        return out;
    }
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
    status = pclose(p);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    std::string cli = argc > 1 ? argv[1] : "spinnet";
    Graph theta = bundled_graph("theta"), tet = bundled_graph("tetrahedron"), prism = bundled_graph("prism"),
          cross = bundled_graph("tetrahedron_crossing");

    struct Criterion {
        int id;
        std::string name;
        double budget;
        std::function<void(Outcome&)> run;
    };
    std::vector<Criterion> criteria{
        {1, "theta closed form, colors <= 10", 10,
         [&](Outcome& o) {
             int n = 0;
             for (int a = 0; a <= 10; ++a)
                 for (int b = 0; b <= 10; ++b)
                     for (int c = 0; c <= 10; ++c) {
                         if (!is_admissible(theta, {a, b, c})) continue;
                         ++n;
                         CQ v = eval_spin_network(theta, {a, b, c});
                         Rational t = theta_value(a, b, c);
                         o.require(v.is_real() && abs(v.re) == t, "|<Theta>| != theta_value");
                         o.require(t == theta_formula(a, b, c), "theta_value != factorial formula");
                     }
             o.detail << " triples=" << n;
         }},
        {2, "tetrahedron equals the Racah single sum, colors <= 6", 60,
         [&](Outcome& o) {
             int n = 0;
             for (auto& c : admissible_colorings(tet, 6)) {
                 ++n;
                 o.require(eval_spin_network(tet, c) == CQ(oracle::racah(tet, c)), "evaluation != single sum");
             }
             o.detail << " colorings=" << n;
         }},
        {3, "series coefficients equal renormalized evaluations", 300,
         [&](Outcome& o) {
             std::mt19937_64 rng(2024);
             Holonomy pt = testing_support::random_holonomy(theta, rng);
             Holonomy pq = testing_support::random_holonomy(tet, rng);
             compare_series(o, theta, series_Z(theta, Holonomy::trivial(), 12), Holonomy::trivial(), "theta");
             compare_series(o, theta, series_Z(theta, pt, 12), pt, "theta+psi");
             compare_series(o, tet, series_Z(tet, Holonomy::trivial(), 8), Holonomy::trivial(), "tet");
             compare_series(o, tet, series_Z(tet, pq, 8), pq, "tet+psi");
         }},
        {4, "det(P+Q) is the fourth power of the cycle polynomial", 120,
         [&](Outcome& o) {
             for (const Graph* g : {&theta, &tet, &prism}) {
                 MPoly w = westbury_polynomial(*g);
                 o.require(w == oracle::cycle_polynomial(*g), g->name + ": cycle polynomial != enumeration oracle");
                 o.require(det_poly(build_pq(*g).full) == pow(w, 4), g->name + ": det != P^4");
                 o.detail << " " << g->name << ":" << w.size() << " cycles";
             }
         }},
        {5, "Pfaffian square and curve sums", 120,
         [&](Outcome& o) {
             std::mt19937_64 rng(55);
             std::uniform_int_distribution<long> num(-6, 6), den(1, 5);
             for (const Graph* g : {&theta, &tet}) {
                 MPoly p = pfaffian_dimer_sum(*g);
                 o.require(p * p == abelian_curve_sum(*g, std::vector<Rational>(g->num_half(), Rational(1))), g->name + ": pf^2 != curve sum");
                 for (int k = 0; k < 5; ++k) {
                     std::vector<Rational> t;
                     for (int h = 0; h < g->num_half(); ++h) {
                         long x = 0;
                         while (x == 0) x = num(rng);
                         t.push_back(testing_support::rq(x, den(rng)));
                     }
                     o.require(abelian_curve_sum(*g, t) == det_poly(build_w1(*g, t)), g->name + ": curve sum != det W1");
                 }
             }
         }},
        {6, "crossing sign fix on the non-planar tetrahedron, degree 6", 120,
         [&](Outcome& o) {
             compare_series(o, cross, nonplanar_fix(series_Z(cross, Holonomy::trivial(), 6), cross), Holonomy::trivial(), "crossing");
         }},
        {7, "integral formula for the bracket", 180,
         [&](Outcome& o) {
             const long long n = 1000000;
             for (Coloring c : {Coloring{2, 2, 2}, Coloring{1, 1, 2}, Coloring{2, 3, 3}})
                 o.require(within(mc_bracket(theta, c, Holonomy::trivial(), n, 71), 1.0, o.detail, "adm"), "admissible theta");
             for (Coloring c : {Coloring{1, 1, 1}, Coloring{1, 1, 4}})
                 o.require(within(mc_bracket(theta, c, Holonomy::trivial(), n, 72), 0.0, o.detail, "non-adm"), "non-admissible theta");
             Coloring c(6, 2);
             o.require(within(mc_bracket(tet, c, Holonomy::trivial(), n, 73), bracket_square(tet, c).get_d(), o.detail, "tet"), "tetrahedron");
         }},
        {8, "W at y = (0.3, 0.2, 0.1)", 60,
         [&](Outcome& o) {
             std::vector<double> y{0.3, 0.2, 0.1};
             double target = 1 / ((1 - y[0] * y[1]) * (1 - y[1] * y[2]) * (1 - y[0] * y[2]));
             o.require(within(mc_W_point(theta, Holonomy::trivial(), y, 1000000, 81), target, o.detail, "W"), "W point");
         }},
        {9, "character identities", 60,
         [&](Outcome& o) {
             Rng rng(91);
             for (int c = 1; c <= 3; ++c) {
                 Mat2D a = sample_haar(rng).matrix(), b = sample_haar(rng).matrix();
                 double t = (char_value(c, a * b.inverse()) / double(c + 1)).real();
                 o.require(within(mc_prodtrace(c, a, b, 1000000, 92 + c), t, o.detail, "prodtrace"), "prodtrace");
             }
             for (int n = 1; n <= 3; ++n) {
                 Mat2D g = sample_haar(rng).matrix();
                 cd t = char_value(n, g);
                 MCEstimate e = mc_coherent(n, g, 1000000, 96 + n);
                 bool re = within(e, t.real(), o.detail, "coh.re");
                 double zi = (e.mean_im - t.imag()) / e.stderr_im;
                 o.detail << " coh.im z=" << zi;
                 o.require(re && std::abs(zi) <= 3, "coherent state");
             }
         }},
        {10, "tetrahedron asymptotics, k = 10, 20, 40", 300,
         [&](Outcome& o) {
             Coloring c(6, 2);
             FindResult f = find_configs(tet, c);
             HypothesisReport h = check_hypotheses(tet, c, f.configs);
             o.require(h.ok(), "hypotheses");
             for (int k : h.qP_kernel) o.require(k == 3, "q_P kernel");
             for (int k : h.qk_kernel) o.require(k == 3, "q^kappa kernel");
             for (int k : h.qpp_kernel) o.require(k == 6, "q'' kernel");
             AsymptoticData d = prepare_asymptotics(tet, c, f.configs);
             double prev = INFINITY;
             for (int k : {10, 20, 40}) {
                 mpq_class r = oracle::racah_uniform(2 * k), th = theta_value(2 * k, 2 * k, 2 * k);
                 double exact = mpq_class(r * r / (th * th * th * th)).get_d();
                 double err = std::abs(asymptotic_estimate(d, c, k).value / exact - 1);
                 o.detail << " k=" << k << ":" << std::setprecision(4) << err;
                 o.require(err <= prev, "error increased");
                 prev = err;
             }
             o.require(prev <= 0.15, "error at k = 40");
         }},
        {11, "orthogonality norm on theta (2,2,2)", 60,
         [&](Outcome& o) { o.require(within(mc_orthogonality(theta, {2, 2, 2}, 1000000, 111), 1.0 / 3, o.detail, "orth"), "orthogonality"); }},
        {12, "stochastic commands are reproducible", 120,
         [&](Outcome& o) {
             std::vector<std::string> cmds{
                 "integrate -g theta -c 2,2,2 --samples 50000 --seed 5",
                 "integrate -g tetrahedron -c 2,2,2,2,2,2 --samples 50000 --seed 6 --workers 3",
                 "integrate -g theta --target W --y e1=0.3 e2=0.2 e3=0.1 --samples 50000 --seed 7 --workers 2",
                 "integrate -g theta -c 2,2,2 --target orthogonality --samples 50000 --seed 8",
                 "asymptote -g tetrahedron -c 2,2,2,2,2,2 --restarts 50 --seed 9",
                 "check -g tetrahedron --restarts 50 --seed 10",
             };
             for (auto& c : cmds) {
                 int s1 = 0, s2 = 0;
                 std::string a = run_capture(cli + " " + c, s1), b = run_capture(cli + " " + c, s2);
                 o.require(s1 == 0 && s2 == 0 && !a.empty(), "command failed: " + c);
                 o.require(a == b, "reports differ: " + c);
             }
             auto x = mc_bracket(theta, {2, 2, 2}, Holonomy::trivial(), 100000, 12, 4);
             auto y = mc_bracket(theta, {2, 2, 2}, Holonomy::trivial(), 100000, 12, 4);
             o.require(x.mean == y.mean && x.stderr_ == y.stderr_, "library estimate differs");
             o.detail << " commands=" << cmds.size();
         }},
    };

    int failed = 0;
    for (auto& c : criteria) {
        Outcome o;
        auto start = std::chrono::steady_clock::now();
        try {
            c.run(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << " exception: " << e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > c.budget) {
            o.pass = false;
            o.detail << " over time budget";
        }
        if (!o.pass) ++failed;
        std::cout << "criterion " << std::setw(2) << c.id << ": " << (o.pass ? "PASS" : "FAIL") << "  " << c.name << "  (" << std::fixed
                  << std::setprecision(2) << secs << " s of " << c.budget << " s)" << o.detail.str() << std::endl;
    }
    std::cout << (failed ? "acceptance: FAILED " + std::to_string(failed) + " criteria" : "acceptance: all criteria pass") << std::endl;
    return failed ? 1 : 0;
}
