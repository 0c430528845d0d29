#include <doctest.h>

#include "oracles/racah.hpp"
#include "spinnet/bundled.hpp"
#include "spinnet/errors.hpp"
#include "spinnet/evaluator.hpp"
#include "support.hpp"

#include <random>

using namespace spinnet;
using testing_support::random_gauge;
using testing_support::random_holonomy;
using testing_support::random_sl2;
using testing_support::rq;

namespace {

// The factorial formula for |<Theta, (a,b,c)>|, written out independently.
Rational theta_formula(int a, int b, int c) {
    int s = (a + b + c) / 2;
    mpz_class num = oracle::fact(s + 1) * oracle::fact(s - a) * oracle::fact(s - b) * oracle::fact(s - c);
    mpz_class den = oracle::fact(a) * oracle::fact(b) * oracle::fact(c);
    Rational r(num, den);
    r.canonicalize();
    return r;
}

Rational abs_real(const CQ& v) {
    REQUIRE(v.is_real());
    return abs(v.re);
}

}  // namespace

TEST_CASE("theta examples") {
    Graph t = bundled_graph("theta");
    CHECK(eval_spin_network(t, {0, 0, 0}) == CQ(1));
    CHECK(eval_spin_network(t, {1, 1, 1}).is_zero());
    CHECK(abs_real(eval_spin_network(t, {2, 2, 2})) == 3);
    // sign fixed by the symbolic contraction route
    CHECK(eval_spin_network(t, {2, 2, 2}) == eval_spin_network_symbolic(t, {2, 2, 2}));
    CHECK(theta_value(0, 0, 0) == 1);
    CHECK(theta_value(2, 2, 2) == 3);
    CHECK(theta_value(1, 1, 2) == theta_formula(1, 1, 2));
    CHECK(theta_value(1, 1, 2) == abs_real(eval_spin_network(t, {1, 1, 2})));
    CHECK_THROWS_AS(theta_value(1, 1, 1), AdmissibilityError);
}

TEST_CASE("theta modulus matches the factorial formula for small colors") {
    Graph t = bundled_graph("theta");
    for (auto& c : admissible_colorings(t, 6)) {
        CHECK(abs_real(eval_spin_network(t, c)) == theta_formula(c[0], c[1], c[2]));
        CHECK(theta_value(c[0], c[1], c[2]) == theta_formula(c[0], c[1], c[2]));
    }
}

TEST_CASE("tensor network and symbolic contraction agree") {
    Graph t = bundled_graph("tetrahedron");
    std::mt19937_64 rng(4);
    Holonomy psi = random_holonomy(t, rng);
    for (auto& c : admissible_colorings(t, 2)) {
        CHECK(eval_spin_network(t, c) == eval_spin_network_symbolic(t, c));
        CHECK(eval_spin_network(t, c, psi) == eval_spin_network_symbolic(t, c, psi));
    }
}

TEST_CASE("tetrahedron equals the Racah single sum") {
    Graph t = bundled_graph("tetrahedron");
    CHECK(eval_spin_network(t, Coloring(6, 2)) == CQ(oracle::racah(t, Coloring(6, 2))));
    for (auto& c : admissible_colorings(t, 4)) CHECK(eval_spin_network(t, c) == CQ(oracle::racah(t, c)));
}

TEST_CASE("crossing presentation has the same modulus as the planar one") {
    Graph p = bundled_graph("tetrahedron"), x = bundled_graph("tetrahedron_crossing");
    for (auto& c : admissible_colorings(x, 3)) {
        // the crossing presentation lists the same edge ids
        Coloring cp(6);
        for (size_t e = 0; e < x.edges.size(); ++e) cp[p.edge_index(x.edges[e].id)] = c[e];
        CQ a = eval_spin_network(x, c), b = eval_spin_network(p, cp);
        CHECK(a.is_real());
        CHECK(a.norm2() == b.norm2());
    }
}

TEST_CASE("non-admissible colorings evaluate to zero") {
    Graph t = bundled_graph("tetrahedron");
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<int> col(0, 4);
    int seen = 0;
    for (int k = 0; k < 200; ++k) {
        Coloring c(6);
        for (int& x : c) x = col(rng);
        if (is_admissible(t, c)) continue;
        ++seen;
        CHECK(eval_spin_network(t, c).is_zero());
        CHECK(bracket_square(t, c) == 0);
    }
    CHECK(seen > 50);
}

TEST_CASE("trivial holonomy gives real values") {
    for (auto name : {"theta", "tetrahedron", "prism"}) {
        Graph g = bundled_graph(name);
        for (auto& c : admissible_colorings(g, 2)) CHECK(eval_spin_network(g, c).is_real());
    }
}

TEST_CASE("renormalization") {
    Graph t = bundled_graph("theta");
    CQ v(rq(7, 3));
    CHECK(renormalize(t, {0, 0, 0}, v) == v);
    CHECK(renormalize(t, {2, 2, 2}, CQ(1)) == CQ(8));
    for (auto& c : admissible_colorings(t, 5)) CHECK(unrenormalize(t, c, renormalize(t, c, v)) == v);
}

TEST_CASE("bracket square") {
    Graph t = bundled_graph("theta");
    for (auto& c : admissible_colorings(t, 6)) CHECK(bracket_square(t, c) == 1);
    CHECK(bracket_square(t, {1, 1, 1}) == 0);
    Graph tet = bundled_graph("tetrahedron");
    Coloring c(6, 2);
    Rational r = oracle::racah(tet, c);
    CHECK(bracket_square(tet, c) == r * r / (theta_value(2, 2, 2) * theta_value(2, 2, 2) * theta_value(2, 2, 2) * theta_value(2, 2, 2)));
    std::mt19937_64 rng(12);
    Holonomy psi = random_holonomy(tet, rng);
    for (auto& cc : admissible_colorings(tet, 2)) {
        Rational b = bracket_square(tet, cc, psi);
        CHECK(b >= 0);
        CHECK((b == 0) == eval_spin_network(tet, cc, psi).is_zero());
    }
}

TEST_CASE("gauge transformations") {
    Graph t = bundled_graph("tetrahedron");
    std::mt19937_64 rng(17);
    Holonomy psi = random_holonomy(t, rng);
    Gauge id{std::vector<Mat2Q>(4, Mat2Q::identity()), std::vector<Mat2Q>(6, Mat2Q::identity())};
    Holonomy same = gauge_transform(t, psi, id);
    for (int h = 0; h < t.num_half(); ++h) CHECK(same.exact_at(h) == psi.exact_at(h));
    Mat2Q minus{CQ(-1), CQ(0), CQ(0), CQ(-1)};
    Gauge neg{std::vector<Mat2Q>(4, minus), std::vector<Mat2Q>(6, minus)};
    Holonomy same2 = gauge_transform(t, psi, neg);
    for (int h = 0; h < t.num_half(); ++h) CHECK(same2.exact_at(h) == psi.exact_at(h));
    Gauge bad = id;
    bad.vertex[0] = Mat2Q{CQ(2), CQ(0), CQ(0), CQ(1)};
    CHECK_THROWS_AS(gauge_transform(t, psi, bad), InputError);
}

TEST_CASE("evaluation is gauge invariant") {
    Graph theta = bundled_graph("theta"), tet = bundled_graph("tetrahedron");
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        const Graph& g = trial % 4 == 0 ? tet : theta;
        Holonomy psi = random_holonomy(g, rng);
        Holonomy moved = gauge_transform(g, psi, random_gauge(g, rng));
        Coloring c = trial % 4 == 0 ? Coloring(6, 2) : Coloring{2, 3, 3};
        CHECK(eval_spin_network(g, c, moved) == eval_spin_network(g, c, psi));
    }
}

TEST_CASE("float holonomy is rejected by the exact evaluator") {
    Graph t = bundled_graph("theta");
    std::vector<Mat2D> m(t.num_half(), Mat2D::identity());
    CHECK_THROWS_AS(eval_spin_network(t, {2, 2, 2}, make_float_holonomy(m)), RegimeError);
}
