#include <doctest.h>

#include "spinnet/asymptotics.hpp"
#include "spinnet/bundled.hpp"
#include "spinnet/errors.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>

using namespace spinnet;

namespace {

struct TetFixture {
    Graph g = bundled_graph("tetrahedron");
    Coloring c = Coloring(6, 2);
    FindResult found = find_configs(g, c, 60);
};

const TetFixture& tet() {
    static TetFixture f;
    return f;
}

// Cube skeleton as the face graph of an octahedron with vertices A, A', B, B', C, C'.
// Face (x, y, z) is traversed x -> y -> z when it uses an even number of primed vertices.
// Returns the graph, the unit edge vectors as traversed by the earlier face, and the edge lengths.
struct FaceGraph {
    Graph g;
    std::vector<Vec3> P;
    std::vector<double> len;
};

FaceGraph octahedron_faces(const std::array<Vec3, 6>& pts) {
    std::vector<std::array<int, 3>> cyc(8);  // point indices per face, in traversal order
    for (int f = 0; f < 8; ++f) {
        int b[3] = {f & 1, (f >> 1) & 1, (f >> 2) & 1};
        std::array<int, 3> p{2 * 0 + b[0], 2 * 1 + b[1], 2 * 2 + b[2]};
        if ((b[0] + b[1] + b[2]) % 2) std::swap(p[1], p[2]);
        cyc[f] = p;
    }
    json j;
    j["name"] = "cube";
    j["vertices"] = json::array();
    j["edges"] = json::array();
    j["crossings"] = json::array();
    std::vector<std::vector<std::string>> halves(8);
    std::vector<Vec3> P;
    std::vector<double> len;
    for (int f = 0; f < 8; ++f)
        for (int bit = 0; bit < 3; ++bit) {
            int h = f ^ (1 << bit);
            if (h < f) continue;
            std::string id = "f" + std::to_string(f) + "_" + std::to_string(h);
            j["edges"].push_back({{"id", id}, {"left", id + "L"}, {"right", id + "R"}});
            halves[f].push_back(id + "L");
            halves[h].push_back(id + "R");
            // the shared edge joins the two points that do not involve `bit`
            int a = -1, b = -1;
            for (int k = 0; k < 3; ++k) {
                int from = cyc[f][k], to = cyc[f][(k + 1) % 3];
                if (from / 2 != bit && to / 2 != bit) a = from, b = to;
            }
            P.push_back((pts[b] - pts[a]).normalized());
            len.push_back((pts[b] - pts[a]).norm());
        }
    for (int f = 0; f < 8; ++f) j["vertices"].push_back({{"id", "f" + std::to_string(f)}, {"halfedges", halves[f]}});
    return {graph_from_json(j), P, len};
}

double weighted_closure(const FaceGraph& f) {
    double r = 0;
    for (auto& v : f.g.vertices) {
        Vec3 s = Vec3::Zero();
        for (int h : v.half) s += (f.g.is_left(h) ? 1.0 : -1.0) * f.len[f.g.edge_of(h)] * f.P[f.g.edge_of(h)];
        r = std::max(r, s.norm());
    }
    return r;
}

}  // namespace

TEST_CASE("tetrahedron critical configurations") {
    const auto& t = tet();
    REQUIRE(t.found.configs.size() == 2);
    CHECK(t.found.warnings.empty());
    for (auto& p : t.found.configs) {
        CHECK(p.residual < 1e-12);
        CHECK(closure_residual(t.g, t.c, p.P) < 1e-12);
        for (auto& v : p.P) CHECK(std::abs(v.norm() - 1) < 1e-12);
        // equal colors: the three outgoing vectors at a vertex are at 120 degrees
        for (auto& vx : t.g.vertices) {
            Vec3 o[3];
            for (int s = 0; s < 3; ++s) o[s] = (t.g.is_left(vx.half[s]) ? 1.0 : -1.0) * p.P[t.g.edge_of(vx.half[s])];
            for (int s = 0; s < 3; ++s) CHECK(o[s].dot(o[(s + 1) % 3]) == doctest::Approx(-0.5).epsilon(1e-10));
        }
    }
    // gauge: the first edge at the first vertex points to the north pole
    int e0 = t.g.edge_of(t.g.vertices[0].half[0]);
    for (auto& p : t.found.configs) CHECK((p.P[e0] - Vec3::UnitZ()).norm() < 1e-12);
    // the two classes are negatives of each other
    Configuration n = negate(t.g, t.c, t.found.configs[0]);
    double d = 0;
    for (size_t k = 0; k < n.signature.size(); ++k) d = std::max(d, std::abs(n.signature[k] - t.found.configs[1].signature[k]));
    CHECK(d < 1e-6);
}

TEST_CASE("strict triangle inequalities are required") {
    Graph th = bundled_graph("theta");
    CHECK_THROWS_AS(find_configs(th, {1, 1, 2}, 5), HypothesisError);
    CHECK_THROWS_AS(require_strict_triangles(th, {2, 2, 4}), HypothesisError);
    CHECK_NOTHROW(require_strict_triangles(th, {2, 2, 2}));
}

TEST_CASE("search is reproducible") {
    const auto& t = tet();
    FindResult again = find_configs(t.g, t.c, 60);
    REQUIRE(again.configs.size() == t.found.configs.size());
    for (size_t k = 0; k < again.configs.size(); ++k) CHECK(again.configs[k].signature == t.found.configs[k].signature);
    CHECK(again.hits == t.found.hits);
}

TEST_CASE("r form on coordinate axes") {
    Graph th = bundled_graph("theta");
    std::vector<Vec3> P{Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
    Eigen::Matrix3d r = r_form(th, {1, 1, 1}, P);
    CHECK((r - 2 * Eigen::Matrix3d::Identity()).norm() < 1e-15);
    std::vector<Vec3> M{-Vec3::UnitX(), -Vec3::UnitY(), -Vec3::UnitZ()};
    CHECK((r_form(th, {1, 1, 1}, M) - r).norm() < 1e-15);
}

TEST_CASE("q_P properties") {
    const auto& t = tet();
    std::vector<double> w(6, 2.0);
    const auto& P = t.found.configs[0].P;
    RMat q = qP_form(t.g, w, P);
    CHECK((q - q.transpose()).norm() == 0.0);
    Eigen::VectorXd diag(12);
    for (int v = 0; v < 4; ++v) diag.segment<3>(3 * v) = Vec3(0.3, -1.2, 0.7);
    CHECK((q * diag).norm() < 1e-14);
    std::vector<Vec3> neg;
    for (auto& p : P) neg.push_back(-p);
    CHECK((qP_form(t.g, w, neg) - q).norm() < 1e-12);
    CHECK(std::abs(r_form(t.g, w, neg).determinant() - r_form(t.g, w, P).determinant()) < 1e-12);
    Eigen::SelfAdjointEigenSolver<RMat> es(q);
    auto ev = es.eigenvalues();
    CHECK(std::abs(ev(2)) < 1e-12);
    CHECK(ev(3) / std::max(std::abs(ev(2)), 1e-300) > 1e6);
}

TEST_CASE("det prime basics") {
    CHECK(std::abs(detprime(CMat::Identity(6, 6), 0).value - 1.0) < 1e-14);
    Eigen::VectorXcd d(6);
    d << 0, 0, 0, 2, 3, 5;
    DetPrime x = detprime(d.asDiagonal().toDenseMatrix(), 3);
    CHECK(std::abs(x.value - 30.0) < 1e-12);
    CHECK(std::abs(x.sqrt * x.sqrt - 30.0) < 1e-12);
    CHECK_THROWS_AS(detprime(d.asDiagonal().toDenseMatrix(), 2), HypothesisError);
}

TEST_CASE("det prime of q_P is rotation invariant and positive") {
    const auto& t = tet();
    std::vector<double> w(6, 2.0);
    Eigen::Matrix3d R = Eigen::AngleAxisd(0.7, Vec3(1, 2, -0.5).normalized()).toRotationMatrix();
    std::vector<Vec3> rotated;
    for (auto& p : t.found.configs[0].P) rotated.push_back(R * p);
    cdouble a = detprime(qP_form(t.g, w, t.found.configs[0].P).cast<cdouble>(), 3).value;
    cdouble b = detprime(qP_form(t.g, w, rotated).cast<cdouble>(), 3).value;
    CHECK(a.real() > 0);
    CHECK(std::abs(a.imag()) < 1e-9 * a.real());
    CHECK(std::abs(a - b) < 1e-6 * std::abs(a));
}

TEST_CASE("pair data") {
    const auto& t = tet();
    PairData pd = pair_data(t.g, t.found.configs[0], t.found.configs[1]);
    CHECK(pd.lift_residual < 1e-10);
    CHECK(pd.phase_residual < 1e-10);
    for (size_t e = 0; e < 6; ++e) {
        CHECK(pd.theta[e] > 0);
        CHECK(pd.theta[e] < M_PI);
        // g_v u = tau g_w u for the spinor u over P_e
        Vec3 p = t.found.configs[0].P[e];
        double th = std::acos(std::clamp(p.z(), -1.0, 1.0)), ph = std::atan2(p.y(), p.x());
        Eigen::Vector2cd u(std::cos(th / 2), std::polar(std::sin(th / 2), ph));
        int v = t.g.vertex_of(t.g.edges[e].left), w = t.g.vertex_of(t.g.edges[e].right);
        CHECK((pd.lift[v] * u - pd.tau[e] * (pd.lift[w] * u)).norm() < 1e-10);
    }
    CHECK_THROWS_AS(build_forms(t.g, t.c, t.found.configs[0], t.found.configs[1], 1.0), DomainError);
}

TEST_CASE("q kappa has positive semidefinite real part") {
    const auto& t = tet();
    Forms f = build_forms(t.g, t.c, t.found.configs[0], t.found.configs[1], 1.01);
    CHECK((f.qk - f.qk.transpose()).norm() < 1e-12);
    RMat re = f.qk.real();
    Eigen::SelfAdjointEigenSolver<RMat> es(0.5 * (re + re.transpose()));
    CHECK(es.eigenvalues().minCoeff() > -1e-9);
}

TEST_CASE("hypotheses on the tetrahedron") {
    const auto& t = tet();
    HypothesisReport r = check_hypotheses(t.g, t.c, t.found.configs);
    CHECK(r.ok());
    for (int k : r.qP_kernel) CHECK(k == 3);
    for (int k : r.qk_kernel) CHECK(k == 3);
    for (int k : r.qpp_kernel) CHECK(k == 6);
    for (double d : r.min_tau_distance) CHECK(d > 1e-3);
    CHECK(r.witnesses.empty());
}

TEST_CASE("det prime limit") {
    const auto& t = tet();
    DetPrimeLimit lim = detprime_limit(t.g, t.c, t.found.configs[0], t.found.configs[1]);
    REQUIRE(lim.sequence.size() == 7);
    // first-order convergence in kappa - 1: the last two raw terms agree to about 2^-12
    CHECK(std::abs(lim.sequence[5] - lim.sequence[6]) < 1e-3 * std::abs(lim.sequence[6]));
    CHECK(std::abs(lim.sequence[6] - lim.value) < 1e-3 * std::abs(lim.value));
    CHECK(lim.error < 1e-4);
    CHECK(std::abs(lim.sqrt * lim.sqrt - lim.value) < 1e-6 * std::abs(lim.value));

    // independent route: det'(q'') times the slopes of the three eigenvalues that vanish linearly
    PairData pd = pair_data(t.g, t.found.configs[0], t.found.configs[1]);
    DetPrime dq = detprime(qpp_form(t.g, t.c, t.found.configs[1], pd), 6);
    double h = std::ldexp(1.0, -16);
    auto ev = detprime(qkappa_form(t.g, t.c, t.found.configs[1], pd, 1 + h), 3).eigenvalues;
    cdouble slopes = ev[3] * ev[4] * ev[5] / (h * h * h);
    CHECK(std::abs(dq.value * slopes - lim.value) < 1e-3 * std::abs(lim.value));
}

TEST_CASE("asymptotic formula assembly") {
    const auto& t = tet();
    AsymptoticData d = prepare_asymptotics(t.g, t.c, t.found.configs);
    CHECK(d.N == 2);
    CHECK(d.det_r[0] == doctest::Approx(d.det_r[1]));
    CHECK(d.detprime_qP[0] == doctest::Approx(d.detprime_qP[1]));
    REQUIRE(d.pairs.size() == 1);
    CHECK(d.pairs[0].conjugation_defect < 1e-8);
    for (int k : {4, 7}) {
        AsymptoticEstimate e = asymptotic_estimate(d, t.c, k);
        CHECK(e.prefactor == doctest::Approx(8 / (M_PI * k * k * k)));
        // reassemble from the pieces
        const PairTerm& p = d.pairs[0];
        double phi = 0, s = 1;
        for (size_t x = 0; x < 6; ++x) {
            phi += (k * t.c[x] + 1) * p.theta[x];
            s *= std::sin(p.theta[x]);
        }
        cdouble z = -std::sqrt(d.det_r[p.p]) * std::polar(1.0, phi) / (p.sqrt_detprime * s);
        CHECK(e.pair_terms[0] == doctest::Approx(2 * z.real()));
        double first = 2 * std::sqrt(d.det_r[0] / d.detprime_qP[0]);
        CHECK(e.value == doctest::Approx(e.prefactor * (first + 2 * z.real())));
        // one more unit of k rotates the pair phase by sum c_e theta_e
        double cth = 0;
        for (size_t x = 0; x < 6; ++x) cth += t.c[x] * p.theta[x];
        AsymptoticEstimate e1 = asymptotic_estimate(d, t.c, k + 1);
        CHECK(e1.pair_terms[0] == doctest::Approx(2 * (z * std::polar(1.0, cth)).real()));
    }
    CHECK_THROWS_AS(asymptotic_estimate(d, t.c, 0), InputError);
}

TEST_CASE("flexible octahedron breaks H1") {
    // Bricard type I: opposite vertices exchanged by the half-turn about the z axis
    auto half_turn = [](const Vec3& p) { return Vec3(-p.x(), -p.y(), p.z()); };
    Vec3 a(1.0, 0.2, 0.3), b(0.1, 1.3, -0.4), c(0.6, -0.35, 1.1);
    std::array<Vec3, 6> bricard{a, half_turn(a), b, half_turn(b), c, half_turn(c)};
    FaceGraph f = octahedron_faces(bricard);
    // closure holds with the edge lengths as weights
    CHECK(weighted_closure(f) < 1e-12);
    CHECK(h1_kernel_dim(f.g, f.P) > 3);

    // a convex octahedron is rigid
    std::array<Vec3, 6> convex{Vec3(1.1, 0.05, 0.1), Vec3(-0.9, 0.1, -0.05), Vec3(0.1, 1.0, 0.05),
                               Vec3(-0.05, -1.2, 0.1), Vec3(0.05, 0.1, 0.95), Vec3(0.1, -0.05, -1.05)};
    FaceGraph fc = octahedron_faces(convex);
    CHECK(weighted_closure(fc) < 1e-12);
    CHECK(h1_kernel_dim(fc.g, fc.P) == 3);
}
