#include "spinnet/asymptotics.hpp"

#include "spinnet/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>

namespace spinnet {

namespace {

struct Incidence {
    int edge;
    double sign;  // +1 when the edge leaves the vertex (vertex is the left endpoint)
};

std::vector<std::vector<Incidence>> incidences(const Graph& g) {
    std::vector<std::vector<Incidence>> inc(g.vertices.size());
    for (size_t v = 0; v < g.vertices.size(); ++v)
        for (int h : g.vertices[v].half) inc[v].push_back({g.edge_of(h), g.is_left(h) ? 1.0 : -1.0});
    return inc;
}

void require_no_loops(const Graph& g) {
    for (auto& e : g.edges)
        if (g.vertex_of(e.left) == g.vertex_of(e.right)) throw HypothesisError("edge '" + e.id + "' is a loop; closure configurations need distinct endpoints");
}

Eigen::Matrix3d skew(const Vec3& q) {
    Eigen::Matrix3d s;
    s << 0, -q.z(), q.y(), q.z(), 0, -q.x(), -q.y(), q.x(), 0;
    return s;
}

uint64_t mix(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Rotation taking P[a] to +z and P[b] into the half-plane {y = 0, x > 0}, a and b the first two edges at vertex 0.
Eigen::Matrix3d gauge_rotation(const Graph& g, const std::vector<Vec3>& P) {
    int ea = g.edge_of(g.vertices[0].half[0]), eb = g.edge_of(g.vertices[0].half[1]);
    Vec3 e3 = P[ea].normalized();
    Vec3 e1 = P[eb] - P[eb].dot(e3) * e3;
    if (e1.norm() < 1e-9) throw HypothesisError("the first two edges at the first vertex are parallel; rank < 2");
    e1.normalize();
    Eigen::Matrix3d R;
    R.row(0) = e1;
    R.row(1) = e3.cross(e1);
    R.row(2) = e3;
    return R;
}

bool same_signature(const std::vector<double>& a, const std::vector<double>& b, double tol) {
    for (size_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i] - b[i]) > tol) return false;
    return true;
}

bool signature_less(const std::vector<double>& a, const std::vector<double>& b) {
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] < b[i] - 1e-7) return true;
        if (a[i] > b[i] + 1e-7) return false;
    }
    return false;
}

std::vector<double> weights(const Coloring& c) { return std::vector<double>(c.begin(), c.end()); }

Eigen::Matrix2cd su2_from_rotation(const Eigen::Matrix3d& R) {
    Eigen::Quaterniond q(R);
    q.normalize();
    const cdouble I(0, 1);
    Eigen::Matrix2cd u;
    // w - i (x sx + y sy + z sz)
    u << cdouble(q.w(), -q.z()), -I * q.x() - q.y(), -I * q.x() + q.y(), cdouble(q.w(), q.z());
    return u;
}

Eigen::Matrix3d rotation_of(const Eigen::Matrix2cd& u) {
    const cdouble I(0, 1);
    Eigen::Matrix2cd s[3];
    s[0] << 0, 1, 1, 0;
    s[1] << 0, -I, I, 0;
    s[2] << 1, 0, 0, -1;
    Eigen::Matrix3d R;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) R(a, b) = 0.5 * (s[a] * u * s[b] * u.adjoint()).trace().real();
    return R;
}

Eigen::Vector2cd spinor(const Vec3& p) {
    double th = std::acos(std::clamp(p.z(), -1.0, 1.0)), ph = std::atan2(p.y(), p.x());
    return {std::cos(th / 2), std::polar(std::sin(th / 2), ph)};
}

void add_laplacian(CMat& m, int v, int w, const Eigen::Matrix3cd& b) {
    m.block<3, 3>(3 * v, 3 * v) += b;
    m.block<3, 3>(3 * w, 3 * w) += b;
    m.block<3, 3>(3 * v, 3 * w) -= b;
    m.block<3, 3>(3 * w, 3 * v) -= b;
}

std::vector<cdouble> sorted_eigenvalues(const CMat& m) {
    Eigen::ComplexEigenSolver<CMat> es(m, false);
    if (es.info() != Eigen::Success) throw NumericalError("eigenvalue computation failed");
    std::vector<cdouble> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(ev.begin(), ev.end(), [](cdouble a, cdouble b) { return std::abs(a) < std::abs(b); });
    return ev;
}

}  // namespace

void require_strict_triangles(const Graph& g, const Coloring& c) {
    if (c.size() != g.edges.size()) throw InputError("coloring does not cover every edge");
    for (auto& v : g.vertices) {
        int a = c[g.edge_of(v.half[0])], b = c[g.edge_of(v.half[1])], d = c[g.edge_of(v.half[2])];
        if (!(a < b + d && b < a + d && d < a + b))
            throw HypothesisError("vertex '" + v.id + "' violates the strict triangle inequalities (" + std::to_string(a) + "," +
                                  std::to_string(b) + "," + std::to_string(d) + ")");
    }
}

double closure_residual(const Graph& g, const Coloring& c, const std::vector<Vec3>& P) {
    double r = 0;
    for (auto& inc : incidences(g)) {
        Vec3 s = Vec3::Zero();
        for (auto [e, sg] : inc) s += sg * c[e] * P[e];
        r = std::max(r, s.norm());
    }
    return r;
}

Configuration make_configuration(const Graph& g, const Coloring& c, std::vector<Vec3> P) {
    if (P.size() != g.edges.size()) throw InputError("configuration needs one vector per edge");
    for (auto& p : P) p.normalize();
    Eigen::Matrix3d R = gauge_rotation(g, P);
    Configuration out;
    for (auto& p : P) {
        p = R * p;
        out.signature.insert(out.signature.end(), p.data(), p.data() + 3);
    }
    out.residual = closure_residual(g, c, P);
    out.P = std::move(P);
    return out;
}

Configuration negate(const Graph& g, const Coloring& c, const Configuration& p) {
    std::vector<Vec3> m;
    for (auto& x : p.P) m.push_back(-x);
    return make_configuration(g, c, std::move(m));
}

FindResult find_configs(const Graph& g, const Coloring& c, int restarts, double tol, uint64_t seed) {
    require_no_loops(g);
    require_strict_triangles(g, c);
    if (restarts < 1) throw InputError("need at least one restart");
    const int E = static_cast<int>(g.edges.size()), V = static_cast<int>(g.vertices.size());
    auto inc = incidences(g);
    auto residual = [&](const std::vector<Vec3>& P) {
        Eigen::VectorXd r(3 * V);
        for (int v = 0; v < V; ++v) {
            Vec3 s = Vec3::Zero();
            for (auto [e, sg] : inc[v]) s += sg * c[e] * P[e];
            r.segment<3>(3 * v) = s;
        }
        return r;
    };

    FindResult res;
    res.restarts = restarts;
    std::vector<Configuration> classes;
    for (int run = 0; run < restarts; ++run) {
        std::mt19937_64 rng(mix(seed ^ mix(static_cast<uint64_t>(run) + 1)));
        std::normal_distribution<double> nd;
        std::vector<Vec3> P(E);
        for (auto& p : P) {
            do p = Vec3(nd(rng), nd(rng), nd(rng));
            while (p.norm() < 1e-6);
            p.normalize();
        }
        Eigen::VectorXd r = residual(P);
        double cost = r.squaredNorm(), lambda = 1e-3;
        // iterate past tol until no step improves, so converged solutions sit at machine precision
        for (int it = 0; it < 500 && r.cwiseAbs().maxCoeff() > 1e-15; ++it) {
            std::vector<Vec3> t1(E), t2(E);
            Eigen::MatrixXd J = Eigen::MatrixXd::Zero(3 * V, 2 * E);
            for (int e = 0; e < E; ++e) {
                Vec3 a = std::abs(P[e].x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
                t1[e] = (a - a.dot(P[e]) * P[e]).normalized();
                t2[e] = P[e].cross(t1[e]);
            }
            for (int v = 0; v < V; ++v)
                for (auto [e, sg] : inc[v]) {
                    J.block<3, 1>(3 * v, 2 * e) += sg * c[e] * t1[e];
                    J.block<3, 1>(3 * v, 2 * e + 1) += sg * c[e] * t2[e];
                }
            Eigen::MatrixXd A = J.transpose() * J;
            Eigen::VectorXd grad = J.transpose() * r;
            bool improved = false;
            for (int tries = 0; tries < 20 && !improved; ++tries) {
                Eigen::MatrixXd damped = A;
                damped.diagonal().array() += lambda;
                Eigen::VectorXd step = damped.ldlt().solve(-grad);
                std::vector<Vec3> trial(E);
                for (int e = 0; e < E; ++e) trial[e] = (P[e] + step(2 * e) * t1[e] + step(2 * e + 1) * t2[e]).normalized();
                Eigen::VectorXd rt = residual(trial);
                if (rt.squaredNorm() < cost) {
                    P = std::move(trial);
                    r = rt;
                    cost = rt.squaredNorm();
                    lambda = std::max(lambda / 3, 1e-12);
                    improved = true;
                } else {
                    lambda *= 4;
                }
            }
            if (!improved) break;
        }
        if (r.cwiseAbs().maxCoeff() >= tol) continue;
        ++res.converged;
        Configuration cf = make_configuration(g, c, P);
        bool found = false;
        for (size_t k = 0; k < classes.size() && !found; ++k)
            if (same_signature(classes[k].signature, cf.signature, 1e-6)) {
                ++res.hits[k];
                found = true;
            }
        if (!found) {
            classes.push_back(std::move(cf));
            res.hits.push_back(1);
        }
    }
    // -P is a critical configuration whenever P is
    size_t found_classes = classes.size();
    for (size_t k = 0; k < found_classes; ++k) {
        Configuration m = negate(g, c, classes[k]);
        bool present = false;
        for (auto& x : classes)
            if (same_signature(x.signature, m.signature, 1e-6)) present = true;
        if (!present) {
            res.warnings.push_back("negation of class " + std::to_string(k) + " was not hit and has been added");
            classes.push_back(std::move(m));
            res.hits.push_back(0);
        }
    }
    std::vector<size_t> order(classes.size());
    for (size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return signature_less(classes[a].signature, classes[b].signature); });
    for (size_t k : order) {
        res.configs.push_back(classes[k]);
    }
    std::vector<int> hits;
    for (size_t k : order) hits.push_back(res.hits[k]);
    res.hits = hits;
    if (res.configs.empty()) res.warnings.push_back("no restart converged below tol");
    else if (res.converged < restarts / 4) res.warnings.push_back("few restarts converged; classes may be missing");
    for (size_t k = 0; k < res.hits.size(); ++k)
        if (res.hits[k] == 1) res.warnings.push_back("class " + std::to_string(k) + " was hit only once; more restarts may reveal further classes");
    return res;
}

Eigen::Matrix3d r_form(const Graph& g, const std::vector<double>& w, const std::vector<Vec3>& P) {
    Eigen::Matrix3d r = Eigen::Matrix3d::Zero();
    for (size_t e = 0; e < g.edges.size(); ++e) r += w[e] * (Eigen::Matrix3d::Identity() - P[e] * P[e].transpose());
    return r;
}

RMat qP_form(const Graph& g, const std::vector<double>& w, const std::vector<Vec3>& P) {
    const int V = static_cast<int>(g.vertices.size());
    RMat m = RMat::Zero(3 * V, 3 * V);
    for (size_t e = 0; e < g.edges.size(); ++e) {
        int v = g.vertex_of(g.edges[e].left), x = g.vertex_of(g.edges[e].right);
        Eigen::Matrix3d b = w[e] * (Eigen::Matrix3d::Identity() - P[e] * P[e].transpose());
        m.block<3, 3>(3 * v, 3 * v) += b;
        m.block<3, 3>(3 * x, 3 * x) += b;
        m.block<3, 3>(3 * v, 3 * x) -= b;
        m.block<3, 3>(3 * x, 3 * v) -= b;
    }
    return m;
}

PairData pair_data(const Graph& g, const Configuration& P, const Configuration& Q) {
    PairData pd;
    auto inc = incidences(g);
    for (size_t v = 0; v < g.vertices.size(); ++v) {
        Eigen::Matrix3d A, B;
        Vec3 p1 = inc[v][0].sign * P.P[inc[v][0].edge], p2 = inc[v][1].sign * P.P[inc[v][1].edge];
        Vec3 q1 = inc[v][0].sign * Q.P[inc[v][0].edge], q2 = inc[v][1].sign * Q.P[inc[v][1].edge];
        A << p1, p2, p1.cross(p2);
        B << q1, q2, q1.cross(q2);
        if (std::abs(A.determinant()) < 1e-12) throw HypothesisError("vertex '" + g.vertices[v].id + "': configuration has rank < 2");
        Eigen::Matrix3d R = B * A.inverse();
        // project onto SO(3)
        Eigen::JacobiSVD<Eigen::Matrix3d> svd(R, Eigen::ComputeFullU | Eigen::ComputeFullV);
        R = svd.matrixU() * svd.matrixV().transpose();
        Eigen::Matrix2cd u = su2_from_rotation(R);
        Eigen::Matrix3d Ru = rotation_of(u);
        for (auto [e, sg] : inc[v]) pd.lift_residual = std::max(pd.lift_residual, (Ru * (sg * P.P[e]) - sg * Q.P[e]).norm());
        pd.lift.push_back(u);
    }
    for (size_t e = 0; e < g.edges.size(); ++e) {
        int v = g.vertex_of(g.edges[e].left), w = g.vertex_of(g.edges[e].right);
        Eigen::Vector2cd u = spinor(P.P[e]);
        Eigen::Vector2cd a = pd.lift[v] * u, b = pd.lift[w] * u;
        // hermitian product, antilinear in the second slot
        cdouble t = a(0) * std::conj(b(0)) + a(1) * std::conj(b(1));
        pd.phase_residual = std::max(pd.phase_residual, std::abs(std::abs(t) - 1.0));
        pd.tau.push_back(t);
        double th = std::fmod(std::arg(t), M_PI);
        if (th <= 0) th += M_PI;
        pd.theta.push_back(th);
    }
    return pd;
}

CMat qkappa_form(const Graph& g, const Coloring& c, const Configuration& Q, const PairData& pd, double kappa) {
    const int V = static_cast<int>(g.vertices.size());
    const cdouble I(0, 1);
    CMat m = CMat::Zero(3 * V, 3 * V);
    for (size_t e = 0; e < g.edges.size(); ++e) {
        int v = g.vertex_of(g.edges[e].left), w = g.vertex_of(g.edges[e].right);
        cdouble t = kappa * pd.tau[e];
        cdouble cf = (t * t + 1.0) / (t * t - 1.0);
        const Vec3& q = Q.P[e];
        Eigen::Matrix3cd b = (double(c[e]) * cf) * (Eigen::Matrix3d::Identity() - q * q.transpose()).cast<cdouble>();
        add_laplacian(m, v, w, b);
        m.block<3, 3>(3 * v, 3 * w) += (-I * double(c[e])) * skew(q).cast<cdouble>();
        m.block<3, 3>(3 * w, 3 * v) += (I * double(c[e])) * skew(q).cast<cdouble>();
    }
    return m;
}

CMat qpp_form(const Graph& g, const Coloring& c, const Configuration& Q, const PairData& pd) {
    const int V = static_cast<int>(g.vertices.size());
    const cdouble I(0, 1);
    CMat m = CMat::Zero(3 * V, 3 * V);
    for (size_t e = 0; e < g.edges.size(); ++e) {
        int v = g.vertex_of(g.edges[e].left), w = g.vertex_of(g.edges[e].right);
        cdouble cf = -I / std::tan(pd.theta[e]);
        const Vec3& q = Q.P[e];
        Eigen::Matrix3cd b = (double(c[e]) * cf) * (Eigen::Matrix3d::Identity() - q * q.transpose()).cast<cdouble>();
        add_laplacian(m, v, w, b);
        m.block<3, 3>(3 * v, 3 * w) += (-I * double(c[e])) * skew(q).cast<cdouble>();
        m.block<3, 3>(3 * w, 3 * v) += (I * double(c[e])) * skew(q).cast<cdouble>();
    }
    return m;
}

Forms build_forms(const Graph& g, const Coloring& c, const Configuration& P, const Configuration& Q, double kappa) {
    Forms f;
    f.r = r_form(g, weights(c), P.P);
    f.qP = qP_form(g, weights(c), P.P);
    if (!(kappa > 1.0)) throw DomainError("q^kappa needs kappa > 1");
    f.qk = qkappa_form(g, c, Q, pair_data(g, P, Q), kappa);
    return f;
}

int numerical_corank(const CMat& m, double rel_threshold) {
    auto ev = sorted_eigenvalues(m);
    double thr = rel_threshold * std::abs(ev.back());
    int k = 0;
    while (k < static_cast<int>(ev.size()) && std::abs(ev[k]) < thr) ++k;
    return k;
}

DetPrime detprime(const CMat& m, int kernel_dim, double rel_threshold) {
    DetPrime d;
    d.eigenvalues = sorted_eigenvalues(m);
    d.kernel_dim = kernel_dim;
    d.threshold = rel_threshold * std::abs(d.eigenvalues.back());
    int k = 0;
    while (k < static_cast<int>(d.eigenvalues.size()) && std::abs(d.eigenvalues[k]) < d.threshold) ++k;
    if (k != kernel_dim)
        throw HypothesisError("numerical kernel has dimension " + std::to_string(k) + ", expected " + std::to_string(kernel_dim));
    d.value = 1.0;
    d.sqrt = 1.0;
    for (size_t i = kernel_dim; i < d.eigenvalues.size(); ++i) {
        d.value *= d.eigenvalues[i];
        d.sqrt *= std::sqrt(d.eigenvalues[i]);
    }
    d.gap = kernel_dim == 0 ? INFINITY : std::abs(d.eigenvalues[kernel_dim]) / std::max(std::abs(d.eigenvalues[kernel_dim - 1]), 1e-300);
    return d;
}

DetPrimeLimit detprime_limit(const Graph& g, const Coloring& c, const Configuration& P, const Configuration& Q) {
    PairData pd = pair_data(g, P, Q);
    for (auto t : pd.tau)
        if (std::abs(t * t - 1.0) < 1e-6) throw HypothesisError("H2: a phase equals +-1; the pair belongs to the first sum");
    DetPrimeLimit out;
    std::vector<cdouble> roots;
    for (int j = 6; j <= 12; ++j) {
        double h = std::ldexp(1.0, -j);
        DetPrime d = detprime(qkappa_form(g, c, Q, pd, 1.0 + h), 3);
        out.sequence.push_back(d.value / (h * h * h));
        roots.push_back(d.sqrt / std::pow(h, 1.5));
    }
    // Richardson table with step ratio 2 and error expansion in powers of h
    auto extrapolate = [](std::vector<cdouble> t, cdouble& prev) {
        std::vector<cdouble> last;
        for (int m = 1; t.size() > 1 && m <= 3; ++m) {
            std::vector<cdouble> n;
            double f = std::ldexp(1.0, m);
            for (size_t i = 1; i < t.size(); ++i) n.push_back((f * t[i] - t[i - 1]) / (f - 1));
            last = t;
            t = n;
        }
        prev = t.size() > 1 ? t[t.size() - 2] : last.back();
        return t.back();
    };
    cdouble prev_v, prev_s;
    out.value = extrapolate(out.sequence, prev_v);
    out.sqrt = extrapolate(roots, prev_s);
    out.error = std::abs(out.value - prev_v) / std::abs(out.value);
    if (!(out.error <= 1e-4)) throw NumericalError("det' extrapolation did not settle (relative spread " + std::to_string(out.error) + ")");
    return out;
}

int h1_kernel_dim(const Graph& g, const std::vector<Vec3>& P, double rel_threshold) {
    RMat q = qP_form(g, std::vector<double>(g.edges.size(), 1.0), P);
    Eigen::SelfAdjointEigenSolver<RMat> es(q, Eigen::EigenvaluesOnly);
    auto ev = es.eigenvalues();
    double thr = rel_threshold * ev.cwiseAbs().maxCoeff();
    int k = 0;
    for (int i = 0; i < ev.size(); ++i)
        if (std::abs(ev(i)) < thr) ++k;
    return k;
}

HypothesisReport check_hypotheses(const Graph& g, const Coloring& c, const std::vector<Configuration>& configs) {
    HypothesisReport r;
    for (size_t i = 0; i < configs.size(); ++i) {
        RMat q = qP_form(g, weights(c), configs[i].P);
        Eigen::SelfAdjointEigenSolver<RMat> es(q, Eigen::EigenvaluesOnly);
        Eigen::VectorXd ev = es.eigenvalues().cwiseAbs();
        std::sort(ev.data(), ev.data() + ev.size());
        double thr = 1e-8 * ev(ev.size() - 1);
        int k = 0;
        while (k < ev.size() && ev(k) < thr) ++k;
        r.qP_kernel.push_back(k);
        r.qP_gap.push_back(k > 0 && k < ev.size() ? ev(k) / std::max(ev(k - 1), 1e-300) : INFINITY);
        if (k != 3) {
            r.h1 = false;
            r.witnesses.push_back("H1: q_P of configuration " + std::to_string(i) + " has kernel dimension " + std::to_string(k));
        }
    }
    for (size_t i = 0; i < configs.size(); ++i)
        for (size_t j = 0; j < configs.size(); ++j) {
            if (i == j) continue;
            PairData pd = pair_data(g, configs[i], configs[j]);
            double md = INFINITY;
            for (auto t : pd.tau) md = std::min(md, std::abs(t * t - 1.0));
            r.pairs.push_back({static_cast<int>(i), static_cast<int>(j)});
            r.min_tau_distance.push_back(md);
            if (md < 1e-6) {
                r.h2 = false;
                r.witnesses.push_back("H2: pair (" + std::to_string(i) + "," + std::to_string(j) + ") has a phase equal to +-1");
                r.qk_kernel.push_back(-1);
                r.qpp_kernel.push_back(-1);
                continue;
            }
            r.qk_kernel.push_back(numerical_corank(qkappa_form(g, c, configs[j], pd, 1.0 + std::ldexp(1.0, -8))));
            int k6 = numerical_corank(qpp_form(g, c, configs[j], pd));
            r.qpp_kernel.push_back(k6);
            if (k6 != 6) {
                r.h3 = false;
                r.witnesses.push_back("H3: pair (" + std::to_string(i) + "," + std::to_string(j) + ") has corank " + std::to_string(k6));
            }
        }
    return r;
}

namespace {

cdouble pair_value(int N, double det_r, const std::vector<double>& theta, cdouble sqrt_dp, const Coloring& c, int k) {
    double phase = 0, sines = 1;
    for (size_t e = 0; e < theta.size(); ++e) {
        phase += (double(k) * c[e] + 1) * theta[e];
        sines *= std::sin(theta[e]);
    }
    cdouble iN = std::pow(cdouble(0, 1), N);
    return iN * std::sqrt(det_r) * std::polar(1.0, phase) / (sqrt_dp * sines);
}

int find_negation(const Graph& g, const Coloring& c, const std::vector<Configuration>& cs, size_t i) {
    Configuration m = negate(g, c, cs[i]);
    for (size_t j = 0; j < cs.size(); ++j)
        if (same_signature(cs[j].signature, m.signature, 1e-6)) return static_cast<int>(j);
    return -1;
}

}  // namespace

AsymptoticData prepare_asymptotics(const Graph& g, const Coloring& c, const std::vector<Configuration>& configs) {
    require_strict_triangles(g, c);
    if (configs.empty()) throw HypothesisError("no critical configuration available");
    AsymptoticData d;
    d.N = static_cast<int>(g.vertices.size()) / 2;
    d.configs = configs;
    d.report = check_hypotheses(g, c, configs);
    if (!d.report.ok()) {
        std::string names;
        if (!d.report.h1) names += " H1";
        if (!d.report.h2) names += " H2";
        if (!d.report.h3) names += " H3";
        throw HypothesisError("hypotheses failed:" + names);
    }
    for (auto& p : configs) {
        d.det_r.push_back(r_form(g, weights(c), p.P).determinant());
        d.detprime_qP.push_back(detprime(qP_form(g, weights(c), p.P).cast<cdouble>(), 3).value.real());
    }
    std::vector<int> neg;
    for (size_t i = 0; i < configs.size(); ++i) {
        neg.push_back(find_negation(g, c, configs, i));
        if (neg.back() < 0) throw HypothesisError("configuration set is not closed under negation");
    }
    for (size_t i = 0; i < configs.size(); ++i)
        for (size_t j = 0; j < configs.size(); ++j) {
            if (i == j) continue;
            std::pair<int, int> self{static_cast<int>(i), static_cast<int>(j)}, mirror{neg[i], neg[j]};
            if (mirror < self) continue;  // the class is represented by its smaller member
            PairTerm t;
            t.p = self.first;
            t.q = self.second;
            DetPrimeLimit lim = detprime_limit(g, c, configs[i], configs[j]);
            t.sqrt_detprime = lim.sqrt;
            t.detprime_error = lim.error;
            t.theta = pair_data(g, configs[i], configs[j]).theta;
            if (mirror != self) {
                PairData pm = pair_data(g, configs[mirror.first], configs[mirror.second]);
                DetPrimeLimit lm = detprime_limit(g, c, configs[mirror.first], configs[mirror.second]);
                cdouble a = pair_value(d.N, d.det_r[i], t.theta, t.sqrt_detprime, c, 1);
                cdouble b = pair_value(d.N, d.det_r[mirror.first], pm.theta, lm.sqrt, c, 1);
                t.conjugation_defect = std::abs(b - std::conj(a)) / std::abs(a);
            }
            d.pairs.push_back(std::move(t));
        }
    return d;
}

AsymptoticEstimate asymptotic_estimate(const AsymptoticData& d, const Coloring& c, int k) {
    if (k < 1) throw InputError("k must be positive");
    AsymptoticEstimate out;
    out.k = k;
    out.prefactor = std::pow(2.0 * d.N, 1.5) / std::pow(M_PI * double(k) * k * k, d.N - 1);
    for (size_t i = 0; i < d.configs.size(); ++i) out.first_sum += std::sqrt(d.det_r[i]) / std::sqrt(d.detprime_qP[i]);
    for (auto& t : d.pairs) {
        double v = 2 * pair_value(d.N, d.det_r[t.p], t.theta, t.sqrt_detprime, c, k).real();
        out.pair_terms.push_back(v);
        out.second_sum += v;
    }
    out.value = out.prefactor * (out.first_sum + out.second_sum);
    return out;
}

}  // namespace spinnet
