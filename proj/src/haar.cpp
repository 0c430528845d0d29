#include "spinnet/haar.hpp"

#include "spinnet/errors.hpp"
#include "spinnet/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace spinnet {

Mat2D SU2Sample::matrix() const {
    cd alpha(q[0], q[1]), beta(q[2], q[3]);
    return {alpha, -std::conj(beta), beta, std::conj(alpha)};
}

double SU2Sample::theta() const { return std::acos(std::clamp(q[0], -1.0, 1.0)); }

SU2Sample sample_haar(Rng& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    SU2Sample s;
    double r2 = 0;
    do {
        r2 = 0;
        for (double& x : s.q) {
            x = n(rng);
            r2 += x * x;
        }
    } while (r2 < 1e-300);
    double r = std::sqrt(r2);
    for (double& x : s.q) x /= r;
    return s;
}

std::array<cd, 2> sample_s3(Rng& rng) {
    SU2Sample s = sample_haar(rng);
    return {cd(s.q[0], s.q[1]), cd(s.q[2], s.q[3])};
}

double char_value(int n, double theta) {
    if (n < 0) throw InputError("character index must be non-negative");
    double s = std::sin(theta);
    if (std::abs(s) < 1e-7) {
        // limit: (n+1) at theta = 0, (-1)^n (n+1) at theta = pi
        bool at_pi = std::cos(theta) < 0;
        return (at_pi && n % 2) ? -(n + 1.0) : (n + 1.0);
    }
    return std::sin((n + 1) * theta) / s;
}

cd char_value(int n, const Mat2D& m) {
    if (n < 0) throw InputError("character index must be non-negative");
    cd t = m.a + m.d, u0 = 1.0, u1 = t;
    if (n == 0) return u0;
    for (int k = 1; k < n; ++k) {
        cd u2 = t * u1 - u0;
        u0 = u1;
        u1 = u2;
    }
    return u1;
}

namespace {

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

struct Moments {
    long long n = 0;
    double mean_re = 0, m2_re = 0, mean_im = 0, m2_im = 0;

    void add(cd x) {
        ++n;
        double d = x.real() - mean_re;
        mean_re += d / n;
        m2_re += d * (x.real() - mean_re);
        d = x.imag() - mean_im;
        mean_im += d / n;
        m2_im += d * (x.imag() - mean_im);
    }
    void merge(const Moments& o) {
        if (o.n == 0) return;
        long long t = n + o.n;
        double d = o.mean_re - mean_re;
        mean_re += d * o.n / t;
        m2_re += o.m2_re + d * d * double(n) * o.n / t;
        d = o.mean_im - mean_im;
        mean_im += d * o.n / t;
        m2_im += o.m2_im + d * d * double(n) * o.n / t;
        n = t;
    }
};

Mat2D dagger(const Mat2D& m) { return {std::conj(m.a), std::conj(m.c), std::conj(m.b), std::conj(m.d)}; }

}  // namespace

int default_workers() {
    if (const char* s = std::getenv("SPINNET_WORKERS")) {
        int w = std::atoi(s);
        if (w >= 1) return w;
    }
    return 1;
}

MCEstimate run_mc(long long samples, uint64_t seed, int workers, const std::function<cd(Rng&)>& integrand) {
    if (samples < 2) throw InputError("need at least two samples");
    if (workers < 1) throw InputError("need at least one worker");
    std::vector<Moments> parts(workers);
    auto job = [&](int i) {
        long long n = samples / workers + (i < samples % workers ? 1 : 0);
        Rng rng(splitmix64(seed ^ splitmix64(static_cast<uint64_t>(i) + 1)));
        Moments m;
        for (long long k = 0; k < n; ++k) m.add(integrand(rng));
        parts[i] = m;
    };
    if (workers == 1) {
        job(0);
    } else {
        std::vector<std::thread> th;
        for (int i = 0; i < workers; ++i) th.emplace_back(job, i);
        for (auto& t : th) t.join();
    }
    Moments total;
    for (auto& p : parts) total.merge(p);
    MCEstimate e;
    e.count = total.n;
    e.seed = seed;
    e.workers = workers;
    e.mean = total.mean_re;
    e.mean_im = total.mean_im;
    double n = static_cast<double>(total.n);
    e.stderr_ = std::sqrt(total.m2_re / (n - 1) / n);
    e.stderr_im = std::sqrt(total.m2_im / (n - 1) / n);
    return e;
}

std::vector<Mat2D> float_holonomy(const Graph& g, const Holonomy& psi) {
    std::vector<Mat2D> m;
    for (int h = 0; h < g.num_half(); ++h) m.push_back(psi.float_at(h));
    return m;
}

namespace {

// psi_{e,v} g_v psi_{e,v}^{-1} psi_{e,w} g_w^{-1} psi_{e,w}^{-1}, v the left endpoint.
Mat2D edge_matrix(const Graph& g, int e, const std::vector<Mat2D>& hol, const std::vector<Mat2D>& gv) {
    int l = g.edges[e].left, r = g.edges[e].right;
    const Mat2D& a = hol[l];
    const Mat2D& b = hol[r];
    return a * gv[g.vertex_of(l)] * a.inverse() * b * dagger(gv[g.vertex_of(r)]) * b.inverse();
}

std::vector<Mat2D> sample_vertices(const Graph& g, Rng& rng) {
    std::vector<Mat2D> gv;
    for (size_t v = 0; v < g.vertices.size(); ++v) gv.push_back(sample_haar(rng).matrix());
    return gv;
}

}  // namespace

MCEstimate mc_bracket(const Graph& g, const Coloring& c, const Holonomy& psi, long long samples, uint64_t seed, int workers) {
    if (c.size() != g.edges.size()) throw InputError("coloring does not cover every edge");
    auto hol = float_holonomy(g, psi);
    return run_mc(samples, seed, workers, [&](Rng& rng) {
        auto gv = sample_vertices(g, rng);
        cd p = 1.0;
        for (size_t e = 0; e < g.edges.size(); ++e) p *= char_value(c[e], edge_matrix(g, static_cast<int>(e), hol, gv));
        return p;
    });
}

MCEstimate mc_W_point(const Graph& g, const Holonomy& psi, const std::vector<double>& y, long long samples, uint64_t seed, int workers) {
    if (y.size() != g.edges.size()) throw InputError("need one y value per edge");
    for (double x : y)
        if (!(std::abs(x) < 1.0)) throw DomainError("|y_e| must be < 1");
    auto hol = float_holonomy(g, psi);
    return run_mc(samples, seed, workers, [&](Rng& rng) {
        auto gv = sample_vertices(g, rng);
        cd p = 1.0;
        for (size_t e = 0; e < g.edges.size(); ++e) {
            Mat2D m = edge_matrix(g, static_cast<int>(e), hol, gv);
            // det(1 - y M) = 1 - y tr M + y^2 det M
            cd d = 1.0 - y[e] * (m.a + m.d) + y[e] * y[e] * m.det();
            p /= d;
        }
        return p;
    });
}

double orthogonality_target(const Graph& g, const Coloring& c) {
    if (!is_admissible(g, c)) return 0;
    double t = vertex_theta_product(g, c).get_d();
    for (int x : c) t /= (x + 1);
    return t;
}

MCEstimate mc_orthogonality(const Graph& g, const Coloring& c, long long samples, uint64_t seed, int workers) {
    if (c.size() != g.edges.size()) throw InputError("coloring does not cover every edge");
    // |<Gamma,c,psi>|^2 = prod_v <v> [Gamma,c,psi], averaged over Haar holonomies psi
    double pv = is_admissible(g, c) ? vertex_theta_product(g, c).get_d() : 0.0;
    return run_mc(samples, seed, workers, [&](Rng& rng) {
        std::vector<Mat2D> hol;
        for (int h = 0; h < g.num_half(); ++h) hol.push_back(sample_haar(rng).matrix());
        auto gv = sample_vertices(g, rng);
        cd p = pv;
        for (size_t e = 0; e < g.edges.size(); ++e) p *= char_value(c[e], edge_matrix(g, static_cast<int>(e), hol, gv));
        return p;
    });
}

double theta_W_target(const std::vector<double>& y) {
    if (y.size() != 3) throw InputError("theta graph has three edges");
    return 1.0 / ((1 - y[0] * y[1]) * (1 - y[1] * y[2]) * (1 - y[0] * y[2]));
}

MCEstimate mc_prodtrace(int c, const Mat2D& a, const Mat2D& b, long long samples, uint64_t seed, int workers) {
    return run_mc(samples, seed, workers, [&](Rng& rng) {
        Mat2D g = sample_haar(rng).matrix();
        return char_value(c, a * g) * char_value(c, b * g);
    });
}

MCEstimate mc_coherent(int n, const Mat2D& g, long long samples, uint64_t seed, int workers) {
    return run_mc(samples, seed, workers, [&](Rng& rng) {
        auto v = sample_s3(rng);
        cd gv0 = g.a * v[0] + g.b * v[1], gv1 = g.c * v[0] + g.d * v[1];
        cd h = std::conj(v[0]) * gv0 + std::conj(v[1]) * gv1;
        return double(n + 1) * std::pow(h, n);
    });
}

MCEstimate mc_char_moment(int power, long long samples, uint64_t seed, int workers) {
    return run_mc(samples, seed, workers, [&](Rng& rng) { return cd(std::pow(char_value(1, sample_haar(rng).theta()), power)); });
}

}  // namespace spinnet
