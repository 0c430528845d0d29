#include "spinnet/evaluator.hpp"

#include "spinnet/errors.hpp"

#include <algorithm>
#include <numeric>

namespace spinnet {

SpacePtr zw_space(const Graph& g) {
    std::vector<std::string> names;
    for (int h = 0; h < g.num_half(); ++h) {
        names.push_back("z_" + g.half_ids[h]);
        names.push_back("w_" + g.half_ids[h]);
    }
    return make_space(std::move(names));
}

namespace {

CQ i_pow(int n) {
    switch (((n % 4) + 4) % 4) {
        case 0: return CQ(1);
        case 1: return CQ::I();
        case 2: return CQ(-1);
        default: return -CQ::I();
    }
}

int color_at(const Graph& g, const Coloring& c, int h) { return c[g.edge_of(h)]; }

// i^s (z1 w2 - z2 w1)^x (z2 w3 - z3 w2)^y (z1 w3 - z3 w1)^z in the local space
// (z1,w1,z2,w2,z3,w3) after (z_k,w_k) -> M_k (z_k,w_k).
MPoly local_vertex_poly(const SpacePtr& sp, const int col[3], const Mat2Q m[3]) {
    std::vector<MPoly> Z, W;
    for (int k = 0; k < 3; ++k) {
        MPoly z = MPoly::variable(sp, 2 * k), w = MPoly::variable(sp, 2 * k + 1);
        Z.push_back(z * m[k].a + w * m[k].b);
        W.push_back(z * m[k].c + w * m[k].d);
    }
    auto br = [&](int i, int j) { return Z[i] * W[j] - Z[j] * W[i]; };
    int x = (col[0] + col[1] - col[2]) / 2, y = (col[1] + col[2] - col[0]) / 2, z = (col[0] + col[2] - col[1]) / 2;
    MPoly p = pow(br(0, 1), x) * pow(br(1, 2), y) * pow(br(0, 2), z);
    return p * i_pow(x + y + z);
}

std::vector<Mat2Q> inverse_holonomies(const Graph& g, int v, const Holonomy& psi) {
    std::vector<Mat2Q> m;
    for (int h : g.vertices[v].half) m.push_back(psi.exact_at(h).inverse());
    return m;
}

void require_exact(const Holonomy& psi) {
    if (psi.regime == Regime::Float) throw RegimeError("exact evaluation needs an exact holonomy; use the Monte-Carlo estimators for floating-point input");
}

struct Tensor {
    std::vector<int> legs;  // half-edges
    std::vector<int> dims;
    std::vector<CQ> data;   // row-major over legs
};

Tensor vertex_tensor(const Graph& g, int v, const Coloring& c, const Holonomy& psi) {
    static const SpacePtr local = make_space({"z1", "w1", "z2", "w2", "z3", "w3"});
    int col[3];
    for (int k = 0; k < 3; ++k) col[k] = color_at(g, c, g.vertices[v].half[k]);
    auto minv = inverse_holonomies(g, v, psi);
    Mat2Q m[3] = {minv[0], minv[1], minv[2]};
    MPoly p = local_vertex_poly(local, col, m);
    Tensor t;
    t.legs.assign(g.vertices[v].half.begin(), g.vertices[v].half.end());
    t.dims = {col[0] + 1, col[1] + 1, col[2] + 1};
    t.data.assign(size_t(t.dims[0]) * t.dims[1] * t.dims[2], CQ(0));
    for (auto& [mono, x] : p.terms) {
        for (int k = 0; k < 3; ++k)
            if (mono.e[2 * k] + mono.e[2 * k + 1] != col[k]) throw std::logic_error("vertex polynomial is not multi-homogeneous");
        size_t idx = (size_t(mono.e[0]) * t.dims[1] + mono.e[2]) * t.dims[2] + mono.e[4];
        t.data[idx] = x;
    }
    return t;
}

// Closed form of the normalized edge operator on z_l^k w_l^(c-k) z_r^(c-k) w_r^k.
std::vector<CQ> edge_weights(int c) {
    std::vector<CQ> w;
    CQ ic = i_pow(c);
    for (int k = 0; k <= c; ++k) {
        Rational x = Rational(1) / binomial(c, k);
        if ((c - k) % 2) x = -x;
        w.push_back(ic * CQ(x));
    }
    return w;
}

std::vector<size_t> strides(const std::vector<int>& dims) {
    std::vector<size_t> s(dims.size(), 1);
    for (int k = static_cast<int>(dims.size()) - 2; k >= 0; --k) s[k] = s[k + 1] * dims[k + 1];
    return s;
}

// Contract every edge joining a and b (a != b) or, if b is null, every edge internal to a.
Tensor contract(const Graph& g, const Coloring& c, const Tensor& a, const Tensor* b) {
    struct Link {
        int pa, pb;  // leg positions; for a trace both are in a
        bool a_left; // the leg in a (first leg for a trace) is the left half-edge
        int color;
    };
    std::vector<Link> links;
    std::vector<int> free_a, free_b;
    std::vector<bool> used_a(a.legs.size(), false), used_b(b ? b->legs.size() : 0, false);
    for (size_t i = 0; i < a.legs.size(); ++i) {
        if (used_a[i]) continue;
        int p = g.partner(a.legs[i]);
        if (b) {
            auto it = std::find(b->legs.begin(), b->legs.end(), p);
            if (it != b->legs.end()) {
                int j = static_cast<int>(it - b->legs.begin());
                links.push_back({static_cast<int>(i), j, g.is_left(a.legs[i]), color_at(g, c, p)});
                used_a[i] = true;
                used_b[j] = true;
            }
        } else {
            auto it = std::find(a.legs.begin() + i + 1, a.legs.end(), p);
            if (it != a.legs.end()) {
                int j = static_cast<int>(it - a.legs.begin());
                links.push_back({static_cast<int>(i), j, g.is_left(a.legs[i]), color_at(g, c, p)});
                used_a[i] = used_a[j] = true;
            }
        }
    }
    for (size_t i = 0; i < a.legs.size(); ++i)
        if (!used_a[i]) free_a.push_back(static_cast<int>(i));
    if (b)
        for (size_t j = 0; j < b->legs.size(); ++j)
            if (!used_b[j]) free_b.push_back(static_cast<int>(j));

    Tensor r;
    for (int i : free_a) {
        r.legs.push_back(a.legs[i]);
        r.dims.push_back(a.dims[i]);
    }
    if (b)
        for (int j : free_b) {
            r.legs.push_back(b->legs[j]);
            r.dims.push_back(b->dims[j]);
        }
    size_t rsize = 1;
    for (int d : r.dims) rsize *= d;
    r.data.assign(rsize, CQ(0));

    std::vector<std::vector<CQ>> weights;
    size_t ssize = 1, fa_size = 1, fb_size = 1;
    for (auto& l : links) {
        weights.push_back(edge_weights(l.color));
        ssize *= l.color + 1;
    }
    for (int i : free_a) fa_size *= a.dims[i];
    if (b)
        for (int j : free_b) fb_size *= b->dims[j];

    auto sa = strides(a.dims);
    std::vector<int> idx(a.legs.size());

    if (!b) {
        // trace
        for (size_t flat = 0; flat < a.data.size(); ++flat) {
            if (a.data[flat].is_zero()) continue;
            size_t rem = flat;
            for (size_t k = 0; k < a.legs.size(); ++k) {
                idx[k] = static_cast<int>(rem / sa[k]);
                rem %= sa[k];
            }
            CQ w = a.data[flat];
            bool ok = true;
            for (size_t t = 0; t < links.size() && ok; ++t) {
                int ka = idx[links[t].pa], kb = idx[links[t].pb];
                if (ka + kb != links[t].color) ok = false;
                else w *= weights[t][links[t].a_left ? ka : kb];
            }
            if (!ok) continue;
            size_t ri = 0;
            for (int i : free_a) ri = ri * a.dims[i] + idx[i];
            r.data[ri] += w;
        }
        return r;
    }

    // A as (free_a x shared) with weights folded in, B as (shared x free_b)
    std::vector<CQ> am(fa_size * ssize, CQ(0)), bm(ssize * fb_size, CQ(0));
    std::vector<char> a_nz(fa_size * ssize, 0);
    for (size_t flat = 0; flat < a.data.size(); ++flat) {
        if (a.data[flat].is_zero()) continue;
        size_t rem = flat;
        for (size_t k = 0; k < a.legs.size(); ++k) {
            idx[k] = static_cast<int>(rem / sa[k]);
            rem %= sa[k];
        }
        size_t fi = 0, si = 0;
        for (int i : free_a) fi = fi * a.dims[i] + idx[i];
        CQ w = a.data[flat];
        for (size_t t = 0; t < links.size(); ++t) {
            int ka = idx[links[t].pa];
            si = si * (links[t].color + 1) + ka;
            w *= weights[t][links[t].a_left ? ka : links[t].color - ka];
        }
        am[fi * ssize + si] = w;
        a_nz[fi * ssize + si] = 1;
    }
    auto sb = strides(b->dims);
    std::vector<int> jdx(b->legs.size());
    for (size_t flat = 0; flat < b->data.size(); ++flat) {
        if (b->data[flat].is_zero()) continue;
        size_t rem = flat;
        for (size_t k = 0; k < b->legs.size(); ++k) {
            jdx[k] = static_cast<int>(rem / sb[k]);
            rem %= sb[k];
        }
        size_t fj = 0, si = 0;
        for (int j : free_b) fj = fj * b->dims[j] + jdx[j];
        for (auto& l : links) si = si * (l.color + 1) + (l.color - jdx[l.pb]);
        bm[si * fb_size + fj] = b->data[flat];
    }
    CQ t;
    for (size_t fi = 0; fi < fa_size; ++fi)
        for (size_t si = 0; si < ssize; ++si) {
            if (!a_nz[fi * ssize + si]) continue;
            const CQ& x = am[fi * ssize + si];
            const CQ* brow = &bm[si * fb_size];
            CQ* rrow = &r.data[fi * fb_size];
            for (size_t fj = 0; fj < fb_size; ++fj) {
                if (brow[fj].is_zero()) continue;
                t = x;
                t *= brow[fj];
                rrow[fj] += t;
            }
        }
    return r;
}

bool shares_edge(const Graph& g, const Tensor& a, const Tensor& b) {
    for (int h : a.legs)
        if (std::find(b.legs.begin(), b.legs.end(), g.partner(h)) != b.legs.end()) return true;
    return false;
}

size_t merged_size(const Graph& g, const Tensor& a, const Tensor& b) {
    size_t s = 1;
    for (size_t i = 0; i < a.legs.size(); ++i)
        if (std::find(b.legs.begin(), b.legs.end(), g.partner(a.legs[i])) == b.legs.end()) s *= a.dims[i];
    for (size_t j = 0; j < b.legs.size(); ++j)
        if (std::find(a.legs.begin(), a.legs.end(), g.partner(b.legs[j])) == a.legs.end()) s *= b.dims[j];
    return s;
}

}  // namespace

MPoly vertex_polynomial(const Graph& g, int v, const Coloring& c, const Holonomy& psi) {
    require_exact(psi);
    SpacePtr sp = zw_space(g);
    static const SpacePtr local = make_space({"z1", "w1", "z2", "w2", "z3", "w3"});
    int col[3];
    for (int k = 0; k < 3; ++k) col[k] = color_at(g, c, g.vertices[v].half[k]);
    if ((col[0] + col[1] + col[2]) % 2 || col[0] > col[1] + col[2] || col[1] > col[0] + col[2] || col[2] > col[0] + col[1])
        throw AdmissibilityError("vertex '" + g.vertices[v].id + "' is not admissible");
    auto minv = inverse_holonomies(g, v, psi);
    Mat2Q m[3] = {minv[0], minv[1], minv[2]};
    MPoly p = local_vertex_poly(local, col, m);
    MPoly out(sp);
    for (auto& [mono, x] : p.terms) {
        Mono gm;
        for (int k = 0; k < 3; ++k) {
            int h = g.vertices[v].half[k];
            gm.e[2 * h] = mono.e[2 * k];
            gm.e[2 * h + 1] = mono.e[2 * k + 1];
        }
        out.add_term(gm, x);
    }
    return out;
}

CQ eval_spin_network(const Graph& g, const Coloring& c, const Holonomy& psi) {
    require_exact(psi);
    if (!is_admissible(g, c)) return CQ(0);
    std::vector<Tensor> ts;
    for (int v = 0; v < static_cast<int>(g.vertices.size()); ++v) {
        Tensor t = vertex_tensor(g, v, c, psi);
        bool loop = false;
        for (int h : t.legs)
            if (std::find(t.legs.begin(), t.legs.end(), g.partner(h)) != t.legs.end()) loop = true;
        ts.push_back(loop ? contract(g, c, t, nullptr) : std::move(t));
    }
    while (ts.size() > 1) {
        size_t bi = 0, bj = 0, best = SIZE_MAX;
        for (size_t i = 0; i < ts.size(); ++i)
            for (size_t j = i + 1; j < ts.size(); ++j) {
                if (!shares_edge(g, ts[i], ts[j])) continue;
                size_t s = merged_size(g, ts[i], ts[j]);
                if (s < best) {
                    best = s;
                    bi = i;
                    bj = j;
                }
            }
        if (best == SIZE_MAX) throw std::logic_error("disconnected tensor network");
        Tensor r = contract(g, c, ts[bi], &ts[bj]);
        ts.erase(ts.begin() + bj);
        ts[bi] = std::move(r);
    }
    if (!ts[0].legs.empty() || ts[0].data.size() != 1) throw std::logic_error("contraction left open legs");
    CQ v = ts[0].data[0];
    if (crossing_sign(g, c) < 0) v = -v;
    return v;
}

CQ eval_spin_network_symbolic(const Graph& g, const Coloring& c, const Holonomy& psi) {
    require_exact(psi);
    if (!is_admissible(g, c)) return CQ(0);
    SpacePtr sp = zw_space(g);
    MPoly acc = MPoly::constant(sp, CQ(1));
    std::vector<bool> in(g.vertices.size(), false), done(g.edges.size(), false);
    for (int v = 0; v < static_cast<int>(g.vertices.size()); ++v) {
        acc = acc * vertex_polynomial(g, v, c, psi);
        in[v] = true;
        for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
            if (done[e] || !in[g.vertex_of(g.edges[e].left)] || !in[g.vertex_of(g.edges[e].right)]) continue;
            int l = g.edges[e].left, r = g.edges[e].right;
            acc = apply_edge_operator(acc, 2 * l, 2 * l + 1, 2 * r, 2 * r + 1, c[e]) * i_pow(c[e]);
            done[e] = true;
        }
    }
    CQ v = acc.constant_term();
    if (crossing_sign(g, c) < 0) v = -v;
    return v;
}

Rational theta_value(int a, int b, int c) {
    if (a < 0 || b < 0 || c < 0 || (a + b + c) % 2 || a > b + c || b > a + c || c > a + b)
        throw AdmissibilityError("theta triple (" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + ") is not admissible");
    int s = (a + b + c) / 2;
    return factorial(s + 1) * factorial(s - a) * factorial(s - b) * factorial(s - c) / (factorial(a) * factorial(b) * factorial(c));
}

CQ renormalize(const Graph& g, const Coloring& c, const CQ& v) {
    InternalColoring a = internal_coloring(g, c);
    Rational f = 1;
    for (int x : c) f *= factorial(x);
    for (int x : a) f /= factorial(x);
    return v * CQ(f);
}

CQ unrenormalize(const Graph& g, const Coloring& c, const CQ& v) {
    InternalColoring a = internal_coloring(g, c);
    Rational f = 1;
    for (int x : a) f *= factorial(x);
    for (int x : c) f /= factorial(x);
    return v * CQ(f);
}

Rational vertex_theta_product(const Graph& g, const Coloring& c) {
    Rational p = 1;
    for (auto& v : g.vertices) p *= theta_value(color_at(g, c, v.half[0]), color_at(g, c, v.half[1]), color_at(g, c, v.half[2]));
    return p;
}

Rational bracket_square(const Graph& g, const Coloring& c, const Holonomy& psi) {
    if (!is_admissible(g, c)) return 0;
    CQ v = eval_spin_network(g, c, psi);
    return v.norm2() / vertex_theta_product(g, c);
}

Holonomy gauge_transform(const Graph& g, const Holonomy& psi, const Gauge& gauge) {
    require_exact(psi);
    if (gauge.vertex.size() != g.vertices.size() || gauge.edge.size() != g.edges.size()) throw InputError("gauge element has the wrong shape");
    for (auto* set : {&gauge.vertex, &gauge.edge})
        for (auto& m : *set)
            if (!m.det().is_one()) throw InputError("gauge matrices must have determinant 1");
    std::vector<Mat2Q> out;
    for (int h = 0; h < g.num_half(); ++h)
        out.push_back(gauge.edge[g.edge_of(h)] * psi.exact_at(h) * gauge.vertex[g.vertex_of(h)].inverse());
    return make_exact_holonomy(std::move(out));
}

}  // namespace spinnet
