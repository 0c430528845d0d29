#include "spinnet/series.hpp"

#include "spinnet/errors.hpp"
#include "spinnet/evaluator.hpp"

#include <bit>
#include <cstdint>
#include <functional>

namespace spinnet {

SpacePtr angle_space(const Graph& g) {
    std::vector<std::string> names;
    for (auto& a : g.angles()) names.push_back("X_" + g.half_ids[a.first] + "_" + g.half_ids[a.second]);
    return make_space(std::move(names));
}

Mono angle_monomial(const Graph& g, const InternalColoring& a) {
    if (a.size() != g.angles().size()) throw InputError("internal coloring has the wrong length");
    Mono m;
    for (size_t k = 0; k < a.size(); ++k) {
        if (a[k] < 0 || a[k] > 255) throw InputError("angle exponent out of range");
        m.e[k] = static_cast<uint8_t>(a[k]);
    }
    return m;
}

PolyMatrix PQMatrices::P() const {
    PolyMatrix p(full.size(), std::vector<MPoly>(full.size(), MPoly(space)));
    for (size_t i = 0; i < full.size(); ++i)
        for (size_t j = 0; j < full.size(); ++j) {
            CQ c = full[i][j].constant_term();
            if (!c.is_zero()) p[i][j] = MPoly::constant(space, c);
        }
    return p;
}

PolyMatrix PQMatrices::Q() const {
    PolyMatrix q = full;
    auto p = P();
    for (size_t i = 0; i < full.size(); ++i)
        for (size_t j = 0; j < full.size(); ++j) q[i][j] -= p[i][j];
    return q;
}

PQMatrices build_pq(const Graph& g, const Holonomy& psi) {
    if (psi.regime == Regime::Float) throw RegimeError("build_pq needs an exact holonomy");
    SpacePtr sp = angle_space(g);
    const size_t n = 2 * g.num_half();
    PQMatrices out{sp, PolyMatrix(n, std::vector<MPoly>(n, MPoly(sp)))};
    // x_g^T K x_h, times i, added symmetrically
    auto add = [&](int gh, int hh, const Mat2Q& k, const MPoly& factor) {
        const CQ kk[2][2] = {{k.a, k.b}, {k.c, k.d}};
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                if (kk[a][b].is_zero()) continue;
                MPoly v = factor * (kk[a][b] * CQ::I());
                out.full[2 * gh + a][2 * hh + b] += v;
                out.full[2 * hh + b][2 * gh + a] += v;
            }
    };
    const Mat2Q J{CQ(0), CQ(1), CQ(-1), CQ(0)};
    MPoly one = MPoly::constant(sp, CQ(1));
    for (auto& e : g.edges) add(e.left, e.right, J, one);
    const auto& an = g.angles();
    for (size_t k = 0; k < an.size(); ++k) {
        Mat2Q K = J;
        if (!psi.is_trivial()) K = psi.exact_at(an[k].first).inverse().transpose() * J * psi.exact_at(an[k].second).inverse();
        add(an[k].first, an[k].second, K, MPoly::variable(sp, static_cast<int>(k)));
    }
    return out;
}

TruncSeries series_Z(const Graph& g, const Holonomy& psi, int D) {
    MPoly d = det_poly(build_pq(g, psi).full);
    return inv_sqrt_series(truncate(d, D), D);
}

TruncSeries evaluation_series(const Graph& g, const Holonomy& psi, int D) {
    SpacePtr sp = angle_space(g);
    MPoly out(sp);
    for (const Coloring& c : admissible_colorings(g, D)) {
        int total = 0;
        for (int x : c) total += x;
        if (total > D) continue;
        out.add_term(angle_monomial(g, internal_coloring(g, c)), renormalize(g, c, eval_spin_network(g, c, psi)));
    }
    return {out, D};
}

CQ series_coefficient(const Graph& g, const TruncSeries& s, const Coloring& c) {
    if (!is_admissible(g, c)) {
        // a non-admissible coloring has no angle monomial; the coefficient is zero by definition
        return CQ(0);
    }
    return s.poly.coeff(angle_monomial(g, internal_coloring(g, c)));
}

MPoly westbury_polynomial(const Graph& g) {
    SpacePtr sp = angle_space(g);
    const size_t ne = g.edges.size();
    if (ne > 62) throw InputError("graph too large for cycle enumeration");
    MPoly out(sp);
    const auto& an = g.angles();
    for (uint64_t mask = 0; mask < (uint64_t(1) << ne); ++mask) {
        Mono m;
        bool ok = true;
        for (size_t v = 0; v < g.vertices.size() && ok; ++v) {
            int deg = 0;
            for (int h : g.vertices[v].half) deg += (mask >> g.edge_of(h)) & 1;
            // a loop contributes both of its half-edges
            if (deg != 0 && deg != 2) ok = false;
        }
        if (!ok) continue;
        for (size_t k = 0; k < an.size(); ++k)
            if (((mask >> g.edge_of(an[k].first)) & 1) && ((mask >> g.edge_of(an[k].second)) & 1) &&
                !((mask >> g.edge_of(an[k].opposite)) & 1))
                m.e[k] += 1;
        out.add_term(m, CQ(1));
    }
    return out;
}

Holonomy diagonal_holonomy(const std::vector<Rational>& t) {
    std::vector<Mat2Q> m;
    for (auto& x : t) {
        if (sgn(x) == 0) throw InputError("diagonal holonomy entries must be nonzero");
        m.push_back({CQ(x), CQ(0), CQ(0), CQ(Rational(1) / x)});
    }
    return make_exact_holonomy(std::move(m));
}

namespace {

// Single-term entry of W1: coef * X_angle (angle = -1 for a constant).
struct Entry {
    Rational coef;
    int angle = -1;
};

struct BlowUp {
    int n = 0;
    std::vector<std::vector<int>> nbr;
    std::vector<std::vector<Entry>> w;  // dense n x n, coef 0 = no edge
};

BlowUp blow_up(const Graph& g, const std::vector<Rational>& t) {
    if (static_cast<int>(t.size()) != g.num_half()) throw InputError("need one t value per half-edge");
    for (auto& x : t)
        if (sgn(x) == 0) throw InputError("t values must be nonzero");
    BlowUp b;
    b.n = g.num_half();
    if (b.n > 64) throw InputError("graph too large for configuration enumeration");
    b.nbr.resize(b.n);
    b.w.assign(b.n, std::vector<Entry>(b.n));
    auto link = [&](int x, int y, Entry fwd, Entry back) {
        b.nbr[x].push_back(y);
        b.nbr[y].push_back(x);
        b.w[x][y] = fwd;
        b.w[y][x] = back;
    };
    for (auto& e : g.edges) link(e.left, e.right, {Rational(1)}, {Rational(-1)});
    const auto& an = g.angles();
    for (size_t k = 0; k < an.size(); ++k) {
        int l = an[k].first, r = an[k].second;
        link(l, r, {t[r] / t[l], static_cast<int>(k)}, {-t[l] / t[r], static_cast<int>(k)});
    }
    return b;
}

void mul_entry(Rational& c, Mono& m, const Entry& e) {
    c *= e.coef;
    if (e.angle >= 0) m.e[e.angle] += 1;
}

}  // namespace

PolyMatrix build_w1(const Graph& g, const std::vector<Rational>& t) {
    BlowUp b = blow_up(g, t);
    SpacePtr sp = angle_space(g);
    PolyMatrix w(b.n, std::vector<MPoly>(b.n, MPoly(sp)));
    for (int x = 0; x < b.n; ++x)
        for (int y : b.nbr[x]) {
            Mono m;
            if (b.w[x][y].angle >= 0) m.e[b.w[x][y].angle] = 1;
            w[x][y].add_term(m, CQ(b.w[x][y].coef));
        }
    return w;
}

MPoly abelian_curve_sum(const Graph& g, const std::vector<Rational>& t) {
    BlowUp b = blow_up(g, t);
    MPoly out(angle_space(g));
    const uint64_t full = b.n == 64 ? ~uint64_t(0) : (uint64_t(1) << b.n) - 1;

    std::function<void(uint64_t, const Rational&, const Mono&)> cover;
    // Extends a curve that started at `start` and currently ends at `at`.
    std::function<void(uint64_t, int, int, int, const Rational&, const Mono&)> walk =
        [&](uint64_t mask, int start, int at, int len, const Rational& c, const Mono& m) {
            for (int y : b.nbr[at]) {
                if (y == start && len >= 3) {
                    Rational c2 = c;
                    Mono m2 = m;
                    mul_entry(c2, m2, b.w[at][y]);
                    cover(mask, -c2, m2);
                } else if (!((mask >> y) & 1)) {
                    Rational c2 = c;
                    Mono m2 = m;
                    mul_entry(c2, m2, b.w[at][y]);
                    walk(mask | (uint64_t(1) << y), start, y, len + 1, c2, m2);
                }
            }
        };
    cover = [&](uint64_t mask, const Rational& c, const Mono& m) {
        if (mask == full) {
            out.add_term(m, CQ(c));
            return;
        }
        int v = std::countr_one(mask);
        uint64_t mv = mask | (uint64_t(1) << v);
        for (int u : b.nbr[v]) {
            if ((mask >> u) & 1) continue;
            Rational c2 = -c;
            Mono m2 = m;
            mul_entry(c2, m2, b.w[v][u]);
            mul_entry(c2, m2, b.w[u][v]);
            cover(mv | (uint64_t(1) << u), c2, m2);
        }
        walk(mv, v, v, 1, c, m);
    };
    cover(0, Rational(1), Mono{});
    // (-1)^n with n = #half-edges, always even
    return out;
}

MPoly pfaffian_dimer_sum(const Graph& g) {
    BlowUp b = blow_up(g, std::vector<Rational>(g.num_half(), Rational(1)));
    MPoly out(angle_space(g));
    const uint64_t full = b.n == 64 ? ~uint64_t(0) : (uint64_t(1) << b.n) - 1;
    std::function<void(uint64_t, const Mono&)> match = [&](uint64_t mask, const Mono& m) {
        if (mask == full) {
            out.add_term(m, CQ(1));
            return;
        }
        int v = std::countr_one(mask);
        for (int u : b.nbr[v]) {
            if ((mask >> u) & 1) continue;
            Mono m2 = m;
            if (b.w[v][u].angle >= 0) m2.e[b.w[v][u].angle] += 1;
            match(mask | (uint64_t(1) << v) | (uint64_t(1) << u), m2);
        }
    };
    match(0, Mono{});
    return out;
}

TruncSeries nonplanar_fix(const TruncSeries& s, const Graph& g) {
    // Op_e flips the two angles at the left endpoint of e that contain its left half-edge.
    auto flips = [&](int e) {
        std::vector<int> vars;
        const auto& an = g.angles();
        int h = g.edges[e].left;
        for (size_t k = 0; k < an.size(); ++k)
            if (an[k].first == h || an[k].second == h) vars.push_back(static_cast<int>(k));
        return vars;
    };
    MPoly f = s.poly;
    for (auto [e1, e2] : g.crossings) {
        auto v1 = flips(e1), v2 = flips(e2), v12 = v1;
        v12.insert(v12.end(), v2.begin(), v2.end());
        MPoly r = f + substitute_sign_flip(f, v1) + substitute_sign_flip(f, v2) - substitute_sign_flip(f, v12);
        f = r * CQ(Rational(1, 2));
    }
    return {f, s.D};
}

}  // namespace spinnet
