#include "spinnet/poly.hpp"

#include "spinnet/errors.hpp"

#include <algorithm>
#include <sstream>

namespace spinnet {

Mono mono_mul(const Mono& a, const Mono& b) {
    Mono r;
    for (int i = 0; i < kMaxVars; ++i) {
        unsigned s = unsigned(a.e[i]) + b.e[i];
        if (s > 255) throw DomainError("exponent overflow");
        r.e[i] = static_cast<uint8_t>(s);
    }
    return r;
}

int Space::index(const std::string& name) const {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw InputError("unknown variable '" + name + "'");
    return static_cast<int>(it - names.begin());
}

SpacePtr make_space(std::vector<std::string> names) {
    if (names.size() > static_cast<size_t>(kMaxVars)) throw InputError("too many variables");
    auto s = std::make_shared<Space>();
    s->names = std::move(names);
    return s;
}

namespace {

void check_space(const MPoly& a, const MPoly& b) {
    if (a.space == b.space) return;
    if (!a.space || !b.space || a.space->names != b.space->names) throw InputError("polynomials live in different variable namespaces");
}

}  // namespace

MPoly MPoly::constant(SpacePtr s, const CQ& c) {
    MPoly p(std::move(s));
    if (!c.is_zero()) p.terms.emplace(Mono{}, c);
    return p;
}

MPoly MPoly::variable(SpacePtr s, int i) {
    if (i < 0 || i >= static_cast<int>(s->names.size())) throw InputError("variable index out of range");
    MPoly p(std::move(s));
    Mono m;
    m.e[i] = 1;
    p.terms.emplace(m, CQ(1));
    return p;
}

bool MPoly::is_constant() const { return terms.empty() || (terms.size() == 1 && terms.begin()->first.degree() == 0); }

CQ MPoly::constant_term() const { return coeff(Mono{}); }

CQ MPoly::coeff(const Mono& m) const {
    auto it = terms.find(m);
    return it == terms.end() ? CQ(0) : it->second;
}

int MPoly::total_degree() const {
    int d = -1;
    for (auto& [m, c] : terms) d = std::max(d, m.degree());
    return d;
}

void MPoly::add_term(const Mono& m, const CQ& c) {
    if (c.is_zero()) return;
    auto [it, fresh] = terms.emplace(m, c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero()) terms.erase(it);
    }
}

MPoly& MPoly::operator+=(const MPoly& o) {
    check_space(*this, o);
    for (auto& [m, c] : o.terms) add_term(m, c);
    return *this;
}

MPoly& MPoly::operator-=(const MPoly& o) {
    check_space(*this, o);
    for (auto& [m, c] : o.terms) add_term(m, -c);
    return *this;
}

MPoly& MPoly::operator*=(const CQ& c) {
    if (c.is_zero()) {
        terms.clear();
        return *this;
    }
    for (auto& [m, x] : terms) x *= c;
    return *this;
}

MPoly operator+(MPoly a, const MPoly& b) { return a += b; }
MPoly operator-(MPoly a, const MPoly& b) { return a -= b; }
MPoly operator-(MPoly a) {
    for (auto& [m, c] : a.terms) c = -c;
    return a;
}

MPoly operator*(const MPoly& a, const MPoly& b) { return mul_truncated(a, b, -1); }
MPoly operator*(MPoly a, const CQ& c) { return a *= c; }
MPoly scalar_mul(const MPoly& p, const CQ& c) { return p * c; }

bool operator==(const MPoly& a, const MPoly& b) {
    check_space(a, b);
    return a.terms == b.terms;
}

MPoly mul_truncated(const MPoly& a, const MPoly& b, int D) {
    check_space(a, b);
    MPoly r(a.space);
    if (a.is_zero() || b.is_zero()) return r;
    std::vector<std::pair<const Mono*, int>> bd;
    bd.reserve(b.terms.size());
    for (auto& [m, c] : b.terms) bd.emplace_back(&m, m.degree());
    std::vector<const CQ*> bc;
    for (auto& [m, c] : b.terms) bc.push_back(&c);
    CQ t;
    for (auto& [ma, ca] : a.terms) {
        int da = ma.degree();
        if (D >= 0 && da > D) continue;
        for (size_t k = 0; k < bd.size(); ++k) {
            if (D >= 0 && da + bd[k].second > D) continue;
            t = ca;
            t *= *bc[k];
            r.add_term(mono_mul(ma, *bd[k].first), t);
        }
    }
    return r;
}

MPoly pow(const MPoly& p, unsigned n) {
    MPoly r = MPoly::constant(p.space, CQ(1)), b = p;
    while (n) {
        if (n & 1) r = r * b;
        n >>= 1;
        if (n) b = b * b;
    }
    return r;
}

MPoly substitute_sign_flip(const MPoly& p, const std::vector<int>& vars) {
    for (int v : vars)
        if (v < 0 || v >= p.nvars()) throw InputError("sign flip: variable index out of range");
    MPoly r = p;
    for (auto& [m, c] : r.terms) {
        int s = 0;
        for (int v : vars) s += m.e[v];
        if (s % 2) c = -c;
    }
    return r;
}

MPoly truncate(const MPoly& p, int D) {
    MPoly r(p.space);
    for (auto& [m, c] : p.terms)
        if (m.degree() <= D) r.terms.emplace_hint(r.terms.end(), m, c);
    return r;
}

MPoly exact_divide(const MPoly& a, const MPoly& b) {
    check_space(a, b);
    if (b.is_zero()) throw DomainError("division by the zero polynomial");
    if (b.is_constant()) return a * b.constant_term().inverse();
    MPoly q(a.space), r = a;
    const Mono& lb = b.terms.rbegin()->first;
    CQ lc_inv = b.terms.rbegin()->second.inverse();
    while (!r.is_zero()) {
        auto it = r.terms.rbegin();
        Mono t;
        for (int i = 0; i < kMaxVars; ++i) {
            if (it->first.e[i] < lb.e[i]) throw PreconditionError("inexact polynomial division");
            t.e[i] = it->first.e[i] - lb.e[i];
        }
        CQ c = it->second * lc_inv;
        q.add_term(t, c);
        for (auto& [m, x] : b.terms) r.add_term(mono_mul(t, m), -(c * x));
    }
    return q;
}

MPoly apply_edge_operator(const MPoly& p, int z1, int w1, int z2, int w2, int c) {
    for (int v : {z1, w1, z2, w2})
        if (v < 0 || v >= p.nvars()) throw InputError("edge operator: variable index out of range");
    MPoly r(p.space);
    Rational cf = factorial(c);
    for (auto& [m, x] : p.terms) {
        int k = m.e[z1];
        if (k > c || m.e[w2] != k || m.e[z2] != c - k || m.e[w1] != c - k) continue;
        Mono rest = m;
        rest.e[z1] = rest.e[w1] = rest.e[z2] = rest.e[w2] = 0;
        // C(c,k) k!^2 (c-k)!^2 / c!^2 = k! (c-k)! / c!
        Rational w = factorial(k) * factorial(c - k) / cf;
        if ((c - k) % 2) w = -w;
        r.add_term(rest, x * CQ(w));
    }
    return r;
}

TruncSeries series_mul(const TruncSeries& a, const TruncSeries& b) {
    int D = std::min(a.D, b.D);
    return {mul_truncated(a.poly, b.poly, D), D};
}

namespace {

// Homogeneous components of p up to degree D.
std::vector<MPoly> homogeneous_parts(const MPoly& p, int D) {
    std::vector<MPoly> parts(D + 1, MPoly(p.space));
    for (auto& [m, c] : p.terms) {
        int d = m.degree();
        if (d <= D) parts[d].terms.emplace_hint(parts[d].terms.end(), m, c);
    }
    return parts;
}

// s with d * E(s) = alpha * s * E(d), E the Euler operator, s(0) = 1: that is s = d^alpha.
TruncSeries power_series(const MPoly& d, int D, const Rational& alpha) {
    if (!d.constant_term().is_one()) throw PreconditionError("constant term must be exactly 1");
    if (D < 0) throw InputError("negative truncation degree");
    auto dj = homogeneous_parts(d, D);
    std::vector<MPoly> s(D + 1, MPoly(d.space));
    s[0] = MPoly::constant(d.space, CQ(1));
    // k s_k = sum_{j=1..k} ((alpha+1) j - k) d_j s_{k-j}
    for (int k = 1; k <= D; ++k) {
        MPoly acc(d.space);
        for (int j = 1; j <= k; ++j) {
            if (dj[j].is_zero() || s[k - j].is_zero()) continue;
            Rational w = (alpha + 1) * j - k;
            if (sgn(w) == 0) continue;
            acc += mul_truncated(dj[j], s[k - j], -1) * CQ(w);
        }
        s[k] = acc * CQ(Rational(1, k));
    }
    MPoly out(d.space);
    for (auto& part : s) out += part;
    return {out, D};
}

}  // namespace

TruncSeries inv_sqrt_series(const MPoly& d, int D) { return power_series(d, D, Rational(-1, 2)); }
TruncSeries inv_series(const MPoly& d, int D) { return power_series(d, D, Rational(-1)); }

MPoly det_poly(const PolyMatrix& m0) {
    const size_t n = m0.size();
    for (auto& row : m0)
        if (row.size() != n) throw InputError("determinant of a non-square matrix");
    if (n == 0) throw InputError("determinant of an empty matrix");
    SpacePtr sp = m0[0][0].space;
    PolyMatrix a = m0;
    bool neg = false;
    MPoly prev = MPoly::constant(sp, CQ(1));
    for (size_t k = 0; k < n; ++k) {
        // pivot: prefer constants, then fewest terms
        size_t br = n, bc = n, best = SIZE_MAX;
        for (size_t i = k; i < n; ++i)
            for (size_t j = k; j < n; ++j) {
                const MPoly& x = a[i][j];
                if (x.is_zero()) continue;
                size_t score = x.is_constant() ? 0 : x.size();
                if (score < best) {
                    best = score;
                    br = i;
                    bc = j;
                }
            }
        if (br == n) return MPoly(sp);
        if (br != k) {
            std::swap(a[br], a[k]);
            neg = !neg;
        }
        if (bc != k) {
            for (auto& row : a) std::swap(row[bc], row[k]);
            neg = !neg;
        }
        const MPoly& piv = a[k][k];
        for (size_t i = k + 1; i < n; ++i) {
            bool lead_zero = a[i][k].is_zero();
            for (size_t j = k + 1; j < n; ++j) {
                MPoly num = piv * a[i][j];
                if (!lead_zero && !a[k][j].is_zero()) num -= a[i][k] * a[k][j];
                a[i][j] = exact_divide(num, prev);
            }
            a[i][k] = MPoly(sp);
        }
        prev = a[k][k];
    }
    MPoly d = a[n - 1][n - 1];
    return neg ? -d : d;
}

nlohmann::json poly_to_json(const MPoly& p) {
    nlohmann::json out = nlohmann::json::array();
    for (auto& [m, c] : p.terms) {
        nlohmann::json ex = nlohmann::json::object();
        for (int i = 0; i < p.nvars(); ++i)
            if (m.e[i]) ex[p.space->names[i]] = m.e[i];
        out.push_back({{"exponents", ex}, {"re", to_string(c.re)}, {"im", to_string(c.im)}});
    }
    return out;
}

MPoly poly_from_json(SpacePtr s, const nlohmann::json& j) {
    if (!j.is_array()) throw InputError("polynomial: expected an array of terms");
    MPoly p(s);
    for (auto& t : j) {
        if (!t.is_object() || !t.contains("exponents") || !t.contains("re") || !t.contains("im"))
            throw InputError("polynomial term: expected {exponents, re, im}");
        Mono m;
        for (auto& [name, e] : t.at("exponents").items()) {
            int ex = e.get<int>();
            if (ex < 0 || ex > 255) throw InputError("exponent out of range");
            m.e[s->index(name)] = static_cast<uint8_t>(ex);
        }
        p.add_term(m, CQ(parse_rational(t.at("re").get<std::string>()), parse_rational(t.at("im").get<std::string>())));
    }
    return p;
}

std::string to_string(const MPoly& p) {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = p.terms.rbegin(); it != p.terms.rend(); ++it) {
        if (!first) os << " + ";
        first = false;
        os << "(" << to_string(it->second) << ")";
        for (int i = 0; i < p.nvars(); ++i)
            if (it->first.e[i]) {
                os << "*" << p.space->names[i];
                if (it->first.e[i] > 1) os << "^" << int(it->first.e[i]);
            }
    }
    return os.str();
}

}  // namespace spinnet
