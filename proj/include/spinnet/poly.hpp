#pragma once

#include "spinnet/scalar.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <cstdint>
#include <cstring>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace spinnet {

constexpr int kMaxVars = 96;

struct Mono {
    std::array<uint8_t, kMaxVars> e{};

    int degree() const {
        int d = 0;
        for (uint8_t x : e) d += x;
        return d;
    }
    bool operator<(const Mono& o) const { return std::memcmp(e.data(), o.e.data(), kMaxVars) < 0; }
    bool operator==(const Mono& o) const { return e == o.e; }
};

Mono mono_mul(const Mono& a, const Mono& b);  // throws on exponent overflow

// Ordered variable names shared by polynomials that may be combined.
struct Space {
    std::vector<std::string> names;
    int index(const std::string& name) const;  // throws InputError
};
using SpacePtr = std::shared_ptr<const Space>;
SpacePtr make_space(std::vector<std::string> names);

class MPoly {
public:
    SpacePtr space;
    std::map<Mono, CQ> terms;  // never stores zero coefficients

    MPoly() = default;
    explicit MPoly(SpacePtr s) : space(std::move(s)) {}
    static MPoly constant(SpacePtr s, const CQ& c);
    static MPoly variable(SpacePtr s, int i);

    int nvars() const { return space ? static_cast<int>(space->names.size()) : 0; }
    bool is_zero() const { return terms.empty(); }
    bool is_constant() const;
    CQ constant_term() const;
    CQ coeff(const Mono& m) const;
    int total_degree() const;
    size_t size() const { return terms.size(); }

    void add_term(const Mono& m, const CQ& c);

    MPoly& operator+=(const MPoly& o);
    MPoly& operator-=(const MPoly& o);
    MPoly& operator*=(const CQ& c);
};

MPoly operator+(MPoly a, const MPoly& b);
MPoly operator-(MPoly a, const MPoly& b);
MPoly operator-(MPoly a);
MPoly operator*(const MPoly& a, const MPoly& b);
MPoly operator*(MPoly a, const CQ& c);
bool operator==(const MPoly& a, const MPoly& b);
inline bool operator!=(const MPoly& a, const MPoly& b) { return !(a == b); }

MPoly pow(const MPoly& p, unsigned n);
MPoly scalar_mul(const MPoly& p, const CQ& c);
// Negates each listed variable.
MPoly substitute_sign_flip(const MPoly& p, const std::vector<int>& vars);
// Drops every monomial of total degree > D.
MPoly truncate(const MPoly& p, int D);
MPoly mul_truncated(const MPoly& a, const MPoly& b, int D);
// Exact quotient a / b; throws PreconditionError when b does not divide a.
MPoly exact_divide(const MPoly& a, const MPoly& b);

// (1/c!^2) (d/dz1 d/dw2 - d/dz2 d/dw1)^c p, then z1 = w1 = z2 = w2 = 0.
MPoly apply_edge_operator(const MPoly& p, int z1, int w1, int z2, int w2, int c);

struct TruncSeries {
    MPoly poly;
    int D = 0;
};

TruncSeries series_mul(const TruncSeries& a, const TruncSeries& b);
// s with s^2 d = 1 mod degree > D and s(0) = 1.
TruncSeries inv_sqrt_series(const MPoly& d, int D);
// Inverse of a series with constant term 1.
TruncSeries inv_series(const MPoly& d, int D);

using PolyMatrix = std::vector<std::vector<MPoly>>;
// Fraction-free Bareiss elimination with sparse pivoting.
MPoly det_poly(const PolyMatrix& m);

nlohmann::json poly_to_json(const MPoly& p);
MPoly poly_from_json(SpacePtr s, const nlohmann::json& j);
std::string to_string(const MPoly& p);

}  // namespace spinnet
