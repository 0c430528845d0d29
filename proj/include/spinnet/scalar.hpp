#pragma once

#include <gmpxx.h>

#include <complex>
#include <string>

namespace spinnet {

using Rational = mpq_class;

// Gaussian rational re + im*i.
struct CQ {
    Rational re, im;

    CQ() = default;
    CQ(long v) : re(v), im(0) {}
    CQ(Rational r) : re(std::move(r)), im(0) {}
    CQ(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    static CQ I() { return CQ(Rational(0), Rational(1)); }

    bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
    bool is_real() const { return sgn(im) == 0; }
    bool is_one() const { return re == 1 && sgn(im) == 0; }

    CQ conj() const { return CQ(re, -im); }
    Rational norm2() const { return re * re + im * im; }
    CQ inverse() const;

    CQ& operator+=(const CQ& o);
    CQ& operator-=(const CQ& o);
    CQ& operator*=(const CQ& o);
    CQ& operator/=(const CQ& o) { return *this *= o.inverse(); }

    std::complex<double> to_complex() const { return {re.get_d(), im.get_d()}; }
};

CQ operator+(CQ a, const CQ& b);
CQ operator-(CQ a, const CQ& b);
CQ operator-(const CQ& a);
CQ operator*(const CQ& a, const CQ& b);
CQ operator/(const CQ& a, const CQ& b);
bool operator==(const CQ& a, const CQ& b);
inline bool operator!=(const CQ& a, const CQ& b) { return !(a == b); }

// "p/q" (or "p" when q = 1)
std::string to_string(const Rational& q);
// "a", "b i", "a+b i" with rational parts
std::string to_string(const CQ& z);

// Accepts "p", "p/q", "p/q i", "i", "-i", "p/q+r/s i", "p/q-r/s*i"; throws InputError.
CQ parse_cq(const std::string& s);
Rational parse_rational(const std::string& s);

Rational factorial(unsigned n);
Rational binomial(unsigned n, unsigned k);

}  // namespace spinnet
