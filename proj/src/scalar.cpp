#include "spinnet/scalar.hpp"

#include "spinnet/errors.hpp"

#include <algorithm>
#include <cctype>
#include <vector>

namespace spinnet {

CQ CQ::inverse() const {
    Rational d = norm2();
    if (sgn(d) == 0) throw DomainError("division by zero");
    return CQ(re / d, -im / d);
}

CQ& CQ::operator+=(const CQ& o) {
    re += o.re;
    im += o.im;
    return *this;
}

CQ& CQ::operator-=(const CQ& o) {
    re -= o.re;
    im -= o.im;
    return *this;
}

CQ& CQ::operator*=(const CQ& o) {
    if (is_real() && o.is_real()) {
        re *= o.re;
        return *this;
    }
    Rational r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
}

CQ operator+(CQ a, const CQ& b) { return a += b; }
CQ operator-(CQ a, const CQ& b) { return a -= b; }
CQ operator-(const CQ& a) { return CQ(-a.re, -a.im); }
CQ operator*(const CQ& a, const CQ& b) {
    CQ r = a;
    r *= b;
    return r;
}
CQ operator/(const CQ& a, const CQ& b) { return a * b.inverse(); }
bool operator==(const CQ& a, const CQ& b) { return a.re == b.re && a.im == b.im; }

std::string to_string(const Rational& q) { return q.get_str(); }

std::string to_string(const CQ& z) {
    if (z.is_real()) return to_string(z.re);
    std::string im = to_string(z.im) + " i";
    if (sgn(z.re) == 0) return im;
    if (sgn(z.im) > 0) return to_string(z.re) + "+" + im;
    return to_string(z.re) + im;
}

Rational parse_rational(const std::string& s) {
    std::string t;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (t.empty()) throw InputError("empty rational");
    if (t[0] == '+') t.erase(0, 1);
    bool neg = false;
    if (!t.empty() && t[0] == '-') {
        neg = true;
        t.erase(0, 1);
    }
    auto slash = t.find('/');
    std::string num = t.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : t.substr(slash + 1);
    auto digits = [](const std::string& x) {
        return !x.empty() && std::all_of(x.begin(), x.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
    };
    if (!digits(num) || !digits(den)) {
        // decimal literal such as 0.25
        if (slash == std::string::npos) {
            auto dot = t.find('.');
            std::string ip = t.substr(0, dot), fp = dot == std::string::npos ? "" : t.substr(dot + 1);
            if ((ip.empty() || digits(ip)) && (fp.empty() || digits(fp)) && !(ip.empty() && fp.empty())) {
                mpz_class n(ip.empty() ? "0" : ip), d(1);
                for (char c : fp) {
                    n = n * 10 + (c - '0');
                    d *= 10;
                }
                Rational q(n, d);
                q.canonicalize();
                return neg ? Rational(-q) : q;
            }
        }
        throw InputError("malformed rational '" + s + "'");
    }
    Rational q{mpz_class(num), mpz_class(den)};
    if (sgn(q.get_den()) == 0) throw InputError("zero denominator in '" + s + "'");
    q.canonicalize();
    return neg ? Rational(-q) : q;
}

CQ parse_cq(const std::string& s) {
    std::string t;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c)) && c != '*') t += c;
    if (t.empty()) throw InputError("empty scalar");
    if (t.back() != 'i') return CQ(parse_rational(t));
    t.pop_back();
    // split at the last sign that is not leading
    size_t cut = std::string::npos;
    for (size_t k = t.size(); k-- > 1;)
        if (t[k] == '+' || t[k] == '-') {
            cut = k;
            break;
        }
    auto imag = [](std::string x) -> Rational {
        if (x.empty() || x == "+") return 1;
        if (x == "-") return -1;
        return parse_rational(x);
    };
    if (cut == std::string::npos) return CQ(Rational(0), imag(t));
    return CQ(parse_rational(t.substr(0, cut)), imag(t.substr(cut)));
}

Rational factorial(unsigned n) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return Rational(f);
}

Rational binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), n, k);
    return Rational(b);
}

}  // namespace spinnet
