#pragma once

#include <boost/multiprecision/mpfr.hpp>
#include <string>
#include <utility>

namespace stabenv {

// Arbitrary-precision real backed by MPFR. Precision is the thread-local
// default of boost::multiprecision; set it once per run via set_precision_bits
// before constructing any values.
using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>>;

void set_precision_bits(unsigned bits);
unsigned precision_bits();

// Complex number over Real. Only the operations the theta/envelope code needs.
struct Cplx {
    Real re, im;

    Cplx() : re(0), im(0) {}
    Cplx(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
    explicit Cplx(const Real& r) : re(r), im(0) {}
    explicit Cplx(double r) : re(r), im(0) {}
    Cplx(double r, double i) : re(r), im(i) {}

    Cplx& operator+=(const Cplx& o) { re += o.re; im += o.im; return *this; }
    Cplx& operator-=(const Cplx& o) { re -= o.re; im -= o.im; return *this; }
    Cplx& operator*=(const Cplx& o);
    Cplx& operator/=(const Cplx& o);

    friend Cplx operator+(Cplx a, const Cplx& b) { a += b; return a; }
    friend Cplx operator-(Cplx a, const Cplx& b) { a -= b; return a; }
    friend Cplx operator*(Cplx a, const Cplx& b) { a *= b; return a; }
    friend Cplx operator/(Cplx a, const Cplx& b) { a /= b; return a; }
    friend Cplx operator-(const Cplx& a) { return Cplx(-a.re, -a.im); }

    Cplx& operator*=(const Real& s) { re *= s; im *= s; return *this; }
    Cplx& operator/=(const Real& s) { re /= s; im /= s; return *this; }
    friend Cplx operator*(Cplx a, const Real& s) { a *= s; return a; }
    friend Cplx operator*(const Real& s, Cplx a) { a *= s; return a; }
    friend Cplx operator/(Cplx a, const Real& s) { a /= s; return a; }

    bool operator==(const Cplx& o) const { return re == o.re && im == o.im; }
};

Real abs(const Cplx& z);
Real norm(const Cplx& z);          // |z|^2
Cplx conj(const Cplx& z);
Cplx exp(const Cplx& z);
Cplx log(const Cplx& z);           // principal branch
Cplx inv(const Cplx& z);
Cplx sqrt_exp_half(const Cplx& w); // exp(w/2)

inline Cplx one() { return Cplx(Real(1), Real(0)); }

// Decimal string with enough digits to round-trip at current precision.
std::string to_string(const Real& x);
Real real_from_string(const std::string& s);

} // namespace stabenv
