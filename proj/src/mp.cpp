#include "stabenv/mp.hpp"

#include <boost/multiprecision/mpfr.hpp>
#include <sstream>

namespace stabenv {

namespace {
unsigned g_bits = 256;
}

void set_precision_bits(unsigned bits) {
    g_bits = bits;
    // boost mpfr_float counts decimal digits; 3.33 bits per digit, round up.
    unsigned digits = static_cast<unsigned>(bits * 0.30103) + 2;
    Real::default_precision(digits);
}

unsigned precision_bits() { return g_bits; }

Cplx& Cplx::operator*=(const Cplx& o) {
    Real r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
}

Cplx& Cplx::operator/=(const Cplx& o) {
    Real d = o.re * o.re + o.im * o.im;
    Real r = (re * o.re + im * o.im) / d;
    im = (im * o.re - re * o.im) / d;
    re = std::move(r);
    return *this;
}

Real abs(const Cplx& z) {
    using boost::multiprecision::hypot;
    return hypot(z.re, z.im);
}

Real norm(const Cplx& z) { return z.re * z.re + z.im * z.im; }

Cplx conj(const Cplx& z) { return Cplx(z.re, -z.im); }

Cplx exp(const Cplx& z) {
    using boost::multiprecision::exp;
    using boost::multiprecision::cos;
    using boost::multiprecision::sin;
    Real m = exp(z.re);
    return Cplx(m * cos(z.im), m * sin(z.im));
}

Cplx log(const Cplx& z) {
    using boost::multiprecision::log;
    using boost::multiprecision::atan2;
    return Cplx(log(abs(z)), atan2(z.im, z.re));
}

Cplx inv(const Cplx& z) {
    Real d = norm(z);
    return Cplx(z.re / d, -z.im / d);
}

Cplx sqrt_exp_half(const Cplx& w) {
    return exp(Cplx(w.re / 2, w.im / 2));
}

std::string to_string(const Real& x) {
    std::ostringstream os;
    os.precision(static_cast<int>(Real::default_precision()));
    os << x;
    return os.str();
}

Real real_from_string(const std::string& s) { return Real(s); }

} // namespace stabenv
