#include "stabenv/theta.hpp"
#include "stabenv/errors.hpp"

#include <boost/multiprecision/mpfr.hpp>

namespace stabenv {

using boost::multiprecision::log;
using boost::multiprecision::ceil;
using boost::multiprecision::abs;

EllipticParams EllipticParams::from_q(const Cplx& q, unsigned bits, const Real& tol) {
    EllipticParams p;
    if (stabenv::abs(q) >= Real(1) - Real("1e-3"))
        throw Error("modular parameter out of range: need |q| < 1 - 1e-3");
    p.log_q = stabenv::log(q);
    p.precision_bits = bits;
    p.truncation_tol = tol;
    return p;
}

int EllipticParams::truncation_index(const Real& extra_log_scale) const {
    // need |x^{+-1}| |q|^N < tol; log|q| = Re(log q) < 0
    Real need = log(truncation_tol) - extra_log_scale;
    Real n = ceil(need / log_q.re);
    int N = static_cast<int>(n);
    if (N < 1) N = 1;
    return N + 2;
}

Cplx theta(const Cplx& w, const EllipticParams& p) {
    using boost::multiprecision::abs;
    Cplx xh = sqrt_exp_half(w);
    Cplx x = xh * xh;
    Cplx acc = xh - inv(xh);

    Cplx q = exp(p.log_q);
    int N = p.truncation_index(abs(w.re));
    Cplx qi = q;
    Cplx xinv = inv(x);
    const Cplx one_c = one();
    for (int i = 1; i <= N; ++i) {
        acc *= (one_c - x * qi) * (one_c - xinv * qi);
        qi *= q;
    }
    return acc;
}

Cplx phi(const Cplx& wx, const Cplx& wy, const EllipticParams& p) {
    Cplx tx = theta(wx, p);
    Cplx ty = theta(wy, p);
    Real floor = p.truncation_tol;
    if (abs(tx) < floor || abs(ty) < floor)
        throw PoleAtArgument("phi: denominator theta vanishes");
    return theta(wx + wy, p) / (tx * ty);
}

Cplx theta_of_char(const VirtualChar& c, const SymbolTable& tbl, const EllipticParams& p) {
    Cplx num = one(), den = one();
    for (auto& [sign, m] : c.terms) {
        Cplx t = theta(m.eval_log(tbl), p);
        if (sign > 0) {
            num *= t;
        } else {
            if (abs(t) < p.truncation_tol)
                throw PoleAtArgument("theta_of_char: theta vanishes at denominator monomial " +
                                     m.to_string(tbl));
            den *= t;
        }
    }
    return num / den;
}

Cplx theta_shift_factor(const Cplx& w, int m, const EllipticParams& p) {
    // theta(xq)/theta(x) = -1/(x sqrt q); iterate for |m| steps
    Cplx f = one();
    Cplx sqrtq = sqrt_exp_half(p.log_q);
    if (m > 0) {
        for (int i = 0; i < m; ++i) {
            // after i shifts the argument is x q^i
            Cplx xqi = exp(w + Cplx(Real(i) * p.log_q.re, Real(i) * p.log_q.im));
            f = f * (-one()) / (xqi * sqrtq);
        }
    } else {
        for (int i = 0; i < -m; ++i) {
            Cplx xqi = exp(w - Cplx(Real(i + 1) * p.log_q.re, Real(i + 1) * p.log_q.im));
            f = f * (-one()) * xqi * sqrtq;
        }
    }
    return f;
}

} // namespace stabenv
