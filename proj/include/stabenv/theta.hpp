#pragma once

#include "stabenv/mp.hpp"
#include "stabenv/symbols.hpp"

namespace stabenv {

// Modular parameter and evaluation controls. The nome q is kept as a log so
// quasiperiod shifts x -> xq are exact additions.
struct EllipticParams {
    Cplx log_q;
    unsigned precision_bits = 256;
    Real truncation_tol = Real("1e-60");

    static EllipticParams from_q(const Cplx& q, unsigned bits = 256,
                                 const Real& tol = Real("1e-60"));
    Cplx q() const { return exp(log_q); }

    // largest N with |q|^N >= tol, plus the slack needed for |x| != 1
    int truncation_index(const Real& extra_log_scale) const;
};

// Odd Jacobi theta function of the curve E = C^*/q^Z:
//   theta(x) = (qx)_inf (x^{1/2} - x^{-1/2}) (q/x)_inf .
// The argument is the complex log of x; x^{1/2} = exp(w/2) is single-valued.
Cplx theta(const Cplx& w, const EllipticParams& p);

// Section of the Poincare bundle, phi(x,y) = theta(xy) / (theta(x) theta(y)).
// Throws PoleAtArgument when a denominator theta vanishes below tolerance.
Cplx phi(const Cplx& wx, const Cplx& wy, const EllipticParams& p);

// Theta class of a virtual character: prod theta over + terms divided by
// prod theta over - terms. Reports the offending monomial on a pole.
Cplx theta_of_char(const VirtualChar& c, const SymbolTable& tbl, const EllipticParams& p);

// Multiplicative factor theta(x q^m) / theta(x), from the quasiperiod law
// theta(xq) = -theta(x)/(x sqrt(q)).
Cplx theta_shift_factor(const Cplx& w, int m, const EllipticParams& p);

} // namespace stabenv
