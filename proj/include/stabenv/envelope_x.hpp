#pragma once

#include "stabenv/combinatorics.hpp"
#include "stabenv/symbols.hpp"
#include "stabenv/theta.hpp"

#include <vector>

namespace stabenv {

// Elliptic stable envelope of X = T^*Gr(k,n) for the fixed chamber
// sigma = (1,...,n) and stability theta = (-1). Equivariant parameters
// u_1..u_n, hbar; Kaehler parameter z; auxiliary z_{u_i}.
class XSide {
public:
    XSide(GrassData g, EllipticParams ell);

    GrassData grass() const { return g_; }
    SymbolTable& symbols() { return tbl_; }
    const SymbolTable& symbols() const { return tbl_; }
    const EllipticParams& ell() const { return ell_; }

    SymId u(int i) const { return u_[static_cast<size_t>(i - 1)]; }
    SymId hbar() const { return hbar_; }
    SymId z() const { return z_; }
    SymId z_u(int i) const { return zu_[static_cast<size_t>(i - 1)]; }

    Cplx ulog(int i) const { return tbl_.log_of(u(i)); }
    Cplx hlog() const { return tbl_.log_of(hbar_); }
    Cplx zlog() const { return tbl_.log_of(z_); }

    // T_p X = sum_{i in p, j not in p} (u_i/u_j + hbar^{-1} u_j/u_i)
    VirtualChar tangent_char(const Subset& p) const;
    // split by sign of the A-weight on sigma
    std::pair<VirtualChar, VirtualChar> normal_parts(const Subset& p) const;  // (N^-, N^+)
    // T^{1/2}X|_q = sum_{i in q, j not in q} u_j/(u_i hbar)
    VirtualChar half_tangent_at(const Subset& q) const;

    // symmetrized explicit formula at the given Chern-root logs
    Cplx stab_eval(const Subset& p, const std::vector<Cplx>& ylogs) const;

    // T_{p,q}: substitution y_i = u_{q_i}^{-1}; no limit is needed
    Cplx restrict(const Subset& p, const Subset& q) const;

    // closed form of the diagonal from the defining property
    Cplx diagonal_closed_form(const Subset& p) const;

    // Theta_p = prod_m theta(z^{-1} hbar^{k-n+p_m-2m}); makes the envelope
    // holomorphic in z
    Cplx theta_prefactor(const Subset& p) const;
    Cplx bold_restrict(const Subset& p, const Subset& q) const;
    Cplx bold_stab_eval(const Subset& p, const std::vector<Cplx>& ylogs) const;

    // degrees D^p_i of det ind_p in u_i
    std::vector<int> index_degrees(const Subset& p) const;

    // quasiperiod reference function U_{p,q}; needs generic z_{u_i} logs
    Cplx u_function(const Subset& p, const Subset& q) const;

    // rejects draws where a restriction denominator is numerically tiny
    void require_generic(const Subset& q) const;

private:
    GrassData g_;
    EllipticParams ell_;
    SymbolTable tbl_;
    std::vector<SymId> u_, zu_;
    SymId hbar_ = -1, z_ = -1;
};

} // namespace stabenv
