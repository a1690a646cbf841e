#pragma once

#include "stabenv/envelope_x.hpp"
#include "stabenv/envelope_xprime.hpp"

#include <memory>
#include <vector>

namespace stabenv {

// Both sides of the mirror pair over one shared parameter draw. The X side
// owns the draw (u_i, hbar, z); the X' side logs are derived through the
// parameter identification
//   a_1/a_2 -> z hbar^{k-1},  hbar -> hbar^{-1},
//   z_i -> u_i hbar / u_{i+1} (i<k), u_i/u_{i+1} (k<=i<=n-k), u_i/(u_{i+1} hbar) (i>n-k),
// applied additively on logs, with log a_2 = 0.
class MirrorPair {
public:
    MirrorPair(GrassData g, EllipticParams ell, std::uint64_t seed);

    GrassData grass() const { return g_; }
    std::uint64_t seed() const { return seed_; }
    XSide& x() { return *x_; }
    const XSide& x() const { return *x_; }
    XPrimeSide& xprime() { return *xp_; }
    const XPrimeSide& xprime() const { return *xp_; }

    // re-derive the X' logs from the current X-side assignment
    void apply_kappa();

    const std::vector<Subset>& subsets() const { return subsets_; }
    const std::vector<YoungDiagram>& diagrams() const { return diagrams_; }

private:
    void draw_parameters();

    GrassData g_;
    EllipticParams ell_;
    std::uint64_t seed_;
    std::unique_ptr<XSide> x_;
    std::unique_ptr<XPrimeSide> xp_;
    std::vector<Subset> subsets_;
    std::vector<YoungDiagram> diagrams_;
};

struct PairResidual {
    int row = 0, col = 0;        // fixed-point indices (lambda, mu)
    Real lhs_abs, rhs_abs;
    Real residual;               // |LHS-RHS| / max(|LHS|,|RHS|,floor)
    bool pass = false;
};

struct MirrorReport {
    GrassData g;
    std::uint64_t seed = 0;
    Real tolerance;
    std::vector<PairResidual> pairs;
    std::vector<std::vector<Cplx>> t_matrix;        // X side, row p, col q
    std::vector<std::vector<Cplx>> tprime_matrix;   // X' side, row lambda, col mu
    bool all_pass = true;
    double seconds = 0;
};

// Fills both restriction matrices and checks
//   T_{p,p} T'_{lambda,mu} = T'_{mu,mu} T_{q,p}
// entrywise under the shared draw.
MirrorReport verify_mirror(GrassData g, EllipticParams ell, std::uint64_t seed,
                           const LimitConfig& lc, const Real& tol,
                           const Real& floor = Real("1e-30"));

// GKM condition for a curve-connected pair: bold Stab'(lambda) and
// bold Stab'(mu) agree after imposing u_i = u_j on the kappa side. The
// constraint is approached by a Richardson ladder since the prefactor
// vanishes and the envelope has a compensating pole there.
Real gkm_check_pair(GrassData g, EllipticParams ell, const YoungDiagram& lam,
                    const YoungDiagram& mu, int i, int j, std::uint64_t seed,
                    const LimitConfig& lc);

// finds (i,j) with bj(mu) = bj(lambda) \ {i} u {j}; throws PairNotConnected
std::pair<int, int> connecting_indices(GrassData g, const YoungDiagram& lam,
                                       const YoungDiagram& mu);

// Cancellation lemma: ratio R(tbar)W(tbar) / (R(inv tbar)W(inv tbar)) at a
// draw satisfying u(sbar) = 1; the expected value is -1.
Cplx cancellation_check(GrassData g, EllipticParams ell, const YoungDiagram& lam,
                        const Tree& tbar, const Box& b, std::uint64_t seed);

// Closed-form Mother function for k = 1, in the parameters of X:
//   m = (-1)^n prod_i theta(x_i u_i y / (x_{i-1} hbar)),  x_0 = a_1, x_n = a_2.
class MotherK1 {
public:
    MotherK1(MirrorPair& ctx);
    Cplx eval(const Cplx& ylog, const std::vector<Cplx>& xlogs) const;
    // substitution y = u_m^{-1}
    Cplx restrict_x_side(int m, const std::vector<Cplx>& xlogs) const;
    // substitution x = phi^{lambda_m} (with hbar inverted through kappa)
    Cplx restrict_xprime_side(int m, const Cplx& ylog) const;
    std::vector<Cplx> xprime_point(int m) const;
    // closed form of the dual diagonal T'_{lambda_m,lambda_m}, the prefactor
    // that makes restrict_xprime_side a normalized envelope of X
    Cplx dual_diagonal(int m) const;

private:
    MirrorPair& ctx_;
};

// General Mother function
//   m~ = sum_{p,q} (boldT)^{-1}_{q,p} boldStab(p)(y) boldStab'(bj^{-1}(q))(x)
// evaluated at given Chern-root logs on both factors.
class MotherGeneral {
public:
    MotherGeneral(MirrorPair& ctx, const LimitConfig& lc);

    Cplx eval(const std::vector<Cplx>& ylogs, const ChernAssignment& x) const;
    // restriction to the X-side fixed point p (by index), generic x
    Cplx restrict_x_side(int point_index, const ChernAssignment& x) const;
    // restriction to the X'-side fixed point lambda (by index), generic y
    Cplx restrict_xprime_side(int point_index, const std::vector<Cplx>& ylogs) const;

    const std::vector<std::vector<Cplx>>& bold_t() const { return bold_t_; }

private:
    Cplx inverse_at(int q, int p) const { return bold_t_inv_[static_cast<size_t>(q)][static_cast<size_t>(p)]; }

    MirrorPair& ctx_;
    std::vector<std::vector<Cplx>> bold_t_, bold_t_inv_;
    std::vector<std::vector<Cplx>> bold_tprime_;  // for X'-side restrictions
};

} // namespace stabenv
