#pragma once

#include "stabenv/combinatorics.hpp"
#include "stabenv/rng.hpp"
#include "stabenv/symbols.hpp"
#include "stabenv/theta.hpp"

#include <array>
#include <vector>

namespace stabenv {

// Chern-root logs for every box of R_{n,k}, indexed by (i-1)*k + (j-1).
using ChernAssignment = std::vector<Cplx>;

// Controls for fixed-point restriction limits.
struct LimitConfig {
    Real eps = Real("1e-8");       // base multiplicative perturbation
    int steps = 3;                 // Richardson levels (>= 2)
    Real rel_tol = Real("1e-6");   // disagreement threshold between direction draws
    std::uint64_t direction_seed = 1;
    bool use_full_formula = false; // evaluate through stab_eval instead of stab_refined
};

// Elliptic stable envelope of the dual variety X' (A_{n-1} quiver) for the
// fixed chamber sigma' = (0,1) and stability theta' = (1,...,1).
// Equivariant parameters a_1, a_2, hbar; Kaehler parameters z_1..z_{n-1};
// auxiliary z_{a_i}. The u_i logs entering Theta'_lambda and the
// cancellation constraints are recovered from the z_i through the parameter
// identification (u_1 is normalized to 1).
class XPrimeSide {
public:
    XPrimeSide(GrassData g, EllipticParams ell);

    GrassData grass() const { return g_; }
    SymbolTable& symbols() { return tbl_; }
    const SymbolTable& symbols() const { return tbl_; }
    const EllipticParams& ell() const { return ell_; }

    SymId a(int i) const { return i == 1 ? a1_ : a2_; }
    SymId hbar() const { return hbar_; }
    SymId z_vertex(int c) const { return zk_[static_cast<size_t>(c - 1)]; }
    SymId z_a(int i) const { return i == 1 ? za1_ : za2_; }

    Cplx alog(int i) const { return tbl_.log_of(a(i)); }
    Cplx hlog() const { return tbl_.log_of(hbar_); }
    Cplx zklog(int c) const { return tbl_.log_of(z_vertex(c)); }

    // log u_i recovered from z-logs via the identification, with log u_1 = 0
    Cplx ulog_kappa(int i) const;

    const std::vector<Box>& boxes() const { return boxes_; }
    int box_index(const Box& b) const { return (b.i - 1) * g_.k + (b.j - 1); }

    // phi^lambda rule: a_1 hbar^{j-1} on lambda, a_2 hbar^{n-k-i+1} off it
    Monomial chern_at_fixed_point(const YoungDiagram& lam, const Box& b) const;
    Cplx phi_log(const YoungDiagram& lam, const Box& b) const;
    ChernAssignment fixed_point_assignment(const YoungDiagram& lam) const;

    // repelling / attracting normal characters at the fixed point
    VirtualChar normal_minus(const YoungDiagram& lam) const;
    VirtualChar normal_plus(const YoungDiagram& lam) const;

    // Kaehler-independent part S^{n,k}_lambda
    Cplx s_part(const YoungDiagram& lam, const ChernAssignment& x) const;

    // elliptic weight of a tree (either side); empty tree gives 1
    Cplx tree_weight(const Tree& t, const YoungDiagram& lam, const ChernAssignment& x) const;

    // full formula: Sym over S_{n,k} of S * (sum_t W)(sum_tbar W)
    Cplx stab_eval(const YoungDiagram& lam, const ChernAssignment& x) const;

    // refined formula: eps(lam) * Theta(N~'^-) * sum over S_lambda-bar x trees
    Cplx stab_refined(const YoungDiagram& lam, const ChernAssignment& x) const;

    // blocks of the refined formula, identity permutation (for the
    // cancellation checks); x is a full assignment
    Cplx refined_R(const Tree& tbar, const YoungDiagram& lam, const ChernAssignment& x) const;
    Cplx refined_W(const Tree& tbar, const YoungDiagram& lam, const ChernAssignment& x) const;
    Cplx theta_n_tilde(const YoungDiagram& lam, const ChernAssignment& x) const;
    int epsilon_sign(const YoungDiagram& lam) const;

    // T'_{lambda,mu} via multiplicative perturbation around phi^mu with
    // Richardson extrapolation, cross-validated on two direction draws
    Cplx restrict(const YoungDiagram& lam, const YoungDiagram& mu, const LimitConfig& lc) const;

    // Theta'_lambda: the X-side diagonal product, in recovered u variables
    Cplx theta_prefactor(const YoungDiagram& lam) const;
    Cplx bold_restrict(const YoungDiagram& lam, const YoungDiagram& mu, const LimitConfig& lc) const;

    // degrees (D^lam_1, D^lam_2) of det ind_lam in a_1, a_2
    std::array<int, 2> index_degrees(const YoungDiagram& lam) const;

    // T^{1/2}X'|_mu as a virtual character in a_1, a_2, hbar
    VirtualChar half_tangent_at(const YoungDiagram& mu) const;

    // quasiperiod reference function U'_{lambda,mu}; needs generic z_{a_i}
    Cplx u_function(const YoungDiagram& lam, const YoungDiagram& mu) const;

    // value of the constraint monomial u(sbar) = prod u_{c+1}/u_c over a subtree
    Cplx u_subtree_log(const std::vector<Box>& subtree_boxes) const;

private:
    GrassData g_;
    EllipticParams ell_;
    SymbolTable tbl_;
    SymId a1_ = -1, a2_ = -1, hbar_ = -1, za1_ = -1, za2_ = -1;
    std::vector<SymId> zk_;
    std::vector<Box> boxes_;

    std::vector<int> v_map(const YoungDiagram& lam) const;   // v per box index
    std::vector<int> rho_map(const YoungDiagram& lam) const; // rho per box index
    Cplx subtree_pi_log(const std::vector<Box>& boxes, const std::vector<int>& vm) const;
    std::vector<std::vector<int>> sigma_maps(const std::vector<Box>& movable) const;
};

} // namespace stabenv
