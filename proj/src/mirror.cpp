#include "stabenv/mirror.hpp"

#include <algorithm>
#include <chrono>

namespace stabenv {

MirrorPair::MirrorPair(GrassData g, EllipticParams ell, std::uint64_t seed)
    : g_(g), ell_(ell), seed_(seed) {
    x_ = std::make_unique<XSide>(g_, ell_);
    xp_ = std::make_unique<XPrimeSide>(g_, ell_);
    subsets_ = enumerate_subsets(g_);
    diagrams_ = enumerate_diagrams(g_);
    draw_parameters();
    apply_kappa();
}

void MirrorPair::draw_parameters() {
    // resample until the draw passes the genericity screens
    for (std::uint64_t attempt = 0; attempt < 64; ++attempt) {
        ParamRng rng(seed_ + attempt * 0x51ed270b9ull);
        SymbolTable& t = x_->symbols();
        for (int i = 1; i <= g_.n; ++i) t.assign(x_->u(i), rng.log_draw());
        t.assign(x_->hbar(), rng.log_draw(0.8, 0.4));
        t.assign(x_->z(), rng.log_draw());
        for (int i = 1; i <= g_.n; ++i) t.assign(x_->z_u(i), rng.log_draw(0.7, 0.3));
        try {
            for (const Subset& q : subsets_) x_->require_generic(q);
            // the X' tree weights divide by theta of products of u-ratios;
            // screen every interval product u_a/u_b and u_a/(u_b hbar^{+-1})
            Real fl = Real("1e-18");
            for (int a = 1; a <= g_.n; ++a)
                for (int b = 1; b <= g_.n; ++b) {
                    if (a == b) continue;
                    Cplx d = x_->ulog(a) - x_->ulog(b);
                    if (abs(theta(d, ell_)) < fl) throw NonGenericParameters("u ratio");
                    for (int s = -2; s <= 2; ++s) {
                        if (s == 0) continue;
                        Cplx hh = x_->hlog();
                        Cplx arg = d + Cplx(Real(s) * hh.re, Real(s) * hh.im);
                        if (abs(theta(arg, ell_)) < fl) throw NonGenericParameters("u hbar ratio");
                    }
                }
            return;
        } catch (const NonGenericParameters&) {
            continue;
        }
    }
    throw NonGenericParameters("could not find a generic draw for this seed");
}

void MirrorPair::apply_kappa() {
    SymbolTable& xt = x_->symbols();
    SymbolTable& pt = xp_->symbols();
    Cplx h = xt.log_of(x_->hbar());
    Cplx z = xt.log_of(x_->z());

    pt.assign(xp_->a(2), Cplx(0.0, 0.0));
    int e = g_.k - 1;
    pt.assign(xp_->a(1), z + Cplx(Real(e) * h.re, Real(e) * h.im));
    pt.assign(xp_->hbar(), -h);
    for (int c = 1; c <= g_.n - 1; ++c) {
        int delta = c < g_.k ? +1 : (c > g_.n - g_.k ? -1 : 0);
        Cplx v = xt.log_of(x_->u(c)) - xt.log_of(x_->u(c + 1));
        if (delta != 0) v += Cplx(Real(delta) * h.re, Real(delta) * h.im);
        pt.assign(xp_->z_vertex(c), v);
    }
    // auxiliary Kaehler logs: generic, tied to the seed
    ParamRng rng(seed_ ^ 0xabcdef1234ull);
    pt.assign(xp_->z_a(1), rng.log_draw(0.7, 0.3));
    pt.assign(xp_->z_a(2), rng.log_draw(0.7, 0.3));
}

MirrorReport verify_mirror(GrassData g, EllipticParams ell, std::uint64_t seed,
                           const LimitConfig& lc, const Real& tol, const Real& floor) {
    auto t0 = std::chrono::steady_clock::now();
    MirrorPair ctx(g, ell, seed);
    const auto& subsets = ctx.subsets();
    const auto& diagrams = ctx.diagrams();
    int npts = static_cast<int>(subsets.size());

    MirrorReport rep;
    rep.g = g;
    rep.seed = seed;
    rep.tolerance = tol;

    rep.t_matrix.assign(static_cast<size_t>(npts), std::vector<Cplx>(static_cast<size_t>(npts)));
    for (int r = 0; r < npts; ++r)
        for (int c = 0; c < npts; ++c)
            rep.t_matrix[static_cast<size_t>(r)][static_cast<size_t>(c)] =
                ctx.x().restrict(subsets[static_cast<size_t>(r)], subsets[static_cast<size_t>(c)]);

    rep.tprime_matrix.assign(static_cast<size_t>(npts), std::vector<Cplx>(static_cast<size_t>(npts)));
    for (int r = 0; r < npts; ++r)
        for (int c = 0; c < npts; ++c) {
            LimitConfig lcp = lc;
            lcp.direction_seed = lc.direction_seed + static_cast<std::uint64_t>(r * npts + c);
            rep.tprime_matrix[static_cast<size_t>(r)][static_cast<size_t>(c)] =
                ctx.xprime().restrict(diagrams[static_cast<size_t>(r)], diagrams[static_cast<size_t>(c)], lcp);
        }

    for (int r = 0; r < npts; ++r)
        for (int c = 0; c < npts; ++c) {
            // p = bj(lambda_r) is the r-th subset, q = bj(mu_c) the c-th
            Cplx lhs = rep.t_matrix[static_cast<size_t>(r)][static_cast<size_t>(r)] *
                       rep.tprime_matrix[static_cast<size_t>(r)][static_cast<size_t>(c)];
            Cplx rhs = rep.tprime_matrix[static_cast<size_t>(c)][static_cast<size_t>(c)] *
                       rep.t_matrix[static_cast<size_t>(c)][static_cast<size_t>(r)];
            PairResidual pr;
            pr.row = r;
            pr.col = c;
            pr.lhs_abs = abs(lhs);
            pr.rhs_abs = abs(rhs);
            Real scale = std::max(std::max(pr.lhs_abs, pr.rhs_abs), floor);
            pr.residual = abs(lhs - rhs) / scale;
            pr.pass = pr.residual <= tol;
            rep.all_pass = rep.all_pass && pr.pass;
            rep.pairs.push_back(pr);
        }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

std::pair<int, int> connecting_indices(GrassData g, const YoungDiagram& lam,
                                       const YoungDiagram& mu) {
    Subset p = bij(lam, g), q = bij(mu, g);
    std::vector<int> in_p_not_q, in_q_not_p;
    for (int v : p.elements)
        if (!q.contains(v)) in_p_not_q.push_back(v);
    for (int v : q.elements)
        if (!p.contains(v)) in_q_not_p.push_back(v);
    if (in_p_not_q.size() != 1 || in_q_not_p.size() != 1)
        throw PairNotConnected("fixed points are not joined by an equivariant curve");
    return {in_p_not_q[0], in_q_not_p[0]};
}

Real gkm_check_pair(GrassData g, EllipticParams ell, const YoungDiagram& lam,
                    const YoungDiagram& mu, int i, int j, std::uint64_t seed,
                    const LimitConfig& lc) {
    auto [ci, cj] = connecting_indices(g, lam, mu);
    if (!((ci == i && cj == j) || (ci == j && cj == i)))
        throw PairNotConnected("the pair is not connected via the given (i,j)");

    // the sections agree restriction-wise on the hyperplane u_i = u_j; their
    // bold restrictions there are finite 0/0 limits, approached on a ladder
    MirrorPair ctx(g, ell, seed);
    const auto& diagrams = ctx.diagrams();
    Cplx base_uj = ctx.x().symbols().log_of(ctx.x().u(j));

    auto richardson = [](std::vector<Cplx> row) {
        Real pw(1);
        for (size_t lvl = 1; lvl < row.size(); ++lvl) {
            pw *= 2;
            for (size_t t = 0; t + lvl < row.size(); ++t)
                row[t] = (row[t + 1] * pw - row[t]) / Cplx(pw - Real(1));
        }
        return row[0];
    };

    LimitConfig inner = lc;
    inner.eps = Real("1e-10");
    inner.steps = std::max(lc.steps, 3);

    Real worst(0);
    Real scale("1e-30");
    for (size_t nu = 0; nu < diagrams.size(); ++nu) {
        if (!lam.subset_of(diagrams[nu])) continue;
        std::vector<Cplx> va, vb;
        Real e = lc.eps;
        for (int s = 0; s < lc.steps; ++s) {
            ctx.x().symbols().assign(ctx.x().u(i), base_uj + Cplx(e, e / 3));
            ctx.apply_kappa();
            inner.direction_seed = lc.direction_seed + nu * 131 + static_cast<std::uint64_t>(s);
            va.push_back(ctx.xprime().theta_prefactor(lam) *
                         ctx.xprime().restrict(lam, diagrams[nu], inner));
            vb.push_back(ctx.xprime().theta_prefactor(mu) *
                         ctx.xprime().restrict(mu, diagrams[nu], inner));
            e /= 2;
        }
        Cplx A = richardson(va), B = richardson(vb);
        scale = std::max(scale, std::max(abs(A), abs(B)));
        worst = std::max(worst, abs(A - B));
    }
    return worst / scale;
}

Cplx cancellation_check(GrassData g, EllipticParams ell, const YoungDiagram& lam,
                        const Tree& tbar, const Box& b, std::uint64_t seed) {
    MirrorPair ctx(g, ell, seed);
    if (!involution_admissible(tbar, b, lam, g))
        throw InvolutionUndefined("cancellation_check: inadmissible box");

    // constraint u(sbar) = 1: a vanishing integer combination of the u logs
    std::vector<Box> sbar = tbar.subtree(b);
    std::vector<int> w(static_cast<size_t>(g.n + 1), 0);
    for (const Box& s : sbar) {
        int c = content(s, g);
        w[static_cast<size_t>(c + 1)] += 1;
        w[static_cast<size_t>(c)] -= 1;
    }
    int pivot = 0;
    for (int m = g.n; m >= 1; --m)
        if (w[static_cast<size_t>(m)] != 0) { pivot = m; break; }
    if (pivot == 0) throw Error("cancellation_check: empty constraint");

    Cplx excess;
    for (int m = 1; m <= g.n; ++m) {
        if (w[static_cast<size_t>(m)] == 0) continue;
        Cplx l = ctx.x().symbols().log_of(ctx.x().u(m));
        excess += Cplx(Real(w[static_cast<size_t>(m)]) * l.re, Real(w[static_cast<size_t>(m)]) * l.im);
    }
    Cplx lp = ctx.x().symbols().log_of(ctx.x().u(pivot));
    Real wp(w[static_cast<size_t>(pivot)]);
    Cplx constrained = lp - Cplx(excess.re / wp, excess.im / wp);

    ParamRng xr(seed ^ 0x5151ull);
    ChernAssignment xdraw(ctx.xprime().boxes().size());
    for (auto& v : xdraw) v = xr.log_draw();

    // at u(sbar) = 1 exactly, theta(Pi) of the swapped subtree vanishes in
    // both weights; approach the constraint and extrapolate the finite ratio
    Tree inv = involution(tbar, b, lam, g);
    const XPrimeSide& xp = ctx.xprime();
    std::vector<Cplx> vals;
    Real e("1e-10");
    for (int s = 0; s < 3; ++s) {
        ctx.x().symbols().assign(ctx.x().u(pivot), constrained + Cplx(e / wp, e / (3 * wp)));
        ctx.apply_kappa();
        Cplx num = xp.refined_R(tbar, lam, xdraw) * xp.refined_W(tbar, lam, xdraw);
        Cplx den = xp.refined_R(inv, lam, xdraw) * xp.refined_W(inv, lam, xdraw);
        if (abs(den) < Real("1e-40"))
            throw PoleAtArgument("cancellation_check: involuted weight vanishes");
        vals.push_back(num / den);
        e /= 2;
    }
    Real pw(1);
    for (size_t lvl = 1; lvl < vals.size(); ++lvl) {
        pw *= 2;
        for (size_t t = 0; t + lvl < vals.size(); ++t)
            vals[t] = (vals[t + 1] * pw - vals[t]) / Cplx(pw - Real(1));
    }
    return vals[0];
}

MotherK1::MotherK1(MirrorPair& ctx) : ctx_(ctx) {
    if (ctx_.grass().k != 1) throw Error("MotherK1: requires k = 1");
}

Cplx MotherK1::eval(const Cplx& ylog, const std::vector<Cplx>& xlogs) const {
    const GrassData g = ctx_.grass();
    if (static_cast<int>(xlogs.size()) != g.n - 1) throw Error("MotherK1: need n-1 Chern roots");
    const XSide& xs = ctx_.x();
    Cplx h = xs.hlog(), z = xs.zlog();
    // x_0 = a_1 = z hbar^{k-1} = z, x_n = a_2 = 1 under kappa
    auto xl = [&](int i) -> Cplx {
        if (i == 0) return z;
        if (i == g.n) return Cplx(0.0, 0.0);
        return xlogs[static_cast<size_t>(i - 1)];
    };
    Cplx r = one();
    for (int i = 1; i <= g.n; ++i)
        r *= theta(xl(i) + xs.ulog(i) + ylog - xl(i - 1) - h, ctx_.x().ell());
    if (g.n % 2 != 0) r = -r;
    return r;
}

Cplx MotherK1::restrict_x_side(int m, const std::vector<Cplx>& xlogs) const {
    return eval(-ctx_.x().ulog(m), xlogs);
}

std::vector<Cplx> MotherK1::xprime_point(int m) const {
    const GrassData g = ctx_.grass();
    const XSide& xs = ctx_.x();
    Cplx h = xs.hlog(), z = xs.zlog();
    std::vector<Cplx> xlogs;
    for (int i = 1; i <= g.n - 1; ++i) {
        if (i < m) xlogs.push_back(z);
        else {
            int e = i - g.n;  // phi = a_2 hbar'^{n-i} with hbar' = hbar^{-1}
            xlogs.push_back(Cplx(Real(e) * h.re, Real(e) * h.im));
        }
    }
    return xlogs;
}

Cplx MotherK1::restrict_xprime_side(int m, const Cplx& ylog) const {
    return eval(ylog, xprime_point(m));
}

Cplx MotherK1::dual_diagonal(int m) const {
    Cplx r = ctx_.x().theta_prefactor(Subset({m}));
    return ctx_.grass().n % 2 != 0 ? -r : r;
}

MotherGeneral::MotherGeneral(MirrorPair& ctx, const LimitConfig& lc) : ctx_(ctx) {
    const auto& subsets = ctx_.subsets();
    const auto& diagrams = ctx_.diagrams();
    int n = static_cast<int>(subsets.size());
    bold_t_.assign(static_cast<size_t>(n), std::vector<Cplx>(static_cast<size_t>(n)));
    for (int q = 0; q < n; ++q)
        for (int p = 0; p < n; ++p)
            bold_t_[static_cast<size_t>(q)][static_cast<size_t>(p)] =
                ctx_.x().bold_restrict(subsets[static_cast<size_t>(q)], subsets[static_cast<size_t>(p)]);

    bold_tprime_.assign(static_cast<size_t>(n), std::vector<Cplx>(static_cast<size_t>(n)));
    for (int l = 0; l < n; ++l)
        for (int m = 0; m < n; ++m) {
            LimitConfig lcp = lc;
            lcp.direction_seed = lc.direction_seed + static_cast<std::uint64_t>(l * n + m) + 7919;
            bold_tprime_[static_cast<size_t>(l)][static_cast<size_t>(m)] =
                ctx_.xprime().bold_restrict(diagrams[static_cast<size_t>(l)], diagrams[static_cast<size_t>(m)], lcp);
        }

    // invert bold T by Gaussian elimination with partial pivoting
    std::vector<std::vector<Cplx>> a = bold_t_;
    bold_t_inv_.assign(static_cast<size_t>(n), std::vector<Cplx>(static_cast<size_t>(n)));
    for (int i = 0; i < n; ++i) bold_t_inv_[static_cast<size_t>(i)][static_cast<size_t>(i)] = one();
    for (int col = 0; col < n; ++col) {
        int piv = col;
        Real best = abs(a[static_cast<size_t>(col)][static_cast<size_t>(col)]);
        for (int r = col + 1; r < n; ++r) {
            Real v = abs(a[static_cast<size_t>(r)][static_cast<size_t>(col)]);
            if (v > best) { best = v; piv = r; }
        }
        if (best < Real("1e-40"))
            throw SingularRestrictionMatrix("bold T is numerically singular");
        std::swap(a[static_cast<size_t>(piv)], a[static_cast<size_t>(col)]);
        std::swap(bold_t_inv_[static_cast<size_t>(piv)], bold_t_inv_[static_cast<size_t>(col)]);
        Cplx d = inv(a[static_cast<size_t>(col)][static_cast<size_t>(col)]);
        for (int c = 0; c < n; ++c) {
            a[static_cast<size_t>(col)][static_cast<size_t>(c)] *= d;
            bold_t_inv_[static_cast<size_t>(col)][static_cast<size_t>(c)] *= d;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            Cplx f = a[static_cast<size_t>(r)][static_cast<size_t>(col)];
            if (f.re == 0 && f.im == 0) continue;
            for (int c = 0; c < n; ++c) {
                a[static_cast<size_t>(r)][static_cast<size_t>(c)] -= f * a[static_cast<size_t>(col)][static_cast<size_t>(c)];
                bold_t_inv_[static_cast<size_t>(r)][static_cast<size_t>(c)] -= f * bold_t_inv_[static_cast<size_t>(col)][static_cast<size_t>(c)];
            }
        }
    }
}

Cplx MotherGeneral::eval(const std::vector<Cplx>& ylogs, const ChernAssignment& x) const {
    const auto& subsets = ctx_.subsets();
    const auto& diagrams = ctx_.diagrams();
    int n = static_cast<int>(subsets.size());
    std::vector<Cplx> stab_x(static_cast<size_t>(n)), stab_xp(static_cast<size_t>(n));
    for (int p = 0; p < n; ++p)
        stab_x[static_cast<size_t>(p)] = ctx_.x().bold_stab_eval(subsets[static_cast<size_t>(p)], ylogs);
    for (int q = 0; q < n; ++q)
        stab_xp[static_cast<size_t>(q)] =
            ctx_.xprime().theta_prefactor(diagrams[static_cast<size_t>(q)]) *
            ctx_.xprime().stab_eval(diagrams[static_cast<size_t>(q)], x);
    Cplx total;
    for (int q = 0; q < n; ++q)
        for (int p = 0; p < n; ++p)
            total += inverse_at(q, p) * stab_x[static_cast<size_t>(p)] * stab_xp[static_cast<size_t>(q)];
    return total;
}

Cplx MotherGeneral::restrict_x_side(int point_index, const ChernAssignment& x) const {
    // y at the fixed point kills the sum through boldT^{-1} boldT = id,
    // leaving bold Stab' of the matching diagram; evaluate it directly
    const auto& subsets = ctx_.subsets();
    const auto& diagrams = ctx_.diagrams();
    int n = static_cast<int>(subsets.size());
    std::vector<Cplx> ylogs;
    for (int e : subsets[static_cast<size_t>(point_index)].elements)
        ylogs.push_back(-ctx_.x().ulog(e));
    std::vector<Cplx> stab_x(static_cast<size_t>(n)), stab_xp(static_cast<size_t>(n));
    for (int p = 0; p < n; ++p)
        stab_x[static_cast<size_t>(p)] = ctx_.x().bold_stab_eval(subsets[static_cast<size_t>(p)], ylogs);
    for (int q = 0; q < n; ++q)
        stab_xp[static_cast<size_t>(q)] =
            ctx_.xprime().theta_prefactor(diagrams[static_cast<size_t>(q)]) *
            ctx_.xprime().stab_eval(diagrams[static_cast<size_t>(q)], x);
    Cplx total;
    for (int q = 0; q < n; ++q)
        for (int p = 0; p < n; ++p)
            total += inverse_at(q, p) * stab_x[static_cast<size_t>(p)] * stab_xp[static_cast<size_t>(q)];
    return total;
}

Cplx MotherGeneral::restrict_xprime_side(int point_index, const std::vector<Cplx>& ylogs) const {
    const auto& subsets = ctx_.subsets();
    int n = static_cast<int>(subsets.size());
    std::vector<Cplx> stab_x(static_cast<size_t>(n));
    for (int p = 0; p < n; ++p)
        stab_x[static_cast<size_t>(p)] = ctx_.x().bold_stab_eval(subsets[static_cast<size_t>(p)], ylogs);
    Cplx total;
    for (int q = 0; q < n; ++q)
        for (int p = 0; p < n; ++p)
            total += inverse_at(q, p) * stab_x[static_cast<size_t>(p)] *
                     bold_tprime_[static_cast<size_t>(q)][static_cast<size_t>(point_index)];
    return total;
}

} // namespace stabenv
