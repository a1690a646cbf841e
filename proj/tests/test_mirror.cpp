#include "doctest.h"

#include "stabenv/mirror.hpp"

using namespace stabenv;

namespace {

struct Init {
    Init() { set_precision_bits(320); }
} init_once;

EllipticParams params() {
    return EllipticParams::from_q(Cplx(Real("0.1"), Real(0)), 320, Real("1e-75"));
}

LimitConfig tight_limits() {
    LimitConfig lc;
    lc.eps = Real("1e-12");
    lc.steps = 4;
    return lc;
}

Real rel_err(const Cplx& a, const Cplx& b) {
    Real m = std::max(abs(a), abs(b));
    if (m == 0) return Real(0);
    return abs(a - b) / m;
}

} // namespace

TEST_CASE("kappa identification, k=1 and n=4,k=2 forms") {
    GrassData g(5, 1);
    MirrorPair ctx(g, params(), 3);
    const XSide& xs = ctx.x();
    const XPrimeSide& xp = ctx.xprime();
    // a_1/a_2 -> z, hbar -> hbar^{-1}, z_i -> u_i/u_{i+1}
    CHECK(abs(xp.alog(1) - xp.alog(2) - xs.zlog()) < Real("1e-80"));
    CHECK(abs(xp.hlog() + xs.hlog()) < Real("1e-80"));
    for (int c = 1; c <= g.n - 1; ++c)
        CHECK(abs(xp.zklog(c) - (xs.ulog(c) - xs.ulog(c + 1))) < Real("1e-80"));
    // recovered u-ratios match the draw
    for (int i = 1; i <= g.n; ++i)
        CHECK(abs((xp.ulog_kappa(i) - xp.ulog_kappa(1)) - (xs.ulog(i) - xs.ulog(1))) < Real("1e-75"));

    GrassData g4(4, 2);
    MirrorPair c4(g4, params(), 5);
    const XSide& x4 = c4.x();
    const XPrimeSide& p4 = c4.xprime();
    Cplx h = x4.hlog();
    CHECK(abs(p4.alog(1) - p4.alog(2) - (x4.zlog() + h)) < Real("1e-80"));
    CHECK(abs(p4.zklog(1) - (x4.ulog(1) + h - x4.ulog(2))) < Real("1e-80"));
    CHECK(abs(p4.zklog(2) - (x4.ulog(2) - x4.ulog(3))) < Real("1e-80"));
    CHECK(abs(p4.zklog(3) - (x4.ulog(3) - h - x4.ulog(4))) < Real("1e-80"));
}

TEST_CASE("prefactors swap sides under kappa") {
    GrassData g(4, 2);
    MirrorPair ctx(g, params(), 9);
    const auto& diagrams = ctx.diagrams();
    const auto& subsets = ctx.subsets();
    LimitConfig lc = tight_limits();
    for (size_t t = 0; t < diagrams.size(); ++t) {
        // Theta'_lambda = T_{p,p}
        Cplx lhs = ctx.xprime().theta_prefactor(diagrams[t]);
        Cplx rhs = ctx.x().restrict(subsets[t], subsets[t]);
        CHECK(rel_err(lhs, rhs) < Real("1e-60"));
        // Theta_p = T'_{lambda,lambda} up to a sign
        Cplx tp = ctx.x().theta_prefactor(subsets[t]);
        Cplx tpl = ctx.xprime().restrict(diagrams[t], diagrams[t], lc);
        Real plus = abs(tp - tpl), minus = abs(tp + tpl);
        CHECK(std::min(plus, minus) / abs(tp) < Real("1e-25"));
        // and T'_{lambda,lambda} matches Theta(N'^-) up to a sign
        Cplx tn = theta_of_char(ctx.xprime().normal_minus(diagrams[t]),
                                ctx.xprime().symbols(), ctx.xprime().ell());
        CHECK(std::min(abs(tn - tpl), abs(tn + tpl)) / abs(tn) < Real("1e-25"));
    }
}

TEST_CASE("mirror equality for n=4,k=2 with the printed case (a,b)=(2,1)") {
    GrassData g(4, 2);
    EllipticParams ell = params();
    LimitConfig lc = tight_limits();
    MirrorReport rep = verify_mirror(g, ell, 7, lc, Real("1e-10"));
    CHECK(rep.all_pass);
    for (auto& pr : rep.pairs) CHECK(pr.residual <= Real("1e-10"));

    // rebuild the context with the same seed to evaluate the fixtures
    MirrorPair ctx(g, ell, 7);
    const XSide& xs = ctx.x();
    Cplx h = xs.hlog(), z = xs.zlog();
    auto u = [&](int i) { return xs.ulog(i); };
    auto th = [&](const Cplx& w) { return theta(w, ell); };
    // bold Stab'(1)|_2 = theta(z h^3) theta(h) theta(u1/u3) theta(z u2 h^3/u3)
    //                    theta(u1/u4) theta(u2/u4)
    Cplx c3 = Cplx(3 * h.re, 3 * h.im);
    Cplx fixture = th(z + c3) * th(h) * th(u(1) - u(3)) * th(z + u(2) + c3 - u(3)) *
                   th(u(1) - u(4)) * th(u(2) - u(4));
    // lambda = diagram #1 (empty), mu = #2 ([1]);  bold T' = Theta'_lambda T'
    Cplx bold_tp = ctx.xprime().theta_prefactor(ctx.diagrams()[0]) *
                   rep.tprime_matrix[0][1];
    CHECK(rel_err(bold_tp, fixture) < Real("1e-20"));
    // bold Stab(2)|_1 must equal the same product
    Cplx bold_t = ctx.x().theta_prefactor(ctx.subsets()[1]) * rep.t_matrix[1][0];
    CHECK(rel_err(bold_t, fixture) < Real("1e-50"));

    // printed case (a,b)=(3,1): bold Stab(3)|_1
    Cplx c2 = Cplx(2 * h.re, 2 * h.im);
    Cplx f31 = th(u(1) - u(3)) * th(u(1) - u(4)) * th(h) * th(h + u(2) - u(3)) *
               th(z + c2 + u(2) - u(4)) * th(z + c3);
    Cplx bold_t31 = ctx.x().theta_prefactor(ctx.subsets()[2]) * rep.t_matrix[2][0];
    CHECK(rel_err(bold_t31, f31) < Real("1e-50"));

    // printed case (a,b)=(6,2): bold Stab'(2)|_6
    Cplx f62 = th(u(3) + h - u(2)) * th(h) * th(h + u(1) - u(2)) *
               th(z + h + u(1) - u(4)) * th(z + c2) * th(u(3) + h - u(4));
    Cplx bold_tp62 = ctx.xprime().theta_prefactor(ctx.diagrams()[1]) *
                     rep.tprime_matrix[1][5];
    CHECK(rel_err(bold_tp62, f62) < Real("1e-20"));
}

TEST_CASE("GKM pairs for n=4,k=2") {
    GrassData g(4, 2);
    EllipticParams ell = params();
    LimitConfig lc;
    lc.eps = Real("1e-8");
    lc.steps = 4;
    // (empty,[1]) is connected through {1,2} -> {1,3}: i=2, j=3
    YoungDiagram empty({}), one({1});
    auto [i, j] = connecting_indices(g, empty, one);
    CHECK(i == 2);
    CHECK(j == 3);
    CHECK(gkm_check_pair(g, ell, empty, one, 2, 3, 21, lc) < Real("1e-10"));

    CHECK_THROWS_AS(connecting_indices(g, empty, YoungDiagram({2, 2})), PairNotConnected);
    CHECK_THROWS_AS(gkm_check_pair(g, ell, empty, one, 1, 4, 21, lc), PairNotConnected);
}

TEST_CASE("X-side GKM analogue: entries glue along u_i = u_j") {
    // for q' = q \ {i} u {j}, T_{p,q} and T_{p,q'} agree at u_i = u_j
    GrassData g(4, 2);
    MirrorPair ctx(g, params(), 23);
    XSide& xs = ctx.x();
    Subset p({2, 4}), q({1, 2}), q2({1, 3});  // q' = q \ {2} u {3}
    Cplx saved = xs.ulog(2);
    xs.symbols().assign(xs.u(2), xs.ulog(3) + Cplx(Real("1e-30"), Real(0)));
    Cplx a = xs.restrict(p, q), b = xs.restrict(p, q2);
    xs.symbols().assign(xs.u(2), saved);
    CHECK(rel_err(a, b) < Real("1e-25"));
}

TEST_CASE("cancellation lemma on R_{4,2} and one R_{5,2} instance") {
    EllipticParams ell = params();
    GrassData g(4, 2);
    for (const auto& lam : enumerate_diagrams(g)) {
        auto bars = enumerate_trees(lam, true, g);
        for (const Tree& t : bars)
            for (const Box& b : t.vertices) {
                if (!involution_admissible(t, b, lam, g)) continue;
                Cplx ratio = cancellation_check(g, ell, lam, t, b, 31);
                CHECK(abs(ratio + one()) < Real("1e-25"));
                // reciprocity through the involuted tree
                Tree w = involution(t, b, lam, g);
                Cplx back = cancellation_check(g, ell, lam, w, b, 31);
                CHECK(abs(ratio * back - one()) < Real("1e-25"));
            }
    }
    // all admissible instances in R_{5,2}, one cross-checked against the
    // reduced two-factor form of R(t)/R(inv t)
    GrassData g5(5, 2);
    int found = 0;
    for (const auto& lam : enumerate_diagrams(g5)) {
        auto bars = enumerate_trees(lam, true, g5);
        for (const Tree& t : bars)
            for (const Box& b : t.vertices) {
                if (!involution_admissible(t, b, lam, g5)) continue;
                Cplx ratio = cancellation_check(g5, ell, lam, t, b, 37);
                CHECK(abs(ratio + one()) < Real("1e-25"));
                if (found == 0) {
                    // direct factor oracle: R(t)/R(inv) = theta(x_b hbar / x_left)
                    //                                   / theta(x_up' / x_b)
                    MirrorPair ctx(g5, ell, 37);
                    ParamRng xr(41);
                    ChernAssignment xd(ctx.xprime().boxes().size());
                    for (auto& v : xd) v = xr.log_draw();
                    Tree w = involution(t, b, lam, g5);
                    Cplx lhs = ctx.xprime().refined_R(t, lam, xd) /
                               ctx.xprime().refined_R(w, lam, xd);
                    Cplx h = ctx.xprime().hlog();
                    auto xl = [&](const Box& bb) {
                        return xd[static_cast<size_t>(ctx.xprime().box_index(bb))];
                    };
                    Box left(b.i - 1, b.j), up(b.i, b.j + 1);
                    Cplx rhs = theta(xl(b) + h - xl(left), ctx.xprime().ell()) /
                               theta(xl(up) - xl(b), ctx.xprime().ell());
                    bool incoming_up = false;
                    for (const TreeEdge& e : t.edges)
                        if (e.head == b && e.tail == up) incoming_up = true;
                    if (!incoming_up) rhs = inv(rhs);
                    CHECK(rel_err(lhs, rhs) < Real("1e-55"));
                }
                ++found;
            }
    }
    CHECK(found > 0);
}

TEST_CASE("holomorphicity: theta(u_i/u_j) bold T' vanishes as u_i -> u_j") {
    GrassData g(4, 2);
    EllipticParams ell = params();
    LimitConfig lc = tight_limits();
    // T_{p,p} T'_{lambda,mu} for lambda=[1] in mu=[2,1]; approach u_2 = u_3
    Real prev(1e30);
    for (double e : {1e-2, 1e-3, 1e-4}) {
        MirrorPair ctx(g, ell, 41);
        XSide& xs = ctx.x();
        xs.symbols().assign(xs.u(2), xs.ulog(3) + Cplx(e, e / 2));
        ctx.apply_kappa();
        Cplx tpq = ctx.x().restrict(ctx.subsets()[1], ctx.subsets()[1]);
        Cplx tp = ctx.xprime().restrict(ctx.diagrams()[1], ctx.diagrams()[4], lc);
        Real mag = abs(tpq * tp);
        CHECK(mag < prev);
        prev = mag;
    }
}

TEST_CASE("mother function for k=1: restrictions are the bold envelopes") {
    EllipticParams ell = params();
    for (int n : {2, 3, 4}) {
        GrassData g(n, 1);
        MirrorPair ctx(g, ell, 50 + static_cast<std::uint64_t>(n));
        MotherK1 mother(ctx);
        ParamRng rng(60 + static_cast<std::uint64_t>(n));
        std::vector<Cplx> xlogs;
        for (int i = 1; i < n; ++i) xlogs.push_back(rng.log_draw());
        Cplx y = rng.log_draw();

        for (int m = 1; m <= n; ++m) {
            // X-side restriction y = u_m^{-1} gives bold Stab'(lambda_m)
            std::vector<int> parts(static_cast<size_t>(m - 1), 1);
            YoungDiagram lam(parts);
            ChernAssignment x(ctx.xprime().boxes().size());
            for (int i = 1; i < n; ++i)
                x[static_cast<size_t>(ctx.xprime().box_index(Box(i, 1)))] =
                    xlogs[static_cast<size_t>(i - 1)];
            Cplx bold_sp = ctx.xprime().theta_prefactor(lam) * ctx.xprime().stab_eval(lam, x);
            CHECK(rel_err(mother.restrict_x_side(m, xlogs), bold_sp) < Real("1e-55"));

            // X'-side restriction gives the envelope of X normalized by the
            // dual diagonal (the sign-correct form of the bold envelope)
            Cplx bold_s = mother.dual_diagonal(m) * ctx.x().stab_eval(Subset({m}), {y});
            CHECK(rel_err(mother.restrict_xprime_side(m, y), bold_s) < Real("1e-55"));
            // the dual diagonal is the computed one, not just its absolute value
            LimitConfig lc = tight_limits();
            std::vector<int> pp(static_cast<size_t>(m - 1), 1);
            Cplx tdiag = ctx.xprime().restrict(YoungDiagram(pp), YoungDiagram(pp), lc);
            CHECK(rel_err(mother.dual_diagonal(m), tdiag) < Real("1e-25"));
        }

        // n=2 hand expansion: two explicit theta factors
        if (n == 2) {
            const XSide& xs = ctx.x();
            Cplx h = xs.hlog(), z = xs.zlog();
            Cplx x1 = xlogs[0];
            Cplx direct = theta(x1 + xs.ulog(1) + y - z - h, ell) *
                          theta(xs.ulog(2) + y - x1 - h, ell);
            CHECK(rel_err(mother.eval(y, xlogs), direct) < Real("1e-60"));
        }
    }
}

TEST_CASE("general mother function") {
    EllipticParams ell = params();
    LimitConfig lc = tight_limits();

    // k=1: agrees with the closed form at random points
    {
        GrassData g(3, 1);
        MirrorPair ctx(g, ell, 71);
        MotherGeneral mg(ctx, lc);
        MotherK1 mk(ctx);
        ParamRng rng(73);
        for (int s = 0; s < 3; ++s) {
            std::vector<Cplx> xlogs = {rng.log_draw(), rng.log_draw()};
            Cplx y = rng.log_draw();
            ChernAssignment x(ctx.xprime().boxes().size());
            for (int i = 1; i < g.n; ++i)
                x[static_cast<size_t>(ctx.xprime().box_index(Box(i, 1)))] =
                    xlogs[static_cast<size_t>(i - 1)];
            CHECK(rel_err(mg.eval({y}, x), mk.eval(y, xlogs)) < Real("1e-18"));
        }
    }

    // restriction consistency at 3 independent draws per (n,k) up to (5,2)
    for (auto [n, k] : {std::pair<int,int>{2, 1}, {3, 1}, {4, 1}, {5, 1}, {4, 2}, {5, 2}}) {
        GrassData g(n, k);
        int npts = static_cast<int>(binomial(n, k));
        for (std::uint64_t d = 0; d < 3; ++d) {
            MirrorPair ctx(g, ell, 77 + d);
            MotherGeneral mg(ctx, lc);
            ParamRng rng(79 + d + static_cast<std::uint64_t>(10 * n + k));
            ChernAssignment x(ctx.xprime().boxes().size());
            for (auto& v : x) v = rng.log_draw();
            std::vector<Cplx> y;
            for (int l = 0; l < k; ++l) y.push_back(rng.log_draw());

            for (int t : {0, npts - 1}) {
                Cplx viam = mg.restrict_x_side(t, x);
                Cplx bold_sp = ctx.xprime().theta_prefactor(ctx.diagrams()[static_cast<size_t>(t)]) *
                               ctx.xprime().stab_eval(ctx.diagrams()[static_cast<size_t>(t)], x);
                CHECK(rel_err(viam, bold_sp) < Real("1e-18"));

                // the normalization on this side is the computed dual diagonal
                Cplx viam2 = mg.restrict_xprime_side(t, y);
                Cplx tdiag = ctx.xprime().restrict(ctx.diagrams()[static_cast<size_t>(t)],
                                                   ctx.diagrams()[static_cast<size_t>(t)], lc);
                Cplx bold_s = tdiag * ctx.x().stab_eval(ctx.subsets()[static_cast<size_t>(t)], y);
                CHECK(rel_err(viam2, bold_s) < Real("1e-16"));
            }
        }
    }
}

TEST_CASE("singular matrix detection") {
    GrassData g(4, 2);
    EllipticParams ell = params();
    MirrorPair ctx(g, ell, 91);
    // nothing singular with a generic draw; the constructor must succeed
    MotherGeneral mg(ctx, tight_limits());
    CHECK(abs(mg.bold_t()[0][0]) > Real(0));
}
