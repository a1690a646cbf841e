#include "stabenv/envelope_x.hpp"

#include <algorithm>
#include <numeric>

namespace stabenv {

XSide::XSide(GrassData g, EllipticParams ell) : g_(g), ell_(ell) {
    for (int i = 1; i <= g_.n; ++i) u_.push_back(tbl_.intern("u_" + std::to_string(i)));
    hbar_ = tbl_.intern("hbar");
    z_ = tbl_.intern("z");
    for (int i = 1; i <= g_.n; ++i) zu_.push_back(tbl_.intern("z_u_" + std::to_string(i)));
}

VirtualChar XSide::tangent_char(const Subset& p) const {
    VirtualChar c;
    for (int i : p.elements) {
        for (int j = 1; j <= g_.n; ++j) {
            if (p.contains(j)) continue;
            Monomial a = Monomial::sym(u(i)) * Monomial::sym(u(j), -1);
            Monomial b = Monomial::sym(u(j)) * Monomial::sym(u(i), -1) * Monomial::sym(hbar_, -1);
            c.add(a);
            c.add(b);
        }
    }
    return c;
}

std::pair<VirtualChar, VirtualChar> XSide::normal_parts(const Subset& p) const {
    VirtualChar minus, plus;
    for (int i : p.elements) {
        for (int j = 1; j <= g_.n; ++j) {
            if (p.contains(j)) continue;
            Monomial a = Monomial::sym(u(i)) * Monomial::sym(u(j), -1);
            Monomial b = Monomial::sym(u(j)) * Monomial::sym(u(i), -1) * Monomial::sym(hbar_, -1);
            // sigma = (1,..,n): weight of u_i/u_j is i - j
            (i < j ? minus : plus).add(a);
            (j < i ? minus : plus).add(b);
        }
    }
    return {minus, plus};
}

VirtualChar XSide::half_tangent_at(const Subset& q) const {
    VirtualChar c;
    for (int i : q.elements)
        for (int j = 1; j <= g_.n; ++j) {
            if (q.contains(j)) continue;
            c.add(Monomial::sym(u(j)) * Monomial::sym(u(i), -1) * Monomial::sym(hbar_, -1));
        }
    return c;
}

Cplx XSide::stab_eval(const Subset& p, const std::vector<Cplx>& ylogs) const {
    if (static_cast<int>(ylogs.size()) != g_.k) throw Error("stab_eval: need k Chern roots");
    Cplx h = hlog(), zl = zlog();

    std::vector<int> perm(static_cast<size_t>(g_.k));
    std::iota(perm.begin(), perm.end(), 0);
    Cplx total;
    do {
        Cplx num = one();
        for (int l = 1; l <= g_.k; ++l) {
            const Cplx& y = ylogs[static_cast<size_t>(perm[static_cast<size_t>(l - 1)])];
            int pl = p.elements[static_cast<size_t>(l - 1)];
            for (int i = 1; i < pl; ++i) num *= theta(y + ulog(i) - h, ell_);
            int e = g_.k - g_.n + pl - 2 * l;
            Cplx shift = Cplx(Real(e) * h.re, Real(e) * h.im) - zl;
            num *= theta(y + ulog(pl) + shift, ell_) / theta(shift, ell_);
            for (int i = pl + 1; i <= g_.n; ++i) num *= theta(y + ulog(i), ell_);
        }
        Cplx den = one();
        for (int i = 1; i <= g_.k; ++i)
            for (int j = i + 1; j <= g_.k; ++j) {
                const Cplx& yi = ylogs[static_cast<size_t>(perm[static_cast<size_t>(i - 1)])];
                const Cplx& yj = ylogs[static_cast<size_t>(perm[static_cast<size_t>(j - 1)])];
                den *= theta(yi - yj, ell_) * theta(yj - yi - h, ell_);
            }
        if (abs(den) < ell_.truncation_tol)
            throw PoleAtArgument("stab_eval: vanishing y-denominator (non-generic Chern roots)");
        total += num / den;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

void XSide::require_generic(const Subset& q) const {
    Real floor = Real("1e-20");
    Cplx h = hlog();
    for (int a = 1; a <= g_.k; ++a)
        for (int b = 1; b <= g_.k; ++b) {
            if (a == b) continue;
            Cplx w = ulog(q.elements[static_cast<size_t>(b - 1)]) - ulog(q.elements[static_cast<size_t>(a - 1)]);
            if (abs(theta(w, ell_)) < floor || abs(theta(w - h, ell_)) < floor)
                throw NonGenericParameters("u-draw too close to a theta zero at " + q.to_string());
        }
}

Cplx XSide::restrict(const Subset& p, const Subset& q) const {
    require_generic(q);
    std::vector<Cplx> ylogs;
    for (int i = 0; i < g_.k; ++i)
        ylogs.push_back(-ulog(q.elements[static_cast<size_t>(i)]));
    return stab_eval(p, ylogs);
}

Cplx XSide::diagonal_closed_form(const Subset& p) const {
    Cplx h = hlog();
    Cplx r = one();
    for (int i : p.elements)
        for (int j = 1; j <= g_.n; ++j) {
            if (p.contains(j)) continue;
            if (i < j) r *= theta(ulog(j) - ulog(i), ell_);
            else r *= theta(ulog(j) - ulog(i) - h, ell_);
        }
    return r;
}

Cplx XSide::theta_prefactor(const Subset& p) const {
    Cplx h = hlog(), zl = zlog();
    Cplx r = one();
    for (int m = 1; m <= g_.k; ++m) {
        int e = g_.k - g_.n + p.elements[static_cast<size_t>(m - 1)] - 2 * m;
        r *= theta(Cplx(Real(e) * h.re, Real(e) * h.im) - zl, ell_);
    }
    return r;
}

Cplx XSide::bold_restrict(const Subset& p, const Subset& q) const {
    return theta_prefactor(p) * restrict(p, q);
}

Cplx XSide::bold_stab_eval(const Subset& p, const std::vector<Cplx>& ylogs) const {
    return theta_prefactor(p) * stab_eval(p, ylogs);
}

std::vector<int> XSide::index_degrees(const Subset& p) const {
    std::vector<int> D(static_cast<size_t>(g_.n), 0);
    for (int i : p.elements)
        for (int j = 1; j <= g_.n; ++j) {
            if (p.contains(j) || j <= i) continue;
            D[static_cast<size_t>(i - 1)] -= 1;
            D[static_cast<size_t>(j - 1)] += 1;
        }
    return D;
}

Cplx XSide::u_function(const Subset& p, const Subset& q) const {
    Cplx h = hlog(), zl = zlog();
    Cplx r = theta_of_char(half_tangent_at(q), tbl_, ell_);
    // the Chern-root fixed-point values enter uninverted; the inverted form
    // predicts the wrong z-power under u_i -> u_i q (checked against the
    // k=1 closed form and the explicit envelope)
    for (int m = 0; m < g_.k; ++m) {
        r *= phi(ulog(p.elements[static_cast<size_t>(m)]), -zl, ell_);
        r /= phi(ulog(q.elements[static_cast<size_t>(m)]), -zl, ell_);
    }
    std::vector<int> D = index_degrees(p);
    for (int i = 1; i <= g_.n; ++i) {
        Cplx zu = tbl_.log_of(z_u(i));
        int d = D[static_cast<size_t>(i - 1)];
        Cplx arg = Cplx(Real(d) * h.re, Real(d) * h.im) - zu;
        r *= phi(ulog(i), arg, ell_) / phi(ulog(i), -zu, ell_);
    }
    return r;
}

} // namespace stabenv
