#!/usr/bin/env python3
"""Extended-precision reference values for the ruin solver test suite.

Slow on purpose: every root is found by plain bisection at 60 significant
digits, and the boundary constants come from a direct 3x3 linear solve of
the matching conditions rather than from the closed-form eliminations the
library uses. For the rho != r regimes the closed-form coefficient
expressions are evaluated as well and must agree.

Usage: python3 tools/golden.py            (prints a table of values)
       python3 tools/golden.py --rust     (prints Rust const declarations)
"""

import sys

from mpmath import mp, mpf, sqrt, log, exp, matrix, lu_solve

mp.dps = 60

CASES = {
    "rho_greater": dict(r="0.02", mu="0.06", sigma="0.2", lam="0.04", rho="0.05", c_bar="0.01", kappa="1"),
    "rho_equal": dict(r="0.02", mu="0.06", sigma="0.2", lam="0.04", rho="0.02", c_bar="0.03", kappa="1"),
    "rho_less": dict(r="0.02", mu="0.06", sigma="0.2", lam="0.04", rho="0.01", c_bar="0.03", kappa="1"),
}


def bisect(f, lo, hi, iters=400):
    flo = f(lo)
    fhi = f(hi)
    assert flo * fhi < 0, (lo, hi, flo, fhi)
    for _ in range(iters):
        mid = (lo + hi) / 2
        fm = f(mid)
        if fm == 0:
            return mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return (lo + hi) / 2


def quad_roots(a, b, c):
    disc = sqrt(b * b - 4 * a * c)
    r1 = (-b + disc) / (2 * a)
    r2 = (-b - disc) / (2 * a)
    return max(r1, r2), min(r1, r2)


class Problem:
    def __init__(self, p):
        self.r = mpf(p["r"])
        self.mu = mpf(p["mu"])
        self.sigma = mpf(p["sigma"])
        self.lam = mpf(p["lam"])
        self.rho = mpf(p["rho"])
        self.cb = mpf(p["c_bar"])
        self.kappa = mpf(p["kappa"])
        r, lam, rho = self.r, self.lam, self.rho
        self.delta = ((self.mu - r) / self.sigma) ** 2 / 2
        d = self.delta
        self.B1, self.B2 = quad_roots(d, -(r - lam + d), -lam)
        self.equal = rho == r
        if not self.equal:
            self.Bh1, self.Bh2 = quad_roots(d, -(r - rho - lam + d), -lam)
            self.d = self.Bh1 / (self.Bh1 - 1)
            s = r - rho + lam + d
            self.d_closed = (s + sqrt(s * s + 4 * (rho - r) * lam)) / (2 * (r - rho))
            self.G = self.cb / (rho - r)
        else:
            self.E = self.cb / (d + lam)
        self.A = (self.cb + rho * self.kappa) / r
        self.solve()

    # inner-region dual (D-hat-2 = 0) and its derivative, given D-hat-1
    def inner(self, Dh1, y):
        if self.equal:
            return Dh1 * y - self.E * y * log(y)
        return Dh1 * y ** self.Bh1 - self.G * y

    def inner_p(self, Dh1, y):
        if self.equal:
            return Dh1 - self.E * (log(y) + 1)
        return Dh1 * self.Bh1 * y ** (self.Bh1 - 1) - self.G

    def coeffs_unit(self):
        """D1, D2, Dh1 for y_kappa = 1 from the three matching conditions."""
        B1, B2, A, k = self.B1, self.B2, self.A, self.kappa
        # unknowns (D1, D2, Dh1); y = 1 so powers of y are 1 and log y = 0
        if self.equal:
            row_inner_p = [0, 0, 1]
            rhs_inner_p = k + self.E
            row_cont = [1, 1, -1]
            rhs_cont = -A
        else:
            row_inner_p = [0, 0, self.Bh1]
            rhs_inner_p = k + self.G
            row_cont = [1, 1, -1]
            rhs_cont = -self.G - A
        M = matrix([[B1, B2, 0], row_inner_p, row_cont])
        v = matrix([k - A, rhs_inner_p, rhs_cont])
        s = lu_solve(M, v)
        return s[0], s[1], s[2]

    def solve(self):
        B1, B2, A = self.B1, self.B2, self.A
        D1u, D2u, Dh1u = self.coeffs_unit()
        self.D1u, self.D2u = D1u, D2u

        def f(x):
            return D1u * B1 * x ** (B1 - 1) + D2u * B2 * x ** (B2 - 1) + A

        hi = mpf(2)
        while f(hi) > 0:
            hi *= 2
        self.x = bisect(f, mpf(1), hi)
        x = self.x
        yk = 1 / (D1u * x ** B1 + D2u * x ** B2 + A * x)
        self.yk = yk
        self.y0 = x * yk
        self.D1 = D1u * yk ** (1 - B1)
        self.D2 = D2u * yk ** (1 - B2)
        if self.equal:
            self.Dh1 = self.kappa + self.E * (log(yk) + 1)
        else:
            self.Dh1 = (self.kappa + self.G) * yk ** (1 - self.Bh1) / self.Bh1
            self.check_printed()

    def check_printed(self):
        """Closed-form coefficient expressions, evaluated as printed."""
        B1, B2, Bh1, A, k, G = self.B1, self.B2, self.Bh1, self.A, self.kappa, self.G
        br1 = A * Bh1 * (1 - B2) - k * (Bh1 - B2) + G * B2 * (1 - Bh1)
        br2 = A * Bh1 * (B1 - 1) - k * (B1 - Bh1) - G * B1 * (1 - Bh1)
        den = Bh1 * (B1 - B2)
        D1 = -self.yk ** (1 - B1) / den * br1
        D2 = -self.yk ** (1 - B2) / den * br2
        x = self.x
        lhs = B1 * x ** (B1 - 1) / den * br1 + B2 * x ** (B2 - 1) / den * br2
        inv_y0 = -x ** (B1 - 1) / den * br1 + A - x ** (B2 - 1) / den * br2
        for a, b in [(D1, self.D1), (D2, self.D2), (lhs, A), (inv_y0, 1 / self.y0)]:
            assert abs(a - b) <= mpf("1e-40") * (1 + abs(b)), (a, b)

    def outer(self, y):
        return self.D1 * y ** self.B1 + self.D2 * y ** self.B2 + self.A * y

    def outer_p(self, y):
        return self.D1 * self.B1 * y ** (self.B1 - 1) + self.D2 * self.B2 * y ** (self.B2 - 1) + self.A

    def outer_pp(self, y):
        B1, B2 = self.B1, self.B2
        return self.D1 * B1 * (B1 - 1) * y ** (B1 - 2) + self.D2 * B2 * (B2 - 1) * y ** (B2 - 2)

    def inner_pp(self, y):
        if self.equal:
            return -self.E / y
        return self.Dh1 * self.Bh1 * (self.Bh1 - 1) * y ** (self.Bh1 - 2)

    def dual_of(self, w):
        """y = -h'(w) by bisection on the appropriate branch of h~'."""
        if w < self.kappa:
            hi = self.yk * 2
            while self.outer_p(hi) > w:
                hi *= 2
            return bisect(lambda y: self.outer_p(y) - w, self.yk, hi), "outer"
        lo = self.yk / 2
        while self.inner_p(self.Dh1, lo) < w:
            lo /= 2
        return bisect(lambda y: self.inner_p(self.Dh1, y) - w, lo, self.yk), "inner"

    def h(self, w):
        if not self.equal and self.rho < self.r and w >= self.cb / (self.r - self.rho):
            return mpf(0), mpf(0), mpf(0)
        y, branch = self.dual_of(w)
        if branch == "outer":
            ht, hpp = self.outer(y), self.outer_pp(y)
        else:
            ht, hpp = self.inner(self.Dh1, y), self.inner_pp(y)
        return ht - w * y, -y, -1 / hpp

    def pi_star(self, w):
        _, hp, hpp = self.h(w)
        return -(self.mu - self.r) / self.sigma ** 2 * hp / hpp


def shortfall_value(p, w, b):
    """V(w, m) for f(m) = max(b - m, 0) and m >= b: h(w) times the integral
    of 1/h over (-inf, b], by tanh-sinh (a trapezoid rule after a
    double-exponential change of variable). Run at reduced precision."""
    saved = mp.dps
    mp.dps = 30
    try:
        hw = p.h(w)[0]
        return hw * mp.quad(lambda x: 1 / p.h(x)[0], [-mp.inf, b])
    finally:
        mp.dps = saved


def fmt(v):
    return mp.nstr(v, 20, min_fixed=-30, max_fixed=30)


def main():
    rust = "--rust" in sys.argv
    for name, params in CASES.items():
        p = Problem(params)
        vals = [
            ("delta", p.delta),
            ("b1", p.B1),
            ("b2", p.B2),
        ]
        if not p.equal:
            assert abs(p.d - p.d_closed) < mpf("1e-50")
            vals += [("bhat1", p.Bh1), ("bhat2", p.Bh2), ("d", p.d)]
        vals += [
            ("ratio", p.x),
            ("y0", p.y0),
            ("y_kappa", p.yk),
            ("d1", p.D1),
            ("d2", p.D2),
            ("dhat1", p.Dh1),
        ]
        for w in ["-2", "-1", "0.5", "2", "2.9", "5"]:
            hw, hp, hpp = p.h(mpf(w))
            tag = w.replace("-", "m").replace(".", "p")
            vals += [(f"h_at_{tag}", hw), (f"hp_at_{tag}", hp), (f"hpp_at_{tag}", hpp)]
        vals += [("pi_at_0p5", p.pi_star(mpf("0.5"))), ("pi_at_m1", p.pi_star(mpf(-1)))]
        if name == "rho_greater":
            H = p.cb * p.r / (p.rho - p.r)
            vals.append(("hara_u_at_0p11", (mpf("0.11") + H) ** p.d / p.d))
            vals.append(("shortfall_at_2", shortfall_value(p, mpf(2), mpf(0))))
        if rust:
            print(f"pub mod {name} {{")
            for k, v in vals:
                print(f"    pub const {k.upper()}: f64 = {fmt(v)};")
            print("}")
        else:
            print(f"[{name}]")
            for k, v in vals:
                print(f"  {k:>14} = {fmt(v)}")


if __name__ == "__main__":
    main()
