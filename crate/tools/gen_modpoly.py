#!/usr/bin/env python3
"""Generate classical modular polynomial data files phi<l>.txt.

Evaluates Phi_l(X, j(tau)) = prod_{g in Gamma_0(l) cosets} (X - j(g tau)) at
l+2 sample points tau, interpolates each X-coefficient as a polynomial in
Y = j(tau), and rounds to integers. Output format: one line per stored term
"dx dy c" with dx >= dy (the polynomial is symmetric).

Usage: tools/gen_modpoly.py OUTDIR [l ...]
"""
import sys
import mpmath
from mpmath import mp, mpf, mpc


def jfun(tau):
    return 1728 * mpmath.kleinj(tau)


def modpoly(l):
    mp.dps = 60 * (l + 1) + 200
    n = l + 2
    taus = [mpc(mpf(m) / (3 * n) - mpf(1) / 6, mpf("1.05") + mpf(m) / 50) for m in range(n)]
    ys = []
    xcoeffs = []
    for tau in taus:
        ys.append(jfun(tau))
        conj = [jfun(l * tau)] + [jfun((tau + k) / l) for k in range(l)]
        poly = [mpc(1)]  # coefficients lowest degree first
        for r in conj:
            new = [mpc(0)] * (len(poly) + 1)
            for i, c in enumerate(poly):
                new[i + 1] += c
                new[i] -= r * c
            poly = new
        xcoeffs.append(poly)
    vander = mpmath.matrix(n, n)
    for m in range(n):
        for b in range(n):
            vander[m, b] = ys[m] ** b
    coeffs = {}
    for a in range(l + 2):
        rhs = mpmath.matrix([xcoeffs[m][a] for m in range(n)])
        sol = mpmath.lu_solve(vander, rhs)
        for b in range(n):
            v = sol[b]
            re = int(mpmath.nint(v.real))
            if abs(v.real - re) > mpf("0.01") or abs(v.imag) > mpf("0.01"):
                raise RuntimeError(f"l={l}: coefficient ({a},{b}) not integral: {v}")
            if re != 0:
                coeffs[(a, b)] = re
    for (a, b), c in coeffs.items():
        if coeffs.get((b, a)) != c:
            raise RuntimeError(f"l={l}: asymmetric at ({a},{b})")
    return coeffs


def main():
    out = sys.argv[1]
    ells = [int(x) for x in sys.argv[2:]] or [2, 3, 5, 7, 11, 13]
    for l in ells:
        coeffs = modpoly(l)
        lines = [f"{a} {b} {c}" for (a, b), c in sorted(coeffs.items(), reverse=True) if a >= b]
        with open(f"{out}/phi{l}.txt", "w") as fh:
            fh.write("\n".join(lines) + "\n")
        print(f"phi{l}: {len(lines)} terms", file=sys.stderr)


if __name__ == "__main__":
    main()
