#!/usr/bin/env python3
"""Generate classical modular polynomials Phi_l(X, Y) from the q-expansion of j.

Writes lines `l i j c` (coefficient c of X^i Y^j, i >= j, symmetry implied).
Usage: gen_modpoly.py 2 3 5 7 11 13 17 19 23 29 31 > phi_l.dat
"""
import sys
from fractions import Fraction


def j_series(prec):
    """Coefficients of q*j(q) for q^0 .. q^(prec-1)."""
    n = prec + 1
    e4 = [0] * n
    e4[0] = 1
    for k in range(1, n):
        e4[k] = 240 * sum(d ** 3 for d in range(1, k + 1) if k % d == 0)
    # prod (1 - q^k)^24
    eta = [0] * n
    eta[0] = 1
    for k in range(1, n):
        for _ in range(24):
            for i in range(n - 1, k - 1, -1):
                eta[i] -= eta[i - k]
    e4c = mul(mul(e4, e4, n), e4, n)
    # j = E4^3 / (q * eta24)  => q*j = E4^3 / eta24
    inv = [0] * n
    inv[0] = 1
    for i in range(1, n):
        inv[i] = -sum(eta[k] * inv[i - k] for k in range(1, i + 1))
    return mul(e4c, inv, n)[:prec]


def mul(a, b, n):
    out = [0] * n
    for i, x in enumerate(a[:n]):
        if x == 0:
            continue
        for k, y in enumerate(b[: n - i]):
            out[i + k] += x * y
    return out


def phi(l):
    top = l * (l + 1)
    qj = j_series(top + 2)
    # powers[d][t] = coeff of q^(t-d) in j^d, for t = 0..d
    powers = [[1] + [0] * top]
    for d in range(1, top + 1):
        prev = powers[-1]
        powers.append([sum(qj[u] * prev[t - u] for u in range(t + 1)) for t in range(top + 1)])

    def coeff(d, e):
        # coefficient of q^e in j^d, for -d <= e <= 0
        return powers[d][e + d]

    sums = []
    for m in range(1, l + 2):
        # series for s_m, exponents -l*m .. 0
        series = {}
        for e in range(-m, 1):
            series[l * e] = series.get(l * e, 0) + coeff(m, e)
        for e in range(-m, 1):
            if e % l == 0:
                series[e // l] = series.get(e // l, 0) + l * coeff(m, e)
        poly = [0] * (l * m + 1)
        for d in range(l * m, 0, -1):
            c = series.get(-d, 0)
            if c:
                poly[d] = c
                for e in range(-d, 1):
                    series[e] = series.get(e, 0) - c * coeff(d, e)
        poly[0] = series.get(0, 0)
        sums.append(poly)

    def padd(a, b):
        n = max(len(a), len(b))
        return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]

    def pmul(a, b):
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for k, y in enumerate(b):
                out[i + k] += x * y
        return out

    elem = [[1]]
    for k in range(1, l + 2):
        acc = [0]
        for i in range(1, k + 1):
            term = pmul(elem[k - i], sums[i - 1])
            if i % 2 == 0:
                term = [-t for t in term]
            acc = padd(acc, term)
        assert all(t % k == 0 for t in acc)
        elem.append([t // k for t in acc])
    coeffs = {}
    for k in range(l + 2):
        sign = -1 if k % 2 else 1
        for i, c in enumerate(elem[k]):
            if c:
                coeffs[(i, l + 1 - k)] = coeffs.get((i, l + 1 - k), 0) + sign * c
    for (i, j), c in coeffs.items():
        assert coeffs.get((j, i)) == c, (l, i, j)
    return coeffs


def main():
    ls = [int(a) for a in sys.argv[1:]] or [2, 3, 5, 7]
    print("# Classical modular polynomials Phi_l(X, Y).")
    print("# Each line: l i j c  -- coefficient c of X^i Y^j, stored for i >= j;")
    print("# the coefficient of X^j Y^i is the same.")
    for l in ls:
        coeffs = phi(l)
        print()
        for (i, j) in sorted(coeffs, reverse=True):
            if i >= j:
                print(l, i, j, coeffs[(i, j)])


if __name__ == "__main__":
    main()
