"""Exact univariate integer polynomial helpers.

Polynomials are lists/tuples of Python ints, constant term first.  Everything
here is exact: gcds run a primitive pseudo-remainder sequence, divisions check
exactness, and Yun's squarefree decomposition returns monic integer factors
(factors of monic integer polynomials are themselves monic with integer
coefficients).
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd as int_gcd


def degree(p) -> int:
    d = len(p) - 1
    while d > 0 and p[d] == 0:
        d -= 1
    return d


def trim(p) -> list:
    return list(p[: degree(p) + 1])


def is_zero_poly(p) -> bool:
    return all(c == 0 for c in p)


def derivative(p) -> list:
    return trim([i * p[i] for i in range(1, len(p))] or [0])


def mul(a, b) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def content(p) -> int:
    g = 0
    for c in p:
        g = int_gcd(g, abs(c))
    return g or 1


def primitive(p) -> list:
    g = content(p)
    return [c // g for c in p]


def div_exact(a, b) -> list:
    """a / b when b divides a exactly over Z; raises otherwise."""
    a = trim(a)
    db = degree(b)
    lc = b[db]
    q = [0] * max(degree(a) - db + 1, 1)
    while not is_zero_poly(a):
        da = degree(a)
        if da < db:
            raise ArithmeticError("inexact polynomial division")
        if a[da] % lc != 0:
            raise ArithmeticError("inexact polynomial division")
        f = a[da] // lc
        q[da - db] = f
        for i in range(db + 1):
            a[da - db + i] -= f * b[i]
        a = trim(a)
        if is_zero_poly(a):
            break
    return trim(q)


def poly_gcd(a, b) -> list:
    """Primitive gcd over Z with positive leading coefficient."""
    a = primitive(trim(a))
    b = primitive(trim(b))
    if is_zero_poly(a):
        g = b
    elif is_zero_poly(b):
        g = a
    else:
        if degree(a) < degree(b):
            a, b = b, a
        while True:
            r = _pseudo_rem(a, b)
            if is_zero_poly(r):
                g = b
                break
            a, b = b, primitive(r)
            if degree(b) == 0:
                g = [1] if not is_zero_poly(b) else a
                break
    g = trim(g)
    if g[degree(g)] < 0:
        g = [-c for c in g]
    return g


def _pseudo_rem(a, b) -> list:
    a = trim(a)
    db = degree(b)
    lc = b[db]
    while degree(a) >= db and not is_zero_poly(a):
        da = degree(a)
        f = a[da]
        a = [lc * c for c in a]
        for i in range(db + 1):
            a[da - db + i] -= f * b[i]
        a = trim(a)
    return a


def squarefree_part(p) -> list:
    """p / gcd(p, p'); keeps the sign of the leading coefficient of p."""
    p = trim(p)
    if degree(p) == 0:
        return p
    g = poly_gcd(p, derivative(p))
    if degree(g) == 0:
        return p
    return div_exact(p, g)


def yun_decomposition(p) -> list[tuple[list, int]]:
    """Monic integer p -> [(f_i, i)] with p = prod f_i**i, f_i monic squarefree,
    pairwise coprime; the reconstruction is exact."""
    p = trim(p)
    n = degree(p)
    if n == 0:
        return []
    if p[n] != 1:
        raise ValueError("yun_decomposition expects a monic polynomial")
    dp = derivative(p)
    g = poly_gcd(p, dp)
    if degree(g) == 0:
        return [(p, 1)]
    out = []
    w = div_exact(p, g)
    y = div_exact(dp, g)
    i = 1
    while degree(w) > 0:
        z = trim([yc - wc for yc, wc in _zip_pad(y, derivative(w))])
        f = poly_gcd(w, z)
        if degree(f) > 0:
            out.append((f, i))
            w = div_exact(w, f)
            y = div_exact(z, f)
        else:
            y = z
        i += 1
    return out


def _zip_pad(a, b):
    la, lb = len(a), len(b)
    if la < lb:
        a = list(a) + [0] * (lb - la)
    elif lb < la:
        b = list(b) + [0] * (la - lb)
    return zip(a, b)


# ---------------------------------------------------------------------------
# Sturm sequences

def sturm_chain(f) -> list[list[Fraction]]:
    """Sturm chain of a squarefree polynomial, over exact rationals."""
    p0 = [Fraction(c) for c in trim(f)]
    p1 = [Fraction(c) for c in derivative(f)]
    chain = [p0, p1]
    while degree(chain[-1]) > 0:
        r = _frac_rem(chain[-2], chain[-1])
        if all(c == 0 for c in r):
            break
        chain.append([-c for c in r])
    return chain


def _frac_rem(a, b):
    a = list(a)
    db = degree(b)
    while degree(a) >= db and any(c != 0 for c in a):
        da = degree(a)
        if a[da] == 0:
            a = a[:da]
            continue
        f = a[da] / b[db]
        for i in range(db + 1):
            a[da - db + i] -= f * b[i]
        a = trim(a)
    return trim(a)


def _variations(signs) -> int:
    s = [x for x in signs if x != 0]
    return sum(1 for u, v in zip(s, s[1:]) if u * v < 0)


def sturm_count_upto(f, x0) -> int:
    """Number of distinct real roots of squarefree f in (-inf, x0]."""
    chain = sturm_chain(f)

    def sign_at_minus_inf(p):
        d = degree(p)
        lc = p[d]
        s = (lc > 0) - (lc < 0)
        return s if d % 2 == 0 else -s

    def sign_at(p, x):
        acc = Fraction(0)
        for c in reversed(trim(p)):
            acc = acc * x + c
        return (acc > 0) - (acc < 0)

    x0 = Fraction(x0)
    va = _variations([sign_at_minus_inf(p) for p in chain])
    vb = _variations([sign_at(p, x0) for p in chain])
    return va - vb


def count_real_roots_nonpositive(f) -> int:
    """Distinct real roots of squarefree f in (-inf, 0]."""
    return sturm_count_upto(f, 0)
