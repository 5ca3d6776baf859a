"""Characteristic polynomials of upper Hessenberg matrices.

Two recurrences compute Q_n(z) = det(zI - H_n) exactly:

  * the polynomial form  Q_n = z*Q_{n-1} - sum_{k=1..n} s^(k-1) h_{n-k+1,n} Q_{n-k},
    with Q_0 = 1, which walks the last column of each leading principal
    submatrix; and
  * its coefficient form  q_{n,n} = 1,
    q_{n,j} = q_{n-1,j-1} - sum_{k=1..n-j} s^(k-1) h_{n-k+1,n} q_{n-k,j},
    q_{n,0} = -sum_{k=1..n} s^(k-1) h_{n-k+1,n} q_{n-k,0},
    which works purely on coefficient arrays and is the production path.

An independent Laplace cofactor expansion over exact polynomial arithmetic
serves as the test oracle (first-row expansion with column-subset memoization;
it never uses the recurrences).  All arithmetic is exact: Python ints for real
matrices, GaussInt otherwise.
"""
from __future__ import annotations

from dataclasses import dataclass

from .family import HessMatrix
from .gaussint import GaussInt, ONE

ORACLE_MAX_DIM = 12


class DimensionGuardError(ValueError):
    """Raised when an exhaustive-verification helper is asked for too large an n."""


@dataclass(frozen=True)
class CharPoly:
    """Monic exact-coefficient polynomial; coeffs[j] holds the coefficient of z^j."""

    degree: int
    coeffs: tuple[GaussInt, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.degree + 1:
            raise ValueError("coefficient array must have degree+1 entries")
        if self.coeffs[self.degree] != ONE:
            raise ValueError("characteristic polynomials are monic")

    @property
    def monic(self) -> bool:
        return True

    @property
    def is_real(self) -> bool:
        return all(c.is_real for c in self.coeffs)

    def int_coeffs(self) -> tuple[int, ...]:
        if not self.is_real:
            raise ValueError("polynomial has complex coefficients")
        return tuple(c.re for c in self.coeffs)

    def eval(self, z: GaussInt) -> GaussInt:
        acc = self.coeffs[self.degree]
        for j in range(self.degree - 1, -1, -1):
            acc = acc * z + self.coeffs[j]
        return acc

    def __str__(self) -> str:
        terms = []
        for j in range(self.degree, -1, -1):
            c = self.coeffs[j]
            if c.is_zero:
                continue
            mono = "" if j == 0 else ("z" if j == 1 else f"z^{j}")
            terms.append(f"({c}){mono}" if mono else f"({c})")
        return " + ".join(terms) if terms else "0"


def height(p: CharPoly) -> int:
    """max over coefficients of max(|re|, |im|)."""
    return max(c.compmax() for c in p.coeffs)


def _from_int_coeffs(coeffs) -> CharPoly:
    return CharPoly(len(coeffs) - 1, tuple(GaussInt(c) for c in coeffs))


def _is_real_matrix(m: HessMatrix) -> bool:
    return m.spec.subdiag.is_real and all(e.is_real for e in m.upper)


# ---------------------------------------------------------------------------
# coefficient recurrence over plain values (int or GaussInt)

def coeff_recurrence(n: int, s, columns) -> list:
    """Run the coefficient recurrence over generic exact scalars.

    `columns[m-1]` holds the stored entries h_{1,m}..h_{m,m} of column m.
    Returns the coefficient list of Q_n (constant term first).  Accepts n = 0,
    for which the answer is the convention Q_0 = 1.
    """
    one = s ** 0
    qs = [[one]]
    spow = [one]
    for _ in range(max(n - 1, 0)):
        spow.append(spow[-1] * s)
    for m in range(1, n + 1):
        col = columns[m - 1]
        q = [None] * (m + 1)
        q[m] = one
        for j in range(m - 1, 0, -1):
            acc = qs[m - 1][j - 1]
            for k in range(1, m - j + 1):
                acc = acc - spow[k - 1] * col[m - k] * qs[m - k][j]
            q[j] = acc
        acc = None
        for k in range(1, m + 1):
            term = spow[k - 1] * col[m - k] * qs[m - k][0]
            acc = term if acc is None else acc + term
        q[0] = -acc
        qs.append(q)
    return qs[n]


def charpoly_thm2(m: HessMatrix) -> CharPoly:
    """Characteristic polynomial via the coefficient recurrence (production path)."""
    n = m.spec.n
    if _is_real_matrix(m):
        cols = [tuple(e.re for e in m.column(j)) for j in range(1, n + 1)]
        coeffs = coeff_recurrence(n, m.spec.subdiag.re, cols)
        return _from_int_coeffs(coeffs)
    cols = [m.column(j) for j in range(1, n + 1)]
    coeffs = coeff_recurrence(n, m.spec.subdiag, cols)
    return CharPoly(n, tuple(coeffs))


# production alias: other modules compute characteristic polynomials through this
charpoly = charpoly_thm2


# ---------------------------------------------------------------------------
# polynomial-object recurrence (cross-validation / exposition path)

def _poly_add(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = out[i] + c
    return out


def _poly_scale(a, c):
    return [c * x for x in a]


def charpoly_thm1(m: HessMatrix) -> CharPoly:
    """Characteristic polynomial via the polynomial recurrence, keeping all Q_i."""
    n = m.spec.n
    real = _is_real_matrix(m)
    if real:
        s = m.spec.subdiag.re
        one, zero = 1, 0
        cols = [tuple(e.re for e in m.column(j)) for j in range(1, n + 1)]
    else:
        s = m.spec.subdiag
        one, zero = ONE, GaussInt(0)
        cols = [m.column(j) for j in range(1, n + 1)]
    spow = [one]
    for _ in range(max(n - 1, 0)):
        spow.append(spow[-1] * s)
    qs = [[one]]  # Q_0 = 1
    for mm in range(1, n + 1):
        col = cols[mm - 1]
        q = [zero] + qs[mm - 1]  # z * Q_{m-1}
        for k in range(1, mm + 1):
            c = spow[k - 1] * col[mm - k]
            q = _poly_add(q, _poly_scale(qs[mm - k], -c))
        qs.append(q)
    coeffs = qs[n]
    if real:
        return _from_int_coeffs(coeffs)
    return CharPoly(n, tuple(coeffs))


# ---------------------------------------------------------------------------
# independent oracle: Laplace cofactor expansion of det(zI - M)

def charpoly_oracle(matrix) -> CharPoly:
    """Cofactor-expansion characteristic polynomial; accepts any .to_rows() matrix.

    Expands det(zI - M) along the first remaining row, memoizing minors on the
    surviving column subset.  Exponential in n; guarded to n <= 12 and meant
    for tests and the general-shape path only.
    """
    n = matrix.spec.n
    if n > ORACLE_MAX_DIM:
        raise DimensionGuardError(f"oracle limited to n <= {ORACLE_MAX_DIM}, got {n}")
    rows = matrix.to_rows()
    if all(e.is_real for row in rows for e in row):
        coeffs = _oracle_int([[e.re for e in row] for row in rows], n)
        return _from_int_coeffs(coeffs)
    coeffs = _oracle_generic(rows, n, GaussInt(0), ONE)
    return CharPoly(n, tuple(coeffs))


def _oracle_int(rows, n):
    # entries of zI - M as tuples: (const,) for off-diagonal, (const, 1) on it
    P = [
        [(-rows[i][j], 1) if i == j else (-rows[i][j],) for j in range(n)]
        for i in range(n)
    ]
    memo = {}

    def det(r, colmask):
        if colmask == 0:
            return (1,)
        got = memo.get(colmask)
        if got is not None:
            return got
        deg = n - r
        acc = [0] * (deg + 1)
        sign = 1
        cm = colmask
        while cm:
            c = (cm & -cm).bit_length() - 1
            cm &= cm - 1
            e = P[r][c]
            if len(e) == 2 or e[0] != 0:
                sub = det(r + 1, colmask & ~(1 << c))
                x = e[0]
                if x:
                    for i2, y in enumerate(sub):
                        acc[i2] += sign * x * y
                if len(e) == 2:
                    for i2, y in enumerate(sub):
                        acc[i2 + 1] += sign * y
            sign = -sign
        acc = tuple(acc)
        memo[colmask] = acc
        return acc

    return det(0, (1 << n) - 1)


def _oracle_generic(rows, n, zero, one):
    P = [
        [(-rows[i][j], one) if i == j else (-rows[i][j],) for j in range(n)]
        for i in range(n)
    ]
    memo = {}

    def det(r, colmask):
        if colmask == 0:
            return (one,)
        got = memo.get(colmask)
        if got is not None:
            return got
        deg = n - r
        acc = [zero] * (deg + 1)
        sign = 1
        cm = colmask
        while cm:
            c = (cm & -cm).bit_length() - 1
            cm &= cm - 1
            e = P[r][c]
            if len(e) == 2 or not e[0].is_zero:
                sub = det(r + 1, colmask & ~(1 << c))
                x = e[0] if sign > 0 else -e[0]
                if not x.is_zero:
                    for i2, y in enumerate(sub):
                        acc[i2] = acc[i2] + x * y
                if len(e) == 2:
                    for i2, y in enumerate(sub):
                        acc[i2 + 1] = (acc[i2 + 1] + y) if sign > 0 else (acc[i2 + 1] - y)
            sign = -sign
        acc = tuple(acc)
        memo[colmask] = acc
        return acc

    return det(0, (1 << n) - 1)
