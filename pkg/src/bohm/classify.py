"""Exact classification of polynomials and matrices.

Everything here decides in exact arithmetic:

  * left-half-plane stability by the Hurwitz criterion (all coefficients
    positive, then strict positivity of every leading principal minor of the
    Hurwitz matrix, evaluated fraction-free over big integers);
  * neutrality (all roots purely imaginary) structurally: strip the z^m
    factor, demand only even-degree terms, substitute u = z^2 and require all
    roots of the resulting g(u) to be real and negative via a Sturm count of
    its squarefree part;
  * nilpotency (p = z^n) and singularity (constant term 0) directly;
  * normality by the exact Gaussian-integer commutator A*A - AA*, including a
    complete branch-and-prune scan of zero-diagonal families;
  * non-derogatoriness by exact rational rank of the Krylov matrix of powers.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import polyint
from .charpoly import CharPoly
from .family import FamilySpec, HessMatrix
from .gaussint import GaussInt, ONE, ZERO


# ---------------------------------------------------------------------------
# polynomial predicates

def _real_coeffs(p: CharPoly) -> tuple[int, ...]:
    if not p.is_real:
        raise ValueError("predicate requires real coefficients")
    return p.int_coeffs()


def is_stable_type1(p: CharPoly) -> bool:
    """True iff every root lies strictly in the open left half plane.

    Monic real input.  Necessary prefilter: all coefficients strictly
    positive.  Then the leading principal minors of the Hurwitz matrix must
    all be strictly positive; they are computed by fraction-free elimination,
    whose pivots are exactly those minors.
    """
    coeffs = _real_coeffs(p)
    n = p.degree
    if n == 0:
        return False
    if any(c <= 0 for c in coeffs):
        return False
    return _hurwitz_minors_positive(coeffs, n)


def _hurwitz_minors_positive(coeffs, n: int) -> bool:
    # H[i][j] = a_{2(j+1)-(i+1)} with a_k = coeffs[n - k], zero out of range
    def a(k):
        return coeffs[n - k] if 0 <= k <= n else 0

    m = [[a(2 * (j + 1) - (i + 1)) for j in range(n)] for i in range(n)]
    prev = 1
    for k in range(n):
        pivot = m[k][k]
        if pivot <= 0:
            return False
        for i in range(k + 1, n):
            mik = m[i][k]
            row_i = m[i]
            row_k = m[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - mik * row_k[j]) // prev
        prev = pivot
    return True


def is_neutral(p: CharPoly) -> bool:
    """True iff every root has zero real part.

    After stripping z^m, the remaining q must be even, q(z) = g(z^2), and
    neutrality holds iff g has only real non-positive roots: coefficients of g
    must be nonnegative and the squarefree part of g must have full real root
    count on (-inf, 0] by Sturm.
    """
    coeffs = list(_real_coeffs(p))
    m = 0
    while coeffs[m] == 0:
        m += 1
    q = coeffs[m:]
    if len(q) == 1:
        return True  # z^n
    if any(q[i] != 0 for i in range(1, len(q), 2)):
        return False
    g = q[0::2]
    if any(c < 0 for c in g):
        return False
    f = polyint.squarefree_part(g)
    return polyint.count_real_roots_nonpositive(f) == polyint.degree(f)


def is_nilpotent(p: CharPoly) -> bool:
    """True iff p = z^n (all eigenvalues zero)."""
    return all(c.is_zero for c in p.coeffs[: p.degree])


def is_singular(p: CharPoly) -> bool:
    """True iff the constant coefficient is zero."""
    return p.coeffs[0].is_zero


def trace_prefilter(m: HessMatrix) -> bool:
    """True iff trace(m) < 0; a necessary condition for Type I stability.

    Zero-diagonal matrices have trace 0, so none can pass.
    """
    tr = ZERO
    for i in range(1, m.spec.n + 1):
        tr = tr + m.entry(i, i)
    if not tr.is_real:
        raise ValueError("trace prefilter requires a real population")
    return tr.re < 0


# ---------------------------------------------------------------------------
# normality

def _commutator_entry(rows, i: int, k: int, n: int) -> GaussInt:
    # (A A*)_{ik} - (A* A)_{ik}
    s1 = ZERO
    s2 = ZERO
    for t in range(n):
        s1 = s1 + rows[i][t] * rows[k][t].conjugate()
        s2 = s2 + rows[t][i].conjugate() * rows[t][k]
    return s1 - s2


def is_normal(m) -> bool:
    """Exact check of A*A == AA* over Gaussian integers."""
    rows = m.to_rows()
    n = m.spec.n
    for i in range(n):
        for k in range(i, n):  # the commutator is Hermitian
            if not _commutator_entry(rows, i, k, n).is_zero:
                return False
    return True


class NormalShapeKind(enum.Enum):
    SYMMETRIC = "symmetric"
    W_SKEW_SYMMETRIC = "w-skew-symmetric"
    W_SKEW_CIRCULANT = "w-skew-circulant"
    OTHER = "other"


@dataclass(frozen=True)
class NormalShape:
    kind: NormalShapeKind
    w: GaussInt | None = None


def classify_normal_shape(m: HessMatrix, assert_normal: bool = False) -> NormalShape:
    """Match the two nonzero patterns a normal zero-diagonal member can have.

    A constant superdiagonal w (everything else zero) is w-skew symmetric,
    coinciding with plain symmetry when w equals the subdiagonal unit; a
    single corner entry h_{1,n} = w (everything else zero) is w-skew
    circulant.  Anything else is OTHER.  With assert_normal, a matrix that is
    verified normal yet classifies OTHER raises.
    """
    spec = m.spec
    if not spec.zero_diagonal:
        raise ValueError("normal-shape classification applies to zero-diagonal families")
    n = spec.n
    shape = _match_shape(m, n, spec.subdiag)
    if assert_normal and shape.kind is NormalShapeKind.OTHER and is_normal(m):
        raise AssertionError(f"normal matrix with unexpected shape: {m!r}")
    return shape


def _match_shape(m: HessMatrix, n: int, s: GaussInt) -> NormalShape:
    if n == 1:
        return NormalShape(NormalShapeKind.SYMMETRIC, None)
    sup = [m.entry(i, i + 1) for i in range(1, n)]
    others_zero = all(
        m.entry(i, j).is_zero
        for j in range(1, n + 1)
        for i in range(1, j)
        if j != i + 1
    )
    if others_zero and not sup[0].is_zero and all(e == sup[0] for e in sup):
        w = sup[0]
        if w == s:
            return NormalShape(NormalShapeKind.SYMMETRIC, w)
        return NormalShape(NormalShapeKind.W_SKEW_SYMMETRIC, w)
    corner = m.entry(1, n)
    corner_only = not corner.is_zero and all(
        m.entry(i, j).is_zero
        for j in range(1, n + 1)
        for i in range(1, j)
        if (i, j) != (1, n)
    )
    if corner_only:
        return NormalShape(NormalShapeKind.W_SKEW_CIRCULANT, corner)
    return NormalShape(NormalShapeKind.OTHER, None)


def scan_normal_matrices(spec: FamilySpec) -> list[HessMatrix]:
    """All normal matrices of a zero-diagonal family, by complete branch-and-prune.

    Columns are assigned right to left.  Once columns j..n are fixed, every
    commutator entry (A A* - A* A)_{ik} with i,k >= j is fully determined
    (those rows and columns contain no unknown entries), so any nonzero such
    entry prunes the whole subtree exactly.  Every leaf is re-verified with
    the full commutator.
    """
    if not spec.zero_diagonal:
        raise ValueError("the normality scan applies to zero-diagonal families")
    n = spec.n
    pop = list(spec.population)
    s = spec.subdiag

    def make_rows(cols: dict[int, tuple[GaussInt, ...]]):
        rows = [[ZERO] * n for _ in range(n)]
        for i in range(n - 1):
            rows[i + 1][i] = s
        for j, ents in cols.items():
            for i, e in enumerate(ents):
                rows[i][j] = e
        return rows

    if n == 1:
        return [HessMatrix(spec, (ZERO,), validate=False)]

    states: list[dict[int, tuple[GaussInt, ...]]] = [{}]
    for j in range(n - 1, 0, -1):  # 0-based column j has j free entries above the diagonal
        survivors = []
        for st in states:
            for combo in itertools.product(pop, repeat=j):
                cand = dict(st)
                cand[j] = combo
                rows = make_rows(cand)
                if all(
                    _commutator_entry(rows, j, k, n).is_zero for k in range(j, n)
                ):
                    survivors.append(cand)
        states = survivors
    out = []
    for st in states:
        rows = make_rows(st)
        if all(_commutator_entry(rows, 0, k, n).is_zero for k in range(n)):
            upper = []
            for j in range(n):
                for i in range(j + 1):
                    upper.append(rows[i][j])
            m = HessMatrix(spec, upper, validate=False)
            assert is_normal(m)
            out.append(m)
    return out


# ---------------------------------------------------------------------------
# non-derogatory verification

NONDEROGATORY_MAX_DIM = 8


def is_nonderogatory(m, max_dim: int = NONDEROGATORY_MAX_DIM) -> bool:
    """True iff the minimal polynomial has full degree n.

    Vectorizes the powers I, M, ..., M^n into a Krylov matrix over the
    rationals (real and imaginary parts split) and finds the first power that
    is a linear combination of the previous ones.
    """
    n = m.spec.n
    if n > max_dim:
        raise ValueError(f"non-derogatory check limited to n <= {max_dim}")
    rows = m.to_rows()
    power = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
    basis: list[list[Fraction]] = []  # row-echelon rows over Q
    pivots: list[int] = []

    def vec(mat):
        out = []
        for r in mat:
            for e in r:
                out.append(Fraction(e.re))
                out.append(Fraction(e.im))
        return out

    def mat_mul(a, b):
        return [
            [
                sum((a[i][t] * b[t][j] for t in range(n)), ZERO)
                for j in range(n)
            ]
            for i in range(n)
        ]

    for d in range(n + 1):
        v = vec(power)
        for piv, row in zip(pivots, basis):
            if v[piv] != 0:
                f = v[piv] / row[piv]
                v = [x - f * y for x, y in zip(v, row)]
        nz = next((i for i, x in enumerate(v) if x != 0), None)
        if nz is None:
            return d == n  # minimal polynomial degree is d
        basis.append(v)
        pivots.append(nz)
        if d < n:
            power = mat_mul(power, rows)
    raise AssertionError("Cayley-Hamilton guarantees dependency by degree n")


# ---------------------------------------------------------------------------
# family-level reports

@dataclass
class ClassReport:
    """Per-family classification tallies (matrix counts are CPDB-weighted)."""

    n: int
    family: str
    matrices: int
    cpolys: int
    neutral_polys: int
    neutral_matrices: int
    stable_polys: int
    stable_matrices: int
    nilpotent_matrices: int
    singular_polys: int
    singular_matrices: int
    distinct_real_eigs: int | None = None

    def validate(self) -> None:
        counts = [
            self.matrices, self.cpolys, self.neutral_polys, self.neutral_matrices,
            self.stable_polys, self.stable_matrices, self.nilpotent_matrices,
            self.singular_polys, self.singular_matrices,
        ]
        if any(c < 0 for c in counts):
            raise ValueError("negative count in report")
        if not (self.cpolys <= self.matrices
                and self.stable_polys <= self.cpolys
                and self.neutral_polys <= self.cpolys):
            raise ValueError("inconsistent counts in report")


def classify_cpdb(db) -> ClassReport:
    """Classification tallies over a polynomial database.

    Matrix-level counts weight each polynomial by the number of matrices
    having it, so e.g. neutral_matrices is the count of family members whose
    eigenvalues all have zero real part.
    """
    neutral_p = neutral_m = 0
    stable_p = stable_m = 0
    nilpotent_m = 0
    singular_p = singular_m = 0
    for rec in db.records():
        p = CharPoly(rec.degree, rec.coeffs)
        cnt = rec.matrix_count
        if is_singular(p):
            singular_p += 1
            singular_m += cnt
        if is_nilpotent(p):
            nilpotent_m += cnt
        if p.is_real:
            if is_neutral(p):
                neutral_p += 1
                neutral_m += cnt
            if is_stable_type1(p):
                stable_p += 1
                stable_m += cnt
    report = ClassReport(
        n=db.family.n,
        family=db.family.to_text(),
        matrices=db.num_matrices,
        cpolys=db.num_polys,
        neutral_polys=neutral_p,
        neutral_matrices=neutral_m,
        stable_polys=stable_p,
        stable_matrices=stable_m,
        nilpotent_matrices=nilpotent_m,
        singular_polys=singular_p,
        singular_matrices=singular_m,
    )
    report.validate()
    return report
