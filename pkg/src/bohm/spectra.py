"""Numerical eigenvalues with exact multiplicity structure and family tallies.

Roots are found per squarefree factor (where every root is simple) by a
batched Aberth-Ehrlich iteration in float64, polished with two Newton steps,
and validated against the residual bound |p(z)| <= 1e-13 * (1+|z|)^deg; the
rare non-converged polynomial falls back to high-precision root finding.

Family-level tallies deduplicate eigenvalues across matrices:

  * conjugate symmetrization pairs roots of real polynomials exactly;
  * values within 1e-8 of a Gaussian integer that divides the factor exactly
    are snapped to it;
  * a 1e-8 grid (with adjacent-cell merging) forms candidate clusters;
  * a cluster holding several values separated by more than 1e-11 is
    re-resolved at 50-digit precision, splitting genuinely distinct algebraic
    roots that happen to lie closer than the grid spacing.

The multiplicity table's class 1 counts all distinct eigenvalues of the
family; class k >= 2 counts distinct eigenvalues attaining algebraic
multiplicity k in some matrix.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import polyint
from .charpoly import CharPoly
from .classify import is_nilpotent, is_stable_type1
from .cpdb import Cpdb
from .enumeration import enumerate_to_cpdb
from .family import FamilySpec
from .gaussint import GaussInt, ONE

GRID = 1e-8          # candidate-identification window
GROUP = 1e-11        # spread below which float agreement is trusted
RESIDUAL = 1e-13     # per-root residual acceptance
_REFINE_DPS = 50
_REFINE_MATCH = 1e-18


class RootFindingError(RuntimeError):
    """A polynomial's roots could not be certified to the residual bound."""


# ---------------------------------------------------------------------------
# squarefree decomposition

def squarefree_decompose(p: CharPoly) -> list[tuple[CharPoly, int]]:
    """Yun decomposition p = prod f_i^i over exact integers (real coefficients)."""
    coeffs = p.int_coeffs()
    out = []
    for f, mult in polyint.yun_decomposition(list(coeffs)):
        fc = tuple(GaussInt(c) for c in f)
        out.append((CharPoly(len(f) - 1, fc), mult))
    return out


# ---------------------------------------------------------------------------
# batched Aberth-Ehrlich

def _horner_batch(cc: np.ndarray, z: np.ndarray):
    """Vectorized p(z), p'(z) for coefficient rows cc (B, d+1) at points z (B, d)."""
    d = cc.shape[1] - 1
    p = np.broadcast_to(cc[:, d][:, None], z.shape).astype(np.complex128).copy()
    dp = np.zeros_like(z)
    for i in range(d - 1, -1, -1):
        dp = dp * z + p
        p = p * z + cc[:, i][:, None]
    return p, dp


def aberth_batch(coeffs: np.ndarray, max_iter: int = 200) -> np.ndarray:
    """Simultaneous roots of monic squarefree rows (B, d+1), constant term first."""
    B, dp1 = coeffs.shape
    d = dp1 - 1
    if d == 0:
        return np.zeros((B, 0), dtype=np.complex128)
    cc = coeffs.astype(np.complex128)
    if d == 1:
        return (-cc[:, 0] / cc[:, 1])[:, None]
    radius = 1.0 + np.abs(coeffs[:, :-1]).max(axis=1)
    k = np.arange(d)
    angles = 2.0 * np.pi * (k + 0.5) / d + 0.43
    spread = 0.6 + 0.4 * (k + 1.0) / d
    z = radius[:, None] * spread[None, :] * np.exp(1j * angles)[None, :]
    for _ in range(max_iter):
        p, dp = _horner_batch(cc, z)
        newton = p / np.where(dp == 0, 1e-300, dp)
        diff = z[:, :, None] - z[:, None, :]
        np.einsum("bii->bi", diff)[:] = 1.0
        repulse = (1.0 / diff).sum(axis=2) - 1.0
        w = newton / (1.0 - newton * repulse)
        z = z - w
        if np.abs(w).max() <= 1e-14 * (1.0 + np.abs(z).max()):
            break
    return z


def _polish_newton(cc: np.ndarray, z: np.ndarray, steps: int = 2) -> np.ndarray:
    for _ in range(steps):
        p, dp = _horner_batch(cc, z)
        z = z - p / np.where(dp == 0, 1e-300, dp)
    return z


def _residual_ok(cc: np.ndarray, z: np.ndarray) -> np.ndarray:
    p, _ = _horner_batch(cc, z)
    bound = RESIDUAL * (1.0 + np.abs(z)) ** (cc.shape[1] - 1)
    return (np.abs(p) <= bound).all(axis=1)


def _refine_factor(coeffs: tuple[int, ...]):
    """High-precision roots of one integer polynomial (memoized by caller)."""
    import mpmath as mp

    with mp.workdps(_REFINE_DPS):
        roots = mp.polyroots([mp.mpf(c) for c in reversed(coeffs)],
                             maxsteps=200, extraprec=120)
        return [(float(mp.re(r)), float(mp.im(r)), r) for r in roots]


# ---------------------------------------------------------------------------
# per-polynomial roots

@dataclass
class RootSet:
    """Roots with multiplicities; multiplicities sum to the source degree."""

    roots: list[tuple[complex, int]]
    source: CharPoly

    def multiplicity_sum(self) -> int:
        return sum(m for _, m in self.roots)


def _strip_zero_root(f: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    zero_mult = 0
    while f[0] == 0:
        zero_mult += 1
        f = f[1:]
    return zero_mult, f


def _factor_jobs(polys: list[tuple[int, ...]]):
    """Decompose each poly; returns per-poly zero-root info and degree-bucketed jobs."""
    per_poly: list[list] = [[] for _ in polys]
    buckets: dict[int, list[tuple[int, int, tuple[int, ...]]]] = {}
    factor_cache: dict[tuple[int, ...], list[tuple[list, int]]] = {}
    for idx, coeffs in enumerate(polys):
        dec = factor_cache.get(coeffs)
        if dec is None:
            dec = polyint.yun_decomposition(list(coeffs))
            factor_cache[coeffs] = dec
        for f, mult in dec:
            zero_mult, rest = _strip_zero_root(tuple(f))
            if zero_mult:
                per_poly[idx].append((0j, mult, ("zero",)))
            df = len(rest) - 1
            if df >= 1:
                buckets.setdefault(df, []).append((idx, mult, rest))
    return per_poly, buckets


def _run_buckets(per_poly, buckets):
    for df, jobs in buckets.items():
        arr = np.array([f for (_, _, f) in jobs], dtype=np.float64)
        z = aberth_batch(arr)
        z = _polish_newton(arr, z)
        ok = _residual_ok(arr, z)
        for row, (idx, mult, f) in enumerate(jobs):
            if ok[row]:
                vals = z[row]
            else:
                vals = np.array([complex(re, im) for re, im, _ in _refine_factor(f)])
                if len(vals) != df:
                    raise RootFindingError(f"could not root {f}")
            for v in vals:
                per_poly[idx].append((complex(v), mult, f))
    return per_poly


def _symmetrize(entries):
    """Pair conjugate roots of a real polynomial exactly; snap near-real to real."""
    out = []
    used = [False] * len(entries)
    for i, (z, m, f) in enumerate(entries):
        if used[i]:
            continue
        if abs(z.imag) <= GRID:
            out.append((complex(z.real, 0.0), m, f))
            used[i] = True
            continue
        best, bd = None, None
        for j in range(i + 1, len(entries)):
            if used[j]:
                continue
            z2, m2, f2 = entries[j]
            if m2 != m or f2 != f:
                continue
            d = abs(z2 - z.conjugate())
            if bd is None or d < bd:
                bd, best = d, j
        if best is not None and bd <= GRID * (1.0 + abs(z)):
            zz = 0.5 * (z + entries[best][0].conjugate())
            out.append((zz, m, f))
            out.append((zz.conjugate(), m, f))
            used[i] = used[best] = True
        else:
            out.append((z, m, f))
            used[i] = True
    return out


def _snap_gauss(entries):
    """Snap values within GRID of a Gaussian integer that exactly divides the factor."""
    out = []
    for z, m, f in entries:
        re_i, im_i = round(z.real), round(z.imag)
        if abs(z.real - re_i) < GRID and abs(z.imag - im_i) < GRID and f != ("zero",):
            g = GaussInt(re_i, im_i)
            acc = GaussInt(0)
            for c in reversed(f):
                acc = acc * g + GaussInt(c)
            if acc.is_zero:
                out.append((complex(re_i, im_i), m, f))
                continue
        out.append((z, m, f))
    return out


def roots(p: CharPoly) -> RootSet:
    """Roots with multiplicities from the squarefree structure.

    Real-coefficient polynomials get exact multiplicities via Yun
    decomposition; complex-coefficient input is rooted directly and assumed
    squarefree.
    """
    if p.degree < 1:
        raise ValueError("degree must be >= 1")
    if p.is_real:
        per_poly, buckets = _factor_jobs([p.int_coeffs()])
        entries = _run_buckets(per_poly, buckets)[0]
        entries = _snap_gauss(_symmetrize(entries))
        rs = RootSet([(z, m) for z, m, _ in entries], p)
    else:
        arr = np.array([[complex(c) for c in p.coeffs]], dtype=np.complex128)
        z = _polish_newton(arr, aberth_batch(arr))
        rs = RootSet([(complex(v), 1) for v in z[0]], p)
    if rs.multiplicity_sum() != p.degree:
        raise RootFindingError(f"multiplicities of {p} sum to {rs.multiplicity_sum()}")
    return rs


# ---------------------------------------------------------------------------
# cross-family deduplication

class _Dedup:
    """Counts distinct values among (value, factor) instances.

    Grid cells of spacing GRID are merged with any adjacent cell whose
    bounding box comes within GRID; each resulting cluster is trusted as a
    single root when all its values agree to GROUP, and otherwise re-resolved
    at high precision, one representative factor per distinct value group.
    """

    def __init__(self):
        self.cells: dict[tuple[int, int], list] = {}
        self._refined: dict[tuple[int, ...], list] = {}

    def add(self, z: complex, factor: tuple[int, ...]) -> None:
        key = (round(z.real / GRID), round(z.imag / GRID))
        self.cells.setdefault(key, []).append((z, factor))

    def _clusters(self):
        # union adjacent cells whose boxes approach within GRID
        parent = {k: k for k in self.cells}

        def find(k):
            while parent[k] != k:
                parent[k] = parent[parent[k]]
                k = parent[k]
            return k

        boxes = {}
        for k, items in self.cells.items():
            res = [z.real for z, _ in items]
            ims = [z.imag for z, _ in items]
            boxes[k] = (min(res), max(res), min(ims), max(ims))
        for (cx, cy) in list(self.cells):
            for dx in (0, 1):
                for dy in (-1, 0, 1):
                    if (dx, dy) <= (0, 0):
                        continue
                    nb = (cx + dx, cy + dy)
                    if nb not in self.cells:
                        continue
                    a, b = boxes[(cx, cy)], boxes[nb]
                    gap_re = max(b[0] - a[1], a[0] - b[1], 0.0)
                    gap_im = max(b[2] - a[3], a[2] - b[3], 0.0)
                    if (gap_re ** 2 + gap_im ** 2) <= GRID ** 2:
                        ra, rb = find((cx, cy)), find(nb)
                        if ra != rb:
                            parent[ra] = rb
        clusters: dict[tuple[int, int], list] = {}
        for k, items in self.cells.items():
            clusters.setdefault(find(k), []).extend(items)
        return clusters.values()

    def _certify(self, groups) -> int:
        refined_vals = []
        for (gre, gim), factor in groups:
            if factor == ("zero",):
                refined_vals.append((0.0, 0.0))
                continue
            if factor not in self._refined:
                self._refined[factor] = _refine_factor(factor)
            target_re, target_im = gre * GROUP, gim * GROUP
            best = min(
                self._refined[factor],
                key=lambda t: (t[0] - target_re) ** 2 + (t[1] - target_im) ** 2,
            )
            refined_vals.append((best[0], best[1]))
        distinct = []
        for v in refined_vals:
            if all(
                (v[0] - u[0]) ** 2 + (v[1] - u[1]) ** 2 > _REFINE_MATCH ** 2
                for u in distinct
            ):
                distinct.append(v)
        return len(distinct)

    def count(self) -> int:
        total = 0
        for items in self._clusters():
            groups = {}
            for z, factor in items:
                gkey = (round(z.real / GROUP), round(z.imag / GROUP))
                groups.setdefault(gkey, (gkey, factor))
            if len(groups) == 1:
                total += 1
            else:
                total += self._certify(list(groups.values()))
        return total


# ---------------------------------------------------------------------------
# family tables

@dataclass
class MultiplicityTable:
    """counts[k]: distinct eigenvalues of multiplicity class k across the family."""

    n: int
    counts: dict[int, int] = field(default_factory=dict)

    def as_row(self) -> list[int]:
        return [self.counts.get(k, 0) for k in range(1, self.n + 1)]


def _db_for(spec: FamilySpec, db: Cpdb | None) -> Cpdb:
    return db if db is not None else enumerate_to_cpdb(spec)


def _family_entries(db: Cpdb):
    """Per-record symmetrized, snapped (value, mult, factor) root lists."""
    records = list(db.records())
    polys = [tuple(c.re for c in rec.coeffs) for rec in records]
    for rec in records:
        if any(not c.is_real for c in rec.coeffs):
            raise ValueError("family tallies require real coefficients")
    per_poly, buckets = _factor_jobs(polys)
    per_poly = _run_buckets(per_poly, buckets)
    out = []
    for rec, entries in zip(records, per_poly):
        out.append((rec, _snap_gauss(_symmetrize(entries))))
    return out


def multiplicity_table(spec: FamilySpec, db: Cpdb | None = None) -> MultiplicityTable:
    """Distinct-eigenvalue counts per multiplicity class across the family."""
    db = _db_for(spec, db)
    union = _Dedup()
    per_class: dict[int, _Dedup] = {}
    for _rec, entries in _family_entries(db):
        for z, mult, factor in entries:
            union.add(z, factor)
            if mult >= 2:
                per_class.setdefault(mult, _Dedup()).add(z, factor)
    counts = {1: union.count()}
    for k, dd in per_class.items():
        counts[k] = dd.count()
    return MultiplicityTable(n=spec.n, counts=counts)


def distinct_real_eigs(spec: FamilySpec, db: Cpdb | None = None) -> int:
    """Distinct real eigenvalues across the family (dedup window 1e-8)."""
    db = _db_for(spec, db)
    dd = _Dedup()
    for _rec, entries in _family_entries(db):
        for z, _mult, factor in entries:
            if z.imag == 0.0:
                dd.add(z, factor)
    return dd.count()


def max_real_part(spec: FamilySpec, stable_only: bool = False,
                  db: Cpdb | None = None) -> float:
    """Maximum Re(eigenvalue) over the family, optionally over stable members only."""
    db = _db_for(spec, db)
    best = None
    records = list(db.records())
    polys = []
    for rec in records:
        p = CharPoly(rec.degree, rec.coeffs)
        if stable_only and not is_stable_type1(p):
            continue
        polys.append(p.int_coeffs())
    if not polys:
        raise ValueError("no polynomials to scan (stable filter removed everything?)")
    per_poly, buckets = _factor_jobs(polys)
    per_poly = _run_buckets(per_poly, buckets)
    for entries in per_poly:
        for z, _m, _f in entries:
            if best is None or z.real > best:
                best = z.real
    return best


def type2_violations(db: Cpdb, margin: float = 1e-8) -> list[CharPoly]:
    """Non-nilpotent polynomials whose roots all lie numerically inside the unit circle.

    Integer matrices admit none (spectral radius of a non-nilpotent integer
    matrix is at least 1), so a nonempty result signals a numerical problem.
    """
    bad = []
    records = list(db.records())
    polys = [tuple(c.re for c in rec.coeffs) for rec in records]
    per_poly, buckets = _factor_jobs(polys)
    per_poly = _run_buckets(per_poly, buckets)
    for rec, entries in zip(records, per_poly):
        p = CharPoly(rec.degree, rec.coeffs)
        if is_nilpotent(p):
            continue
        radius = max(abs(z) for z, _m, _f in entries)
        if radius < 1.0 - margin:
            bad.append(p)
    return bad


def eigenvalue_csv(spec: FamilySpec, path, db: Cpdb | None = None) -> None:
    """Write deduplicated (re, im, multiplicity, matrix_count) rows."""
    db = _db_for(spec, db)
    agg: dict[tuple[float, float, int], int] = {}
    for rec, entries in _family_entries(db):
        for z, mult, _f in entries:
            key = (round(z.real, 10), round(z.imag, 10), mult)
            agg[key] = agg.get(key, 0) + rec.matrix_count
    lines = ["re,im,multiplicity,count"]
    for (re, im, mult) in sorted(agg):
        lines.append(f"{re!r},{im!r},{mult},{agg[(re, im, mult)]}")
    from pathlib import Path

    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
