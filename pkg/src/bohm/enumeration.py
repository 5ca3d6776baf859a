"""Streaming enumeration of matrix families with incremental characteristic polynomials.

The column-major depth-first walk shares work aggressively: all matrices that
agree on their first k columns share the characteristic polynomials
Q_0..Q_k of their leading principal submatrices, so extending a prefix by one
column costs a single coefficient-recurrence column update.

Two engines implement the walk:

  * a visitor engine (`enumerate_family`) that materializes each matrix and
    its polynomial — exact for any population, meant for verification-scale
    runs; and
  * a batched engine (`family_cpdb`) that carries whole populations of
    prefixes as int64 coefficient arrays, deduplicating identical prefix
    states (with multiplicities) level by level and reducing leaves straight
    into a polynomial database.  Equal prefix states have identical subtree
    contributions, so the reduction is exact.

Sharding fixes the first d free entries in column-major order; the shards at
depth d partition the family exactly and their databases merge by count
addition.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass

import numpy as np

from .charpoly import CharPoly, GaussInt, charpoly_oracle
from .cpdb import Cpdb
from .family import DenseMatrix, FamilySpec, HessMatrix, Shape, family_size
from .gaussint import ONE, ZERO

DEFAULT_BUDGET = 10 ** 8
GENERAL_SIZE_GUARD = 50_000_000
_STATE_MEMORY_BYTES = 512 * 1024 * 1024
_LEAF_CHUNK_ROWS = 2_000_000


class BudgetError(RuntimeError):
    """Family larger than the configured matrix budget and no sharding requested."""


def matrix_budget() -> int:
    """Active matrix budget; the BOHM_BUDGET environment variable overrides it."""
    raw = os.environ.get("BOHM_BUDGET")
    return int(raw) if raw else DEFAULT_BUDGET


# ---------------------------------------------------------------------------
# shards

@dataclass(frozen=True)
class Shard:
    """Fixed assignment of the first `depth` free entries (population indices)."""

    shard_id: int
    fixed_prefix: tuple[int, ...]
    depth: int


def make_shards(spec: FamilySpec, target_count: int) -> list[Shard]:
    """Smallest prefix depth d with |P|**d >= target_count; returns all |P|**d shards."""
    if target_count < 1:
        raise ValueError("target_count must be >= 1")
    p = len(spec.population)
    depth = 0
    while p ** depth < target_count and depth < spec.free_entry_count:
        depth += 1
    shards = []
    for k, prefix in enumerate(itertools.product(range(p), repeat=depth)):
        shards.append(Shard(shard_id=k, fixed_prefix=prefix, depth=depth))
    return shards


def _shard_size(spec: FamilySpec, shard: Shard | None) -> int:
    depth = shard.depth if shard is not None else 0
    return len(spec.population) ** (spec.free_entry_count - depth)


# ---------------------------------------------------------------------------
# column plans: which entries of each column are fixed by a shard, which are free

def _column_plans(spec: FamilySpec, shard: Shard | None):
    """Per column: list of candidate-value lists for the stored rows 1..m.

    Shard-fixed positions get a single candidate; free positions get the whole
    population; a pinned zero diagonal gets the single candidate 0.
    """
    pop = list(spec.population)
    prefix = list(shard.fixed_prefix) if shard is not None else []
    plans = []
    consumed = 0
    for m in range(1, spec.n + 1):
        f = m - 1 if spec.zero_diagonal else m
        row_candidates = []
        for _ in range(f):
            if consumed < len(prefix):
                row_candidates.append([pop[prefix[consumed]]])
            else:
                row_candidates.append(pop)
            consumed += 1
        if spec.zero_diagonal:
            row_candidates.append([ZERO])
        plans.append(row_candidates)
    return plans


# ---------------------------------------------------------------------------
# visitor engine

class EnumCursor:
    """Depth-first enumeration state: current columns and the Q_0..Q_k stack.

    qstack[i] is the coefficient list of the characteristic polynomial of the
    leading i x i principal submatrix of the current prefix; qstack[0] = [1].
    """

    def __init__(self, spec: FamilySpec):
        self.spec = spec
        self.column = 0
        self.qstack: list[list[GaussInt]] = [[ONE]]
        self.columns: list[tuple[GaussInt, ...]] = []
        self._spow = [ONE]
        for _ in range(spec.n - 1):
            self._spow.append(self._spow[-1] * spec.subdiag)

    def push_column(self, entries: tuple[GaussInt, ...]) -> None:
        """Extend the prefix by one stored column (rows 1..m of column m)."""
        m = self.column + 1
        qs = self.qstack
        spow = self._spow
        q: list = [None] * (m + 1)
        q[m] = ONE
        for j in range(m - 1, 0, -1):
            acc = qs[m - 1][j - 1]
            for k in range(1, m - j + 1):
                acc = acc - spow[k - 1] * entries[m - k] * qs[m - k][j]
            q[j] = acc
        acc = None
        for k in range(1, m + 1):
            term = spow[k - 1] * entries[m - k] * qs[m - k][0]
            acc = term if acc is None else acc + term
        q[0] = -acc
        qs.append(q)
        self.columns.append(entries)
        self.column = m

    def pop_column(self) -> None:
        self.qstack.pop()
        self.columns.pop()
        self.column -= 1

    def matrix(self) -> HessMatrix:
        upper = tuple(e for col in self.columns for e in col)
        return HessMatrix(self.spec, upper, validate=False)

    def charpoly(self) -> CharPoly:
        return CharPoly(self.column, tuple(self.qstack[-1]))


def enumerate_family(spec: FamilySpec, visitor, shard: Shard | None = None,
                     budget: int | None = None) -> int:
    """Visit every matrix of the family (or shard) once with its CharPoly.

    The visitor is called as visitor(matrix, charpoly) in depth-first
    column-major order.  Returns the visit count, which equals the family
    (or shard) size exactly.
    """
    if spec.shape is Shape.GENERAL:
        raise ValueError("use enumerate_general for general-shape families")
    limit = budget if budget is not None else matrix_budget()
    size = _shard_size(spec, shard)
    if size > limit:
        raise BudgetError(
            f"family slice has {size} matrices, budget {limit}; use shards"
        )
    plans = _column_plans(spec, shard)
    cursor = EnumCursor(spec)
    n = spec.n
    count = 0

    def walk(m: int) -> None:
        nonlocal count
        for entries in itertools.product(*plans[m - 1]):
            cursor.push_column(entries)
            if m == n:
                visitor(cursor.matrix(), cursor.charpoly())
                count += 1
            else:
                walk(m + 1)
            cursor.pop_column()

    walk(1)
    return count


def enumerate_general(spec: FamilySpec, visitor, budget: int | None = None) -> int:
    """Visit all |P|**(n*n) general matrices; characteristic polynomials by oracle."""
    if spec.shape is not Shape.GENERAL:
        raise ValueError("spec must have shape=GENERAL")
    limit = min(budget if budget is not None else matrix_budget(), GENERAL_SIZE_GUARD)
    size = family_size(spec)
    if size > limit:
        raise BudgetError(f"general family has {size} matrices, guard {limit}")
    n = spec.n
    pop = list(spec.population)
    count = 0
    for entries in itertools.product(pop, repeat=n * n):
        rows = [entries[i * n : (i + 1) * n] for i in range(n)]
        m = DenseMatrix(spec, rows)
        visitor(m, charpoly_oracle(m))
        count += 1
    return count


# ---------------------------------------------------------------------------
# batched engine

def _coeff_bound(spec: FamilySpec) -> int:
    """Rigorous bound on |coefficient| over the family, by the absolute-value
    recurrence with every entry at the population's maximum magnitude."""
    hmax = max(e.compmax() for e in spec.population)
    n = spec.n
    b = [[1]]
    for m in range(1, n + 1):
        row = [0] * (m + 1)
        row[m] = 1
        for j in range(m - 1, -1, -1):
            acc = b[m - 1][j - 1] if j > 0 else 0
            for k in range(1, m - j + 1):
                acc += hmax * b[m - k][j]
            row[j] = acc
        b.append(row)
    return max(b[n])


def _combo_arrays(plan, pop_real: bool):
    """Cartesian product of a column plan as an int64 value array (M, rows)."""
    values = [
        np.array([e.re for e in cands], dtype=np.int64) for cands in plan
    ]
    grids = np.meshgrid(*values, indexing="ij") if len(values) > 1 else [values[0]]
    cols = [g.reshape(-1) for g in grids]
    return np.stack(cols, axis=1) if cols else np.zeros((1, 0), dtype=np.int64)


def _require_fast_path(spec: FamilySpec) -> bool:
    return spec.population.is_real and spec.subdiag.is_real


def _dedup_stacks(stacks, counts):
    flat = np.ascontiguousarray(stacks.reshape(stacks.shape[0], -1))
    void = flat.view(np.dtype((np.void, flat.dtype.itemsize * flat.shape[1]))).ravel()
    _, idx, inv = np.unique(void, return_index=True, return_inverse=True)
    summed = np.zeros(len(idx), dtype=np.int64)
    np.add.at(summed, inv, counts)
    return stacks[idx], summed


class _LeafReducer:
    """Accumulates (coefficient row, weight) leaves into a deduplicated counter.

    Rows hold the n non-leading coefficients c_0..c_{n-1} (the polynomial is
    monic).  When the family's coefficient bound fits, rows pack into single
    int64 keys; otherwise a raw-bytes view is used.
    """

    def __init__(self, n: int, bound: int):
        self.n = n
        bits = 63 // n if n >= 1 else 63
        self.packed = bound < (1 << (bits - 1)) - 1
        self.bits = bits
        self.counter: dict = {}

    def add(self, rows: np.ndarray, weights: np.ndarray) -> None:
        if self.packed:
            off = np.int64(1 << (self.bits - 1))
            keys = np.zeros(len(rows), dtype=np.int64)
            for c in range(self.n):
                keys = (keys << np.int64(self.bits)) | (rows[:, c] + off)
            uk, inv = np.unique(keys, return_inverse=True)
            summed = np.zeros(len(uk), dtype=np.int64)
            np.add.at(summed, inv.ravel(), weights)
            for key, cnt in zip(uk.tolist(), summed.tolist()):
                self.counter[key] = self.counter.get(key, 0) + cnt
        else:
            flat = np.ascontiguousarray(rows)
            void = flat.view(np.dtype((np.void, flat.dtype.itemsize * flat.shape[1]))).ravel()
            uk, inv = np.unique(void, return_inverse=True)
            summed = np.zeros(len(uk), dtype=np.int64)
            np.add.at(summed, inv.ravel(), weights)
            for key, cnt in zip(uk, summed.tolist()):
                kb = key.tobytes()
                self.counter[kb] = self.counter.get(kb, 0) + cnt

    def coeff_rows(self):
        """Yield (int coefficient tuple c_0..c_{n-1}, count)."""
        if self.packed:
            mask = (1 << self.bits) - 1
            off = 1 << (self.bits - 1)
            for key, cnt in self.counter.items():
                k = int(key)
                coeffs = tuple(
                    ((k >> (self.bits * (self.n - 1 - c))) & mask) - off
                    for c in range(self.n)
                )
                yield coeffs, cnt
        else:
            for kb, cnt in self.counter.items():
                coeffs = tuple(int(x) for x in np.frombuffer(kb, dtype=np.int64))
                yield coeffs, cnt


def _fast_pipeline(spec: FamilySpec, shard: Shard | None, reduce_leaves,
                   dedup: bool = True, carry_codes: bool = False):
    """Run the batched column pipeline, handing leaf batches to `reduce_leaves`.

    reduce_leaves(rows, weights, codes) receives the full coefficient rows
    (c_0..c_n) of Q_n for a batch of matrices, the matrix multiplicity of each
    row, and (when carry_codes) the mixed-radix choice code of each matrix.
    """
    n = spec.n
    plans = _column_plans(spec, shard)
    spow = np.array([spec.subdiag.re ** k for k in range(n)], dtype=np.int64)

    stacks = np.zeros((1, 1, n + 1), dtype=np.int64)
    stacks[0, 0, 0] = 1  # Q_0 = 1
    counts = np.ones(1, dtype=np.int64)
    codes = np.zeros(1, dtype=np.int64) if carry_codes else None

    for m in range(1, n + 1):
        vals = _combo_arrays(plans[m - 1], True)  # (M, stored rows of column m)
        M = len(vals)
        # C[c, k-1] = s^(k-1) * h_{m-k+1, m} for k = 1..m
        C = vals[:, ::-1] * spow[None, :m]
        is_leaf = m == n
        S = len(stacks)
        chunk = max(1, min(S, _LEAF_CHUNK_ROWS // max(M, 1)))
        out_stacks = [] if not is_leaf else None
        out_counts = [] if not is_leaf else None
        out_codes = [] if (not is_leaf and carry_codes) else None
        for lo in range(0, S, chunk):
            sk = stacks[lo : lo + chunk]       # (B, m, n+1): rows Q_0..Q_{m-1}
            ct = counts[lo : lo + chunk]
            B = len(sk)
            qrev = sk[:, ::-1, :]              # rows Q_{m-1}..Q_0
            shifted = np.zeros((B, n + 1), dtype=np.int64)
            shifted[:, 1 : m + 1] = sk[:, m - 1, :m]
            qnew = shifted[:, None, :] - np.einsum("mk,bkc->bmc", C, qrev)
            w = np.repeat(ct, M)
            cd = None
            if carry_codes:
                cd = (codes[lo : lo + chunk, None] * M + np.arange(M, dtype=np.int64)).reshape(-1)
            if is_leaf:
                reduce_leaves(qnew.reshape(B * M, n + 1), w, cd)
            else:
                ns = np.empty((B, M, m + 1, n + 1), dtype=np.int64)
                ns[:, :, :m, :] = sk[:, None, :, :]
                ns[:, :, m, :] = qnew
                out_stacks.append(ns.reshape(B * M, m + 1, n + 1))
                out_counts.append(w)
                if carry_codes:
                    out_codes.append(cd)
        if not is_leaf:
            stacks = np.concatenate(out_stacks)
            counts = np.concatenate(out_counts)
            if carry_codes:
                codes = np.concatenate(out_codes)
            elif dedup:
                stacks, counts = _dedup_stacks(stacks, counts)
            if stacks.nbytes > _STATE_MEMORY_BYTES:
                raise BudgetError(
                    f"prefix state would need {stacks.nbytes >> 20} MiB at column {m}; "
                    "shard the run"
                )


def family_cpdb(spec: FamilySpec, shard: Shard | None = None,
                budget: int | None = None) -> Cpdb:
    """Enumerate one family (or shard) into a deduplicated polynomial database."""
    limit = budget if budget is not None else matrix_budget()
    if spec.shape is Shape.GENERAL:
        return _general_cpdb(spec, limit)
    size = _shard_size(spec, shard)
    if size > limit:
        raise BudgetError(f"family slice has {size} matrices, budget {limit}; use shards")
    db = Cpdb(spec)
    if _require_fast_path(spec):
        reducer = _LeafReducer(spec.n, _coeff_bound(spec))

        def reduce_leaves(rows, weights, _codes):
            reducer.add(rows[:, : spec.n], weights)

        _fast_pipeline(spec, shard, reduce_leaves)
        for coeffs, cnt in reducer.coeff_rows():
            db.insert_coeffs(tuple(GaussInt(c) for c in coeffs) + (ONE,), cnt)
    else:
        enumerate_family(spec, lambda _m, p: db.insert(p), shard=shard, budget=limit)
    return db


def enumerate_to_cpdb(spec: FamilySpec, shards: int = 1,
                      budget: int | None = None) -> Cpdb:
    """Full-family database via `shards` independent slices merged at the end."""
    if shards <= 1:
        return family_cpdb(spec, budget=budget)
    merged: Cpdb | None = None
    for shard in make_shards(spec, shards):
        part = family_cpdb(spec, shard=shard, budget=budget)
        merged = part if merged is None else merged.merge(part)
    return merged


# ---------------------------------------------------------------------------
# exhaustive maximal-height search (small n; decodes every attaining matrix)

def max_height_search(spec: FamilySpec, budget: int | None = None):
    """(max characteristic height, all attaining matrices) over one family.

    Runs the batched pipeline without prefix merging, carrying a mixed-radix
    choice code per matrix so attaining matrices can be reconstructed.
    """
    if not _require_fast_path(spec):
        raise ValueError("max_height_search requires a real population")
    limit = budget if budget is not None else matrix_budget()
    size = family_size(spec)
    if size > limit:
        raise BudgetError(f"family has {size} matrices, budget {limit}")
    best = 0
    attain_codes: list[int] = []

    def reduce_leaves(rows, weights, codes):
        nonlocal best, attain_codes
        h = np.abs(rows).max(axis=1)
        hmax = int(h.max())
        if hmax > best:
            best = hmax
            attain_codes = []
        if hmax == best:
            attain_codes.extend(codes[h == best].tolist())
            if len(attain_codes) > 100_000:
                raise BudgetError("attaining set unexpectedly large")

    _fast_pipeline(spec, None, reduce_leaves, dedup=False, carry_codes=True)
    return best, [_decode_matrix(spec, code) for code in attain_codes]


def _decode_matrix(spec: FamilySpec, code: int) -> HessMatrix:
    """Invert the pipeline's mixed-radix choice code back into a matrix."""
    plans = _column_plans(spec, None)
    sizes = [[len(c) for c in plan] for plan in plans]
    col_radix = [int(np.prod(sz)) if sz else 1 for sz in sizes]
    digits = []
    for radix in reversed(col_radix):
        digits.append(code % radix)
        code //= radix
    digits.reverse()
    upper = []
    for plan, sz, d in zip(plans, sizes, digits):
        idxs = []
        for width in reversed(sz):
            idxs.append(d % width)
            d //= width
        idxs.reverse()
        upper.extend(plan[pos][i] for pos, i in enumerate(idxs))
    return HessMatrix(spec, upper)


# ---------------------------------------------------------------------------
# general-shape database via vectorized principal minors (n <= 4)

def _general_cpdb(spec: FamilySpec, limit: int) -> Cpdb:
    size = family_size(spec)
    if size > min(limit, GENERAL_SIZE_GUARD):
        raise BudgetError(f"general family has {size} matrices, guard {limit}")
    db = Cpdb(spec)
    n = spec.n
    if spec.population.is_real and 2 <= n <= 4:
        _general_cpdb_fast(spec, db)
        return db
    enumerate_general(spec, lambda _m, p: db.insert(p), budget=limit)
    return db


def _det_rec(entry, rows, cols):
    """Recursive batched determinant over given row/column index lists."""
    k = len(rows)
    if k == 1:
        return entry(rows[0], cols[0])
    if k == 2:
        return (entry(rows[0], cols[0]) * entry(rows[1], cols[1])
                - entry(rows[0], cols[1]) * entry(rows[1], cols[0]))
    acc = None
    sign = 1
    for pos, c in enumerate(cols):
        sub = _det_rec(entry, rows[1:], cols[:pos] + cols[pos + 1 :])
        term = entry(rows[0], c) * sub
        if sign < 0:
            term = -term
        acc = term if acc is None else acc + term
        sign = -sign
    return acc


def _general_cpdb_fast(spec: FamilySpec, db: Cpdb) -> None:
    n = spec.n
    pop = np.array([e.re for e in spec.population], dtype=np.int64)
    P = len(pop)
    total = P ** (n * n)
    hmax = int(np.abs(pop).max())
    import math
    bound = max(
        math.comb(n, k) * math.factorial(k) * hmax ** k for k in range(1, n + 1)
    )
    reducer = _LeafReducer(n, bound)
    chunk = 1_000_000
    subsets = {
        k: list(itertools.combinations(range(n), k)) for k in range(1, n + 1)
    }
    for lo in range(0, total, chunk):
        hi = min(lo + chunk, total)
        idx = np.arange(lo, hi, dtype=np.int64)
        digits = []
        rest = idx
        for _ in range(n * n):
            digits.append(rest % P)
            rest = rest // P
        digits.reverse()  # first entry varies slowest: row-major matrix order
        a = [[pop[digits[i * n + j]] for j in range(n)] for i in range(n)]

        def entry(i, j):
            return a[i][j]

        B = hi - lo
        rows = np.zeros((B, n + 1), dtype=np.int64)
        rows[:, n] = 1
        for k in range(1, n + 1):
            ek = None
            for sub in subsets[k]:
                d = _det_rec(entry, list(sub), list(sub))
                ek = d if ek is None else ek + d
            sign = -1 if k % 2 else 1
            rows[:, n - k] = sign * ek
        reducer.add(rows[:, :n], np.ones(B, dtype=np.int64))
    for coeffs, cnt in reducer.coeff_rows():
        db.insert_coeffs(tuple(GaussInt(c) for c in coeffs) + (ONE,), cnt)
