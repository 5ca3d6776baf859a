"""Maximal characteristic height growth of upper Hessenberg Toeplitz matrices.

With s = 1 and every entry -1, the coefficient recurrence collapses to the
all-positive form

    q_{n,0} = sum_{k=1..n} q_{n-k,0},
    q_{n,j} = q_{n-1,j-1} + sum_{k=1..n-j} q_{n-k,j},

whose row maxima tau_n are the maximal characteristic heights over the
{-1, 0, +1} Toeplitz family.  Prefix sums over columns make each row O(n), so
the exact big-integer series and a scaled float variant (for very large n)
both run in O(N^2).  The ratio log tau_{n+1} - log tau_n approaches
log(1 + golden_ratio) = 0.9624236501...
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .enumeration import max_height_search
from .family import FamilySpec, HessMatrix, Population
from .gaussint import GaussInt, MINUS_ONE, ONE

GOLDEN = (1.0 + math.sqrt(5.0)) / 2.0
LOG_GOLDEN_PLUS_ONE = math.log(1.0 + GOLDEN)

EXACT_MAX_N = 2000
LOG_FLOAT_MAX_N = 20000
VERIFY_MAX_N = 5

_P3 = Population([MINUS_ONE, GaussInt(0), ONE])


class SeriesGuardError(ValueError):
    """Requested series length exceeds the mode's guard."""


@dataclass
class HeightSeries:
    """tau_1..tau_N exactly, or their logs in scaled-float mode."""

    mode: str                       # "exact" | "log-float"
    n_max: int
    taus: list[int] = field(default_factory=list)      # exact mode
    log_taus: np.ndarray | None = None                 # log tau_n at index n

    def log_tau(self, n: int) -> float:
        if self.mode == "exact":
            return math.log(self.taus[n - 1])
        return float(self.log_taus[n])

    def ratios(self) -> list[tuple[int, float]]:
        """(n, log tau_{n+1} - log tau_n) for n = 1..N-1."""
        return [
            (n, self.log_tau(n + 1) - self.log_tau(n))
            for n in range(1, self.n_max)
        ]


def tau_series(n_max: int, mode: str = "exact") -> HeightSeries:
    """Row maxima of the all-positive coefficient recurrence up to n_max."""
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    if mode == "exact":
        if n_max > EXACT_MAX_N:
            raise SeriesGuardError(f"exact mode guarded to N <= {EXACT_MAX_N}")
        return HeightSeries(mode="exact", n_max=n_max, taus=_tau_exact(n_max))
    if mode == "log-float":
        if n_max > LOG_FLOAT_MAX_N:
            raise SeriesGuardError(f"log-float mode guarded to N <= {LOG_FLOAT_MAX_N}")
        return HeightSeries(mode="log-float", n_max=n_max,
                            log_taus=_tau_log_float(n_max))
    raise ValueError(f"unknown mode {mode!r}")


def _tau_exact(n_max: int) -> list[int]:
    q = [1]          # previous row, q_{n-1,j}
    s = [1]          # prefix sums s[j] = sum_{m<=n-1} q_{m,j}
    taus = []
    for n in range(1, n_max + 1):
        qn = [0] * (n + 1)
        qn[n] = 1
        for j in range(1, n):
            qn[j] = q[j - 1] + s[j]
        qn[0] = s[0]
        for j in range(n):
            s[j] += qn[j]
        s.append(1)
        q = qn
        taus.append(max(qn))
        if any(c <= 0 for c in qn):
            raise AssertionError("recurrence rows must stay positive")
    return taus


def _tau_log_float(n_max: int) -> np.ndarray:
    # all values share one running log offset; rescale when the row max grows
    q = np.zeros(n_max + 1)
    s = np.zeros(n_max + 1)
    q[0] = 1.0
    s[0] = 1.0
    offset = 0.0
    logs = np.zeros(n_max + 1)
    for n in range(1, n_max + 1):
        qn = np.zeros(n + 1)
        qn[1:n] = q[0 : n - 1] + s[1:n]
        qn[0] = s[0]
        qn[n] = math.exp(-offset) if offset < 700.0 else 0.0
        s[: n + 1] += qn
        q[: n + 1] = qn
        m = qn.max()
        logs[n] = math.log(m) + offset
        if m > 1e250:
            q[: n + 1] /= m
            s[: n + 1] /= m
            offset += math.log(m)
    return logs


def write_ratio_csv(series: HeightSeries, path) -> None:
    """CSV of (n, log tau_{n+1} - log tau_n) for plotting the growth ratio."""
    lines = ["n,log_ratio"]
    for n, r in series.ratios():
        lines.append(f"{n},{r!r}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def ratio_convergence_onset(series: HeightSeries, tol: float = 1e-3) -> int | None:
    """Smallest n such that every later ratio stays within tol of log(1+phi)."""
    onset = None
    for n, r in reversed(series.ratios()):
        if abs(r - LOG_GOLDEN_PLUS_ONE) > tol:
            return onset
        onset = n
    return onset


# ---------------------------------------------------------------------------
# witnesses and exhaustive verification

def max_height_witness(n: int) -> HessMatrix:
    """The all-(-1), s = +1 Toeplitz matrix attaining the maximal height."""
    if n < 1:
        raise ValueError("n must be >= 1")
    spec = FamilySpec(n, _P3, subdiag=ONE)
    upper = tuple(MINUS_ONE for _ in range(n * (n + 1) // 2))
    return HessMatrix(spec, upper)


def negated_witness(n: int) -> HessMatrix:
    """The all-(+1), s = -1 twin; same characteristic height by negation."""
    spec = FamilySpec(n, _P3, subdiag=MINUS_ONE)
    upper = tuple(ONE for _ in range(n * (n + 1) // 2))
    return HessMatrix(spec, upper)


def two_point_witness(n: int, a: int, b: int) -> HessMatrix:
    """Maximal-height Toeplitz witness over a two-point real population {a, b}.

    a = min, b = max.  With |a| >= |b| every diagonal takes a; otherwise the
    k-th diagonal takes a for even k and b for odd k (the main diagonal is
    k = 1).  Subdiagonal fixed at +1.
    """
    if a >= b:
        raise ValueError("expected a < b")
    values = {}
    for k in range(1, n + 1):
        if abs(a) >= abs(b):
            values[k] = a
        else:
            values[k] = a if k % 2 == 0 else b
    pop = Population([GaussInt(a), GaussInt(b)])
    spec = FamilySpec(n, pop, subdiag=ONE)
    upper = []
    for j in range(1, n + 1):
        for i in range(1, j + 1):
            upper.append(GaussInt(values[j - i + 1]))
    return HessMatrix(spec, upper, validate=False)


def toeplitz_sign_condition(m: HessMatrix) -> bool:
    """True when s^(k-1) h_{i,i+k-1} = -1 on every diagonal position."""
    n = m.spec.n
    s = m.spec.subdiag
    for k in range(1, n + 1):
        scale = s ** (k - 1)
        for i in range(1, n - k + 2):
            if scale * m.entry(i, i + k - 1) != MINUS_ONE:
                return False
    return True


@dataclass
class MaxHeightReport:
    """Exhaustive maximal-height scan over both subdiagonal signs of {-1,0,+1}."""

    n: int
    tau: int
    attaining: list[HessMatrix]
    witness_attains: bool
    condition_violators: list[HessMatrix]


def verify_max_height(n: int) -> MaxHeightReport:
    """Enumerate s = +1 and s = -1 families over {-1,0,+1} exhaustively,
    confirm the Toeplitz witnesses attain the maximal height, and report every
    attaining matrix (including any that do not satisfy the all-(-1) diagonal
    sign condition; such matrices exist already at n = 2)."""
    if n > VERIFY_MAX_N:
        raise SeriesGuardError(f"exhaustive verification guarded to n <= {VERIFY_MAX_N}")
    attaining: list[HessMatrix] = []
    taus = []
    for subdiag in (ONE, MINUS_ONE):
        spec = FamilySpec(n, _P3, subdiag=subdiag)
        tau, matrices = max_height_search(spec)
        taus.append(tau)
        attaining.extend(matrices)
    if taus[0] != taus[1]:
        raise AssertionError(f"subdiagonal signs disagree on max height: {taus}")
    tau = taus[0]
    witnesses = (max_height_witness(n), negated_witness(n))
    witness_attains = all(any(w == m for m in attaining) for w in witnesses)
    violators = [m for m in attaining if not toeplitz_sign_condition(m)]
    return MaxHeightReport(
        n=n,
        tau=tau,
        attaining=attaining,
        witness_attains=witness_attains,
        condition_violators=violators,
    )
