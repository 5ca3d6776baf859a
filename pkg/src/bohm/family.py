"""Bohemian upper Hessenberg families: populations, specs, matrices, normalization.

A family is the set of n x n upper Hessenberg matrices whose upper-triangle
entries range over a fixed finite population P, with every subdiagonal entry
fixed at one unit value s (zero subdiagonals are not allowed).  The
zero-diagonal subfamily additionally pins every diagonal entry to 0.  A
diagonal similarity rescales the subdiagonal to +1 or -1 whenever the
population is invariant under the required unit, preserving the
characteristic polynomial.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .gaussint import GaussInt, MINUS_ONE, ONE, ZERO, parse_gauss, render_gauss


class Shape(enum.Enum):
    UPPER_HESSENBERG = "hessenberg"
    GENERAL = "general"


class Population:
    """Ordered set of distinct GaussInt entries permitted in a family."""

    def __init__(self, elements):
        elems = tuple(elements)
        if not elems:
            raise ValueError("population must be nonempty")
        if len(set(elems)) != len(elems):
            raise ValueError("population elements must be pairwise distinct")
        self.elements: tuple[GaussInt, ...] = elems

    @property
    def contains_zero(self) -> bool:
        return any(e.is_zero for e in self.elements)

    @property
    def is_unit_population(self) -> bool:
        """True when every nonzero element has |w| = 1 (normality analysis needs this)."""
        return all(e.is_zero or e.is_unit for e in self.elements)

    @property
    def is_real(self) -> bool:
        return all(e.is_real for e in self.elements)

    def invariant_under(self, unit: GaussInt) -> bool:
        """True when multiplication by `unit` permutes the population."""
        return {unit * e for e in self.elements} == set(self.elements)

    def index(self, value: GaussInt) -> int:
        return self.elements.index(value)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, value) -> bool:
        return value in self.elements

    def __eq__(self, other) -> bool:
        return isinstance(other, Population) and self.elements == other.elements

    def __hash__(self) -> int:
        return hash(self.elements)

    def __repr__(self) -> str:
        return f"Population({self.to_text()!r})"

    def to_text(self) -> str:
        return ",".join(render_gauss(e) for e in self.elements)

    @classmethod
    def from_text(cls, text: str) -> Population:
        return cls(parse_gauss(tok) for tok in text.split(","))


def population_invariant_under(population: Population, unit: GaussInt) -> bool:
    """Predicate used to pre-check subdiagonal normalization feasibility."""
    return population.invariant_under(unit)


@dataclass(frozen=True)
class FamilySpec:
    """One Bohemian family: dimension, population, subdiagonal unit, constraints."""

    n: int
    population: Population
    subdiag: GaussInt = ONE
    zero_diagonal: bool = False
    shape: Shape = Shape.UPPER_HESSENBERG

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("dimension must be >= 1")
        if self.shape is Shape.GENERAL:
            # general families ignore the Hessenberg-only fields; normalize them
            object.__setattr__(self, "subdiag", ONE)
            object.__setattr__(self, "zero_diagonal", False)
            return
        if not self.subdiag.is_unit:
            raise ValueError("subdiagonal value must be a unit (zero subdiagonals disallowed)")
        if self.zero_diagonal and not self.population.contains_zero:
            raise ValueError("zero-diagonal family requires 0 in the population")

    @property
    def free_entry_count(self) -> int:
        n = self.n
        if self.shape is Shape.GENERAL:
            return n * n
        if self.zero_diagonal:
            return n * (n - 1) // 2
        return n * (n + 1) // 2

    def free_positions(self) -> list[tuple[int, int]]:
        """Free (row, column) slots in column-major order, 1-indexed."""
        if self.shape is Shape.GENERAL:
            return [(i, j) for j in range(1, self.n + 1) for i in range(1, self.n + 1)]
        out = []
        for j in range(1, self.n + 1):
            top = j - 1 if self.zero_diagonal else j
            out.extend((i, j) for i in range(1, top + 1))
        return out

    def to_text(self) -> str:
        parts = [f"n={self.n}", f"pop={self.population.to_text()}"]
        if self.shape is Shape.GENERAL:
            parts.append("shape=general")
        else:
            parts.append(f"s={render_gauss(self.subdiag)}")
            if self.zero_diagonal:
                parts.append("diag=0")
        return ";".join(parts)

    @classmethod
    def from_text(cls, text: str) -> FamilySpec:
        fields: dict[str, str] = {}
        for part in text.split(";"):
            key, _, value = part.partition("=")
            fields[key.strip()] = value.strip()
        n = int(fields["n"])
        pop = Population.from_text(fields["pop"])
        if fields.get("shape") == "general":
            return cls(n, pop, shape=Shape.GENERAL)
        subdiag = parse_gauss(fields.get("s", "1"))
        zero_diag = fields.get("diag") == "0"
        return cls(n, pop, subdiag=subdiag, zero_diagonal=zero_diag)

    def __str__(self) -> str:
        return self.to_text()


def family_size(spec: FamilySpec) -> int:
    """Number of distinct matrices in the family: |P| ** free entries."""
    return len(spec.population) ** spec.free_entry_count


def _upper_index(i: int, j: int) -> int:
    # column-major flat storage: column j holds rows 1..j
    return j * (j - 1) // 2 + (i - 1)


class HessMatrix:
    """Compact upper Hessenberg matrix: stored upper triangle plus implied entries.

    Storage is column-major: `upper[j(j-1)/2 + (i-1)]` holds h_{i,j} for
    1 <= i <= j <= n.  The subdiagonal is spec.subdiag everywhere and entries
    below it are zero.
    """

    __slots__ = ("spec", "upper")

    def __init__(self, spec: FamilySpec, upper, validate: bool = True):
        self.spec = spec
        self.upper: tuple[GaussInt, ...] = tuple(upper)
        if validate:
            n = spec.n
            if spec.shape is not Shape.UPPER_HESSENBERG:
                raise ValueError("HessMatrix requires an upper Hessenberg spec")
            if len(self.upper) != n * (n + 1) // 2:
                raise ValueError("upper triangle must hold n(n+1)/2 entries")
            for e in self.upper:
                if e not in spec.population:
                    raise ValueError(f"entry {e} is not in the population")
            if spec.zero_diagonal:
                for i in range(1, n + 1):
                    if not self.upper[_upper_index(i, i)].is_zero:
                        raise ValueError("zero-diagonal family requires h_{i,i} = 0")

    def entry(self, i: int, j: int) -> GaussInt:
        n = self.spec.n
        if not (1 <= i <= n and 1 <= j <= n):
            raise IndexError(f"index ({i},{j}) out of range for n={n}")
        if i <= j:
            return self.upper[_upper_index(i, j)]
        if i == j + 1:
            return self.spec.subdiag
        return ZERO

    def column(self, j: int) -> tuple[GaussInt, ...]:
        """Stored entries h_{1,j}..h_{j,j} of column j."""
        base = j * (j - 1) // 2
        return self.upper[base : base + j]

    def to_rows(self) -> list[list[GaussInt]]:
        n = self.spec.n
        return [[self.entry(i, j) for j in range(1, n + 1)] for i in range(1, n + 1)]

    def __neg__(self) -> HessMatrix:
        """-H; requires the population to be closed under negation."""
        neg_spec = FamilySpec(
            self.spec.n,
            self.spec.population,
            subdiag=-self.spec.subdiag,
            zero_diagonal=self.spec.zero_diagonal,
        )
        return HessMatrix(neg_spec, tuple(-e for e in self.upper))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, HessMatrix)
            and self.spec == other.spec
            and self.upper == other.upper
        )

    def __hash__(self) -> int:
        return hash((self.spec, self.upper))

    def __repr__(self) -> str:
        rows = self.to_rows()
        body = "; ".join(" ".join(render_gauss(e) for e in row) for row in rows)
        return f"HessMatrix[{body}]"


class DenseMatrix:
    """Square matrix with explicit rows; used for general-shape enumeration."""

    __slots__ = ("spec", "rows")

    def __init__(self, spec: FamilySpec, rows):
        self.spec = spec
        self.rows = tuple(tuple(r) for r in rows)

    def entry(self, i: int, j: int) -> GaussInt:
        n = self.spec.n
        if not (1 <= i <= n and 1 <= j <= n):
            raise IndexError(f"index ({i},{j}) out of range for n={n}")
        return self.rows[i - 1][j - 1]

    def to_rows(self) -> list[list[GaussInt]]:
        return [list(r) for r in self.rows]

    def __repr__(self) -> str:
        body = "; ".join(" ".join(render_gauss(e) for e in row) for row in self.rows)
        return f"DenseMatrix[{body}]"


def matrix_entry(m: HessMatrix, i: int, j: int) -> GaussInt:
    """h_{i,j}: stored when i <= j, the subdiagonal unit when i = j+1, else 0."""
    return m.entry(i, j)


def normalize_subdiagonal(m: HessMatrix, target: int) -> HessMatrix:
    """Diagonal similarity sending every subdiagonal entry to +1 or -1.

    With s the current subdiagonal unit and t the target sign, conjugation by
    diag((t * conj(s))**(i-1)) scales entry h_{i,j} by (t*s)**(j-i) and leaves
    the characteristic polynomial unchanged.  Requires the population to be
    invariant under multiplication by t*s.
    """
    if target not in (1, -1):
        raise ValueError("target subdiagonal must be +1 or -1")
    t = ONE if target == 1 else MINUS_ONE
    s = m.spec.subdiag
    if s == t:
        return m
    w = t * s
    pop = m.spec.population
    if not pop.invariant_under(w):
        raise ValueError(
            f"population {pop.to_text()} is not invariant under multiplication by {w}"
        )
    n = m.spec.n
    # powers of w cycle with period <= 4 for Gaussian units
    wpow = [ONE]
    for _ in range(n - 1):
        wpow.append(wpow[-1] * w)
    new_upper = []
    for j in range(1, n + 1):
        for i in range(1, j + 1):
            new_upper.append(wpow[j - i] * m.upper[_upper_index(i, j)])
    new_spec = FamilySpec(n, pop, subdiag=t, zero_diagonal=m.spec.zero_diagonal)
    return HessMatrix(new_spec, new_upper)
