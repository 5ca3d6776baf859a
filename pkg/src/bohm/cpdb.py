"""Characteristic polynomial database: deduplicated polynomials with matrix counts.

On disk the database is UTF-8 text: a header line

    # bohm-cpdb v1; family=<family text>

followed by one record per line, `n;c_0,c_1,...,c_n;count`, each coefficient a
decimal integer `a` or `a+bi`/`a-bi`.  Records are written sorted by degree
then lexicographically by coefficient components (re before im, constant term
first), so files are byte-identical however the database was sharded.
A gzip-compressed file is accepted transparently on read.
"""
from __future__ import annotations

import gzip
from dataclasses import dataclass
from pathlib import Path

from .charpoly import CharPoly
from .family import FamilySpec
from .gaussint import GaussInt, parse_gauss, render_gauss

_HEADER_PREFIX = "# bohm-cpdb v1; family="


class FamilyMismatchError(ValueError):
    """Raised when merging databases whose family metadata disagrees."""


@dataclass(frozen=True)
class CpdbRecord:
    degree: int
    coeffs: tuple[GaussInt, ...]  # constant term first
    matrix_count: int


def _sort_key(coeffs: tuple[GaussInt, ...]):
    return tuple(x for c in coeffs for x in (c.re, c.im))


class Cpdb:
    """In-memory polynomial -> matrix-count index for one family."""

    def __init__(self, family: FamilySpec):
        self.family = family
        self._counts: dict[tuple[GaussInt, ...], int] = {}

    # -- mutation ----------------------------------------------------------
    def insert(self, p: CharPoly, count: int = 1) -> int:
        """Add `count` matrices with characteristic polynomial p; returns the new count."""
        if count < 1:
            raise ValueError("count must be positive")
        new = self._counts.get(p.coeffs, 0) + count
        self._counts[p.coeffs] = new
        return new

    def insert_coeffs(self, coeffs: tuple[GaussInt, ...], count: int) -> None:
        self._counts[coeffs] = self._counts.get(coeffs, 0) + count

    # -- queries -----------------------------------------------------------
    @property
    def num_polys(self) -> int:
        return len(self._counts)

    @property
    def num_matrices(self) -> int:
        return sum(self._counts.values())

    def count_of(self, p: CharPoly) -> int:
        return self._counts.get(p.coeffs, 0)

    def records(self):
        """Records in canonical order (degree, then coefficient components)."""
        deg = self.family.n
        for coeffs in sorted(self._counts, key=_sort_key):
            yield CpdbRecord(deg, coeffs, self._counts[coeffs])

    def polynomials(self):
        deg = self.family.n
        for coeffs in self._counts:
            yield CharPoly(deg, coeffs)

    def query(self, predicate) -> tuple[int, int]:
        """(polynomial count, matrix count) over records whose CharPoly satisfies predicate."""
        deg = self.family.n
        polys = 0
        matrices = 0
        for coeffs, cnt in self._counts.items():
            if predicate(CharPoly(deg, coeffs)):
                polys += 1
                matrices += cnt
        return polys, matrices

    def merge(self, other: Cpdb) -> Cpdb:
        """Union of records with counts summed; families must match."""
        if self.family.to_text() != other.family.to_text():
            raise FamilyMismatchError(
                f"cannot merge {self.family.to_text()!r} with {other.family.to_text()!r}"
            )
        out = Cpdb(self.family)
        out._counts = dict(self._counts)
        for coeffs, cnt in other._counts.items():
            out._counts[coeffs] = out._counts.get(coeffs, 0) + cnt
        return out

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Cpdb)
            and self.family.to_text() == other.family.to_text()
            and self._counts == other._counts
        )

    # -- serialization -------------------------------------------------------
    def save(self, path) -> None:
        path = Path(path)
        lines = [_HEADER_PREFIX + self.family.to_text()]
        for rec in self.records():
            coeffs = ",".join(render_gauss(c) for c in rec.coeffs)
            lines.append(f"{rec.degree};{coeffs};{rec.matrix_count}")
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path) -> Cpdb:
        path = Path(path)
        raw = path.read_bytes()
        if raw[:2] == b"\x1f\x8b":
            raw = gzip.decompress(raw)
        text = raw.decode("utf-8")
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines or not lines[0].startswith(_HEADER_PREFIX):
            raise ValueError(f"{path}: not a bohm-cpdb v1 file")
        family = FamilySpec.from_text(lines[0][len(_HEADER_PREFIX):])
        db = cls(family)
        for ln in lines[1:]:
            deg_s, coeffs_s, count_s = ln.split(";")
            deg = int(deg_s)
            coeffs = tuple(parse_gauss(tok) for tok in coeffs_s.split(","))
            if len(coeffs) != deg + 1:
                raise ValueError(f"{path}: malformed record {ln!r}")
            db.insert_coeffs(coeffs, int(count_s))
        return db
