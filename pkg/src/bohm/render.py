"""Eigenvalue density images over a complex-plane grid.

Each root of each database record deposits its weight (matrix count times
multiplicity, or 1) into the pixel containing it; roots outside the window go
to an overflow tally, so sum(bins) + overflow always equals the weighted root
total.  Images are binary portable pixmaps with intensity
(log(1+hits) / log(1+max)) ** gamma, deterministic byte-for-byte.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .charpoly import CharPoly
from .cpdb import Cpdb


@dataclass
class DensityGrid:
    re_min: float
    re_max: float
    im_min: float
    im_max: float
    width: int
    height: int
    bins: np.ndarray = field(default=None)
    overflow: int = 0

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("grid must have at least one pixel")
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValueError("window must be nonempty")
        if self.bins is None:
            self.bins = np.zeros((self.height, self.width), dtype=np.int64)

    def pixel(self, z: complex) -> tuple[int, int] | None:
        """(row, col) containing z, or None when outside the window."""
        col = int(np.floor((z.real - self.re_min) / (self.re_max - self.re_min) * self.width))
        row = int(np.floor((z.imag - self.im_min) / (self.im_max - self.im_min) * self.height))
        if 0 <= row < self.height and 0 <= col < self.width:
            return row, col
        return None

    def total_hits(self) -> int:
        return int(self.bins.sum()) + self.overflow


def centered_grid(half_width: float, pixels: int) -> DensityGrid:
    """Square window [-w, w]^2; an odd pixel count keeps the axes self-mirrored."""
    return DensityGrid(-half_width, half_width, -half_width, half_width,
                       pixels, pixels)


def accumulate(grid: DensityGrid, db: Cpdb, weighting: str = "matrix-count") -> DensityGrid:
    """Deposit every eigenvalue of every record into the grid.

    weighting "matrix-count" adds matrix_count * multiplicity per root;
    "unit" adds 1 per distinct root of each record.
    """
    from .spectra import roots  # deferred: spectra pulls in the heavy machinery

    if weighting not in ("matrix-count", "unit"):
        raise ValueError(f"unknown weighting {weighting!r}")
    for rec in db.records():
        p = CharPoly(rec.degree, rec.coeffs)
        for z, mult in roots(p).roots:
            w = rec.matrix_count * mult if weighting == "matrix-count" else 1
            px = grid.pixel(z)
            if px is None:
                grid.overflow += w
            else:
                grid.bins[px] += w
    return grid


_FIRE = [
    (0, 0, 0), (32, 0, 64), (96, 0, 128), (160, 16, 96),
    (208, 64, 32), (240, 128, 16), (255, 192, 64), (255, 255, 255),
]


def _intensity(bins: np.ndarray, gamma: float) -> np.ndarray:
    mx = bins.max()
    if mx <= 0:
        return np.zeros_like(bins, dtype=np.float64)
    scaled = np.log1p(bins) / np.log1p(mx)
    return scaled ** gamma


def write_image(grid: DensityGrid, path, palette: str = "gray", gamma: float = 1.0) -> None:
    """Binary PGM (gray) or PPM (palette) with log intensity; rows written
    top-down from im_max so images match the usual complex-plane orientation."""
    levels = _intensity(grid.bins[::-1, :], gamma)
    path = Path(path)
    h, w = levels.shape
    if palette == "gray":
        data = np.rint(levels * 255.0).astype(np.uint8)
        header = f"P5\n{w} {h}\n255\n".encode()
        path.write_bytes(header + data.tobytes())
        return
    if palette == "fire":
        anchors = np.array(_FIRE, dtype=np.float64)
        pos = levels * (len(anchors) - 1)
        lo = np.floor(pos).astype(int)
        hi = np.minimum(lo + 1, len(anchors) - 1)
        frac = (pos - lo)[..., None]
        rgb = anchors[lo] * (1.0 - frac) + anchors[hi] * frac
        data = np.rint(rgb).astype(np.uint8)
        header = f"P6\n{w} {h}\n255\n".encode()
        path.write_bytes(header + data.tobytes())
        return
    raise ValueError(f"unknown palette {palette!r}")


def write_bins_csv(grid: DensityGrid, path) -> None:
    """Nonzero bins as (re_center, im_center, hits), row-major, deterministic."""
    lines = ["re_center,im_center,hits"]
    dre = (grid.re_max - grid.re_min) / grid.width
    dim = (grid.im_max - grid.im_min) / grid.height
    rows, cols = np.nonzero(grid.bins)
    for r, c in zip(rows.tolist(), cols.tolist()):
        re_c = grid.re_min + (c + 0.5) * dre
        im_c = grid.im_min + (r + 0.5) * dim
        lines.append(f"{re_c!r},{im_c!r},{int(grid.bins[r, c])}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
