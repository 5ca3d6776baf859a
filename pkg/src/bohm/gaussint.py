"""Exact Gaussian integer scalar used for matrix entries and polynomial coefficients.

Real populations are the common case; they are represented with im == 0 so a
single code path also serves complex populations such as {0, i, -i}.
Components are Python ints, so arithmetic never overflows.
"""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True, slots=True)
class GaussInt:
    """A Gaussian integer re + im*i with arbitrary-precision components."""

    re: int
    im: int = 0

    def __add__(self, other: GaussInt) -> GaussInt:
        return GaussInt(self.re + other.re, self.im + other.im)

    def __sub__(self, other: GaussInt) -> GaussInt:
        return GaussInt(self.re - other.re, self.im - other.im)

    def __mul__(self, other: GaussInt) -> GaussInt:
        return GaussInt(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def __neg__(self) -> GaussInt:
        return GaussInt(-self.re, -self.im)

    def __pow__(self, k: int) -> GaussInt:
        if k < 0:
            raise ValueError("negative powers are not defined for GaussInt")
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self) -> GaussInt:
        return GaussInt(self.re, -self.im)

    def norm2(self) -> int:
        """re^2 + im^2."""
        return self.re * self.re + self.im * self.im

    def compmax(self) -> int:
        """max(|re|, |im|): the per-coefficient contribution to polynomial height."""
        return max(abs(self.re), abs(self.im))

    @property
    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    @property
    def is_unit(self) -> bool:
        return self.norm2() == 1

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def __complex__(self) -> complex:
        return complex(self.re, self.im)

    def __str__(self) -> str:
        return render_gauss(self)


ZERO = GaussInt(0, 0)
ONE = GaussInt(1, 0)
MINUS_ONE = GaussInt(-1, 0)
I = GaussInt(0, 1)
MINUS_I = GaussInt(0, -1)


def render_gauss(g: GaussInt) -> str:
    """Render as one of the accepted scalar tokens: 'a', 'i', '-i', 'a+bi', 'a-bi'."""
    if g.im == 0:
        return str(g.re)
    if g.re == 0:
        if g.im == 1:
            return "i"
        if g.im == -1:
            return "-i"
        return f"0{g.im:+d}i"
    return f"{g.re}{g.im:+d}i"


def parse_gauss(token: str) -> GaussInt:
    """Parse scalar tokens: integers, 'i', '-i', 'bi', and 'a+bi' / 'a-bi'."""
    t = token.strip().replace(" ", "")
    if not t:
        raise ValueError("empty scalar token")
    if t in ("i", "+i"):
        return I
    if t == "-i":
        return MINUS_I
    if t.endswith("i"):
        body = t[:-1]
        # split into real and imaginary parts at the last +/- that is not leading
        for pos in range(len(body) - 1, 0, -1):
            if body[pos] in "+-":
                re_part, im_part = body[:pos], body[pos:]
                if im_part in ("+", "-"):
                    im_part += "1"
                return GaussInt(int(re_part), int(im_part))
        # pure imaginary like '2i' or '-3i'
        if body in ("", "+"):
            return I
        if body == "-":
            return MINUS_I
        return GaussInt(0, int(body))
    return GaussInt(int(t))
