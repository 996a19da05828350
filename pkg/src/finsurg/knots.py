"""Alexander polynomials, torsion coefficients, and surgery correction terms
for L-space knots.

The torsion coefficients t_i = sum_{j>=1} j*a_{i+j} of an L-space knot are
nonnegative, step down by 0 or 1, and vanish from the genus on; they
determine the correction terms of every large enough surgery.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .lens import DTable, InvariantError, d_lens_table


class NotLSpaceKnot(ValueError):
    """The torsion coefficients violate the L-space knot constraints."""


@dataclass(frozen=True)
class AlexanderPoly:
    """Symmetric Alexander polynomial stored as (a_0, ..., a_g).

    The full polynomial is a_0 + sum_{i>0} a_i (T^i + T^-i); knot
    normalization forces value 1 at T = 1, and a_g != 0.
    """

    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = tuple(int(x) for x in self.coeffs)
        object.__setattr__(self, "coeffs", c)
        if not c:
            raise ValueError("empty coefficient vector")
        if len(c) > 1 and c[-1] == 0:
            raise ValueError("leading coefficient a_g must be nonzero")
        if c[0] + 2 * sum(c[1:]) != 1:
            raise ValueError("not a knot polynomial: value at T=1 must be 1")

    @property
    def genus(self) -> int:
        return len(self.coeffs) - 1


@dataclass(frozen=True)
class TSequence:
    """Torsion coefficients (t_0, ..., t_g), stored up to the first zero."""

    values: tuple[int, ...]

    def __post_init__(self):
        v = tuple(int(x) for x in self.values)
        object.__setattr__(self, "values", v)
        if not v or v[-1] != 0:
            raise ValueError("a torsion sequence ends with t_g = 0")
        if len(v) > 1 and v[-2] == 0:
            raise ValueError("torsion sequence must stop at its first zero")
        if any(x < 0 for x in v):
            raise NotLSpaceKnot(f"negative torsion coefficient in {v}")
        for k in range(len(v) - 1):
            if not 0 <= v[k] - v[k + 1] <= 1:
                raise NotLSpaceKnot(f"torsion steps must be 0 or 1: {v}")

    @property
    def genus(self) -> int:
        return len(self.values) - 1

    def at(self, i: int) -> int:
        """t_i, reading 0 beyond the genus."""
        return self.values[i] if 0 <= i < len(self.values) else 0


def t_from_alexander(poly: AlexanderPoly) -> TSequence:
    """Torsion coefficients t_i = sum_{j>=1} j*a_{i+j}, 0 <= i <= g.

    Raises NotLSpaceKnot when the result cannot come from an L-space knot.
    """
    a = poly.coeffs
    g = poly.genus
    t = [sum(j * a[i + j] for j in range(1, g - i + 1)) for i in range(g + 1)]
    if any(x < 0 for x in t):
        raise NotLSpaceKnot(f"negative torsion coefficient: {t}")
    for k in range(g):
        if not 0 <= t[k] - t[k + 1] <= 1:
            raise NotLSpaceKnot(f"torsion steps must be 0 or 1: {t}")
    cut = t.index(0)  # t_g == 0 always, so this exists
    return TSequence(tuple(t[: cut + 1]))


def alexander_from_t(t: TSequence) -> AlexanderPoly:
    """Inverse of t_from_alexander: a_i = t_{i-1} - 2 t_i + t_{i+1} for i > 0,
    with a_0 recovered from the knot normalization."""
    g = t.genus
    if g == 0:
        return AlexanderPoly((1,))
    tail = tuple(t.at(i - 1) - 2 * t.at(i) + t.at(i + 1) for i in range(1, g + 1))
    return AlexanderPoly((1 - 2 * sum(tail), *tail))


def genus(x: AlexanderPoly | TSequence) -> int:
    """Genus of an L-space knot presented either way: the polynomial's top
    degree, equivalently the first index where the torsion vanishes."""
    return x.genus


# -- polynomial plumbing (dense integer coefficient lists, low degree first)


def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_div_exact(num, den):
    num = list(num)
    quo = [0] * (len(num) - len(den) + 1)
    for k in range(len(quo) - 1, -1, -1):
        c = num[k + len(den) - 1]
        if c % den[-1]:
            raise InvariantError("inexact polynomial division")
        quo[k] = c // den[-1]
        for j, d in enumerate(den):
            num[k + j] -= quo[k] * d
    if any(num):
        raise InvariantError("nonzero remainder in polynomial division")
    return quo


def _power_minus_one(n):
    out = [0] * (n + 1)
    out[0], out[n] = -1, 1
    return out


def _fold_symmetric(full, g):
    # full is c_0..c_{2g}, palindromic; return (a_0..a_g) about the middle
    if len(full) != 2 * g + 1 or full[: g + 1] != full[g:][::-1]:
        raise InvariantError("polynomial is not symmetric of the expected degree")
    return tuple(full[g:])


def torus_alexander(r: int, s: int) -> AlexanderPoly:
    """Alexander polynomial of the (r, s) torus knot, via the quotient
    (T^{rs} - 1)(T - 1) / ((T^r - 1)(T^s - 1)) symmetrized about degree 0.

    Genus (r-1)(s-1)/2; every coefficient lies in {-1, 0, 1}.
    """
    if r < 2 or s < 2:
        raise ValueError(f"torus knot parameters must be >= 2, got ({r}, {s})")
    if gcd(r, s) != 1:
        raise ValueError(f"torus knot parameters must be coprime, got ({r}, {s})")
    num = _poly_mul(_power_minus_one(r * s), _power_minus_one(1))
    den = _poly_mul(_power_minus_one(r), _power_minus_one(s))
    g = (r - 1) * (s - 1) // 2
    return AlexanderPoly(_fold_symmetric(_poly_div_exact(num, den), g))


def _unfold(poly: AlexanderPoly):
    # (a_0..a_g) -> dense c_0..c_{2g} with c_{g+i} = c_{g-i} = a_i
    a = poly.coeffs
    return list(a[:0:-1]) + list(a)


def cable_alexander(p1: int, q1: int, p2: int, q2: int) -> AlexanderPoly:
    """Alexander polynomial of the (p1, q1) cable of the (p2, q2) torus knot.

    The pattern winds q1 times around the companion, so the polynomial is the
    companion's evaluated at T^{q1} times the pattern torus polynomial.  A
    degenerate companion (p2 or q2 equal to 1, the unknot) reduces this to the
    plain (p1, q1) torus knot.
    """
    if p1 < 1 or q1 < 1 or gcd(p1, q1) != 1:
        raise ValueError(f"cable parameters ({p1}, {q1}) must be coprime positives")
    if p2 < 1 or q2 < 1 or gcd(p2, q2) != 1:
        raise ValueError(f"companion parameters ({p2}, {q2}) must be coprime positives")
    companion = AlexanderPoly((1,)) if (p2 == 1 or q2 == 1) else torus_alexander(p2, q2)
    pattern = AlexanderPoly((1,)) if (p1 == 1 or q1 == 1) else torus_alexander(p1, q1)
    gc, gp = companion.genus, pattern.genus
    g = q1 * gc + gp
    rescaled = [0] * (2 * q1 * gc + 1)
    for i, c in enumerate(_unfold(companion)):
        rescaled[i * q1] = c
    return AlexanderPoly(_fold_symmetric(_poly_mul(rescaled, _unfold(pattern)), g))


# -- surgery correction terms


def d_integral_surgery(p: int, t: TSequence) -> DTable:
    """Correction terms of p-surgery on an L-space knot with torsion
    coefficients t:  ((2i - p)^2 - p) / (4p) - 2 t_min(i, p-i).

    Only valid on the L-space surgery range p >= 2g - 1.
    """
    if p < 1:
        raise ValueError(f"surgery coefficient must be positive, got {p}")
    if p < 2 * t.genus - 1:
        raise ValueError(
            f"p={p} is below the L-space surgery range 2g-1={2 * t.genus - 1}"
        )
    values = tuple(
        Fraction((2 * i - p) ** 2 - p, 4 * p) - 2 * t.at(min(i, p - i))
        for i in range(p)
    )
    return DTable("surgery", p, 1, values)


def d_rational_surgery(p: int, q: int, t: TSequence) -> DTable:
    """Correction terms of p/q-surgery on an L-space knot:
    d(L(p, q), i) - 2 max{ t_floor(i/q), t_floor((p+q-1-i)/q) }.

    Specializes to d_integral_surgery at q = 1; requires p/q >= 2g - 1.
    """
    if p < 1 or q < 1 or gcd(p, q) != 1:
        raise ValueError(f"invalid surgery slope {p}/{q}")
    if p < (2 * t.genus - 1) * q:
        raise ValueError(
            f"slope {p}/{q} is below the L-space surgery range 2g-1={2 * t.genus - 1}"
        )
    lens = d_lens_table(p, q)
    values = tuple(
        lens.values[i] - 2 * max(t.at(i // q), t.at((p + q - 1 - i) // q))
        for i in range(p)
    )
    return DTable("surgery", p, lens.q, values)


@lru_cache(maxsize=1)
def trefoil_t() -> TSequence:
    """Torsion sequence (1, 0) of the right-hand trefoil."""
    return t_from_alexander(AlexanderPoly((-1, 1)))
