"""Exact correction terms of lens spaces and of Dehn fillings of the
right-hand trefoil exterior.

Every value is an exact ``fractions.Fraction``; no floating point is used
anywhere in this module.  L(p, q) is the lens space obtained by p/q-surgery
on the unknot, with Spin^c structures indexed by Z/pZ.  The recursion
descends along the continued-fraction expansion of p/q, so every computation
terminates and the denominator of d(L(p, q), i) divides 4pq.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

ZERO = Fraction(0)


class InvariantError(RuntimeError):
    """An internal consistency check failed; results cannot be trusted."""


def conjugate_index(p: int, q: int, i: int) -> int:
    """Index of the conjugate Spin^c structure: (p + q - 1 - i) mod p.

    An involution on [0, p).  For q = 1 this is i -> (p - i) mod p.
    """
    return (p + q - 1 - i) % p


def _normalize_q(p: int, q: int) -> int:
    if p < 1:
        raise ValueError(f"p must be a positive integer, got {p}")
    if gcd(p, q) != 1:
        raise ValueError(f"surgery coefficients ({p}, {q}) are not coprime")
    # p == 1 is the 3-sphere; every q is congruent to the marker 0
    return q % p if p > 1 else 0


@dataclass(frozen=True)
class LensSpec:
    """L(p, q) with q stored as its canonical representative mod p in [1, p).

    p == 1 denotes the 3-sphere and stores q = 0.
    """

    p: int
    q: int

    def __post_init__(self):
        object.__setattr__(self, "q", _normalize_q(self.p, self.q))


@dataclass(frozen=True)
class DTable:
    """A full correction-term table indexed by Spin^c structures Z/pZ.

    ``kind`` is "lens", "trefoil_filling" or "surgery".  The q field fixes
    the conjugation symmetry of the indexing: construction fails unless
    values[i] == values[(p + q - 1 - i) mod p] for every i.
    """

    kind: str
    p: int
    q: int
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.values) != self.p:
            raise InvariantError(
                f"{self.kind}({self.p},{self.q}): table has {len(self.values)} "
                f"entries, expected {self.p}"
            )
        for i, v in enumerate(self.values):
            if v != self.values[conjugate_index(self.p, self.q, i)]:
                raise InvariantError(
                    f"{self.kind}({self.p},{self.q}): conjugation symmetry "
                    f"broken at index {i}"
                )

    def __getitem__(self, i: int) -> Fraction:
        return self.values[i]

    def __len__(self) -> int:
        return self.p


@lru_cache(maxsize=512)
def _neg_lens_values(p: int, q: int) -> tuple[Fraction, ...]:
    """d(-L(p, q), i) for 0 <= i < p + q, for coprime p > q >= 1.

    Built bottom-up along the descent (p, q) -> (q, p mod q) -> ..., carrying
    each level as integer numerators over one shared denominator; fractions
    are reduced only once, at the end.
    """
    chain = []
    a, b = p, q
    while b > 0:
        chain.append((a, b))
        a, b = b, a % b
    nums: list[int] = []
    den = 1
    for a, b in reversed(chain):
        sub = nums
        sub_den = den
        scale = 4 * a * b
        den = scale * sub_den
        nums = [
            (a * b - (2 * i + 1 - a - b) ** 2) * sub_den
            - (scale * sub[i % b] if sub else 0)
            for i in range(a + b)
        ]
    return tuple(Fraction(n, den) for n in nums)


def d_lens(p: int, q: int, i: int) -> Fraction:
    """Correction term d(L(p, q), i).

    q may be any integer coprime to p and is reduced mod p first.  The index
    ranges over [0, p + q'), the recursion's natural domain; [0, p) are the
    canonical Spin^c representatives.
    """
    qn = _normalize_q(p, q)
    if p == 1:
        if not 0 <= i < 2:
            raise ValueError(f"index {i} out of range [0, 2) for the 3-sphere")
        return ZERO
    if not 0 <= i < p + qn:
        raise ValueError(f"index {i} out of range [0, {p + qn}) for L({p},{qn})")
    return -_neg_lens_values(p, qn)[i]


@lru_cache(maxsize=512)
def d_lens_table(p: int, q: int) -> DTable:
    """All of d(L(p, q), i) for i in [0, p), as a DTable."""
    qn = _normalize_q(p, q)
    if p == 1:
        return DTable("lens", 1, 0, (ZERO,))
    values = tuple(-v for v in _neg_lens_values(p, qn)[:p])
    return DTable("lens", p, qn, values)


@lru_cache(maxsize=512)
def d_trefoil_filling(p: int, q: int) -> DTable:
    """Correction terms of the p/q Dehn filling of the right-hand trefoil
    exterior: the L(p, q) values, shifted down by 2 exactly on 0 <= i < q.

    Requires coprime p >= q >= 1 (p = q only for the 1/1 filling).
    """
    if q < 1 or p < q:
        raise ValueError(f"filling slope needs p >= q >= 1, got {p}/{q}")
    lens = d_lens_table(p, q)
    values = tuple(v - 2 if i < q else v for i, v in enumerate(lens.values))
    return DTable("trefoil_filling", p, lens.q, values)
