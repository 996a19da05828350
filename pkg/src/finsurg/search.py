"""Obstruction search over finite filling slopes of the right-hand trefoil
exterior.

Every tetrahedral, octahedral or icosahedral space form is (up to
orientation) the p/q filling of the trefoil exterior with p = 6q + zeta*r,
r in {3, 4, 5}.  If such a manifold is also integral p-surgery on a knot,
the two Spin^c parametrizations differ by an affine map i -> a*i + b, and
the difference of correction-term tables must read off twice an admissible
torsion sequence.  This module enumerates the slopes and the affine maps,
extracts the surviving torsion sequences, and implements the analytic
window and arithmetic-progression pruning that make large p impossible.

All arithmetic is exact: the hot loop works with integer-rescaled tables
(denominators divide 4pq) and the survivors are re-verified afterwards
against freshly built Fraction tables.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Iterable, Optional, Sequence

from .knots import TSequence
from .lens import (
    InvariantError,
    d_lens,
    d_lens_table,
    d_trefoil_filling,
)

RADII = (3, 4, 5)
# r -> the divisor q must avoid for the filling to be a space form of that type
_Q_COPRIME = {3: 3, 4: 2, 5: 5}

# both affine offsets must be tried at or below this p; above it the parity
# argument singles out one offset per orientation
SMALL_P_CUTOFF = 52

# slopes with p above the threshold restrict the multiplier a to the analytic
# windows when searching in "pruned" mode
DEFAULT_PRUNE_THRESHOLD = 10_000

# the progression test is only valid above this p
PROGRESSION_MIN_P = 767


@dataclass(frozen=True)
class SlopeFamily:
    """A finite filling slope p/q of the trefoil exterior, p = 6q + zeta*r."""

    q: int
    r: int
    zeta: int

    def __post_init__(self):
        if self.r not in RADII:
            raise ValueError(f"r must be one of {RADII}, got {self.r}")
        if self.zeta not in (1, -1):
            raise ValueError(f"zeta must be +-1, got {self.zeta}")
        if self.q < 1:
            raise ValueError(f"q must be positive, got {self.q}")
        if gcd(self.q, _Q_COPRIME[self.r]) != 1:
            raise ValueError(
                f"q={self.q} conflicts with r={self.r}: no such space form"
            )
        if self.p < 1:
            raise ValueError(f"slope {self.p}/{self.q} out of range")

    @property
    def p(self) -> int:
        return 6 * self.q + self.zeta * self.r

    @property
    def s(self) -> int:
        return self.q % self.r


@dataclass(frozen=True)
class AffineMap:
    """i -> (a*i + b) mod p, the allowed Spin^c identifications.

    The multiplier is restricted to 0 < a < p/2 with gcd(p, a) = 1; the
    degenerate moduli p <= 2 keep the identity multiplier a = 1.
    """

    a: int
    b: int
    p: int

    def __post_init__(self):
        if self.p < 1:
            raise ValueError("modulus must be positive")
        if gcd(self.a, self.p) != 1:
            raise ValueError(f"multiplier {self.a} not invertible mod {self.p}")
        if not (0 < 2 * self.a < self.p or (self.p <= 2 and self.a == 1)):
            raise ValueError(f"multiplier {self.a} outside (0, {self.p}/2)")

    def apply(self, i: int) -> int:
        return (self.a * i + self.b) % self.p


@dataclass(frozen=True)
class Candidate:
    """A surviving tuple: slope, orientation, identification, torsion data.

    Construction re-derives the difference table from freshly built exact
    tables and insists it reads 2 * t_min(i, p - i) at every index, so a
    Candidate cannot exist unless its data is consistent.
    """

    slope: SlopeFamily
    epsilon: int
    amap: AffineMap
    t: TSequence

    def __post_init__(self):
        if self.epsilon not in (1, -1):
            raise ValueError("epsilon must be +-1")
        if self.amap.p != self.slope.p:
            raise ValueError("affine map modulus disagrees with the slope")
        p = self.slope.p
        if p < 2 * self.t.genus - 1:
            raise InvariantError(
                f"candidate at {p}/{self.slope.q} violates the "
                f"surgery range p >= 2g-1"
            )
        delta = delta_sequence(self.slope, self.epsilon, self.amap)
        for i in range(p):
            if delta[i] != 2 * self.t.at(min(i, p - i)):
                raise InvariantError(
                    f"candidate at {p}/{self.slope.q} fails re-verification "
                    f"at index {i}"
                )

    @property
    def p(self) -> int:
        return self.slope.p

    @property
    def q(self) -> int:
        return self.slope.q

    @property
    def genus(self) -> int:
        return self.t.genus


def enumerate_slopes(p_max: int) -> list[SlopeFamily]:
    """All slope families with 1 <= p <= p_max, sorted by (p, q)."""
    if p_max < 1:
        raise ValueError(f"p_max must be positive, got {p_max}")
    out = []
    q = 1
    while 6 * q - 5 <= p_max:
        for r in RADII:
            if gcd(q, _Q_COPRIME[r]) != 1:
                continue
            for zeta in (1, -1):
                p = 6 * q + zeta * r
                if 1 <= p <= p_max:
                    out.append(SlopeFamily(q, r, zeta))
        q += 1
    out.sort(key=lambda s: (s.p, s.q))
    return out


def candidate_bs(p: int, q: int) -> list[int]:
    """The integral members of {(q-1)/2, (p+q-1)/2}: the only offsets
    compatible with conjugation on both sides.  Half-integers are dropped."""
    return [(j * p + q - 1) // 2 for j in (0, 1) if (j * p + q - 1) % 2 == 0]


def theta_of(q: int, epsilon: int, r: int, s: int) -> int:
    """Which offset index survives for p > 52: the offset is
    b = (theta*p + q - 1) / 2.

    For r in {3, 5} only one offset is integral and theta is the opposite
    parity of q.  For r = 4 both are integral but a parity count of the
    half-table difference kills one, depending on s = q mod 4 and the
    orientation.  Callers must not rely on this below p = 53.
    """
    if r in (3, 5):
        return 1 - q % 2
    if r == 4:
        if s not in (1, 3):
            raise ValueError(f"s must be q mod 4 in {{1, 3}}, got {s}")
        if epsilon not in (1, -1):
            raise ValueError("epsilon must be +-1")
        return 1 - ((s + epsilon) // 2) % 2
    raise ValueError(f"r must be one of {RADII}, got {r}")


def _theta_b(slope: SlopeFamily, epsilon: int) -> int:
    num = theta_of(slope.q, epsilon, slope.r, slope.s) * slope.p + slope.q - 1
    if num % 2:
        raise InvariantError(f"selected offset is not integral at {slope}")
    return num // 2


@dataclass(frozen=True)
class ThetaParams:
    """Offset data for the progression test at one (slope, epsilon, a):
    the offset index theta, the branch m with 0 <= a - mq + c < q where
    c = (theta*zeta*r + q - 1)/2, and the wraparound bit h (set only when
    theta = 1 and m = 3)."""

    theta: int
    m: int
    h: int

    def __post_init__(self):
        if self.theta not in (0, 1):
            raise ValueError("theta must be 0 or 1")
        if not 0 <= self.m <= 3:
            raise ValueError(f"m must lie in 0..3, got {self.m}")
        if self.h != (1 if 3 * self.theta + self.m == 6 else 0):
            raise ValueError("h must flag exactly the theta=1, m=3 wraparound")

    @classmethod
    def for_multiplier(cls, slope: SlopeFamily, theta: int, a: int) -> "ThetaParams":
        c2 = theta * slope.zeta * slope.r + slope.q - 1
        if c2 % 2:
            raise ValueError("offset parameters are not integral")
        m = (a + c2 // 2) // slope.q
        if not 0 <= m <= 3:
            raise ValueError(f"multiplier {a} outside the windowed domain (m={m})")
        return cls(theta, m, 1 if 3 * theta + m == 6 else 0)


def _a_values(p: int) -> list[int]:
    # Every admissible multiplier: 0 < a < p/2 coprime to p, except that the
    # trivial moduli p <= 2 contribute the identity.
    if p <= 2:
        return [1]
    return [a for a in range(1, (p - 1) // 2 + 1) if gcd(a, p) == 1]


def a_windows(p: int, r: int) -> list[tuple[int, int]]:
    """Closed integer intervals covering every multiplier a that can survive:
    |a - m*p/6| < sqrt(11*r*p/6) for some m in {0, 1, 2, 3}, clipped to the
    admissible range.  Exact membership is (6a - mp)^2 < 66*r*p; interval
    ends are bracketed with integer square roots, rounding outward.
    """
    if r not in RADII:
        raise ValueError(f"r must be one of {RADII}, got {r}")
    bound = 66 * r * p
    root = isqrt(bound)
    hi_cap = (p - 1) // 2 if p > 2 else 1
    intervals = []
    for m in range(4):
        lo = max((m * p - root) // 6 - 1, 1)
        hi = min((m * p + root) // 6 + 2, hi_cap)
        while lo <= hi and (6 * lo - m * p) ** 2 >= bound:
            lo += 1
        while hi >= lo and (6 * hi - m * p) ** 2 >= bound:
            hi -= 1
        if lo <= hi:
            intervals.append((lo, hi))
    intervals.sort()
    merged: list[tuple[int, int]] = []
    for lo, hi in intervals:
        if merged and lo <= merged[-1][1] + 1:
            merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
        else:
            merged.append((lo, hi))
    return merged


def delta_sequence(
    slope: SlopeFamily, epsilon: int, amap: AffineMap
) -> tuple[Fraction, ...]:
    """The difference table Delta(i) = d(L(p,1), i) - epsilon * d(filling,
    phi(i)) over Z/pZ, computed with exact rationals."""
    if epsilon not in (1, -1):
        raise ValueError("epsilon must be +-1")
    p = slope.p
    base = d_lens_table(p, 1).values
    fill = d_trefoil_filling(p, slope.q).values
    return tuple(base[i] - epsilon * fill[amap.apply(i)] for i in range(p))


def extract_t(delta: Sequence[Fraction | int], p: int) -> Optional[TSequence]:
    """Decode a difference table into torsion coefficients.

    Returns the sequence when every entry is an even nonnegative integer,
    the table is symmetric under i <-> p - i, the half-table is nonincreasing
    with steps 0 or 1, and the endpoint rule holds (t_{p/2} = 0 for even p;
    t_{(p-1)/2} <= 1 for odd p, completing a final descent to zero).  Returns
    None, not an error, when any condition fails.
    """
    if len(delta) != p:
        raise ValueError(f"difference table must have length {p}")
    vals = [Fraction(v) for v in delta]
    for i in range(1, (p + 1) // 2):
        if vals[i] != vals[p - i]:
            return None
    half = []
    prev = None
    for j in range(p // 2 + 1):
        v = vals[j]
        if v.denominator != 1:
            return None
        n = v.numerator
        if n < 0 or n % 2:
            return None
        t = n // 2
        if prev is not None and not 0 <= prev - t <= 1:
            return None
        half.append(t)
        prev = t
    if p % 2 == 0:
        if half[-1] != 0:
            return None
    else:
        if half[-1] > 1:
            return None
        if half[-1] == 1:
            half.append(0)
    g = half.index(0)
    if p < 2 * g - 1:
        return None
    return TSequence(tuple(half[: g + 1]))


# -- the integer-rescaled hot path


@lru_cache(maxsize=512)
def _filling_scaled(p: int, q: int) -> tuple[int, ...]:
    # 4*p*q * d(filling p/q, i); integral because denominators divide 4pq
    unit = 4 * p * q
    out = []
    for v in d_trefoil_filling(p, q).values:
        sv = v * unit
        if sv.denominator != 1:
            raise InvariantError(f"denominator of d(filling {p}/{q}) exceeds 4pq")
        out.append(int(sv))
    return tuple(out)


def _scan_slope(q, r, zeta, use_windows, all_bs):
    """All surviving (q, r, zeta, eps, a, b, t-values) rows for one slope.

    Works in integers rescaled by 4pq and walks only the half-table,
    bailing at the first violated constraint; symmetry of the other half is
    automatic for the offsets produced by candidate_bs.
    """
    slope = SlopeFamily(q, r, zeta)
    p = slope.p
    fill = _filling_scaled(p, q)
    unit = 4 * p * q
    two_unit = 2 * unit
    base = [q * ((2 * i - p) ** 2 - p) for i in range(p // 2 + 1)]
    half_range = range(p // 2 + 1)
    rows = []
    for eps in (1, -1):
        bs = candidate_bs(p, q)
        if p > SMALL_P_CUTOFF and not all_bs:
            keep = _theta_b(slope, eps)
            if keep not in bs:
                raise InvariantError(f"offset rule left the integral set at {slope}")
            bs = [keep]
        if use_windows:
            a_iter: Iterable[int] = (
                a
                for lo, hi in a_windows(p, r)
                for a in range(lo, hi + 1)
                if gcd(a, p) == 1
            )
        else:
            a_iter = _a_values(p)
        for a in a_iter:
            for b in bs:
                half = []
                prev = None
                ok = True
                for j in half_range:
                    v = base[j] - eps * fill[(a * j + b) % p]
                    if v < 0 or v % two_unit:
                        ok = False
                        break
                    t = v // two_unit
                    if prev is not None and not 0 <= prev - t <= 1:
                        ok = False
                        break
                    half.append(t)
                    prev = t
                if not ok:
                    continue
                if p % 2 == 0:
                    if half[-1] != 0:
                        continue
                else:
                    if half[-1] > 1:
                        continue
                    if half[-1] == 1:
                        half.append(0)
                g = half.index(0)
                if p < 2 * g - 1:
                    continue
                rows.append((q, r, zeta, eps, a, b, tuple(half[: g + 1])))
    return rows


def _scan_slope_task(task):
    return _scan_slope(*task)


def search(
    p_max: int,
    mode: str = "full",
    prune_threshold: int = DEFAULT_PRUNE_THRESHOLD,
    jobs: int = 1,
    all_bs: bool = False,
) -> list[Candidate]:
    """Collect every candidate over the slopes with p <= p_max.

    mode "full" scans the whole multiplier range for every slope; "pruned"
    restricts multipliers to a_windows once p exceeds prune_threshold.  The
    result is deduplicated on (p, q, epsilon, t), sorted by that key, and
    re-verified entry by entry against fresh exact tables, so the output is
    deterministic regardless of jobs.

    all_bs disables the offset selection above p = 52; it exists so the
    selection rule can be cross-checked against the blind scan.
    """
    if mode not in ("full", "pruned"):
        raise ValueError(f"mode must be 'full' or 'pruned', got {mode!r}")
    tasks = [
        (s.q, s.r, s.zeta, mode == "pruned" and s.p > prune_threshold, all_bs)
        for s in enumerate_slopes(p_max)
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_scan_slope_task, tasks, chunksize=8))
    else:
        chunks = [_scan_slope(*t) for t in tasks]

    first_by_key = {}
    for rows in chunks:
        for q, r, zeta, eps, a, b, tvals in rows:
            p = 6 * q + zeta * r
            key = (p, q, eps, tvals)
            if key not in first_by_key:
                first_by_key[key] = (q, r, zeta, eps, a, b, tvals)

    eps_of = {}
    for p, q, eps, tvals in first_by_key:
        prior = eps_of.setdefault((p, q, tvals), eps)
        if prior != eps:
            raise InvariantError(
                f"torsion sequence at {p}/{q} matched for both orientations"
            )

    # Candidate construction re-verifies each row against scratch rationals,
    # guarding the rescaled hot path
    out = []
    for key in sorted(first_by_key):
        q, r, zeta, eps, a, b, tvals = first_by_key[key]
        out.append(
            Candidate(
                SlopeFamily(q, r, zeta), eps,
                AffineMap(a, b, 6 * q + zeta * r), TSequence(tvals),
            )
        )
    return out


# -- closed form and the large-p progression test


def d_lens_closed_form(q: int, zeta: int, r: int, s: int, i: int) -> Fraction:
    """Closed form for d(L(q, r), i) when zeta = +1 and d(L(q, q - r), i)
    when zeta = -1, valid for q > 2r:

        zeta * ( (2i + 1 - q - zeta*r)^2 / (4qr) - 1/4 - d(L(r, s), i mod r) )

    where s is the reduction of q mod r.  Equal to the recursion on its whole
    domain; the equality is exercised as a verification suite.
    """
    if r not in RADII:
        raise ValueError(f"r must be one of {RADII}, got {r}")
    if zeta not in (1, -1):
        raise ValueError("zeta must be +-1")
    if gcd(q, r) != 1:
        raise ValueError(f"q={q} and r={r} must be coprime")
    if s != q % r:
        raise ValueError(f"s={s} is not the reduction of q={q} mod r={r}")
    if q <= 2 * r:
        raise ValueError(f"closed form needs q > 2r, got q={q}, r={r}")
    if not 0 <= i < q:
        raise ValueError(f"index {i} out of range [0, {q})")
    return zeta * (
        Fraction((2 * i + 1 - q - zeta * r) ** 2, 4 * q * r)
        - Fraction(1, 4)
        - d_lens(r, s, i % r)
    )


def completeness_bound(r: int) -> int:
    """Above p = 310*r*(36r+1)^2 every slope of radius r is refused by the
    progression test, so the finite search below the bound is complete."""
    if r not in RADII:
        raise ValueError(f"r must be one of {RADII}, got {r}")
    return 310 * r * (36 * r + 1) ** 2


def _progression_k_limit(p: int, r: int) -> int:
    # largest k with 1859 * r * (6k+1)^2 < 6p (may be -1: no valid k)
    k = -1
    while 1859 * r * (6 * (k + 1) + 1) ** 2 < 6 * p:
        k += 1
    return k


@lru_cache(maxsize=64)
def _small_lens_scaled(r: int, s: int) -> tuple[int, ...]:
    # 4*r*s * d(L(r, s), j) for j in [0, r)
    unit = 4 * r * s
    return tuple(int(v * unit) for v in d_lens_table(r, s).values)


def progression_reject(
    slope: SlopeFamily, epsilon: int, a: int, theta: int
) -> bool:
    """True when the multiplier a is refuted by the difference progression
    Delta(6k) - Delta(6k+1) = A*k + B + C_k.

    A candidate identification forces every such difference to be 0 or 2;
    the test evaluates the progression exactly for k = 0..min(6r, k_limit)
    and rejects as soon as one value falls outside {0, 2}.  False means the
    multiplier must go to the full table check.  Only valid for p > 767 and
    within the exact k-range bound; a degenerate A = 0 cannot occur for
    integral a and is treated as rejection.
    """
    p, q, r, zeta, s = slope.p, slope.q, slope.r, slope.zeta, slope.s
    if p <= PROGRESSION_MIN_P:
        raise ValueError(f"progression test requires p > {PROGRESSION_MIN_P}")
    if epsilon not in (1, -1):
        raise ValueError("epsilon must be +-1")
    params = ThetaParams.for_multiplier(slope, theta, a)
    m, h = params.m, params.h
    c = (theta * zeta * r + q - 1) // 2
    chi1 = 1 if theta == 0 else 0
    chi2 = 1 if 3 * theta + m - 6 * h == 0 else 0

    # everything lives over the common denominator M = 12*p*r*s
    M = 12 * p * r * s
    x = 6 * a - m * p
    x2 = x * x
    a_num = (-2 * epsilon * zeta * x2 - 12 * r) * 12 * s
    if a_num == 0:
        return True  # would force an irrational multiplier; unreachable
    b_num = 2 * s * (
        -epsilon * zeta * x2
        - 6 * p * r * epsilon * m * (1 - theta)
        + p * r * epsilon * m * m
        + 12 * p * r * epsilon * (chi1 - chi2)
        + 6 * r * (p - 1)
    )
    small = _small_lens_scaled(r, s)  # scaled by 4rs; times 3p gives M
    k_hi = min(6 * r, _progression_k_limit(p, r))
    two = 2 * M
    for k in range(k_hi + 1):
        ik = (c + 6 * k * a - k * m * p) % r
        jk = (c + (6 * k + 1) * a - k * m * p - m * q) % r
        v = a_num * k + b_num + epsilon * zeta * (small[jk] - small[ik]) * 3 * p
        if v != 0 and v != two:
            return True
    return False
