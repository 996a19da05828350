"""Executable verification suites.

Each suite is an independent cross-check of one part of the machinery:
golden tables for the lens recursion, the closed form against the recursion,
pruned against exhaustive search, the large-p progression rejection, and the
catalog reconciliation.  Suites return a report with one line per check so
the service and the CLI can surface them verbatim.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .catalog import verify_tables
from .lens import d_lens, d_lens_table
from .search import (
    RADII,
    _Q_COPRIME,
    SlopeFamily,
    a_windows,
    d_lens_closed_form,
    progression_reject,
    search,
    theta_of,
)

# The complete multiset of filling slopes (p, q) carrying candidates up to
# p = 230; the search must reproduce it exactly.  Slopes listed twice carry
# two candidates with distinct torsion sequences.
EXPECTED_SLOPES: tuple[tuple[int, int], ...] = (
    (1, 1), (2, 1), (3, 1), (7, 2), (9, 1), (9, 2), (10, 1), (10, 1), (11, 1),
    (13, 3), (13, 3), (14, 3), (17, 2), (17, 2), (19, 4), (21, 4), (22, 3),
    (23, 3), (27, 4), (27, 5), (29, 4), (29, 4), (37, 7), (37, 7), (38, 7),
    (43, 8), (46, 7), (47, 7), (49, 9), (50, 9), (51, 8), (58, 9), (59, 9),
    (62, 11), (69, 11), (70, 11), (81, 13), (81, 14), (83, 13), (86, 15),
    (91, 16), (93, 16), (94, 15), (99, 16), (99, 17), (101, 16), (106, 17),
    (106, 17), (110, 19), (110, 19), (113, 18), (113, 18), (119, 19),
    (131, 21), (133, 23), (137, 22), (137, 22), (143, 23), (146, 25),
    (154, 25), (157, 27), (157, 27), (163, 28), (211, 36), (221, 36),
)

DOUBLED_SLOPES: tuple[tuple[int, int], ...] = tuple(
    sorted({s for s in EXPECTED_SLOPES if EXPECTED_SLOPES.count(s) == 2})
)

# Golden lens tables: ((p, q), values as reduced fractions).
GOLDEN_LENS_TABLES = (
    ((3, 1), ("1/2", "-1/6", "-1/6")),
    ((3, 2), ("1/6", "1/6", "-1/2")),
    ((4, 1), ("3/4", "0", "-1/4", "0")),
    ((4, 3), ("0", "1/4", "0", "-3/4")),
    ((5, 1), ("1", "1/5", "-1/5", "-1/5", "1/5")),
    ((5, 2), ("2/5", "2/5", "-2/5", "0", "-2/5")),
    ((5, 3), ("2/5", "0", "2/5", "-2/5", "-2/5")),
    ((5, 4), ("-1/5", "1/5", "1/5", "-1/5", "-1")),
)


@dataclass
class SuiteReport:
    suite: str
    passed: bool
    lines: list[str] = field(default_factory=list)


def suite_lens_tables() -> SuiteReport:
    """Golden small-lens tables plus the q = 1 closed form up to p = 500."""
    lines = []
    ok = True
    rows = 0
    for (p, q), expected in GOLDEN_LENS_TABLES:
        got = tuple(str(v) for v in d_lens_table(p, q).values)
        rows += 1
        if got != expected:
            ok = False
            lines.append(f"  golden table L({p},{q}): got {got}")
    if d_lens(1, 1, 0) != 0:
        ok = False
        lines.append("  d of the 3-sphere is not 0")
    rows += 1
    lines.insert(0, f"golden tables: {rows} rows {'ok' if ok else 'FAILED'}")

    bad = 0
    checked = 0
    for p in range(1, 501):
        table = d_lens_table(p, 1).values
        for i in range(p):
            checked += 1
            if table[i] != Fraction((2 * i - p) ** 2 - p, 4 * p):
                bad += 1
    lines.append(
        f"closed form for q=1 up to p=500: {checked} values, {bad} mismatches"
    )
    return SuiteReport("lens-tables", ok and bad == 0, lines)


def suite_lemma42(q_max: int = 500) -> SuiteReport:
    """Closed form against the recursion: exact equality, zero tolerance,
    over every valid (q <= q_max, r, zeta, s) and every index."""
    checked = 0
    bad = 0
    for q in range(2, q_max + 1):
        for r in RADII:
            if gcd(q, r) != 1 or q <= 2 * r:
                continue
            s = q % r
            for zeta in (1, -1):
                q2 = r if zeta == 1 else q - r
                table = d_lens_table(q, q2).values
                for i in range(q):
                    checked += 1
                    if d_lens_closed_form(q, zeta, r, s, i) != table[i]:
                        bad += 1
    lines = [
        f"closed form vs recursion, q <= {q_max}: {checked} values, "
        f"{bad} mismatches"
    ]
    return SuiteReport("lemma42", bad == 0 and checked > 0, lines)


def suite_pruning(p_max: int = 230) -> SuiteReport:
    """Exhaustive scan against the windowed scan, forced on for every slope."""
    full = search(p_max, mode="full")
    pruned = search(p_max, mode="pruned", prune_threshold=0)
    same = [
        (c.p, c.q, c.epsilon, c.t.values) for c in full
    ] == [(c.p, c.q, c.epsilon, c.t.values) for c in pruned]
    lines = [
        f"full scan: {len(full)} candidates; windowed scan: {len(pruned)}; "
        + ("identical" if same else "DIFFERENT")
    ]
    return SuiteReport("pruning", same, lines)


def _progression_slopes(seed: int, per_class: int, p_lo: int, p_hi: int):
    rng = random.Random(seed)
    slopes = []
    for r in RADII:
        for zeta in (1, -1):
            picked = 0
            while picked < per_class:
                q = rng.randrange(p_lo // 6, p_hi // 6 + 1)
                if gcd(q, _Q_COPRIME[r]) != 1:
                    continue
                slope = SlopeFamily(q, r, zeta)
                if not p_lo < slope.p < p_hi:
                    continue
                slopes.append(slope)
                picked += 1
    return slopes


def suite_progression(
    seed: int = 0,
    per_class: int = 17,
    p_lo: int = 10**6,
    p_hi: int = 12 * 10**6,
) -> SuiteReport:
    """Sampled large-p sweep: on every sampled slope, every multiplier in the
    analytic windows must be refused by the exact progression test, for both
    orientations.  Zero survivors is the pass condition."""
    slopes = _progression_slopes(seed, per_class, p_lo, p_hi)
    survivors = []
    tested = 0
    for slope in slopes:
        for epsilon in (1, -1):
            theta = theta_of(slope.q, epsilon, slope.r, slope.s)
            for lo, hi in a_windows(slope.p, slope.r):
                for a in range(lo, hi + 1):
                    if gcd(a, slope.p) != 1:
                        continue
                    tested += 1
                    if not progression_reject(slope, epsilon, a, theta):
                        survivors.append((slope.p, slope.q, epsilon, a))
    lines = [
        f"sampled {len(slopes)} slopes in ({p_lo}, {p_hi}) across all "
        f"(r, zeta) classes, seed {seed}",
        f"window multipliers tested: {tested}; survivors: {len(survivors)}",
    ]
    for p, q, epsilon, a in survivors[:20]:
        lines.append(f"  SURVIVOR p={p} q={q} eps={epsilon:+d} a={a}")
    return SuiteReport("progression", not survivors, lines)


def suite_reconcile(p_max: int = 230) -> SuiteReport:
    """Search to p_max, compare the slope multiset with the known list, and
    reconcile against the catalog."""
    cands = search(p_max)
    lines = [f"search to {p_max}: {len(cands)} candidates"]
    ok = True

    got = sorted((c.p, c.q) for c in cands)
    if got != sorted(EXPECTED_SLOPES):
        ok = False
        lines.append("  slope multiset does NOT match the known 65-entry list")
    else:
        lines.append("  slope multiset matches the known 65-entry list")

    for p, q in DOUBLED_SLOPES:
        ts = {c.t.values for c in cands if (c.p, c.q) == (p, q)}
        if len(ts) != 2:
            ok = False
            lines.append(f"  slope {p}/{q}: expected 2 torsion sequences, got {len(ts)}")
    lines.append(
        f"  doubled slopes checked: {len(DOUBLED_SLOPES)} "
        f"(two distinct torsion sequences each)"
    )

    report = verify_tables(p_max, cands)
    lines.extend("  " + ln for ln in report.lines())
    return SuiteReport("reconcile", ok and report.ok, lines)


SUITES = {
    "lens-tables": suite_lens_tables,
    "lemma42": suite_lemma42,
    "pruning": suite_pruning,
    "progression": suite_progression,
    "reconcile": suite_reconcile,
}


def run_suite(name: str, seed: int = 0) -> SuiteReport:
    """Dispatch a suite by its public name; seed only affects sampling."""
    if name not in SUITES:
        raise ValueError(
            f"unknown suite {name!r}; choose from {', '.join(sorted(SUITES))}"
        )
    if name == "progression":
        return suite_progression(seed=seed)
    return SUITES[name]()
