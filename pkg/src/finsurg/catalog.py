"""The knot catalog: which knots realize each candidate torsion sequence.

The catalog ships as a versioned plain-text data file (``data/catalog.txt``,
one tab-separated row per entry: p, kind, params, source-table tag).  Torus
and cable rows are matched against search candidates by torsion-sequence
equality; hyperbolic rows are opaque construction references; Berge rows are
inert reference data, stored verbatim per source even where the sources
disagree on q.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .knots import TSequence, cable_alexander, t_from_alexander, torus_alexander
from .lens import InvariantError
from .search import Candidate, search

CATALOG_FORMAT = "v1"


@dataclass(frozen=True)
class Torus:
    r: int
    s: int


@dataclass(frozen=True)
class Cable:
    p1: int
    q1: int
    p2: int
    q2: int


@dataclass(frozen=True)
class HyperbolicRef:
    description: str


KnotLabel = Torus | Cable | HyperbolicRef


@dataclass(frozen=True)
class CatalogEntry:
    p: int
    label: KnotLabel
    source: str


@dataclass(frozen=True)
class BergeRecord:
    """One reading of a Berge knot row; never computed from.

    ``surgery`` is the finite surgery coefficient when the source lists one.
    The group columns are free text copied from the source table.
    """

    p: int
    q: int
    homology_class: int
    source: str
    surgery: int | None = None
    center: str = ""
    quotient: str = ""


@dataclass(frozen=True)
class Catalog:
    entries: tuple[CatalogEntry, ...]
    berge: tuple[BergeRecord, ...]


def _parse_berge_params(p: int, params: str, source: str) -> BergeRecord:
    fields = dict(kv.split("=", 1) for kv in params.split(";"))
    return BergeRecord(
        p=p,
        q=int(fields["q"]),
        homology_class=int(fields["lambda"]),
        source=source,
        surgery=int(fields["surgery"]) if "surgery" in fields else None,
        center=fields.get("center", ""),
        quotient=fields.get("quotient", ""),
    )


@lru_cache(maxsize=1)
def load_catalog() -> Catalog:
    """Parse the shipped data file once."""
    text = resources.files("finsurg").joinpath("data/catalog.txt").read_text("utf-8")
    entries: list[CatalogEntry] = []
    berge: list[BergeRecord] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 4:
            raise InvariantError(f"catalog.txt line {lineno}: expected 4 columns")
        p_str, kind, params, source = parts
        p = int(p_str)
        if kind == "torus":
            r, s = map(int, params.split(","))
            entries.append(CatalogEntry(p, Torus(r, s), source))
        elif kind == "cable":
            p1, q1, p2, q2 = map(int, params.split(","))
            entries.append(CatalogEntry(p, Cable(p1, q1, p2, q2), source))
        elif kind == "hyperbolic":
            entries.append(CatalogEntry(p, HyperbolicRef(params), source))
        elif kind == "berge":
            berge.append(_parse_berge_params(p, params, source))
        else:
            raise InvariantError(f"catalog.txt line {lineno}: unknown kind {kind!r}")
    return Catalog(tuple(entries), tuple(berge))


def catalog_lookup(p: int) -> list[CatalogEntry]:
    """All torus/cable/hyperbolic rows carrying surgery coefficient p."""
    return [e for e in load_catalog().entries if e.p == p]


def berge_records() -> list[BergeRecord]:
    return list(load_catalog().berge)


def berge_discrepancies() -> list[tuple[int, int, dict[str, int]]]:
    """Rows where the sources disagree on q for the same (p, homology class):
    (p, homology_class, {source: q}).  Recorded, never resolved."""
    readings: dict[tuple[int, int], dict[str, int]] = {}
    for rec in load_catalog().berge:
        readings.setdefault((rec.p, rec.homology_class), {})[rec.source] = rec.q
    out = []
    for (p, lam), by_source in sorted(readings.items()):
        if len(set(by_source.values())) > 1:
            out.append((p, lam, by_source))
    return out


@lru_cache(maxsize=None)
def label_t(label: KnotLabel) -> TSequence | None:
    """Torsion sequence of a torus or cable label; None for hyperbolic refs."""
    if isinstance(label, Torus):
        return t_from_alexander(torus_alexander(label.r, label.s))
    if isinstance(label, Cable):
        return t_from_alexander(
            cable_alexander(label.p1, label.q1, label.p2, label.q2)
        )
    return None


def label_params(label: KnotLabel) -> str:
    if isinstance(label, Torus):
        return f"{label.r},{label.s}"
    if isinstance(label, Cable):
        return f"{label.p1},{label.q1},{label.p2},{label.q2}"
    return label.description


@dataclass(frozen=True)
class MatchResult:
    """Outcome of matching one candidate against the catalog.

    kind: "torus" or "cable" when a table-3 row has the candidate's torsion
    sequence, "hyperbolic" when only table-4 rows exist at that p, and
    "unexpected" when nothing in the catalog accounts for the candidate.
    """

    kind: str
    entries: tuple[CatalogEntry, ...]

    @property
    def params(self) -> str:
        return "; ".join(label_params(e.label) for e in self.entries)


def match_candidate(cand: Candidate) -> MatchResult:
    """Identify a candidate's torsion sequence against the catalog rows at
    its surgery coefficient.  An "unexpected" result means a transcription or
    search failure and is surfaced, never dropped."""
    rows = catalog_lookup(cand.p)
    hits = tuple(
        e for e in rows if not isinstance(e.label, HyperbolicRef)
        and label_t(e.label) == cand.t
    )
    if hits:
        polys = {label_t(e.label) for e in hits}
        if len(hits) > 1 and len(polys) > 1:
            raise InvariantError(
                f"candidate at {cand.p}/{cand.q} matches distinct knot types"
            )
        kind = "torus" if isinstance(hits[0].label, Torus) else "cable"
        return MatchResult(kind, hits)
    hyper = tuple(e for e in rows if isinstance(e.label, HyperbolicRef))
    if hyper:
        return MatchResult("hyperbolic", hyper)
    return MatchResult("unexpected", ())


@dataclass
class ReconcileReport:
    """Row-by-row reconciliation of search output against the catalog."""

    p_max: int
    candidate_count: int
    row_matches: list[tuple[CatalogEntry, list[Candidate]]]
    unmatched_rows: list[CatalogEntry]
    hyperbolic_matches: list[tuple[Candidate, tuple[CatalogEntry, ...]]]
    uncovered_hyperbolic_rows: list[CatalogEntry]
    unexpected: list[Candidate]

    @property
    def ok(self) -> bool:
        return not (
            self.unmatched_rows or self.uncovered_hyperbolic_rows or self.unexpected
        )

    def lines(self) -> list[str]:
        out = [
            f"candidates with p <= {self.p_max}: {self.candidate_count}",
            f"torus/cable rows matched: "
            f"{len(self.row_matches)} of "
            f"{len(self.row_matches) + len(self.unmatched_rows)}",
        ]
        for entry, cands in self.row_matches:
            if len(cands) != 1:
                slopes = ", ".join(f"{c.p}/{c.q}" for c in cands)
                out.append(
                    f"  row p={entry.p} {label_params(entry.label)}: "
                    f"matched by {len(cands)} candidates ({slopes})"
                )
        for entry in self.unmatched_rows:
            out.append(
                f"  UNMATCHED row p={entry.p} {label_params(entry.label)}"
            )
        out.append(f"hyperbolic candidates: {len(self.hyperbolic_matches)}")
        by_p: dict[int, int] = {}
        for cand, _rows in self.hyperbolic_matches:
            by_p[cand.p] = by_p.get(cand.p, 0) + 1
        hyper_rows = {}
        for e in load_catalog().entries:
            if isinstance(e.label, HyperbolicRef):
                hyper_rows[e.p] = hyper_rows.get(e.p, 0) + 1
        for p, n in sorted(by_p.items()):
            rows = hyper_rows.get(p, 0)
            if n != rows:
                out.append(
                    f"  p={p}: {n} hyperbolic candidates against {rows} rows"
                )
        for entry in self.uncovered_hyperbolic_rows:
            out.append(f"  UNCOVERED hyperbolic row p={entry.p}")
        for cand in self.unexpected:
            out.append(f"  UNEXPECTED candidate {cand.p}/{cand.q} t={cand.t.values}")
        out.append("reconciliation: " + ("ok" if self.ok else "FAILED"))
        return out


def verify_tables(
    p_max: int, candidates: list[Candidate] | None = None
) -> ReconcileReport:
    """Reconcile every catalog row with p <= p_max against the search output.

    Checks that each torus/cable row is realized by at least one candidate
    (rows realized at two filling slopes of the same p are itemized, not
    errors), that every hyperbolic row's coefficient carries a leftover
    candidate, and that no candidate misses the catalog entirely.
    """
    if candidates is None:
        candidates = search(p_max)
    cands = [c for c in candidates if c.p <= p_max]

    row_matches: list[tuple[CatalogEntry, list[Candidate]]] = []
    unmatched_rows: list[CatalogEntry] = []
    hyperbolic_matches: list[tuple[Candidate, tuple[CatalogEntry, ...]]] = []
    uncovered: list[CatalogEntry] = []
    unexpected: list[Candidate] = []

    matched_away: set[int] = set()  # ids of candidates matched to table-3 rows
    for entry in load_catalog().entries:
        if entry.p > p_max or isinstance(entry.label, HyperbolicRef):
            continue
        hits = [c for c in cands if c.p == entry.p and c.t == label_t(entry.label)]
        if hits:
            row_matches.append((entry, hits))
            matched_away.update(id(c) for c in hits)
        else:
            unmatched_rows.append(entry)

    hyper_ps: set[int] = set()
    for entry in load_catalog().entries:
        if entry.p <= p_max and isinstance(entry.label, HyperbolicRef):
            hyper_ps.add(entry.p)

    for cand in cands:
        if id(cand) in matched_away:
            continue
        rows = tuple(
            e
            for e in catalog_lookup(cand.p)
            if isinstance(e.label, HyperbolicRef)
        )
        if rows:
            hyperbolic_matches.append((cand, rows))
        else:
            unexpected.append(cand)

    covered_ps = {c.p for c, _ in hyperbolic_matches}
    for entry in load_catalog().entries:
        if (
            entry.p <= p_max
            and isinstance(entry.label, HyperbolicRef)
            and entry.p not in covered_ps
        ):
            uncovered.append(entry)

    return ReconcileReport(
        p_max=p_max,
        candidate_count=len(cands),
        row_matches=row_matches,
        unmatched_rows=unmatched_rows,
        hyperbolic_matches=hyperbolic_matches,
        uncovered_hyperbolic_rows=uncovered,
        unexpected=unexpected,
    )
