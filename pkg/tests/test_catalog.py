"""Catalog data integrity, lookup, matching, reconciliation."""

import hashlib
from pathlib import Path

import pytest

from finsurg import (
    Cable,
    HyperbolicRef,
    Torus,
    berge_discrepancies,
    berge_records,
    catalog_lookup,
    load_catalog,
    match_candidate,
    search,
    t_from_alexander,
    torus_alexander,
    verify_tables,
)
from finsurg.catalog import label_t

HERE = Path(__file__).parent


def test_catalog_checksum_is_pinned():
    # any edit to the shipped table data must be deliberate
    import finsurg

    data = (Path(finsurg.__file__).parent / "data" / "catalog.txt").read_bytes()
    pinned = (HERE / "data" / "catalog.sha256").read_text().split()[0]
    assert hashlib.sha256(data).hexdigest() == pinned


def test_catalog_row_counts():
    cat = load_catalog()
    torus_cable = [e for e in cat.entries if not isinstance(e.label, HyperbolicRef)]
    hyperbolic = [e for e in cat.entries if isinstance(e.label, HyperbolicRef)]
    assert len(torus_cable) == 35
    assert len(hyperbolic) == 26
    assert len([b for b in cat.berge if b.source == "table1"]) == 11
    assert len([b for b in cat.berge if b.source == "table2"]) == 11
    assert len([b for b in cat.berge if b.source == "textlist"]) == 11


def test_catalog_lookup_examples():
    assert catalog_lookup(19) == [
        e for e in load_catalog().entries if e.p == 19
    ]
    assert [e.label for e in catalog_lookup(19)] == [Cable(9, 2, 3, 2)]
    labels17 = [e.label for e in catalog_lookup(17)]
    assert Torus(5, 3) in labels17
    assert HyperbolicRef("Pretzel knot P(-2,3,7)") in labels17
    assert catalog_lookup(12) == []


def test_every_torus_cable_row_is_in_surgery_range():
    for e in load_catalog().entries:
        t = label_t(e.label)
        if t is not None:
            assert e.p >= 2 * t.genus - 1, (e.p, e.label)


def test_berge_discrepancies_recorded_not_resolved():
    issues = berge_discrepancies()
    ps = {p for p, _lam, _srcs in issues}
    assert ps == {46, 71, 93, 107, 118, 132}
    by_p = {p: srcs for p, _lam, srcs in issues}
    assert by_p[46] == {"table1": 17, "table2": 17, "textlist": 19}
    assert by_p[71] == {"table1": 21, "table2": 27, "textlist": 27}
    assert by_p[107] == {"table1": 25, "table2": 30, "textlist": 30}


def test_berge_records_have_surgery_coefficients():
    recs = [b for b in berge_records() if b.source == "table1"]
    assert {(b.p, b.surgery) for b in recs} == {
        (18, 17), (39, 38), (45, 46), (46, 47), (68, 69), (71, 70), (82, 81),
        (93, 94), (107, 106), (118, 119), (132, 131),
    }
    for b in berge_records():
        if b.source == "table2":
            assert b.center and b.quotient


@pytest.fixture(scope="module")
def candidates230():
    return search(230)


def test_match_candidate_examples(candidates230):
    by_slope = {}
    for c in candidates230:
        by_slope.setdefault((c.p, c.q), []).append(c)

    (c19,) = by_slope[(19, 4)]
    m = match_candidate(c19)
    assert m.kind == "cable"
    assert [e.label for e in m.entries] == [Cable(9, 2, 3, 2)]

    (c38,) = by_slope[(38, 7)]
    m38 = match_candidate(c38)
    assert m38.kind == "hyperbolic"
    assert m38.entries[0].label == HyperbolicRef("Berge knot K(39,16;16)")

    got = {match_candidate(c).entries[0].label for c in by_slope[(13, 3)]}
    assert got == {Torus(5, 3), Torus(5, 2)}


def test_match_candidate_no_silent_drop(candidates230):
    kinds = {match_candidate(c).kind for c in candidates230}
    assert "unexpected" not in kinds


def test_match_uniqueness(candidates230):
    # a candidate never matches two torus/cable rows of different knot type
    for c in candidates230:
        m = match_candidate(c)
        if m.kind in ("torus", "cable"):
            assert len({label_t(e.label) for e in m.entries}) == 1


def test_verify_tables_partial_range(candidates230):
    report = verify_tables(20, candidates230)
    covered = {e.p for e, _ in report.row_matches} | {
        e.p for e in report.unmatched_rows
    } | {c.p for c, _ in report.hyperbolic_matches}
    assert covered == {1, 2, 3, 7, 9, 10, 11, 13, 14, 17, 19}
    assert report.ok


def test_verify_tables_empty_input_flags_all_rows():
    report = verify_tables(230, [])
    assert not report.ok
    assert len(report.unmatched_rows) == 35
    assert len(report.uncovered_hyperbolic_rows) == 26
    assert report.candidate_count == 0


def test_pretzel_seventeen_candidate_is_the_nontorus_one(candidates230):
    # at p = 17 one candidate carries the (5,3) torus torsion and the other
    # must fall to the hyperbolic row
    pair = [c for c in candidates230 if c.p == 17]
    assert len(pair) == 2
    kinds = sorted(match_candidate(c).kind for c in pair)
    assert kinds == ["hyperbolic", "torus"]
    t53 = t_from_alexander(torus_alexander(5, 3))
    torus_one = next(c for c in pair if match_candidate(c).kind == "torus")
    assert torus_one.t.values == t53.values
