from fractions import Fraction

import pytest

from weylscan import exact
from weylscan.roots import parse_system_label
from weylscan.subroots import (EmptySubrootSystem, RANK1_EPSILON0,
                               appendix_a_table, classify_simple_roots,
                               epsilon0, lemma3_check, psi_one,
                               simple_subsystem, table_rows_as_dicts,
                               verify_appendix_a)


def test_subsystem_a3_disconnected(rs):
    sub = simple_subsystem(rs("A", 3), (1, 3))
    assert sub.m == 2
    assert len(sub.roots) == 4
    assert sub.type_label == "A1xA1"
    assert sub.ratio == Fraction(1, 2)


def test_subsystem_b3_leading_pair_is_a2(rs):
    sub = simple_subsystem(rs("B", 3), (1, 2))
    assert sub.type_label == "A2"
    assert len(sub.roots) == 6


def test_subsystem_b3_tail_is_b2(rs):
    sub = simple_subsystem(rs("B", 3), (2, 3))
    assert sub.type_label == "B2"
    assert len(sub.roots) == 8


def test_d4_three_outer_nodes(rs):
    # dropping the central node of D4 leaves three orthogonal A1 components
    sub = simple_subsystem(rs("D", 4), (1, 3, 4))
    assert sub.type_label == "A1xA1xA1"
    assert len(sub.roots) == 6


def test_e6_contains_d5(rs):
    sub = simple_subsystem(rs("E", 6), (1, 2, 3, 4, 5))
    assert sub.type_label == "D5"
    assert len(sub.roots) == 40
    assert sub.ratio == Fraction(1, 8)


def test_f4_contains_b3(rs):
    # long nodes of F4 generate B3 with 18 roots
    labels = {
        S: classify_simple_roots(rs("F", 4), S)
        for S in [(1, 2, 3), (2, 3, 4)]
    }
    assert "B3" in labels.values()
    assert "C3" in labels.values()


def test_g2_rank1_subsystems(rs):
    system = rs("G", 2)
    subs = [simple_subsystem(system, (i,)) for i in (1, 2)]
    assert all(s.type_label == "A1" and len(s.roots) == 2 for s in subs)


def test_invalid_subsets_rejected(rs):
    system = rs("A", 2)
    with pytest.raises(ValueError):
        simple_subsystem(system, ())
    with pytest.raises(ValueError):
        simple_subsystem(system, (0,))
    with pytest.raises(ValueError):
        simple_subsystem(system, (3,))


def test_psi_one_b2(rs):
    psi = simple_subsystem(rs("B", 2), (1, 2))
    psi1 = psi_one(psi, drop_position=1)
    assert psi1.base_indices == (2,)
    assert psi1.m == 1
    assert psi1.type_label == "A1"


def test_psi_one_empty_sentinel(rs):
    psi = simple_subsystem(rs("A", 2), (1,))
    psi1 = psi_one(psi)
    assert isinstance(psi1, EmptySubrootSystem)
    assert psi1.is_empty and psi1.m == 0


def test_psi_one_bad_position(rs):
    psi = simple_subsystem(rs("A", 3), (1, 2))
    with pytest.raises(IndexError):
        psi_one(psi, drop_position=3)


@pytest.mark.parametrize("family,rank", [
    ("A", 1), ("A", 4), ("B", 3), ("C", 4), ("D", 5),
    ("G", 2), ("F", 4), ("E", 6),
])
def test_lemma3_holds_irreducible(rs, family, rank):
    report = lemma3_check(rs(family, rank))
    assert report.holds
    assert not report.violations
    if rank > 1:
        assert report.min_gap > 0


def test_lemma3_a3_min_gap_exact(rs):
    report = lemma3_check(rs("A", 3))
    # tightest subsystem of A3 is A2: 1/3 - 1/4 = 1/12
    assert report.min_gap == Fraction(1, 12)
    assert report.ratio == Fraction(1, 4)
    assert len(report.records) == 6


def test_lemma3_fails_reducible():
    report = lemma3_check(parse_system_label("B3xA1xA1xA1"))
    assert not report.holds
    b3_violations = [v for v in report.violations if v.subsystem == "B3"]
    assert b3_violations
    assert b3_violations[0].sub_ratio == Fraction(1, 6)
    assert report.ratio == Fraction(6, 24)


def test_lemma3_report_dict_roundtrips(rs):
    d = lemma3_check(rs("B", 2)).to_dict()
    assert d["ratio"] == "1/4"
    assert d["holds"] is True
    assert d["min_gap"] == "1/4"  # A1 ratio 1/2 minus 1/4


def test_epsilon0_values(rs):
    assert epsilon0(rs("A", 2)) == Fraction(1, 12)
    assert epsilon0(rs("B", 2)) == Fraction(1, 8)
    assert epsilon0(rs("A", 1)) == RANK1_EPSILON0


def test_epsilon0_positive_everywhere(rs):
    for family, rank in [("A", 5), ("C", 4), ("D", 6), ("F", 4), ("E", 7)]:
        assert epsilon0(rs(family, rank)) > 0


def test_table_has_expected_shape():
    rows = appendix_a_table(4)
    assert all(r.m < r.rank for r in rows)
    assert all(r.sub_ratio == Fraction(r.m, r.psi_size) for r in rows)
    # every (parent, m) pair appears
    pairs = {(r.system, r.m) for r in rows}
    assert ("B4", 3) in pairs and ("G2", 1) in pairs and ("F4", 2) in pairs


def test_table_rows_spot_checks():
    rows = {(r.system, r.m, r.subsystem): r for r in appendix_a_table(8)}
    assert rows[("E8", 7, "E7")].psi_size == 126
    assert rows[("F4", 3, "B3")].sub_ratio == Fraction(1, 6)
    assert rows[("E6", 5, "D5")].sub_ratio == Fraction(1, 8)
    # B_n rows: the maximal proper-m subsystem is B_m
    assert ("B8", 7, "B7") in rows and rows[("B8", 7, "B7")].sub_ratio == Fraction(1, 14)


def test_table_rows_as_dicts_serializes():
    dicts = table_rows_as_dicts(appendix_a_table(3))
    assert all(set(d) == {"family", "rank", "subsystem", "m", "psi_size", "ratio"}
               for d in dicts)
    assert all(isinstance(d["ratio"], str) and "/" in d["ratio"] for d in dicts)


def test_table_rejects_tiny_rank():
    with pytest.raises(ValueError):
        appendix_a_table(1)


def test_verify_appendix_a_all_ok():
    result = verify_appendix_a(8)
    assert result["all_ok"]
    assert result["instances"] > 100
    assert all(c["exists"] for c in result["checks"])


def test_verify_appendix_a_small_rank():
    result = verify_appendix_a(4)
    assert result["all_ok"]
    parents = {c["parent"] for c in result["checks"]}
    assert parents == {"A2", "A3", "A4", "B2", "B3", "B4", "C3", "C4",
                       "D4", "F4", "G2"}
