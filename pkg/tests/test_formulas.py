import random

import pytest
from hypothesis import given, settings, strategies as st

from schurcone import formulas as fm
from schurcone import groups as gr
from schurcone.abgrp import FgAbelianGroup
from schurcone.cones import pair_multiplier, schur_multiplier, triple_multiplier_pushout
from schurcone.expr import normal_subgroup
from schurcone.library import FIVE_TERM_PAIRS, PUSHOUT_TRIPLES, library, resolve

Z = FgAbelianGroup
c = Z.from_cyclic


def test_free_product_formulas():
    assert fm.multiplier_free_product(Z(), Z()) == Z()
    assert fm.multiplier_free_product(c([2]), c([3])) == c([6])
    assert fm.multiplier_free_product(c([2]), c([2])) == Z(0, (2, 2))
    assert fm.triple_multiplier_free_product(Z(), c([4])) == c([4])


def test_pair_free_product_from_computed_components():
    d4, s3 = gr.dihedral(4), gr.symmetric(3)
    rot = pair_multiplier(d4, gr.subgroup_closure(d4, [1]))
    a3 = pair_multiplier(s3, gr.derived_subgroup(s3))
    assert fm.pair_multiplier_free_product(rot, a3) == c([2])
    whole = [pair_multiplier(g, gr.whole(g)) for g in (d4, s3)]
    assert fm.pair_multiplier_free_product(*whole) == fm.multiplier_free_product(schur_multiplier(d4),
                                                                                  schur_multiplier(s3))


@pytest.mark.parametrize("a,b,expect", [
    ("Z(2)", "Z(2)", c([2])),
    ("Z(2)", "Z(3)", Z()),
    ("S(3)", "Z(2)", c([2])),
    ("Z(4)", "Z(2)", c([2])),
])
def test_direct_product_formula(a, b, expect):
    g1, g2 = resolve(a).group, resolve(b).group
    assert fm.multiplier_direct_product(g1, g2) == expect


def test_direct_product_cross_check_skipped_above_cap(caplog):
    g1, g2 = gr.dihedral(4), gr.cyclic(3)
    with caplog.at_level("WARNING"):
        val = fm.multiplier_direct_product(g1, g2)
    assert val == c([2])
    assert caplog.records


@pytest.mark.parametrize("case", FIVE_TERM_PAIRS, ids=lambda k: f"{k.group}:{k.sub}")
def test_relative_oracle_matches_brute_force(case):
    g, n = case.build()
    comm = {g.comm(a, b) for a in n.members for b in g.elements}
    nng = gr.subgroup_closure(g, comm)
    assert fm.relative_h2_oracle(g, n) == gr.abelian_invariants(g, n.members, nng)


@pytest.mark.parametrize("case", PUSHOUT_TRIPLES, ids=lambda k: f"{k.group}:{k.m}:{k.n}")
def test_triple_sequence_reports(case):
    g, m, n = case.build()
    rep = fm.verify_triple_sequence(g, m, n)
    assert rep.passed, [x for x in rep.checks if not x.passed]


def test_triple_sequence_flags_h2_discrepancy():
    g = gr.dihedral(4)
    rep = fm.verify_triple_sequence(g, gr.subgroup_closure(g, [1]), gr.center(g))
    assert any("K(G,N)" in note for note in rep.notes)


@pytest.mark.parametrize("tid,g,n", [("2.1", "D(4)", None), ("2.2", "Q8", None)])
def test_whole_and_trivial(tid, g, n):
    grp = resolve(g).group
    rep = (fm.verify_whole_pair if tid == "2.1" else fm.verify_trivial_pair)(grp)
    assert rep.passed and rep.theorem_id == tid


def test_five_term_collapses_for_whole_and_trivial():
    g = gr.dihedral(4)
    for n in (gr.whole(g), gr.trivial_subgroup(g)):
        rep = fm.verify_five_term(g, n)
        assert rep.passed


def test_semidirect_split():
    for text in ("sd(Z(3), Z(2), inv)", "sd(Z(4), Z(2), inv)", "A4"):
        sp = resolve(text).semidirect
        rep = fm.verify_semidirect_split(sp.group, sp.normal, sp.retraction, sp.section, text)
        assert rep.passed, rep.checks


def test_semidirect_rejects_bad_retraction():
    sp = resolve("sd(Z(3), Z(2), inv)").semidirect
    bogus = gr.GroupHom(sp.group, sp.quotient, tuple(0 for _ in sp.group.elements))
    with pytest.raises(fm.PreconditionError):
        fm.verify_semidirect_split(sp.group, sp.normal, bogus, sp.section)


def test_second_iso_readings():
    g = gr.dihedral(4)
    rot, klein = gr.subgroup_closure(g, [1]), gr.subgroup_closure(g, [2, 4])
    rep = fm.verify_second_iso_pairs(g, rot, gr.subgroup_closure(g, [2]))
    assert rep.passed and rep.values["reading N <= M"] == "True"
    rep = fm.verify_second_iso_pairs(g, rot, rot)
    assert rep.passed and rep.lhs == rep.rhs == str(schur_multiplier(gr.cyclic(4)))
    rep = fm.verify_second_iso_pairs(g, gr.subgroup_closure(g, [4]), rot)
    assert rep.values["reading N <= M"] == "False"
    assert rep.notes


def test_ellis_agreement_and_free_triples():
    g = resolve("Z(2) x Z(2)").group
    m, n = normal_subgroup(g, "gen[2]"), normal_subgroup(g, "gen[1]")
    assert fm.verify_ellis_agreement(g, m, n).passed
    t = triple_multiplier_pushout(g, m, n)
    rep = fm.verify_free_product_triples([(g, m, n), (g, m, n)])
    assert rep.passed
    assert fm.triple_multiplier_free_product(t, t) == t + t


def test_windows_and_remarks():
    z2, z3, z4 = gr.cyclic(2), gr.cyclic(3), gr.cyclic(4)
    assert fm.verify_direct_product_window(z2, gr.whole(z2), z4, gr.subgroup_closure(z4, [2])).passed
    rep = fm.remark_case_sequences("2.6iii", z2, gr.trivial_subgroup(z2), z3, gr.trivial_subgroup(z3))
    assert rep.passed
    rep = fm.remark_case_sequences("2.6i", z2, gr.trivial_subgroup(z2), z2, gr.trivial_subgroup(z2))
    assert rep.passed
    assert fm.verify_triple_direct_product_window(z2, gr.whole(z2), gr.trivial_subgroup(z2),
                                                  z2, gr.trivial_subgroup(z2), gr.whole(z2)).passed


def test_remark_hypotheses_enforced():
    s3 = gr.symmetric(3)
    # S3 / 1 is not cyclic
    with pytest.raises(fm.PreconditionError):
        fm.remark_case_sequences("2.6i", s3, gr.trivial_subgroup(s3), gr.cyclic(2), [0])
    with pytest.raises(fm.PreconditionError):
        # 2.6iii needs coprime quotient orders
        fm.remark_case_sequences("2.6iii", gr.cyclic(2), [0], gr.cyclic(4), [0])


def test_report_json():
    rep = fm.verify_whole_pair(gr.cyclic(3))
    d = rep.to_json()
    assert d["verdict"] == "pass"
    assert list(d)[:5] == ["theorem_id", "inputs", "lhs", "rhs", "verdict"]


@pytest.mark.parametrize("text,g", library(16))
def test_multiplier_matches_library_values(text, g):
    expected = {
        "Z(2) x Z(2)": c([2]), "Z(2) x Z(4)": c([2]), "Z(2) x Z(2) x Z(2)": c([2, 2, 2]),
        "Z(4) x Z(4)": c([4]), "Z(2) x Z(8)": c([2]), "Z(2) x Z(2) x Z(4)": c([2, 2, 2]),
        "D(4)": c([2]), "D(6)": c([2]), "D(8)": c([2]), "Q8": Z(), "S(3)": Z(), "D(3)": Z(), "D(5)": Z(),
        "D(7)": Z(), "A4": c([2]), "Z(2) x D(4)": c([2, 2, 2]), "Z(2) x Q8": c([2, 2]), "sd(Z(3), Z(4), inv)": Z(),
        "Z(2) x Z(6)": c([2]), "Z(3) x Z(3)": c([3]),
    }
    # classical values; cyclic groups have trivial multiplier
    want = Z() if text.startswith("Z(") and " x " not in text else expected[text]
    assert schur_multiplier(g) == want


@settings(max_examples=8)
@given(st.integers(0, 10**6))
def test_verdicts_invariant_under_relabelling(seed):
    rng = random.Random(seed)
    g = gr.dihedral(4)
    perm = [0] + rng.sample(range(1, 8), 7)
    h, iso = gr.relabel(g, perm)
    n_g = gr.subgroup_closure(g, [1])
    n_h = tuple(sorted(iso(a) for a in n_g))
    a, b = fm.verify_five_term(g, n_g), fm.verify_five_term(h, n_h)
    assert a.passed and b.passed
    assert a.values == b.values
