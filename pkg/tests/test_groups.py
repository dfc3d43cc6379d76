import itertools

import pytest
from hypothesis import given, strategies as st

from schurcone import groups as gr
from schurcone.abgrp import FgAbelianGroup
from schurcone.library import library, resolve


def perm_group(gens):
    """Brute-force closure of permutation tuples; the identity is listed first."""
    n = len(gens[0])
    ident = tuple(range(n))
    elems = [ident]
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = tuple(p[g[i]] for i in range(n))
                if q not in elems:
                    elems.append(q)
                    nxt.append(q)
        frontier = nxt
    idx = {p: i for i, p in enumerate(elems)}
    table = [[idx[tuple(a[b[i]] for i in range(n))] for b in elems] for a in elems]
    return gr.FiniteGroup(table)


def order_profile(g):
    return sorted(g.element_order(a) for a in g.elements)


def test_basic_orders():
    assert gr.cyclic(1).order == 1
    assert gr.dihedral(4).order == 8
    assert gr.quaternion8().order == 8
    assert gr.symmetric(4).order == 24
    assert order_profile(gr.quaternion8()) == [1, 2, 4, 4, 4, 4, 4, 4]
    assert order_profile(gr.dihedral(4)) == [1, 2, 2, 2, 2, 2, 4, 4]


def test_rejects_bad_tables():
    with pytest.raises(gr.GroupError):
        gr.FiniteGroup([[0, 1], [1, 1]])
    with pytest.raises(gr.GroupError):
        # Latin square but not associative
        gr.FiniteGroup([[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]])


def test_crt():
    z6 = gr.direct_product(gr.cyclic(2), gr.cyclic(3)).group
    assert gr.find_isomorphism(z6, gr.cyclic(6)) is not None
    z4 = gr.direct_product(gr.cyclic(2), gr.cyclic(2)).group
    assert gr.find_isomorphism(z4, gr.cyclic(4)) is None


def test_dihedral_matches_permutation_model():
    square = perm_group([(1, 2, 3, 0), (0, 3, 2, 1)])
    assert gr.find_isomorphism(gr.dihedral(4), square) is not None
    s3 = perm_group([(1, 0, 2), (1, 2, 0)])
    assert gr.find_isomorphism(gr.symmetric(3), s3) is not None
    assert gr.find_isomorphism(gr.dihedral(3), s3) is not None


def test_semidirect_identifies_s3_and_a4():
    sp = resolve("sd(Z(3), Z(2), inv)")
    assert gr.find_isomorphism(sp.group, gr.symmetric(3)) is not None
    a4 = resolve("A4").group
    s4 = gr.symmetric(4)
    assert a4.order == 12
    assert gr.derived_subgroup(s4).order == 12
    a4_in_s4, _ = gr.subgroup_as_group(s4, gr.derived_subgroup(s4).members)
    assert gr.find_isomorphism(a4, a4_in_s4) is not None


def test_semidirect_structure_maps():
    sp = resolve("sd(Z(4), Z(2), inv)").semidirect
    assert sp.retraction.compose(sp.section).images == tuple(sp.quotient.elements)
    assert set(sp.retraction.kernel()) == set(sp.normal.members)


def brute_center(g):
    return tuple(a for a in g.elements if all(g.mul(a, b) == g.mul(b, a) for b in g.elements))


def brute_derived(g):
    gens = {g.comm(a, b) for a in g.elements for b in g.elements}
    return gr.subgroup_closure(g, gens)


@pytest.mark.parametrize("text,g", library(16))
def test_center_and_derived(text, g):
    assert gr.center(g).members == brute_center(g)
    assert gr.derived_subgroup(g).members == brute_derived(g)


@pytest.mark.parametrize("text,g", library(16))
def test_abelianization_order(text, g):
    ab = gr.abelianization(g)
    assert ab.order * gr.derived_subgroup(g).order == g.order


def test_abelianization_values():
    assert gr.abelianization(gr.dihedral(4)) == FgAbelianGroup(0, (2, 2))
    assert gr.abelianization(gr.quaternion8()) == FgAbelianGroup(0, (2, 2))
    assert gr.abelianization(gr.symmetric(3)) == FgAbelianGroup(0, (2,))
    assert gr.abelianization(resolve("A4").group) == FgAbelianGroup(0, (3,))


def test_quotient():
    d4 = gr.dihedral(4)
    rot = gr.subgroup_closure(d4, [1])
    q, pi = gr.quotient(d4, rot)
    assert q.order == 2
    assert set(pi.kernel()) == set(rot)
    q, _ = gr.quotient(d4, gr.center(d4))
    assert q.order == 4 and q.is_abelian and gr.find_isomorphism(q, gr.cyclic(4)) is None
    with pytest.raises(gr.GroupError):
        gr.NormalSubgroup(d4, gr.subgroup_closure(d4, [4]))


@given(st.integers(0, 7), st.integers(0, 7))
def test_closure_is_smallest_subgroup(a, b):
    g = gr.dihedral(4)
    s = gr.subgroup_closure(g, [a, b])
    assert gr.is_subgroup(g, s)
    assert a in s and b in s
    for h in itertools.combinations(g.elements, 2):
        t = gr.subgroup_closure(g, h)
        if a in t and b in t:
            assert set(s) <= set(t)


@given(st.permutations(range(8)))
def test_relabel_gives_isomorphic_group(perm):
    perm = list(perm)
    # identity must stay at index 0
    i = perm.index(0)
    perm[0], perm[i] = perm[i], perm[0]
    h, iso = gr.relabel(gr.quaternion8(), perm)
    assert gr.find_isomorphism(gr.quaternion8(), h) is not None
    assert iso.source.order == 8


def test_commutator_and_products():
    d4 = gr.dihedral(4)
    rot = gr.subgroup_closure(d4, [1])
    assert gr.commutator_subgroup(d4, rot, d4.elements) == gr.derived_subgroup(d4).members
    klein = gr.subgroup_closure(d4, [2, 4])
    assert gr.product_subgroup(d4, rot, klein) == tuple(d4.elements)
    assert gr.intersect(rot, klein) == gr.center(d4).members


def test_induced_quotient_map():
    d4 = gr.dihedral(4)
    z = gr.center(d4)
    rot = gr.NormalSubgroup(d4, gr.subgroup_closure(d4, [1]))
    f = gr.induced_quotient_map(d4, z, rot)
    assert f.source.order == 4 and f.target.order == 2


def test_json_roundtrip():
    g = gr.dihedral(3)
    h = gr.FiniteGroup.from_json(g.to_json())
    assert h.table == g.table and h.labels == g.labels
    assert h.key == g.key
