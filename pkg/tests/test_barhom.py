import random

import pytest
from hypothesis import given, strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors as sympy_invariants

from schurcone import groups as gr
from schurcone.abgrp import FgAbelianGroup
from schurcone.barhom import (BudgetExceeded, ChainComplex, ChainComplexError, ChainMap, Reduction, bar_complex,
                              bar_ranks, bar_tuple_index, homology, homology_group, induced_chain_map,
                              induced_map_on_homology)
from schurcone.intmat import SparseIntMatrix, mat_mul, snf
from schurcone.library import resolve

Z = FgAbelianGroup


def full_homology(cx, k, use_sympy=False):
    """H_k straight from the unreduced boundary matrices."""
    n = cx.ranks[k]
    dk = cx.boundary[k]
    dk1 = cx.boundary[k + 1]
    if use_sympy:
        def factors(m):
            if m.rows == 0 or m.cols == 0:
                return []
            return [abs(int(d)) for d in sympy_invariants(Matrix(m.to_dense()), domain=ZZ) if d]
    else:
        def factors(m):
            return list(snf(m, transforms=False).invariant_factors)
    r_out = len(factors(dk)) if k >= 1 else 0
    inv = factors(dk1)
    return Z(n - r_out - len(inv), tuple(d for d in inv if d > 1))


# -- random complexes with known homology ---------------------------------------


def unimodular(rng, n, steps=12):
    m = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps if n > 1 else 0):
        i, j = rng.sample(range(n), 2)
        q = rng.randint(-2, 2)
        m[i] = [a + q * b for a, b in zip(m[i], m[j])]
    return SparseIntMatrix.from_dense(m, cols=n)


def scrambled_complex(pieces, seed):
    """Direct sum of elementary complexes, then a random unimodular basis change per degree.

    A piece (k, d) is Z --d--> Z from degree k+1 to k; (k, 0) is a free
    class in degree k.  Returns the complex and its expected homology.
    """
    top = max([k + 1 for k, _ in pieces] + [1])
    ranks = [0] * (top + 1)
    slots = []
    for k, d in pieces:
        if d:
            slots.append((k, ranks[k], ranks[k + 1], d))
            ranks[k] += 1
            ranks[k + 1] += 1
        else:
            ranks[k] += 1
    bd = [SparseIntMatrix.zeros(0, ranks[0])]
    for k in range(1, top + 1):
        ent = {(lo, hi): d for kk, lo, hi, d in slots if kk == k - 1}
        bd.append(SparseIntMatrix.from_entries(ranks[k - 1], ranks[k], ent))
    rng = random.Random(seed)
    P = [unimodular(rng, r) for r in ranks]
    Pinv = [snf_inverse(p) for p in P]
    new = [bd[0] @ Pinv[0]] + [P[k - 1] @ bd[k] @ Pinv[k] for k in range(1, top + 1)]
    expect = []
    for k in range(top):
        free = sum(1 for kk, d in pieces if kk == k and d == 0)
        tors = [abs(d) for kk, d in pieces if kk == k and abs(d) > 1]
        expect.append(Z.from_cyclic(tors + [0] * free))
    return ChainComplex(ranks, new, "R"), expect


def snf_inverse(p):
    res = snf(p)
    # p = left_inv (diag = I) right_inv, so p^-1 = right left
    return res.right @ res.left


pieces = st.lists(st.tuples(st.integers(0, 3), st.sampled_from([0, 1, 1, 2, 3, 4, -6])), min_size=1, max_size=7)


@given(pieces, st.integers(0, 10**6))
def test_reduction_homology_on_scrambled_complexes(ps, seed):
    cx, expect = scrambled_complex(ps, seed)
    for k, e in enumerate(expect):
        if k < cx.top_degree:
            assert homology_group(cx, k) == e
            assert homology(cx, k).group == e
            assert full_homology(cx, k) == e


@given(pieces, st.integers(0, 10**6))
def test_projection_and_inclusion_are_chain_maps(ps, seed):
    cx, _ = scrambled_complex(ps, seed)
    red = Reduction(cx)
    rng = random.Random(seed)
    for k in range(1, cx.top_degree + 1):
        v = {i: rng.randint(-3, 3) for i in range(cx.ranks[k])}
        dv = cx.boundary[k].apply(v)
        assert red.project(k - 1, dv) == red.residual[k].apply(red.project(k, v))
        w = {i: rng.randint(-3, 3) for i in range(red.ranks[k])}
        lhs = cx.boundary[k].apply(red.include(k, w))
        rhs = red.include(k - 1, red.residual[k].apply(w))
        assert lhs == rhs
        # pi o iota = id on the residual complex
        assert red.project(k, red.include(k, w)) == {i: x for i, x in w.items() if x}


def test_d_squared_check_trips():
    d1 = SparseIntMatrix.from_dense([[1]])
    d2 = SparseIntMatrix.from_dense([[1]])
    with pytest.raises(ChainComplexError):
        ChainComplex([1, 1, 1], [d1, d2])


# -- bar complexes ---------------------------------------------------------------


def test_bar_ranks_and_indices():
    assert bar_ranks(4, 3) == [1, 3, 9, 27]
    assert bar_tuple_index(4, (1, 1)) == 0
    assert bar_tuple_index(4, (3, 2)) == 2 * 3 + 1


@pytest.mark.parametrize("m", range(2, 6))
def test_cyclic_homology_against_sympy(m):
    cx = bar_complex(gr.cyclic(m), 4)
    for k in range(4):
        assert homology_group(cx, k) == full_homology(cx, k, use_sympy=m <= 3)
    assert homology_group(cx, 1) == Z.cyclic(m)
    assert homology_group(cx, 2) == Z()
    assert homology_group(cx, 3) == Z.cyclic(m)


@pytest.mark.parametrize("text,h2,h3", [
    ("Z(2) x Z(2)", Z(0, (2,)), Z(0, (2, 2, 2))),
    ("S(3)", Z(), Z(0, (6,))),
    ("Q8", Z(), Z(0, (8,))),
    ("D(4)", Z(0, (2,)), Z(0, (2, 2, 4))),
])
def test_known_low_degree_homology(text, h2, h3):
    cx = bar_complex(resolve(text).group, 4)
    assert homology_group(cx, 0) == Z(1)
    assert homology_group(cx, 2) == h2
    assert homology_group(cx, 3) == h3


@pytest.mark.parametrize("text", ["S(3)", "Z(2) x Z(2)", "D(4)"])
def test_reduced_matches_unreduced(text):
    cx = bar_complex(resolve(text).group, 3)
    for k in range(3):
        assert homology_group(cx, k) == full_homology(cx, k)


def test_generators_are_cycles_with_right_orders():
    cx = bar_complex(gr.dihedral(4), 3)
    pres = homology(cx, 2)
    for g, o in zip(pres.generators, pres.orders):
        assert not cx.boundary[2].apply(g)
        assert pres.is_boundary({i: o * v for i, v in g.items()})
        assert pres.is_boundary_full({i: o * v for i, v in g.items()})
        assert not pres.is_boundary(g)
        assert pres.coordinates(g) == tuple(int(h is g) for h in pres.generators)


def test_coordinates_of_random_cycles_agree_with_full_check():
    cx = bar_complex(gr.cyclic(4), 3)
    pres = homology(cx, 1)
    rng = random.Random(1)
    for _ in range(10):
        z = {i: rng.randint(-5, 5) for i in range(cx.ranks[1])}
        c = pres.coordinates(z)
        back = pres.cycle(c)
        diff = {i: z.get(i, 0) - back.get(i, 0) for i in set(z) | set(back)}
        diff = {i: v for i, v in diff.items() if v}
        assert pres.is_boundary_full(diff)


def test_budget():
    with pytest.raises(BudgetExceeded) as exc:
        bar_complex(gr.symmetric(3), 3, max_rank=100)
    assert exc.value.rank == 125 and exc.value.degree == 3


def test_induced_maps():
    d4 = gr.dihedral(4)
    q, pi = gr.quotient(d4, gr.center(d4))
    f = induced_chain_map(pi, 3)
    assert isinstance(f, ChainMap)
    h1 = induced_map_on_homology(f, 1)
    # D4ab -> (Z2 x Z2)ab is an isomorphism; image has full order
    assert h1.source.group == h1.target.group == Z(0, (2, 2))
    det = h1.matrix[0][0] * h1.matrix[1][1] - h1.matrix[0][1] * h1.matrix[1][0]
    assert det % 2
    h2 = induced_map_on_homology(f, 2, certify="full")
    assert h2.source.group == Z(0, (2,))


def test_identity_map_composes():
    g = gr.cyclic(3)
    f = induced_chain_map(gr.GroupHom.identity(g), 3)
    ff = f.compose(f)
    for k in range(4):
        assert mat_mul(ff.maps[k], SparseIntMatrix.identity(ff.maps[k].cols)) == f.maps[k]
