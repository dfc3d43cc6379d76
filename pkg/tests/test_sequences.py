import itertools
from math import gcd

from hypothesis import given, strategies as st

from schurcone.abgrp import FgAbelianGroup
from schurcone.intmat import SparseIntMatrix
from schurcone.sequences import (ExactSequence, SeqMap, SeqNode, check_exact_at, lattice_basis, subquotient,
                                 zero_map, zero_node)

Z = FgAbelianGroup


def short(a, b, c, f, g):
    nodes = [zero_node(), SeqNode("A", a), SeqNode("B", b), SeqNode("C", c), zero_node()]
    maps = [zero_map(nodes[0], nodes[1]), SeqMap("f", f), SeqMap("g", g), zero_map(nodes[3], nodes[4])]
    return ExactSequence("s", nodes, maps)


def test_z2_z4_z2():
    # 0 -> Z/2 --x2--> Z/4 --> Z/2 -> 0
    assert short((2,), (4,), (2,), [[2]], [[1]]).exact


def test_split_sequence():
    assert short((2,), (2, 2), (2,), [[1], [0]], [[0, 1]]).exact


def test_not_exact_in_the_middle():
    seq = short((2,), (2, 2), (2,), [[1], [0]], [[1, 0]])
    seq.check()
    assert not seq.checks[1].composite_zero
    assert not seq.exact


def test_integers_times_n():
    # 0 -> Z --n--> Z -> Z/n -> 0
    seq = short((0,), (0,), (3,), [[3]], [[1]])
    assert seq.exact
    mid = seq.checks[1]
    assert mid.image == mid.kernel == Z(1)


def test_defect_is_reported():
    seq = short((2,), (4,), (4,), [[2]], [[0]])
    seq.check()
    assert seq.checks[1].defect == Z(0, (2,))
    assert not seq.checks[1].orders_balance


def test_json_shape():
    d = short((2,), (4,), (2,), [[2]], [[1]]).to_json()
    assert list(d) == ["name", "nodes", "maps", "checks", "exact"]
    assert d["nodes"][2]["group"] == "Z/4"


def brute_exact(na, nb, nc, f, g):
    # enumerate all elements of finite cyclic sums
    A = list(itertools.product(*[range(n) for n in na]))
    B = list(itertools.product(*[range(n) for n in nb]))
    def app(m, v, mod):
        return tuple(sum(m[i][j] * v[j] for j in range(len(v))) % mod[i] for i in range(len(mod)))
    image = {app(f, a, nb) for a in A}
    kernel = {b for b in B if all(x == 0 for x in app(g, b, nc))}
    return image == kernel


cyc = st.lists(st.sampled_from([2, 3, 4, 6]), min_size=1, max_size=2)


@given(cyc, cyc, cyc, st.data())
def test_against_enumeration(na, nb, nc, data):
    # only draw well-defined homomorphisms: entry (i, j) must send order na[j] into Z/nb[i]
    def hom(src, tgt):
        rows = []
        for t in tgt:
            row = []
            for s in src:
                step = t // gcd(s, t)
                row.append(step * data.draw(st.integers(0, t)))
            rows.append(row)
        return rows
    f, g = hom(na, nb), hom(nb, nc)
    c = check_exact_at(SeqNode("A", tuple(na)), SeqNode("B", tuple(nb)), SeqNode("C", tuple(nc)), f, g)
    assert c.exact == brute_exact(na, nb, nc, f, g)


def test_lattice_helpers():
    gens = SparseIntMatrix.from_columns(2, [[2, 0], [4, 0], [0, 3]])
    basis = lattice_basis(gens)
    assert basis.cols == 2
    rel = SparseIntMatrix.from_columns(2, [[4, 0], [0, 3]])
    assert subquotient(gens, rel) == Z(0, (2,))
