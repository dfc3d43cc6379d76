"""Mapping cones and pushout complexes; multipliers of pairs and triples.

Conventions: Cone(f)_k = A_{k-1} + B_k with the A block first and
d(a, b) = (-da, db - f a).  With this sign the connecting map of the long
exact sequence H_k(B) -> H_k(Cone) -> H_{k-1}(A) is plain projection onto
the A block.  The homotopy pushout of B <- A -> C is modelled by the cone
of x -> (f x, -g x) into B + C.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .abgrp import FgAbelianGroup
from .barhom import (
    DEFAULT_MAX_RANK,
    ChainComplex,
    ChainComplexError,
    ChainMap,
    HomologyMap,
    bar_complex,
    check_budget,
    homology,
    homology_group,
    induced_chain_map,
    induced_map_on_homology,
    map_on_homology,
)
from .cache import cached_value
from .groups import (
    FiniteGroup,
    GroupError,
    GroupHom,
    NormalSubgroup,
    induced_quotient_map,
    product_subgroup,
    quotient,
)
from .intmat import SparseIntMatrix, mat_block_diag, mat_stack, negate
from .sequences import ExactSequence, SeqMap, SeqNode, zero_map, zero_node


class ConeComplex(ChainComplex):
    """Cone of a chain map, remembering how each C_k splits."""

    def __init__(self, f: ChainMap, name: str = "Cone", max_rank: int = DEFAULT_MAX_RANK):
        a, b = f.source, f.target
        top = min(a.top_degree + 1, b.top_degree, f.top_degree + 1)
        self.map = f
        # offset[k] = rank A_{k-1}: B-block of C_k starts there
        self.offset = [0] + [a.ranks[k - 1] for k in range(1, top + 1)]
        ranks = [self.offset[k] + b.ranks[k] for k in range(top + 1)]
        check_budget(name, ranks, max_rank)
        mats = [SparseIntMatrix.zeros(0, ranks[0])]
        for k in range(1, top + 1):
            lo = self.offset[k - 1]
            cols: dict[int, dict[int, int]] = {}
            fa = f.maps[k - 1].column_dicts()
            da = a.boundary[k - 1].column_dicts() if k >= 2 else {}
            for j in range(a.ranks[k - 1]):
                col = {i: -v for i, v in da.get(j, {}).items()}
                for i, v in fa.get(j, {}).items():
                    col[lo + i] = -v
                if col:
                    cols[j] = col
            off = self.offset[k]
            for j, c in b.boundary[k].column_dicts().items():
                cols[off + j] = {lo + i: v for i, v in c.items()}
            mats.append(SparseIntMatrix._trusted(ranks[k - 1], ranks[k], cols))
        super().__init__(ranks, mats, name)

    def include_target(self, k: int, v: dict[int, int]) -> dict[int, int]:
        off = self.offset[k]
        return {off + i: x for i, x in v.items()}

    def project_source(self, k: int, v: dict[int, int]) -> dict[int, int]:
        """Degree-lowering projection Cone_k -> A_{k-1}."""
        off = self.offset[k]
        return {i: x for i, x in v.items() if i < off}


def mapping_cone(f: ChainMap, name: str = "Cone", max_rank: int = DEFAULT_MAX_RANK) -> ConeComplex:
    return ConeComplex(f, name, max_rank)


def direct_sum_complex(b: ChainComplex, c: ChainComplex, name: str | None = None) -> ChainComplex:
    top = min(b.top_degree, c.top_degree)
    ranks = [b.ranks[k] + c.ranks[k] for k in range(top + 1)]
    mats = [SparseIntMatrix.zeros(0, ranks[0])]
    mats += [mat_block_diag(b.boundary[k], c.boundary[k]) for k in range(1, top + 1)]
    return ChainComplex(ranks, mats, name or f"{b.name} + {c.name}")


def pushout_complex(f: ChainMap, g: ChainMap, name: str = "P", max_rank: int = DEFAULT_MAX_RANK) -> ConeComplex:
    """Cone of (f, -g): A -> B + C."""
    if f.source is not g.source and f.source.ranks != g.source.ranks:
        raise ChainComplexError("pushout legs must share their source complex")
    s = direct_sum_complex(f.target, g.target)
    top = min(f.top_degree, g.top_degree, s.top_degree)
    maps = [mat_stack(f.maps[k], negate(g.maps[k])) for k in range(top + 1)]
    return ConeComplex(ChainMap(f.source, s, maps), name, max_rank)


def cone_map(c1: ConeComplex, c2: ConeComplex, alpha: ChainMap, beta: ChainMap) -> ChainMap:
    """(a, b) -> (alpha a, beta b) between Cone(f1) and Cone(f2).

    Requires beta f1 = f2 alpha, which the chain-map check enforces.
    """
    top = min(c1.top_degree, c2.top_degree, alpha.top_degree + 1, beta.top_degree)
    maps = [beta.maps[0]]
    maps += [mat_block_diag(alpha.maps[k - 1], beta.maps[k]) for k in range(1, top + 1)]
    return ChainMap(c1, c2, maps)


# -- long exact sequence maps -------------------------------------------------


def inclusion_map(cone: ConeComplex, k: int) -> HomologyMap:
    return map_on_homology(homology(cone.map.target, k), homology(cone, k),
                           lambda v: cone.include_target(k, v), f"H{k}(B)->H{k}(Cone)")


def connecting_map(cone: ConeComplex, k: int) -> HomologyMap:
    """H_k(Cone) -> H_{k-1}(A) by projecting onto the shifted source block."""
    return map_on_homology(homology(cone, k), homology(cone.map.source, k - 1),
                           lambda v: cone.project_source(k, v), f"H{k}(Cone)->H{k - 1}(A)")


def _node(label: str, pres) -> SeqNode:
    return SeqNode(label, pres.orders)


def long_exact_sequence(cone: ConeComplex, top: int, labels: dict[str, str] | None = None,
                        name: str = "LES") -> ExactSequence:
    """H_top(A) -> H_top(B) -> H_top(Cone) -> H_{top-1}(A) -> ... -> H_0(Cone) -> 0.

    ``top`` is capped so that every group shown is computable; the sequence
    starts at H_top(A) only when H_top(A) is available, otherwise at H_top(B).
    """
    f = cone.map
    a, b = f.source, f.target
    labels = labels or {}
    la, lb, lc = labels.get("A", "A"), labels.get("B", "B"), labels.get("C", "Cone")
    top = min(top, cone.top_degree - 1, b.top_degree - 1)
    nodes: list[SeqNode] = []
    maps: list[SeqMap] = []

    def add(label, pres, hmap=None):
        if hmap is not None:
            maps.append(SeqMap(hmap.name, hmap.matrix))
        nodes.append(_node(label, pres))

    head = top + 1 <= a.top_degree and top <= f.top_degree
    if head:
        add(f"H{top}({la})", homology(a, top))
        add(f"H{top}({lb})", homology(b, top), induced_map_on_homology(f, top, name=f"H{top}(f)"))
    else:
        add(f"H{top}({lb})", homology(b, top))
    for k in range(top, -1, -1):
        add(f"H{k}({lc})", homology(cone, k), inclusion_map(cone, k))
        if k == 0:
            break
        add(f"H{k - 1}({la})", homology(a, k - 1), connecting_map(cone, k))
        add(f"H{k - 1}({lb})", homology(b, k - 1), induced_map_on_homology(f, k - 1, name=f"H{k - 1}(f)"))
    z = zero_node()
    maps.append(zero_map(nodes[-1], z))
    nodes.append(z)
    seq = ExactSequence(name, nodes, maps)
    if not head:
        seq.note = f"head H{top}({la}) omitted: source complex stops at degree {a.top_degree}"
    seq.check()
    return seq


# -- pairs --------------------------------------------------------------------


@dataclass
class PairComplex:
    group: FiniteGroup
    normal: NormalSubgroup
    quotient: FiniteGroup
    projection: GroupHom
    chain_map: ChainMap
    cone: ConeComplex


def _as_normal(g: FiniteGroup, n) -> NormalSubgroup:
    if isinstance(n, NormalSubgroup):
        if n.parent != g:
            raise GroupError("subgroup belongs to a different group")
        return n
    return NormalSubgroup(g, tuple(n))


def pair_complex(g: FiniteGroup, n, source_top: int = 3, max_rank: int = DEFAULT_MAX_RANK) -> PairComplex:
    """Cone of bar(G) -> bar(G/N); degree 4 on the quotient side."""
    n = _as_normal(g, n)
    q, pi = quotient(g, n)
    q.name = f"{g.name}/N"
    f = induced_chain_map(pi, source_top, max_rank, target_top=4)
    cone = mapping_cone(f, f"K({g.name},N)", max_rank)
    return PairComplex(g, n, q, pi, f, cone)


def pair_multiplier(g: FiniteGroup, n, max_rank: int = DEFAULT_MAX_RANK) -> FgAbelianGroup:
    n = _as_normal(g, n)

    def compute():
        return str(homology_group(pair_complex(g, n, 3, max_rank).cone, 3))

    return FgAbelianGroup.parse(cached_value("pair", (g.key, n.members), compute))


def schur_multiplier(g: FiniteGroup, max_rank: int = DEFAULT_MAX_RANK) -> FgAbelianGroup:
    return group_homology(g, 2, max_rank)


def group_homology(g: FiniteGroup, k: int, max_rank: int = DEFAULT_MAX_RANK) -> FgAbelianGroup:
    def compute():
        return str(homology_group(bar_complex(g, k + 1, max_rank), k))

    return FgAbelianGroup.parse(cached_value("homology", (g.key, k), compute))


# -- triples ------------------------------------------------------------------


@dataclass
class TripleComplex:
    group: FiniteGroup
    m: NormalSubgroup
    n: NormalSubgroup
    f: ChainMap  # bar(G) -> bar(G/N)
    g: ChainMap  # bar(G) -> bar(G/M)
    pushout: ConeComplex


def triple_pushout_complex(g: FiniteGroup, m, n, source_top: int = 3,
                           max_rank: int = DEFAULT_MAX_RANK) -> TripleComplex:
    m, n = _as_normal(g, m), _as_normal(g, n)
    qn, pn = quotient(g, n)
    qm, pm = quotient(g, m)
    qn.name, qm.name = f"{g.name}/N", f"{g.name}/M"
    f = induced_chain_map(pn, source_top, max_rank, target_top=4)
    h = induced_chain_map(pm, source_top, max_rank, target_top=4)
    # share the source complex object (bar complexes are memoised)
    po = pushout_complex(f, h, f"X({g.name},M,N)", max_rank)
    return TripleComplex(g, m, n, f, h, po)


def triple_multiplier_pushout(g: FiniteGroup, m, n, max_rank: int = DEFAULT_MAX_RANK) -> FgAbelianGroup:
    m, n = _as_normal(g, m), _as_normal(g, n)

    def compute():
        return str(homology_group(triple_pushout_complex(g, m, n, 3, max_rank).pushout, 3))

    return FgAbelianGroup.parse(cached_value("triple-pushout", (g.key, m.members, n.members), compute))


@dataclass
class EllisComplex:
    inner_source: ConeComplex  # Cone(bar(G) -> bar(G/N))
    inner_target: ConeComplex  # Cone(bar(G/M) -> bar(G/MN))
    cone_map: ChainMap
    cone: ConeComplex


def ellis_complex(g: FiniteGroup, m, n, max_rank: int = DEFAULT_MAX_RANK) -> EllisComplex:
    """Cone of Cone(G -> G/N) -> Cone(G/M -> G/MN), built to degree 5."""
    m, n = _as_normal(g, m), _as_normal(g, n)
    mn = NormalSubgroup(g, product_subgroup(g, m.members, n.members))
    qn, pn = quotient(g, n)
    qm, pm = quotient(g, m)
    qmn, pmn = quotient(g, mn)
    qn.name, qm.name, qmn.name = f"{g.name}/N", f"{g.name}/M", f"{g.name}/MN"
    rn = induced_quotient_map(g, n, mn)  # G/N -> G/MN
    rm = induced_quotient_map(g, m, mn)  # G/M -> G/MN
    # the square of group maps must commute on the nose
    for a in g.elements:
        if rn(pn(a)) != rm(pm(a)):
            raise GroupError("quotient square does not commute")
    f1 = induced_chain_map(pn, 3, max_rank, target_top=4)
    f2 = induced_chain_map(rm, 4, max_rank, target_top=5)
    c1 = mapping_cone(f1, f"K({g.name},N)", max_rank)
    c2 = mapping_cone(f2, f"K({g.name}/M,MN/M)", max_rank)
    alpha = induced_chain_map(pm, 3, max_rank, target_top=4)
    beta = induced_chain_map(rn, 4, max_rank, target_top=5)
    fmap = cone_map(c1, c2, _restrict(alpha, f1.source, f2.source), _restrict(beta, f1.target, f2.target))
    outer = mapping_cone(fmap, f"E({g.name},M,N)", max_rank)
    return EllisComplex(c1, c2, fmap, outer)


def _restrict(f: ChainMap, src: ChainComplex, tgt: ChainComplex) -> ChainMap:
    """Reinterpret f between (possibly truncated) copies of its complexes."""
    top = min(f.top_degree, src.top_degree, tgt.top_degree)
    if f.source is src and f.target is tgt and top == f.top_degree:
        return f
    return ChainMap(src, tgt, f.maps[:top + 1], check=False)


def ellis_triple_multiplier(g: FiniteGroup, m, n, max_rank: int = DEFAULT_MAX_RANK) -> FgAbelianGroup:
    m, n = _as_normal(g, m), _as_normal(g, n)

    def compute():
        return str(homology_group(ellis_complex(g, m, n, max_rank).cone, 4))

    return FgAbelianGroup.parse(cached_value("triple-ellis", (g.key, m.members, n.members), compute))


def mayer_vietoris(t: TripleComplex, top: int = 3) -> ExactSequence:
    """H_top(G) -> H_top(G/N)+H_top(G/M) -> H_top(X) -> ... -> H_0(X) -> 0."""
    labels = {"A": t.group.name, "B": "G/N+G/M", "C": "X"}
    return long_exact_sequence(t.pushout, top, labels, "Mayer-Vietoris")


def sum_matches_parts(t: TripleComplex, k: int) -> bool:
    """H_k of the direct-sum complex equals H_k(G/N) + H_k(G/M)."""
    s = t.pushout.map.target
    return homology(s, k).group == homology(t.f.target, k).group + homology(t.g.target, k).group


def orders_of(groups: Sequence[FgAbelianGroup]) -> list[str]:
    return [str(x) for x in groups]
