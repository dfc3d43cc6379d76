"""Exactness checks for sequences of maps between f.g. abelian groups.

Groups are given in coordinates: a node is a tuple of cyclic orders
(0 meaning Z, as in ``HomologyPresentation.orders``) and a map is an integer
matrix acting on those coordinates.  At a node B with incoming f and outgoing
g we check

* the composite g f vanishes modulo the relations of the far node, and
* ker g / im f is trivial, computed as a cokernel of lattice coordinates.

The orders (or ranks) of im f and ker g are recorded alongside.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .abgrp import FgAbelianGroup, from_presentation
from .intmat import SparseIntMatrix, kernel_basis, mat_hstack, snf, solve


@dataclass
class SeqNode:
    label: str
    orders: tuple[int, ...]

    @property
    def group(self) -> FgAbelianGroup:
        return FgAbelianGroup.from_cyclic(self.orders)


@dataclass
class SeqMap:
    label: str
    matrix: list[list[int]]  # rows index the target coordinates


@dataclass
class NodeCheck:
    node: str
    composite_zero: bool
    image: FgAbelianGroup
    kernel: FgAbelianGroup
    defect: FgAbelianGroup  # ker / im
    orders_balance: bool
    exact: bool

    def to_json(self) -> dict:
        return {
            "node": self.node,
            "composite_zero": self.composite_zero,
            "image": str(self.image),
            "kernel": str(self.kernel),
            "defect": str(self.defect),
            "orders_balance": self.orders_balance,
            "exact": self.exact,
        }


@dataclass
class ExactSequence:
    """nodes[0] -> nodes[1] -> ... with maps[i]: nodes[i] -> nodes[i+1]."""

    name: str
    nodes: list[SeqNode]
    maps: list[SeqMap]
    checks: list[NodeCheck] = field(default_factory=list)
    note: str = ""

    def __post_init__(self):
        if len(self.maps) != len(self.nodes) - 1:
            raise ValueError("need one map between consecutive nodes")
        for i, m in enumerate(self.maps):
            rows, cols = len(self.nodes[i + 1].orders), len(self.nodes[i].orders)
            if len(m.matrix) != rows or any(len(r) != cols for r in m.matrix):
                raise ValueError(f"map {m.label} has the wrong shape")

    def check(self) -> list[NodeCheck]:
        """Exactness at every interior node."""
        self.checks = [
            check_exact_at(self.nodes[i - 1], self.nodes[i], self.nodes[i + 1],
                           self.maps[i - 1].matrix, self.maps[i].matrix)
            for i in range(1, len(self.nodes) - 1)
        ]
        return self.checks

    @property
    def exact(self) -> bool:
        if not self.checks:
            self.check()
        return all(c.exact for c in self.checks)

    def to_json(self) -> dict:
        if not self.checks:
            self.check()
        out = {
            "name": self.name,
            "nodes": [{"label": n.label, "group": str(n.group)} for n in self.nodes],
            "maps": [m.label for m in self.maps],
            "checks": [c.to_json() for c in self.checks],
            "exact": self.exact,
        }
        if self.note:
            out["note"] = self.note
        return out


def zero_node(label: str = "0") -> SeqNode:
    return SeqNode(label, ())


def zero_map(src: SeqNode, tgt: SeqNode, label: str = "0") -> SeqMap:
    return SeqMap(label, [[0] * len(src.orders) for _ in tgt.orders])


def _relations(orders: Sequence[int]) -> SparseIntMatrix:
    cols = [{i: d} for i, d in enumerate(orders) if d]
    return SparseIntMatrix.from_columns(len(orders), cols)


def _matrix(rows: Sequence[Sequence[int]], n_rows: int, n_cols: int) -> SparseIntMatrix:
    return SparseIntMatrix.from_entries(
        n_rows, n_cols, {(i, j): v for i, r in enumerate(rows) for j, v in enumerate(r) if v})


def lattice_basis(gens: SparseIntMatrix) -> SparseIntMatrix:
    """Columns forming a Z-basis of the column span of ``gens``."""
    res = snf(gens)
    cols = []
    for i in range(res.rank):
        d = res.diag[i]
        cols.append({r: d * v for r, v in res.left_inv.column(i).items()})
    return SparseIntMatrix.from_columns(gens.rows, cols)


def _coords(basis: SparseIntMatrix, vectors: SparseIntMatrix) -> SparseIntMatrix:
    res = snf(basis)
    cols = []
    for j in range(vectors.cols):
        x = solve(basis, vectors.column(j), res)
        if x is None:
            raise ArithmeticError("vector outside the lattice")
        cols.append(x)
    return SparseIntMatrix.from_columns(basis.cols, cols)


def subquotient(lattice_gens: SparseIntMatrix, relations: SparseIntMatrix) -> FgAbelianGroup:
    """span(lattice_gens) / span(relations), relations contained in the span."""
    basis = lattice_basis(lattice_gens)
    return from_presentation(_coords(basis, relations))


def check_exact_at(a: SeqNode, b: SeqNode, c: SeqNode, f: Sequence[Sequence[int]],
                   g: Sequence[Sequence[int]]) -> NodeCheck:
    na, nb, nc = len(a.orders), len(b.orders), len(c.orders)
    F = _matrix(f, nb, na)
    G = _matrix(g, nc, nb)
    RB, RC = _relations(b.orders), _relations(c.orders)
    gf = G @ F
    composite_zero = all(
        (v % c.orders[i] == 0) if c.orders[i] else v == 0 for (i, _), v in gf.entries.items())
    # preimage lattice of ker g in Z^nb: first nb rows of ker [G | RC]
    kb = kernel_basis(mat_hstack(G, RC))
    ktil = kb.select_rows(range(nb))
    ktil = mat_hstack(ktil, RB)
    kernel = subquotient(ktil, RB)
    image = subquotient(mat_hstack(F, RB), RB)
    if composite_zero:
        defect = subquotient(ktil, mat_hstack(F, RB))
    else:
        defect = kernel
    balance = (image.free_rank == kernel.free_rank and
               (image.order == kernel.order if kernel.is_finite else True))
    exact = composite_zero and defect.is_trivial
    return NodeCheck(b.label, composite_zero, image, kernel, defect, balance, exact)
