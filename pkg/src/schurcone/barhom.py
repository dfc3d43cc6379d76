"""Chain complexes, the normalized bar complex, and homology with generators.

Homology is computed in two stages.  First the complex is shrunk by
eliminating unit entries of the boundary matrices; each elimination splits
off a contractible summand ``a -> da`` and is recorded so that vectors can
be moved between the original and the reduced complex (a chain homotopy
equivalence).  Then the small residual complex is handled with Smith normal
form.  Cycle representatives therefore live in the original bar basis.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Sequence

from .abgrp import FgAbelianGroup
from .groups import FiniteGroup, GroupHom
from .intmat import SparseIntMatrix, SnfResult, mat_mul, snf, solve

DEFAULT_MAX_RANK = 200_000

# counts every d^2 = 0 verification performed (all must pass or construction raises)
BOUNDARY_CHECKS = {"complexes": 0, "maps": 0}


class ChainComplexError(AssertionError):
    """d o d != 0, a non-commuting chain map square, or mismatched shapes."""


class BudgetExceeded(RuntimeError):
    def __init__(self, what: str, degree: int, rank: int, limit: int):
        super().__init__(f"{what}: degree {degree} has rank {rank}, over the budget of {limit}")
        self.what, self.degree, self.rank, self.limit = what, degree, rank, limit


class CoordinateError(RuntimeError):
    """A vector that should be a cycle could not be expressed in homology."""


class ChainComplex:
    """Free chain complex C_0 <- C_1 <- ... <- C_top.

    ``boundary[k]`` is the matrix of d_k: C_k -> C_{k-1} for ``1 <= k <= top``;
    ``boundary[0]`` is the zero map out of C_0.
    """

    def __init__(self, ranks: Sequence[int], boundary: Sequence[SparseIntMatrix],
                 name: str = "C", labels: Callable[[int, int], object] | None = None, check: bool = True):
        self.ranks = tuple(ranks)
        self.top_degree = len(self.ranks) - 1
        bd = list(boundary)
        if len(bd) == self.top_degree:
            bd = [SparseIntMatrix.zeros(0, self.ranks[0])] + bd
        if len(bd) != self.top_degree + 1:
            raise ChainComplexError("need one boundary matrix per degree")
        self.boundary = tuple(bd)
        self.name = name
        self._labels = labels
        for k in range(1, self.top_degree + 1):
            if self.boundary[k].shape != (self.ranks[k - 1], self.ranks[k]):
                raise ChainComplexError(f"{name}: d_{k} has shape {self.boundary[k].shape}")
        if check:
            self.check()
        self._presentations: dict[int, HomologyPresentation] = {}
        self._groups: dict[int, FgAbelianGroup] = {}

    def check(self):
        for k in range(2, self.top_degree + 1):
            if not mat_mul(self.boundary[k - 1], self.boundary[k]).is_zero():
                raise ChainComplexError(f"{self.name}: d_{k - 1} d_{k} != 0")
        BOUNDARY_CHECKS["complexes"] += 1

    def basis_label(self, k: int, i: int):
        return self._labels(k, i) if self._labels else (k, i)

    def d(self, k: int) -> SparseIntMatrix:
        return self.boundary[k]

    def __repr__(self):
        return f"ChainComplex({self.name}, ranks={self.ranks})"

    def truncate(self, top: int) -> "ChainComplex":
        if top > self.top_degree:
            raise ValueError("cannot extend a complex by truncation")
        return ChainComplex(self.ranks[:top + 1], self.boundary[:top + 1], self.name, self._labels, check=False)

    @cached_property
    def reduction(self) -> "Reduction":
        return Reduction(self, track=True)

    @cached_property
    def light_reduction(self) -> "Reduction":
        if "reduction" in self.__dict__:
            return self.reduction
        return Reduction(self, track=False)


class ChainMap:
    """Degreewise matrices f_k: S_k -> T_k with d f = f d."""

    def __init__(self, source: ChainComplex, target: ChainComplex, maps: Sequence[SparseIntMatrix],
                 check: bool = True):
        self.source, self.target = source, target
        self.maps = tuple(maps)
        self.top_degree = len(self.maps) - 1
        if self.top_degree > min(source.top_degree, target.top_degree):
            raise ChainComplexError("chain map defined beyond the complexes")
        for k, m in enumerate(self.maps):
            if m.shape != (target.ranks[k], source.ranks[k]):
                raise ChainComplexError(f"f_{k} has shape {m.shape}")
        if check:
            for k in range(1, self.top_degree + 1):
                lhs = mat_mul(target.boundary[k], self.maps[k])
                rhs = mat_mul(self.maps[k - 1], source.boundary[k])
                if lhs != rhs:
                    raise ChainComplexError(f"chain map square fails in degree {k}")
            BOUNDARY_CHECKS["maps"] += 1

    def __getitem__(self, k: int) -> SparseIntMatrix:
        return self.maps[k]

    def compose(self, first: "ChainMap") -> "ChainMap":
        """self o first."""
        top = min(self.top_degree, first.top_degree)
        return ChainMap(first.source, self.target, [mat_mul(self.maps[k], first.maps[k]) for k in range(top + 1)])


# ---------------------------------------------------------------------------
# bar complex
# ---------------------------------------------------------------------------

_BAR_CACHE: dict[tuple[str, int], ChainComplex] = {}


def bar_ranks(order: int, n_max: int) -> list[int]:
    return [(order - 1) ** k for k in range(n_max + 1)]


def check_budget(what: str, ranks: Sequence[int], max_rank: int):
    for k, r in enumerate(ranks):
        if r > max_rank:
            raise BudgetExceeded(what, k, r, max_rank)


def bar_complex(g: FiniteGroup, n_max: int, max_rank: int = DEFAULT_MAX_RANK) -> ChainComplex:
    """Normalized bar complex Z (x)_G B(G), degrees 0..n_max.

    C_k has basis the k-tuples of non-identity elements in lexicographic
    order, tuple (g1..gk) at index sum (g_i - 1) (n-1)^(k-i).
    """
    ranks = bar_ranks(g.order, n_max)
    check_budget(f"bar complex of {g.name}", ranks, max_rank)
    key = (g.key, n_max)
    hit = _BAR_CACHE.get(key)
    if hit is not None:
        return hit
    for (gk, top), cx in _BAR_CACHE.items():
        if gk == g.key and top > n_max:
            out = cx.truncate(n_max)
            _BAR_CACHE[key] = out
            return out
    from . import cache as _cache

    stored = _cache.load_bar(g, n_max)
    if stored is not None:
        cx = ChainComplex(ranks, stored, f"B({g.name})", _bar_labeller(g))
        _BAR_CACHE[key] = cx
        return cx
    b = g.order - 1
    t = g.table
    mats = [SparseIntMatrix.zeros(0, 1)]
    for k in range(1, n_max + 1):
        if k == 1 or b == 0:
            mats.append(SparseIntMatrix.zeros(ranks[k - 1], ranks[k]))
            continue
        cols: dict[int, dict[int, int]] = {}
        pw = [b ** e for e in range(k + 1)]
        sign_k = -1 if k % 2 else 1
        for j, tup in enumerate(itertools.product(range(1, b + 1), repeat=k)):
            col: dict[int, int] = {}
            f = j % pw[k - 1]
            col[f] = col.get(f, 0) + 1
            f = j // b
            col[f] = col.get(f, 0) + sign_k
            for i in range(1, k):
                prod = t[tup[i - 1]][tup[i]]
                if prod == 0:
                    continue
                # faces with g_i g_{i+1} merged; prefix t[:i-1], suffix t[i+1:]
                pre = j // pw[k - i + 1]
                suf = j % pw[k - i - 1]
                f = (pre * b + prod - 1) * pw[k - i - 1] + suf
                col[f] = col.get(f, 0) + (-1 if i % 2 else 1)
            col = {r: v for r, v in col.items() if v}
            if col:
                cols[j] = col
        mats.append(SparseIntMatrix._trusted(ranks[k - 1], ranks[k], cols))
    cx = ChainComplex(ranks, mats, f"B({g.name})", _bar_labeller(g))
    _cache.store_bar(g, n_max, cx)
    _BAR_CACHE[key] = cx
    return cx


def _bar_labeller(g: FiniteGroup):
    b = g.order - 1

    def label(k: int, i: int):
        digits = []
        for _ in range(k):
            i, r = divmod(i, b)
            digits.append(r + 1)
        return tuple(g.labels[x] for x in reversed(digits))

    return label


def bar_tuple_index(order: int, tup: Sequence[int]) -> int:
    b, j = order - 1, 0
    for x in tup:
        j = j * b + (x - 1)
    return j


def induced_chain_map(phi: GroupHom, n_max: int, max_rank: int = DEFAULT_MAX_RANK,
                      target_top: int | None = None) -> ChainMap:
    """[g1|...|gk] -> [phi g1|...|phi gk], zero if some phi g_i = 1.

    The map is defined in degrees 0..n_max; the target complex may be built
    further (``target_top``), as mapping cones need one extra target degree.
    """
    src = bar_complex(phi.source, n_max, max_rank)
    tgt = bar_complex(phi.target, max(n_max, target_top or 0), max_rank)
    bs, bt = phi.source.order - 1, phi.target.order - 1
    im = phi.images
    maps = [SparseIntMatrix.identity(1)]
    for k in range(1, n_max + 1):
        cols = {}
        for j, tup in enumerate(itertools.product(range(1, bs + 1), repeat=k)):
            idx = 0
            for x in tup:
                y = im[x]
                if y == 0:
                    break
                idx = idx * bt + (y - 1)
            else:
                cols[j] = {idx: 1}
        maps.append(SparseIntMatrix._trusted(tgt.ranks[k], src.ranks[k], cols))
    return ChainMap(src, tgt, maps)


# ---------------------------------------------------------------------------
# reduction by unit eliminations
# ---------------------------------------------------------------------------


class Reduction:
    """Residual complex after eliminating all unit entries, plus the maps.

    ``project(k, v)`` applies the chain projection C_k -> R_k and
    ``include(k, w)`` the chain inclusion R_k -> C_k; both act on sparse
    vectors ``{index: coeff}`` in the original basis (residual vectors use
    the surviving original indices as keys).
    """

    def __init__(self, cx: ChainComplex, track: bool = True):
        self.complex = cx
        self.track = track
        top = cx.top_degree
        self.alive = [set(range(r)) for r in cx.ranks]
        self.cols: list[dict[int, dict[int, int]]] = [{}]
        self.rows: list[dict[int, set[int]]] = [{}]
        for k in range(1, top + 1):
            cols = {j: dict(c) for j, c in cx.boundary[k].column_dicts().items()}
            rows: dict[int, set[int]] = {}
            for j, c in cols.items():
                for i in c:
                    rows.setdefault(i, set()).add(j)
            self.cols.append(cols)
            self.rows.append(rows)
        # pi_records[k]: (b, eps, da without b) substitutions inside C_k
        self.pi_records: list[list] = [[] for _ in range(top + 1)]
        # iota_records[k]: (a, b, eps, row b of d_k without a)
        self.iota_records: list[list] = [[] for _ in range(top + 1)]
        self.eliminated = 0
        for k in range(1, top + 1):
            self._reduce_degree(k)
        self.basis = [sorted(a) for a in self.alive]
        self.position = [{x: i for i, x in enumerate(b)} for b in self.basis]
        self.residual: list[SparseIntMatrix] = [SparseIntMatrix.zeros(0, len(self.basis[0]))]
        for k in range(1, top + 1):
            pr = self.position[k - 1]
            out = {}
            for j, c in self.cols[k].items():
                out[self.position[k][j]] = {pr[i]: v for i, v in c.items()}
            self.residual.append(SparseIntMatrix._trusted(len(self.basis[k - 1]), len(self.basis[k]), out))
        # free the working copies
        del self.cols, self.rows
        self._snf: dict[tuple[int, bool], SnfResult] = {}

    @property
    def ranks(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.basis)

    def _reduce_degree(self, k: int):
        cols, rows = self.cols[k], self.rows[k]
        heap = [(len(c), j) for j, c in cols.items()]
        heapq.heapify(heap)
        while heap:
            n, a = heapq.heappop(heap)
            col = cols.get(a)
            if col is None:
                continue
            if len(col) != n:
                heapq.heappush(heap, (len(col), a))
                continue
            best = None
            for b, v in col.items():
                if v == 1 or v == -1:
                    cost = len(rows[b])
                    if best is None or cost < best[0]:
                        best = (cost, b, v)
                        if cost == 1:
                            break
            if best is None:
                continue
            _, b, eps = best
            for x in self._eliminate(k, a, b, eps):
                c = cols.get(x)
                if c is not None:
                    heapq.heappush(heap, (len(c), x))

    def _eliminate(self, k: int, a: int, b: int, eps: int) -> list[int]:
        cols, rows = self.cols[k], self.rows[k]
        col_a = cols.pop(a)
        others = [(r, v) for r, v in col_a.items() if r != b]
        row_b = rows.pop(b)
        row_b.discard(a)
        touched = []
        if self.track:
            rb = {x: cols[x][b] for x in row_b}
            self.iota_records[k].append((a, b, eps, rb))
            self.pi_records[k - 1].append((b, eps, dict(others)))
        for x in row_b:
            colx = cols[x]
            fac = eps * colx.pop(b)
            for r, v in others:
                nv = colx.get(r, 0) - fac * v
                if nv:
                    if r not in colx:
                        rows[r].add(x)
                    colx[r] = nv
                elif r in colx:
                    del colx[r]
                    rows[r].discard(x)
            if colx:
                touched.append(x)
            else:
                del cols[x]
        for r, _ in others:
            rows[r].discard(a)
        # drop row a of d_{k+1}
        if k + 1 < len(self.cols):
            ucols, urows = self.cols[k + 1], self.rows[k + 1]
            for x in urows.pop(a, ()):
                c = ucols[x]
                del c[a]
                if not c:
                    del ucols[x]
        # drop column b of d_{k-1}
        if k - 1 >= 1:
            lcols, lrows = self.cols[k - 1], self.rows[k - 1]
            for r in lcols.pop(b, {}):
                s = lrows[r]
                s.discard(b)
                if not s:
                    del lrows[r]
        self.alive[k].discard(a)
        self.alive[k - 1].discard(b)
        self.eliminated += 1
        return touched

    # -- moving vectors -----------------------------------------------------
    def project(self, k: int, v: dict[int, int]) -> dict[int, int]:
        """Image in the residual complex, keyed by residual position."""
        if not self.track:
            raise RuntimeError("reduction was built without tracking")
        w = {i: x for i, x in v.items() if x}
        for b, eps, da in self.pi_records[k]:
            x = w.pop(b, 0)
            if x:
                s = eps * x
                for r, c in da.items():
                    nv = w.get(r, 0) - s * c
                    if nv:
                        w[r] = nv
                    else:
                        w.pop(r, None)
        pos = self.position[k]
        return {pos[i]: x for i, x in w.items() if i in pos}

    def include(self, k: int, w: dict[int, int]) -> dict[int, int]:
        """Residual vector (keyed by residual position) back in C_k."""
        if not self.track:
            raise RuntimeError("reduction was built without tracking")
        basis = self.basis[k]
        v = {basis[i]: x for i, x in w.items() if x}
        for a, b, eps, rb in reversed(self.iota_records[k]):
            if len(v) < len(rb):
                s = sum(x * rb[i] for i, x in v.items() if i in rb)
            else:
                s = sum(c * v[x] for x, c in rb.items() if x in v)
            if s:
                v[a] = -eps * s
        return v

    def residual_snf(self, k: int, transforms: bool) -> SnfResult:
        key = (k, transforms)
        res = self._snf.get(key)
        if res is None and not transforms:
            res = self._snf.get((k, True))
        if res is None:
            res = snf(self.residual[k], transforms=transforms)
            self._snf[key] = res
        return res


# ---------------------------------------------------------------------------
# homology
# ---------------------------------------------------------------------------


@dataclass
class HomologyPresentation:
    """H_k with cycle generators (torsion generators first, then free ones)."""

    complex: ChainComplex
    degree: int
    group: FgAbelianGroup
    generators: list[dict[int, int]]
    orders: tuple[int, ...]
    _red: Reduction = field(repr=False)
    _vinv: SparseIntMatrix = field(repr=False)
    _rank: int = field(repr=False)
    _ub: SparseIntMatrix = field(repr=False)
    _rows: list[int] = field(repr=False)
    _res_gens: list[dict[int, int]] = field(repr=False)

    def coordinates(self, z: dict[int, int]) -> tuple[int, ...]:
        """Coordinates of the class of the cycle z (torsion entries reduced)."""
        rz = self._red.project(self.degree, z)
        return self._coords_residual(rz)

    def _coords_residual(self, rz: dict[int, int]) -> tuple[int, ...]:
        y = self._vinv.apply(rz)
        r = self._rank
        if any(i < r for i in y):
            raise CoordinateError(f"vector is not a cycle in degree {self.degree} of {self.complex.name}")
        c = self._ub.apply({i - r: v for i, v in y.items()})
        out = []
        for row, d in zip(self._rows, self.orders):
            x = c.get(row, 0)
            out.append(x % d if d else x)
        return tuple(out)

    def cycle(self, coords: Sequence[int]) -> dict[int, int]:
        out: dict[int, int] = {}
        for c, g in zip(coords, self.generators):
            if c:
                for i, v in g.items():
                    out[i] = out.get(i, 0) + c * v
        return {i: v for i, v in out.items() if v}

    def is_boundary(self, z: dict[int, int]) -> bool:
        """Membership of z in im d_{k+1}, decided on the residual complex."""
        rz = self._red.project(self.degree, z)
        k = self.degree
        d = self._red.residual[k + 1]
        return solve(d, rz, self._red.residual_snf(k + 1, True)) is not None

    def is_boundary_full(self, z: dict[int, int]) -> bool:
        """Same question answered with the unreduced boundary matrix (slow)."""
        d = self.complex.boundary[self.degree + 1]
        return solve(d, z) is not None

    def residual_difference(self, z: dict[int, int], coords: Sequence[int]) -> dict[int, int]:
        rz = self._red.project(self.degree, z)
        for c, g in zip(coords, self._res_gens):
            for i, v in g.items():
                nv = rz.get(i, 0) - c * v
                if nv:
                    rz[i] = nv
                else:
                    rz.pop(i, None)
        return rz


def _check_degree(cx: ChainComplex, k: int):
    if k < 0 or k + 1 > cx.top_degree:
        raise ValueError(f"H_{k} of {cx.name} needs degree {k + 1}, complex stops at {cx.top_degree}")


def homology_group(cx: ChainComplex, k: int) -> FgAbelianGroup:
    """H_k as an abstract group (no generators; cheapest path)."""
    _check_degree(cx, k)
    hit = cx._groups.get(k)
    if hit is not None:
        return hit
    if k in cx._presentations:
        return cx._presentations[k].group
    red = cx.light_reduction
    n = len(red.basis[k])
    r_out = red.residual_snf(k, False).rank if k >= 1 else 0
    res_in = red.residual_snf(k + 1, False)
    g = FgAbelianGroup(n - r_out - res_in.rank, tuple(d for d in res_in.invariant_factors if d > 1))
    cx._groups[k] = g
    return g


def homology(cx: ChainComplex, k: int) -> HomologyPresentation:
    _check_degree(cx, k)
    hit = cx._presentations.get(k)
    if hit is not None:
        return hit
    red = cx.reduction
    n = len(red.basis[k])
    dk = red.residual[k]
    res_k = red.residual_snf(k, True)
    r = res_k.rank
    vinv = res_k.right_inv
    kern = res_k.right.select_columns(range(r, n))
    b = mat_mul(vinv, red.residual[k + 1]).select_rows(range(r, n))
    res_b = snf(b, transforms=True)
    ub, ubinv = res_b.left, res_b.left_inv
    m = n - r
    rows, orders = [], []
    for i in range(m):
        d = res_b.diag[i] if i < len(res_b.diag) else 0
        if d != 1:
            rows.append(i)
            orders.append(d)
    # torsion generators first, then free ones
    order_idx = sorted(range(len(rows)), key=lambda t: (orders[t] == 0, t))
    rows = [rows[t] for t in order_idx]
    orders = [orders[t] for t in order_idx]
    res_gens, gens = [], []
    for i in rows:
        g = kern.apply(ubinv.column(i))
        res_gens.append(g)
        gens.append(red.include(k, g))
    group = FgAbelianGroup.from_cyclic(orders)
    assert group.cyclic_orders == tuple(orders), (group, orders)
    if k >= 1:
        d_full = cx.boundary[k]
        for g in gens:
            if d_full.apply(g):
                raise CoordinateError(f"generator of H_{k}({cx.name}) is not a cycle")
    pres = HomologyPresentation(cx, k, group, gens, tuple(orders), red, vinv, r, ub, rows, res_gens)
    cx._presentations[k] = pres
    cx._groups[k] = group
    return pres


@dataclass
class HomologyMap:
    """A homomorphism between homology groups in generator coordinates."""

    source: HomologyPresentation
    target: HomologyPresentation
    matrix: list[list[int]]  # rows: target generators, cols: source generators
    name: str = ""

    def apply(self, coords: Sequence[int]) -> tuple[int, ...]:
        out = []
        for row, d in zip(self.matrix, self.target.orders):
            x = sum(a * c for a, c in zip(row, coords))
            out.append(x % d if d else x)
        return tuple(out)

    def compose(self, first: "HomologyMap") -> "HomologyMap":
        """self o first, reduced modulo target relations."""
        n_src = len(first.source.orders)
        cols = [self.apply([first.matrix[i][j] for i in range(len(first.matrix))]) for j in range(n_src)]
        mat = [[cols[j][i] for j in range(n_src)] for i in range(len(self.target.orders))]
        return HomologyMap(first.source, self.target, mat, f"{self.name} o {first.name}")


def map_on_homology(src: HomologyPresentation, tgt: HomologyPresentation,
                    vector_map: Callable[[dict[int, int]], dict[int, int]],
                    name: str = "", certify: str = "residual") -> HomologyMap:
    """Matrix of the map on homology induced by a chain-level ``vector_map``.

    Every generator image is checked to be a cycle and, after expressing it
    in target coordinates, the discrepancy is checked to be a boundary.
    ``certify`` is ``"residual"`` (on the reduced complex), ``"full"`` (the
    unreduced boundary matrix, slow) or ``"none"``.
    """
    k = tgt.degree
    cols = []
    d_full = tgt.complex.boundary[k] if k >= 1 else None
    for g in src.generators:
        img = vector_map(g)
        if d_full is not None and d_full.apply(img):
            raise CoordinateError(f"image of a generator is not a cycle ({name})")
        c = tgt.coordinates(img)
        if certify == "residual":
            diff = tgt.residual_difference(img, c)
            res = tgt._red.residual_snf(k + 1, True)
            if solve(tgt._red.residual[k + 1], diff, res) is None:
                raise CoordinateError(f"coordinate reconstruction failed ({name})")
        elif certify == "full":
            diff = dict(img)
            for cc, gg in zip(c, tgt.generators):
                for i, v in gg.items():
                    diff[i] = diff.get(i, 0) - cc * v
            if not tgt.is_boundary_full({i: v for i, v in diff.items() if v}):
                raise CoordinateError(f"coordinate reconstruction failed ({name})")
        cols.append(c)
    mat = [[cols[j][i] for j in range(len(cols))] for i in range(len(tgt.orders))]
    return HomologyMap(src, tgt, mat, name)


def induced_map_on_homology(f: ChainMap, k: int, certify: str = "residual", name: str = "") -> HomologyMap:
    src = homology(f.source, k)
    tgt = homology(f.target, k)
    return map_on_homology(src, tgt, f.maps[k].apply, name or f"H{k}(f)", certify)
