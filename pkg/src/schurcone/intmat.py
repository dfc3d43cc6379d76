"""Exact sparse integer matrices and Smith normal form.

Matrices are stored column-wise as ``{col: {row: value}}`` with Python ints,
so arithmetic never overflows.  Values are treated as immutable once built;
every function below returns a fresh matrix.

The SNF routine eliminates unit pivots first (Markowitz-style choice on
nonzero counts), then finishes the remaining non-unit block by repeated
division with the smallest-magnitude pivot.  Matrices smaller than
``DENSE_CUTOFF`` in both dimensions go through a plain dense routine.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence

DENSE_CUTOFF = 64
DEFAULT_MAX_BITS = 4096


class DimensionError(ValueError):
    pass


class ResourceLimitError(RuntimeError):
    """An intermediate entry exceeded the configured bit-size budget."""


class SparseIntMatrix:
    """Immutable sparse integer matrix (column-major storage)."""

    __slots__ = ("rows", "cols", "_c")

    def __init__(self, rows: int, cols: int, columns: dict[int, dict[int, int]] | None = None):
        if rows < 0 or cols < 0:
            raise DimensionError("negative dimension")
        self.rows = rows
        self.cols = cols
        self._c: dict[int, dict[int, int]] = {}
        if columns:
            for j, col in columns.items():
                if not 0 <= j < cols:
                    raise DimensionError(f"column index {j} out of range")
                clean = {}
                for i, v in col.items():
                    if not 0 <= i < rows:
                        raise DimensionError(f"row index {i} out of range")
                    if v:
                        clean[i] = int(v)
                if clean:
                    self._c[j] = clean

    @classmethod
    def _trusted(cls, rows: int, cols: int, columns: dict[int, dict[int, int]]) -> "SparseIntMatrix":
        # caller guarantees indices in range and no stored zeros / empty columns
        m = cls.__new__(cls)
        m.rows, m.cols, m._c = rows, cols, columns
        return m

    # -- construction --------------------------------------------------
    @classmethod
    def from_dense(cls, data: Sequence[Sequence[int]], cols: int | None = None) -> "SparseIntMatrix":
        rows = len(data)
        if cols is None:
            cols = len(data[0]) if rows else 0
        columns: dict[int, dict[int, int]] = {}
        for i, row in enumerate(data):
            if len(row) != cols:
                raise DimensionError("ragged dense input")
            for j, v in enumerate(row):
                if v:
                    columns.setdefault(j, {})[i] = int(v)
        return cls._trusted(rows, cols, columns)

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries: dict[tuple[int, int], int]) -> "SparseIntMatrix":
        columns: dict[int, dict[int, int]] = {}
        for (i, j), v in entries.items():
            columns.setdefault(j, {})[i] = v
        return cls(rows, cols, columns)

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[dict[int, int] | Sequence[int]]) -> "SparseIntMatrix":
        data = {}
        for j, col in enumerate(columns):
            if isinstance(col, dict):
                data[j] = col
            else:
                if len(col) != rows:
                    raise DimensionError("column length mismatch")
                data[j] = {i: v for i, v in enumerate(col) if v}
        return cls(rows, len(columns), data)

    @classmethod
    def identity(cls, n: int) -> "SparseIntMatrix":
        return cls._trusted(n, n, {i: {i: 1} for i in range(n)})

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "SparseIntMatrix":
        return cls._trusted(rows, cols, {})

    @classmethod
    def diagonal(cls, diag: Sequence[int], rows: int | None = None, cols: int | None = None) -> "SparseIntMatrix":
        rows = len(diag) if rows is None else rows
        cols = len(diag) if cols is None else cols
        return cls(rows, cols, {i: {i: d} for i, d in enumerate(diag) if d})

    # -- access ----------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def entries(self) -> dict[tuple[int, int], int]:
        return {(i, j): v for j, col in self._c.items() for i, v in col.items()}

    @property
    def nnz(self) -> int:
        return sum(len(c) for c in self._c.values())

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self._c.get(j, {}).get(i, 0)

    def column(self, j: int) -> dict[int, int]:
        return dict(self._c.get(j, {}))

    def column_dicts(self) -> dict[int, dict[int, int]]:
        """Read-only view of the column storage (do not mutate)."""
        return self._c

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for j, col in self._c.items():
            for i, v in col.items():
                out[i][j] = v
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseIntMatrix):
            return NotImplemented
        return self.shape == other.shape and self._c == other._c

    def __hash__(self):
        return hash((self.rows, self.cols, frozenset((j, frozenset(c.items())) for j, c in self._c.items())))

    def __repr__(self) -> str:
        if self.rows * self.cols <= 64:
            return f"SparseIntMatrix({self.to_dense()})"
        return f"SparseIntMatrix(<{self.rows}x{self.cols}, nnz={self.nnz}>)"

    def is_zero(self) -> bool:
        return not self._c

    # -- algebra ---------------------------------------------------------
    def transpose(self) -> "SparseIntMatrix":
        out: dict[int, dict[int, int]] = {}
        for j, col in self._c.items():
            for i, v in col.items():
                out.setdefault(i, {})[j] = v
        return SparseIntMatrix._trusted(self.cols, self.rows, out)

    T = property(transpose)

    def apply(self, vec: dict[int, int] | Sequence[int]) -> dict[int, int]:
        """Matrix times vector; sparse vectors are ``{index: value}`` dicts."""
        items = vec.items() if isinstance(vec, dict) else enumerate(vec)
        out: dict[int, int] = {}
        c = self._c
        for j, x in items:
            if not x:
                continue
            if not 0 <= j < self.cols:
                raise DimensionError(f"vector index {j} out of range")
            col = c.get(j)
            if col:
                for i, v in col.items():
                    out[i] = out.get(i, 0) + v * x
        return {i: v for i, v in out.items() if v}

    def __matmul__(self, other: "SparseIntMatrix") -> "SparseIntMatrix":
        return mat_mul(self, other)

    def __neg__(self) -> "SparseIntMatrix":
        return negate(self)

    def __add__(self, other: "SparseIntMatrix") -> "SparseIntMatrix":
        if self.shape != other.shape:
            raise DimensionError(f"cannot add {self.shape} and {other.shape}")
        out = {j: dict(c) for j, c in self._c.items()}
        for j, col in other._c.items():
            tgt = out.setdefault(j, {})
            for i, v in col.items():
                s = tgt.get(i, 0) + v
                if s:
                    tgt[i] = s
                else:
                    tgt.pop(i, None)
            if not tgt:
                del out[j]
        return SparseIntMatrix._trusted(self.rows, self.cols, out)

    def __sub__(self, other: "SparseIntMatrix") -> "SparseIntMatrix":
        return self + negate(other)

    def select_columns(self, idx: Sequence[int]) -> "SparseIntMatrix":
        out = {}
        for new, old in enumerate(idx):
            col = self._c.get(old)
            if col:
                out[new] = dict(col)
        return SparseIntMatrix._trusted(self.rows, len(idx), out)

    def select_rows(self, idx: Sequence[int]) -> "SparseIntMatrix":
        pos = {old: new for new, old in enumerate(idx)}
        out = {}
        for j, col in self._c.items():
            c = {pos[i]: v for i, v in col.items() if i in pos}
            if c:
                out[j] = c
        return SparseIntMatrix._trusted(len(idx), self.cols, out)

    def max_bits(self) -> int:
        return max((abs(v).bit_length() for c in self._c.values() for v in c.values()), default=0)


def mat_mul(a: SparseIntMatrix, b: SparseIntMatrix) -> SparseIntMatrix:
    if a.cols != b.rows:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    out = {}
    for j, col in b._c.items():
        r = a.apply(col)
        if r:
            out[j] = r
    return SparseIntMatrix._trusted(a.rows, b.cols, out)


def negate(a: SparseIntMatrix) -> SparseIntMatrix:
    return SparseIntMatrix._trusted(a.rows, a.cols, {j: {i: -v for i, v in c.items()} for j, c in a._c.items()})


def mat_stack(*blocks: SparseIntMatrix) -> SparseIntMatrix:
    """Stack matrices vertically (all must share a column count)."""
    if not blocks:
        raise DimensionError("nothing to stack")
    cols = blocks[0].cols
    out: dict[int, dict[int, int]] = {}
    off = 0
    for b in blocks:
        if b.cols != cols:
            raise DimensionError("column counts differ in mat_stack")
        for j, col in b._c.items():
            tgt = out.setdefault(j, {})
            for i, v in col.items():
                tgt[i + off] = v
        off += b.rows
    return SparseIntMatrix._trusted(off, cols, out)


def mat_hstack(*blocks: SparseIntMatrix) -> SparseIntMatrix:
    """Place matrices side by side (all must share a row count)."""
    if not blocks:
        raise DimensionError("nothing to stack")
    rows = blocks[0].rows
    out: dict[int, dict[int, int]] = {}
    off = 0
    for b in blocks:
        if b.rows != rows:
            raise DimensionError("row counts differ in mat_hstack")
        for j, col in b._c.items():
            out[j + off] = dict(col)
        off += b.cols
    return SparseIntMatrix._trusted(rows, off, out)


def mat_block_diag(*blocks: SparseIntMatrix) -> SparseIntMatrix:
    out: dict[int, dict[int, int]] = {}
    r0 = c0 = 0
    for b in blocks:
        for j, col in b._c.items():
            out[j + c0] = {i + r0: v for i, v in col.items()}
        r0 += b.rows
        c0 += b.cols
    return SparseIntMatrix._trusted(r0, c0, out)


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SnfResult:
    """``left @ A @ right`` is the ``rows x cols`` diagonal matrix of ``diag``.

    ``diag`` has length ``min(rows, cols)``; its nonzero entries come first
    and form a divisibility chain.  The inverse transforms are filled in
    alongside the transforms so that coordinates can be moved both ways.
    """

    diag: tuple[int, ...]
    left: SparseIntMatrix | None = None
    right: SparseIntMatrix | None = None
    left_inv: SparseIntMatrix | None = None
    right_inv: SparseIntMatrix | None = None

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diag if d)

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        return tuple(d for d in self.diag if d)


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


class _Transforms:
    """Accumulates U, U^-1 (left) and V, V^-1 (right) under elementary ops.

    U is kept as row dicts, U^-1 as column dicts, V as column dicts and V^-1
    as row dicts; each elementary op then touches one stored vector.
    """

    def __init__(self, rows: int, cols: int):
        self.U = {i: {i: 1} for i in range(rows)}
        self.Ui = {i: {i: 1} for i in range(rows)}
        self.V = {j: {j: 1} for j in range(cols)}
        self.Vi = {j: {j: 1} for j in range(cols)}

    @staticmethod
    def _axpy(vecs, dst, src, q):
        # vecs[dst] += q * vecs[src]
        if not q:
            return
        d = vecs[dst]
        for k, v in vecs[src].items():
            s = d.get(k, 0) + q * v
            if s:
                d[k] = s
            else:
                d.pop(k, None)

    def row_add(self, dst: int, src: int, q: int):
        """Row op R_dst += q * R_src."""
        self._axpy(self.U, dst, src, q)
        self._axpy(self.Ui, src, dst, -q)

    def col_add(self, dst: int, src: int, q: int):
        """Column op C_dst += q * C_src."""
        self._axpy(self.V, dst, src, q)
        self._axpy(self.Vi, src, dst, -q)

    def row_neg(self, i: int):
        self.U[i] = {k: -v for k, v in self.U[i].items()}
        self.Ui[i] = {k: -v for k, v in self.Ui[i].items()}

    def finish(self, rows: int, cols: int, row_perm: list[int], col_perm: list[int]):
        """Reorder so the pivot of row_perm[t], col_perm[t] lands at (t, t)."""
        U = {}
        for new, old in enumerate(row_perm):
            for k, v in self.U[old].items():
                U.setdefault(k, {})[new] = v
        Ui = {new: self.Ui[old] for new, old in enumerate(row_perm) if self.Ui[old]}
        V = {new: self.V[old] for new, old in enumerate(col_perm) if self.V[old]}
        Vi = {}
        for new, old in enumerate(col_perm):
            for k, v in self.Vi[old].items():
                Vi.setdefault(k, {})[new] = v
        return (
            SparseIntMatrix._trusted(rows, rows, U),
            SparseIntMatrix._trusted(cols, cols, V),
            SparseIntMatrix._trusted(rows, rows, Ui),
            SparseIntMatrix._trusted(cols, cols, Vi),
        )


def snf(a: SparseIntMatrix, transforms: bool = True, max_bits: int = DEFAULT_MAX_BITS) -> SnfResult:
    """Smith normal form of ``a``.

    With ``transforms=False`` only the diagonal is computed, which is much
    cheaper on large sparse inputs.
    """
    if a.rows < DENSE_CUTOFF and a.cols < DENSE_CUTOFF:
        return _snf_dense(a, transforms, max_bits)
    return _snf_sparse(a, transforms, max_bits)


class _Work:
    """Mutable sparse matrix with both column and row indexes."""

    def __init__(self, a: SparseIntMatrix):
        self.cols: dict[int, dict[int, int]] = {j: dict(c) for j, c in a._c.items()}
        self.rows: dict[int, set[int]] = {}
        for j, col in self.cols.items():
            for i in col:
                self.rows.setdefault(i, set()).add(j)

    def set(self, i: int, j: int, v: int):
        col = self.cols.setdefault(j, {})
        if v:
            if i not in col:
                self.rows.setdefault(i, set()).add(j)
            col[i] = v
        else:
            if i in col:
                del col[i]
                r = self.rows[i]
                r.discard(j)
                if not r:
                    del self.rows[i]
            if not col:
                del self.cols[j]

    def row_add(self, dst: int, src: int, q: int, max_bits: int):
        """R_dst += q * R_src."""
        for j in list(self.rows.get(src, ())):
            col = self.cols[j]
            v = col.get(dst, 0) + q * col[src]
            if v.bit_length() > max_bits:
                raise ResourceLimitError(f"entry exceeds {max_bits} bits during SNF")
            self.set(dst, j, v)

    def col_add(self, dst: int, src: int, q: int, max_bits: int):
        """C_dst += q * C_src."""
        for i, w in list(self.cols.get(src, {}).items()):
            v = self.cols.get(dst, {}).get(i, 0) + q * w
            if v.bit_length() > max_bits:
                raise ResourceLimitError(f"entry exceeds {max_bits} bits during SNF")
            self.set(i, dst, v)

    def remove(self, i: int, j: int):
        """Drop row i and column j (pivot fully isolated)."""
        for r in list(self.cols.get(j, {})):
            self.set(r, j, 0)
        for c in list(self.rows.get(i, ())):
            self.set(i, c, 0)


def _snf_sparse(a: SparseIntMatrix, transforms: bool, max_bits: int) -> SnfResult:
    w = _Work(a)
    tr = _Transforms(a.rows, a.cols) if transforms else None
    pivots: list[tuple[int, int, int]] = []

    # phase 1: unit pivots, cheapest column first
    heap = [(len(c), j) for j, c in w.cols.items()]
    heapq.heapify(heap)
    while heap:
        n, j = heapq.heappop(heap)
        col = w.cols.get(j)
        if col is None:
            continue
        if len(col) != n:
            heapq.heappush(heap, (len(col), j))
            continue
        best = None
        for i, v in col.items():
            if v == 1 or v == -1:
                cost = len(w.rows[i])
                if best is None or cost < best[0]:
                    best = (cost, i, v)
        if best is None:
            continue
        _, p, u = best
        touched = _eliminate(w, tr, p, j, u, max_bits)
        pivots.append((p, j, u))
        for c in touched:
            cc = w.cols.get(c)
            if cc is not None:
                heapq.heappush(heap, (len(cc), c))

    # phase 2: general pivots on the (hopefully small) remainder
    while w.cols:
        p, j, v = _smallest_entry(w)
        while True:
            changed = False
            for r in list(w.cols[j]):
                if r == p:
                    continue
                q = w.cols[j][r] // v
                if q:
                    w.row_add(r, p, -q, max_bits)
                    if tr:
                        tr.row_add(r, p, -q)
                rem = w.cols.get(j, {}).get(r, 0)
                if rem:
                    p, v = r, rem
                    changed = True
                    break
            if changed:
                continue
            for c in list(w.rows[p]):
                if c == j:
                    continue
                q = w.cols[c][p] // v
                if q:
                    w.col_add(c, j, -q, max_bits)
                    if tr:
                        tr.col_add(c, j, -q)
                rem = w.cols.get(c, {}).get(p, 0)
                if rem:
                    j, v = c, rem
                    changed = True
                    break
            if not changed:
                break
        w.remove(p, j)
        pivots.append((p, j, v))

    return _finalize(a.rows, a.cols, pivots, tr, max_bits)


def _eliminate(w: _Work, tr: _Transforms | None, p: int, j: int, u: int, max_bits: int) -> set[int]:
    """Clear column j and row p around the unit pivot (p, j)."""
    touched: set[int] = set()
    row_p = [(c, w.cols[c][p]) for c in w.rows[p] if c != j]
    for r, x in list(w.cols[j].items()):
        if r == p:
            continue
        q = -x * u
        for c, y in row_p:
            col = w.cols.get(c)
            v = (col.get(r, 0) if col else 0) + q * y
            if v.bit_length() > max_bits:
                raise ResourceLimitError(f"entry exceeds {max_bits} bits during SNF")
            w.set(r, c, v)
            touched.add(c)
        # column j entry at r becomes 0
        w.set(r, j, 0)
        if tr:
            tr.row_add(r, p, q)
    if tr:
        for c, y in row_p:
            tr.col_add(c, j, -y * u)
    w.remove(p, j)
    return touched


def _smallest_entry(w: _Work) -> tuple[int, int, int]:
    best = None
    for j, col in w.cols.items():
        for i, v in col.items():
            key = (abs(v), (len(w.rows[i]) - 1) * (len(col) - 1), i, j)
            if best is None or key < best[0]:
                best = (key, i, j, v)
    return best[1], best[2], best[3]


def _finalize(rows, cols, pivots, tr, max_bits) -> SnfResult:
    """Turn isolated pivots into a sorted divisibility chain."""
    # positive pivots
    vals = []
    for p, j, v in pivots:
        if v < 0:
            if tr:
                tr.row_neg(p)
            v = -v
        vals.append(v)
    # divisibility fix on pairs (gcd, lcm) with explicit unimodular ops
    k = len(vals)
    for s in range(k):
        for t in range(s + 1, k):
            a, b = vals[s], vals[t]
            if b % a == 0:
                continue
            g, x, y = _ext_gcd(a, b)
            if tr:
                ps, js = pivots[s][0], pivots[s][1]
                pt, jt = pivots[t][0], pivots[t][1]
                # [[a,0],[0,b]] -> R_s += R_t -> [[a,b],[0,b]]
                tr.row_add(ps, pt, 1)
                # right multiply by [[x, -b/g], [y, a/g]] on columns (js, jt)
                _col_pair(tr, js, jt, x, -(b // g), y, a // g)
                # then R_t -= (b*y/g) R_s
                tr.row_add(pt, ps, -(b * y // g))
            vals[s], vals[t] = g, a // g * b
            if vals[t].bit_length() > max_bits:
                raise ResourceLimitError(f"entry exceeds {max_bits} bits during SNF")
    order = sorted(range(k), key=lambda t: vals[t])
    diag = [vals[t] for t in order]
    n = min(rows, cols)
    diag += [0] * (n - k)
    if not tr:
        return SnfResult(tuple(diag))
    piv_rows = [pivots[t][0] for t in order]
    piv_cols = [pivots[t][1] for t in order]
    used_r, used_c = set(piv_rows), set(piv_cols)
    row_perm = piv_rows + [i for i in range(rows) if i not in used_r]
    col_perm = piv_cols + [j for j in range(cols) if j not in used_c]
    U, V, Ui, Vi = tr.finish(rows, cols, row_perm, col_perm)
    return SnfResult(tuple(diag), U, V, Ui, Vi)


def _col_pair(tr: _Transforms, c1: int, c2: int, a: int, b: int, c: int, d: int):
    """Right-multiply columns (c1, c2) by the unimodular [[a, b], [c, d]].

    New C1 = a*C1 + c*C2, new C2 = b*C1 + d*C2; inverse is [[d, -b], [-c, a]].
    """
    V, Vi = tr.V, tr.Vi
    v1, v2 = V[c1], V[c2]
    n1, n2 = {}, {}
    for k in set(v1) | set(v2):
        x, y = v1.get(k, 0), v2.get(k, 0)
        s, t = a * x + c * y, b * x + d * y
        if s:
            n1[k] = s
        if t:
            n2[k] = t
    V[c1], V[c2] = n1, n2
    # V^-1 rows: new R1 = d*R1 - b*R2, new R2 = -c*R1 + a*R2
    r1, r2 = Vi[c1], Vi[c2]
    m1, m2 = {}, {}
    for k in set(r1) | set(r2):
        x, y = r1.get(k, 0), r2.get(k, 0)
        s, t = d * x - b * y, -c * x + a * y
        if s:
            m1[k] = s
        if t:
            m2[k] = t
    Vi[c1], Vi[c2] = m1, m2


def _snf_dense(a: SparseIntMatrix, transforms: bool, max_bits: int) -> SnfResult:
    m, n = a.rows, a.cols
    A = a.to_dense()
    U = [[int(i == j) for j in range(m)] for i in range(m)] if transforms else None
    Ui = [[int(i == j) for j in range(m)] for i in range(m)] if transforms else None
    V = [[int(i == j) for j in range(n)] for i in range(n)] if transforms else None
    Vi = [[int(i == j) for j in range(n)] for i in range(n)] if transforms else None

    def check(v):
        if v.bit_length() > max_bits:
            raise ResourceLimitError(f"entry exceeds {max_bits} bits during SNF")

    def row_add(dst, src, q):  # R_dst += q R_src
        A[dst] = [x + q * y for x, y in zip(A[dst], A[src])]
        for x in A[dst]:
            check(x)
        if U is not None:
            U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]
            for r in Ui:
                r[src] -= q * r[dst]

    def col_add(dst, src, q):  # C_dst += q C_src
        for r in A:
            r[dst] += q * r[src]
            check(r[dst])
        if V is not None:
            for r in V:
                r[dst] += q * r[src]
            Vi[src] = [x - q * y for x, y in zip(Vi[src], Vi[dst])]

    def row_swap(i, k):
        A[i], A[k] = A[k], A[i]
        if U is not None:
            U[i], U[k] = U[k], U[i]
            for r in Ui:
                r[i], r[k] = r[k], r[i]

    def col_swap(j, k):
        for r in A:
            r[j], r[k] = r[k], r[j]
        if V is not None:
            for r in V:
                r[j], r[k] = r[k], r[j]
            Vi[j], Vi[k] = Vi[k], Vi[j]

    def row_neg(i):
        A[i] = [-x for x in A[i]]
        if U is not None:
            U[i] = [-x for x in U[i]]
            for r in Ui:
                r[i] = -r[i]

    t = 0
    while t < min(m, n):
        # smallest nonzero in the trailing block
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        row_swap(t, i)
        col_swap(t, j)
        while True:
            p = A[t][t]
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // p
                    row_add(i, t, -q)
                    if A[i][t]:
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // p
                    col_add(j, t, -q)
                    if A[t][j]:
                        done = False
            if done:
                # divisibility against the remaining block
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if A[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                row_add(t, bad, 1)
                continue
            # move the smallest entry of row/col t to the pivot
            cand = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
            cand += [(abs(A[t][j]), t, j) for j in range(t, n) if A[t][j]]
            _, i, j = min(cand)
            row_swap(t, i)
            col_swap(t, j)
        if A[t][t] < 0:
            row_neg(t)
        t += 1
    diag = tuple(A[i][i] for i in range(min(m, n)))
    if U is None:
        return SnfResult(diag)
    return SnfResult(
        diag,
        SparseIntMatrix.from_dense(U, m),
        SparseIntMatrix.from_dense(V, n),
        SparseIntMatrix.from_dense(Ui, m),
        SparseIntMatrix.from_dense(Vi, n),
    )


# ---------------------------------------------------------------------------
# kernels, solving, ranks
# ---------------------------------------------------------------------------


def rank(a: SparseIntMatrix) -> int:
    return snf(a, transforms=False).rank


def kernel_basis(a: SparseIntMatrix) -> SparseIntMatrix:
    """Columns form a Z-basis of {x : a x = 0}."""
    res = snf(a)
    r = res.rank
    return res.right.select_columns(range(r, a.cols))


def solve(a: SparseIntMatrix, b: Sequence[int] | dict[int, int], res: SnfResult | None = None) -> list[int] | None:
    """Integer solution of ``a x = b`` or ``None`` when none exists.

    Pass a precomputed ``res = snf(a)`` to amortise repeated solves.
    """
    if isinstance(b, dict):
        if any(not 0 <= i < a.rows for i in b):
            raise DimensionError("right-hand side index out of range")
        bvec = b
    else:
        if len(b) != a.rows:
            raise DimensionError(f"right-hand side has length {len(b)}, expected {a.rows}")
        bvec = {i: v for i, v in enumerate(b) if v}
    if res is None:
        res = snf(a)
    c = res.left.apply(bvec)
    y = {}
    for i, v in c.items():
        d = res.diag[i] if i < len(res.diag) else 0
        if d == 0 or v % d:
            return None
        y[i] = v // d
    x = res.right.apply(y)
    return [x.get(j, 0) for j in range(a.cols)]


def determinant(a: SparseIntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if a.rows != a.cols:
        raise DimensionError("determinant of a non-square matrix")
    n = a.rows
    if n == 0:
        return 1
    M = a.to_dense()
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def invariant_chain(values: Iterable[int]) -> list[int]:
    """Invariant factors (>1, divisibility chain) of ⊕ Z/v over the given v."""
    vals = [abs(v) for v in values if abs(v) != 1 and v != 0]
    k = len(vals)
    for s in range(k):
        for t in range(s + 1, k):
            a, b = vals[s], vals[t]
            g = gcd(a, b)
            vals[s], vals[t] = g, a // g * b
    return [v for v in vals if v != 1]
