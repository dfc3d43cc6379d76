"""Finite groups as Cayley tables.

Elements are the integers ``0..n-1`` with the identity at 0; ``table[a][b]``
is the index of ``a*b``.  Subgroups are passed around as sorted tuples of
element indices.  Construction validates the Latin-square property and
associativity (exhaustively up to order 64, on a random sample above).
"""

from __future__ import annotations

import hashlib
import itertools
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .abgrp import FgAbelianGroup, from_presentation
from .intmat import SparseIntMatrix

VALIDATION_CAP = 64


class GroupError(ValueError):
    pass


class FiniteGroup:
    def __init__(self, table: Sequence[Sequence[int]], labels: Sequence[str] | None = None,
                 name: str = "G", validate: bool = True):
        self.table = tuple(tuple(int(x) for x in row) for row in table)
        self.order = len(self.table)
        self.labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(self.order))
        self.name = name
        if len(self.labels) != self.order:
            raise GroupError("label count does not match order")
        self.inverse = tuple(self._inverses())
        if validate:
            self._validate()

    def _inverses(self):
        inv = []
        for a, row in enumerate(self.table):
            try:
                inv.append(row.index(0))
            except ValueError:
                raise GroupError(f"element {a} has no inverse") from None
        return inv

    def _validate(self):
        n = self.order
        if n == 0:
            raise GroupError("empty group")
        T = np.array(self.table, dtype=np.int64)
        if T.shape != (n, n):
            raise GroupError("table is not square")
        perm = np.arange(n)
        if not (np.array_equal(np.sort(T, axis=0), np.tile(perm[:, None], (1, n)))
                and np.array_equal(np.sort(T, axis=1), np.tile(perm, (n, 1)))):
            raise GroupError("table is not a Latin square")
        if not (np.array_equal(T[0], perm) and np.array_equal(T[:, 0], perm)):
            raise GroupError("index 0 is not a two-sided identity")
        if n <= VALIDATION_CAP:
            if not np.array_equal(T[T, :], T[:, T]):
                raise GroupError("table is not associative")
        else:
            rng = random.Random(n)
            for _ in range(20000):
                a, b, c = rng.randrange(n), rng.randrange(n), rng.randrange(n)
                if T[T[a, b], c] != T[a, T[b, c]]:
                    raise GroupError("table is not associative")

    # -- basics ----------------------------------------------------------
    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def conj(self, g: int, x: int) -> int:
        """g x g^-1."""
        return self.table[self.table[g][x]][self.inverse[g]]

    def comm(self, a: int, b: int) -> int:
        """[a, b] = a^-1 b^-1 a b."""
        t = self.table
        return t[t[t[self.inverse[a]][self.inverse[b]]][a]][b]

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.table[x][a]
            k += 1
        return k

    @property
    def elements(self) -> range:
        return range(self.order)

    @cached_property
    def key(self) -> str:
        """Content hash of the Cayley table (labels excluded)."""
        h = hashlib.sha256()
        h.update(str(self.order).encode())
        for row in self.table:
            h.update(bytes(",".join(map(str, row)), "ascii"))
            h.update(b";")
        return h.hexdigest()[:32]

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and self.table == other.table

    def __hash__(self):
        return hash(self.key)

    def __len__(self):
        return self.order

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order})"

    def is_abelian(self) -> bool:
        t = self.table
        return all(t[a][b] == t[b][a] for a in range(self.order) for b in range(a))

    def exponent(self) -> int:
        from math import lcm
        e = 1
        for a in self.elements:
            e = lcm(e, self.element_order(a))
        return e

    def to_json(self) -> dict:
        return {"order": self.order, "table": [x for row in self.table for x in row], "labels": list(self.labels)}

    @classmethod
    def from_json(cls, data: dict, name: str = "G") -> "FiniteGroup":
        n = data["order"]
        flat = data["table"]
        return cls([flat[i * n:(i + 1) * n] for i in range(n)], data.get("labels"), name)


@dataclass(frozen=True, eq=False)
class NormalSubgroup:
    parent: FiniteGroup
    members: tuple[int, ...]

    def __post_init__(self):
        m = tuple(sorted(set(self.members)))
        object.__setattr__(self, "members", m)
        if not m or m[0] != 0:
            raise GroupError("subgroup must contain the identity")
        if not is_subgroup(self.parent, m):
            raise GroupError("members are not closed under multiplication")
        if not is_normal(self.parent, m):
            raise GroupError("subgroup is not normal")

    @property
    def order(self) -> int:
        return len(self.members)

    def __eq__(self, other):
        return isinstance(other, NormalSubgroup) and self.parent == other.parent and self.members == other.members

    def __hash__(self):
        return hash((self.parent.key, self.members))

    def __contains__(self, x):
        return x in self.members

    def __repr__(self):
        return f"NormalSubgroup(order={self.order} in {self.parent.name})"


@dataclass(frozen=True, eq=False)
class GroupHom:
    source: FiniteGroup
    target: FiniteGroup
    images: tuple[int, ...]
    validate: bool = field(default=True, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))
        if len(self.images) != self.source.order:
            raise GroupError("image list length differs from source order")
        if not self.validate:
            return
        if self.images[0] != 0:
            raise GroupError("identity must map to identity")
        s, t, im = self.source.table, self.target.table, self.images
        for a in range(self.source.order):
            for b in range(self.source.order):
                if im[s[a][b]] != t[im[a]][im[b]]:
                    raise GroupError(f"not a homomorphism at ({a}, {b})")

    def __call__(self, a: int) -> int:
        return self.images[a]

    def compose(self, first: "GroupHom") -> "GroupHom":
        """self o first."""
        if first.target != self.source:
            raise GroupError("maps are not composable")
        return GroupHom(first.source, self.target, tuple(self.images[x] for x in first.images), validate=False)

    def kernel(self) -> tuple[int, ...]:
        return tuple(a for a, x in enumerate(self.images) if x == 0)

    @classmethod
    def identity(cls, g: FiniteGroup) -> "GroupHom":
        return cls(g, g, tuple(g.elements), validate=False)


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------


def cyclic(m: int) -> FiniteGroup:
    if not 1 <= m <= 4096:
        raise GroupError(f"cyclic order {m} out of range")
    return FiniteGroup([[(a + b) % m for b in range(m)] for a in range(m)],
                       [str(i) for i in range(m)], f"Z({m})", validate=m <= VALIDATION_CAP)


def dihedral(n: int) -> FiniteGroup:
    """Symmetries of the n-gon, order 2n; element r^i s^j has index i + n*j."""
    if not 1 <= n <= 256:
        raise GroupError(f"dihedral parameter {n} out of range")
    table = []
    for j in (0, 1):
        for i in range(n):
            row = []
            for l in (0, 1):
                for k in range(n):
                    ii = (i + (k if j == 0 else -k)) % n
                    row.append(ii + n * ((j + l) % 2))
            table.append(row)
    labels = [f"r{i}" if j == 0 else f"r{i}s" for j in (0, 1) for i in range(n)]
    return FiniteGroup(table, labels, f"D({n})")


def quaternion8() -> FiniteGroup:
    # units as (sign, axis) with axis 0=1, 1=i, 2=j, 3=k
    units = [(s, a) for a in range(4) for s in (1, -1)]
    mult = {(1, 1): (-1, 0), (2, 2): (-1, 0), (3, 3): (-1, 0),
            (1, 2): (1, 3), (2, 3): (1, 1), (3, 1): (1, 2),
            (2, 1): (-1, 3), (3, 2): (-1, 1), (1, 3): (-1, 2)}

    def times(x, y):
        (s1, a1), (s2, a2) = x, y
        if a1 == 0:
            return s1 * s2, a2
        if a2 == 0:
            return s1 * s2, a1
        s, a = mult[(a1, a2)]
        return s1 * s2 * s, a

    idx = {u: i for i, u in enumerate(units)}
    table = [[idx[times(x, y)] for y in units] for x in units]
    names = ["1", "i", "j", "k"]
    labels = [("" if s == 1 else "-") + names[a] for s, a in units]
    return FiniteGroup(table, labels, "Q8")


def symmetric(k: int) -> FiniteGroup:
    if not 1 <= k <= 4:
        raise GroupError("symmetric groups are supported for k <= 4")
    perms = list(itertools.permutations(range(k)))
    idx = {p: i for i, p in enumerate(perms)}
    # (s t)(x) = s(t(x))
    table = [[idx[tuple(s[t[x]] for x in range(k))] for t in perms] for s in perms]
    labels = ["".join(str(x) for x in p) for p in perms]
    return FiniteGroup(table, labels, f"S({k})")


@dataclass(frozen=True, eq=False)
class DirectProduct:
    group: FiniteGroup
    factors: tuple[FiniteGroup, FiniteGroup]
    projections: tuple[GroupHom, GroupHom]
    inclusions: tuple[GroupHom, GroupHom]

    def pair_index(self, a: int, b: int) -> int:
        return a * self.factors[1].order + b

    def subgroup(self, s1: Iterable[int], s2: Iterable[int]) -> tuple[int, ...]:
        """S1 x S2 as an index set of the product."""
        return tuple(sorted(self.pair_index(a, b) for a in s1 for b in s2))


def direct_product(g1: FiniteGroup, g2: FiniteGroup) -> DirectProduct:
    n1, n2 = g1.order, g2.order
    t1, t2 = g1.table, g2.table
    table = [[t1[a // n2][b // n2] * n2 + t2[a % n2][b % n2] for b in range(n1 * n2)] for a in range(n1 * n2)]
    labels = [f"({g1.labels[a]},{g2.labels[b]})" for a in range(n1) for b in range(n2)]
    G = FiniteGroup(table, labels, f"{g1.name} x {g2.name}", validate=n1 * n2 <= VALIDATION_CAP)
    p1 = GroupHom(G, g1, tuple(a // n2 for a in G.elements), validate=False)
    p2 = GroupHom(G, g2, tuple(a % n2 for a in G.elements), validate=False)
    i1 = GroupHom(g1, G, tuple(a * n2 for a in g1.elements), validate=False)
    i2 = GroupHom(g2, G, tuple(b for b in g2.elements), validate=False)
    return DirectProduct(G, (g1, g2), (p1, p2), (i1, i2))


@dataclass(frozen=True, eq=False)
class SemidirectProduct:
    group: FiniteGroup
    normal: NormalSubgroup
    quotient: FiniteGroup
    retraction: GroupHom  # G -> Q, kernel = normal
    section: GroupHom  # Q -> G with retraction o section = id


def semidirect_product(n: FiniteGroup, q: FiniteGroup, action: Sequence[Sequence[int]]) -> SemidirectProduct:
    """N x| Q with (a, x)(b, y) = (a * action[x](b), x y); (a, x) has index a + |N| x."""
    nn, nq = n.order, q.order
    act = [tuple(p) for p in action]
    if len(act) != nq:
        raise GroupError("need one permutation of N per element of Q")
    tn, tq = n.table, q.table
    for x, p in enumerate(act):
        if sorted(p) != list(range(nn)):
            raise GroupError(f"action of {x} is not a permutation")
        for a in range(nn):
            for b in range(nn):
                if p[tn[a][b]] != tn[p[a]][p[b]]:
                    raise GroupError(f"action of {x} is not an automorphism")
    if act[0] != tuple(range(nn)):
        raise GroupError("identity of Q must act trivially")
    for x in range(nq):
        for y in range(nq):
            if act[tq[x][y]] != tuple(act[x][act[y][a]] for a in range(nn)):
                raise GroupError("action is not a homomorphism Q -> Aut(N)")
    size = nn * nq
    table = []
    for g in range(size):
        a, x = g % nn, g // nn
        row = []
        for h in range(size):
            b, y = h % nn, h // nn
            row.append(tn[a][act[x][b]] + nn * tq[x][y])
        table.append(row)
    labels = [f"({n.labels[a]},{q.labels[x]})" for x in range(nq) for a in range(nn)]
    G = FiniteGroup(table, labels, f"sd({n.name}, {q.name})")
    normal = NormalSubgroup(G, tuple(range(nn)))
    retraction = GroupHom(G, q, tuple(g // nn for g in G.elements))
    section = GroupHom(q, G, tuple(nn * x for x in q.elements))
    return SemidirectProduct(G, normal, q, retraction, section)


def inversion_action(n: FiniteGroup, q: FiniteGroup) -> list[tuple[int, ...]]:
    """Cyclic Q of even order acting on abelian N, generator by inversion."""
    if not n.is_abelian():
        raise GroupError("inversion action needs an abelian normal factor")
    gen = next((x for x in q.elements if q.element_order(x) == q.order), None)
    if gen is None or q.order % 2:
        raise GroupError("inversion action needs a cyclic acting group of even order")
    ident = tuple(n.elements)
    flip = tuple(n.inverse)
    parity = {}
    x, k = 0, 0
    while True:
        parity[x] = k % 2
        x = q.mul(x, gen)
        k += 1
        if x == 0:
            break
    return [flip if parity[x] else ident for x in q.elements]


# ---------------------------------------------------------------------------
# subgroups
# ---------------------------------------------------------------------------


def is_subgroup(g: FiniteGroup, s: Iterable[int]) -> bool:
    s = set(s)
    if 0 not in s:
        return False
    t = g.table
    return all(t[a][b] in s for a in s for b in s)


def subgroup_closure(g: FiniteGroup, gens: Iterable[int]) -> tuple[int, ...]:
    gens = [x for x in set(gens) if x != 0]
    for x in gens:
        if not 0 <= x < g.order:
            raise GroupError(f"element {x} not in group")
    seen = {0}
    frontier = [0]
    t = g.table
    while frontier:
        nxt = []
        for a in frontier:
            for x in gens:
                b = t[a][x]
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
        frontier = nxt
    return tuple(sorted(seen))


def is_normal(g: FiniteGroup, s: Iterable[int]) -> bool:
    s = set(s)
    return all(g.conj(x, a) in s for x in g.elements for a in s)


def normal_closure(g: FiniteGroup, s: Iterable[int]) -> NormalSubgroup:
    gens = set(s)
    while True:
        h = subgroup_closure(g, gens)
        conj = {g.conj(x, a) for x in g.elements for a in h}
        if conj <= set(h):
            return NormalSubgroup(g, h)
        gens = conj | set(h)


def commutator_subgroup(g: FiniteGroup, a: Iterable[int], b: Iterable[int]) -> tuple[int, ...]:
    a, b = list(a), list(b)
    return subgroup_closure(g, {g.comm(x, y) for x in a for y in b})


def derived_subgroup(g: FiniteGroup) -> NormalSubgroup:
    return NormalSubgroup(g, commutator_subgroup(g, g.elements, g.elements))


def center(g: FiniteGroup) -> NormalSubgroup:
    t = g.table
    return NormalSubgroup(g, tuple(a for a in g.elements if all(t[a][b] == t[b][a] for b in g.elements)))


def trivial_subgroup(g: FiniteGroup) -> NormalSubgroup:
    return NormalSubgroup(g, (0,))


def whole(g: FiniteGroup) -> NormalSubgroup:
    return NormalSubgroup(g, tuple(g.elements))


def intersect(m: Iterable[int], n: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(set(m) & set(n)))


def product_subgroup(g: FiniteGroup, m: Iterable[int], n: Iterable[int]) -> tuple[int, ...]:
    """The set MN; raises unless it is a subgroup."""
    prod_set = {g.mul(a, b) for a in m for b in n}
    if not is_subgroup(g, prod_set):
        raise GroupError("MN is not a subgroup")
    return tuple(sorted(prod_set))


def quotient(g: FiniteGroup, n: NormalSubgroup | Iterable[int]) -> tuple[FiniteGroup, GroupHom]:
    """G/N with cosets ordered by their smallest member, plus the projection."""
    members = n.members if isinstance(n, NormalSubgroup) else tuple(sorted(set(n)))
    if not (is_subgroup(g, members) and is_normal(g, members)):
        raise GroupError("quotient by a non-normal subgroup")
    coset_of = [-1] * g.order
    reps = []
    for a in g.elements:
        if coset_of[a] == -1:
            c = len(reps)
            reps.append(a)
            for x in members:
                coset_of[g.mul(a, x)] = c
    table = [[coset_of[g.mul(a, b)] for b in reps] for a in reps]
    labels = [g.labels[a] + "N" if len(members) > 1 else g.labels[a] for a in reps]
    q = FiniteGroup(table, labels, f"{g.name}/N", validate=False)
    return q, GroupHom(g, q, tuple(coset_of), validate=False)


def subgroup_as_group(g: FiniteGroup, s: Iterable[int], name: str = "H") -> tuple[FiniteGroup, GroupHom]:
    """Restrict the table to the subgroup S; returns it with its embedding."""
    s = tuple(sorted(set(s)))
    if not is_subgroup(g, s):
        raise GroupError("not a subgroup")
    pos = {a: i for i, a in enumerate(s)}
    table = [[pos[g.mul(a, b)] for b in s] for a in s]
    h = FiniteGroup(table, [g.labels[a] for a in s], name, validate=False)
    return h, GroupHom(h, g, s, validate=False)


def induced_quotient_map(g: FiniteGroup, small: NormalSubgroup, big: NormalSubgroup) -> GroupHom:
    """G/small -> G/big for small <= big, compatible with both projections."""
    if not set(small.members) <= set(big.members):
        raise GroupError("quotient map needs small <= big")
    qs, ps = quotient(g, small)
    qb, pb = quotient(g, big)
    images = [0] * qs.order
    for a in g.elements:
        images[ps(a)] = pb(a)
    return GroupHom(qs, qb, tuple(images), validate=False)


def abelian_invariants(g: FiniteGroup, s: Iterable[int], t: Iterable[int] = (0,)) -> FgAbelianGroup:
    """S/T as a canonical abelian group (S/T must be abelian)."""
    s = tuple(sorted(set(s)))
    t = tuple(sorted(set(t)))
    if not (is_subgroup(g, s) and is_subgroup(g, t) and set(t) <= set(s)):
        raise GroupError("need subgroups T <= S")
    if any(g.conj(x, a) not in set(t) for x in s for a in t):
        raise GroupError("T is not normalized by S")
    tset = set(t)
    if any(g.comm(a, b) not in tset for a in s for b in s):
        raise GroupError("S/T is not abelian")
    h, emb = subgroup_as_group(g, s)
    tt = [i for i, a in enumerate(s) if a in tset]
    q, proj = quotient(h, tt)
    # generators x_c for cosets c, relations x_a + x_b - x_ab = 0
    n = q.order
    cols = []
    for a in range(n):
        for b in range(a, n):
            col: dict[int, int] = {}
            for idx, v in ((a, 1), (b, 1), (q.mul(a, b), -1)):
                col[idx] = col.get(idx, 0) + v
            cols.append({i: v for i, v in col.items() if v})
    return from_presentation(SparseIntMatrix.from_columns(n, cols))


def abelianization(g: FiniteGroup) -> FgAbelianGroup:
    return abelian_invariants(g, g.elements, derived_subgroup(g).members)


def relabel(g: FiniteGroup, perm: Sequence[int]) -> tuple[FiniteGroup, GroupHom]:
    """Isomorphic copy where old element a gets index perm[a] (perm[0] = 0)."""
    n = g.order
    if sorted(perm) != list(range(n)) or perm[0] != 0:
        raise GroupError("relabelling must be a permutation fixing 0")
    inv = [0] * n
    for a, p in enumerate(perm):
        inv[p] = a
    table = [[perm[g.mul(inv[x], inv[y])] for y in range(n)] for x in range(n)]
    h = FiniteGroup(table, [g.labels[inv[x]] for x in range(n)], g.name + "'")
    return h, GroupHom(g, h, tuple(perm), validate=False)


def find_isomorphism(g: FiniteGroup, h: FiniteGroup) -> GroupHom | None:
    """Exhaustive search over generator images; intended for tiny groups."""
    if g.order != h.order:
        return None
    # greedy small generating set of g
    gens: list[int] = []
    span = (0,)
    for x in sorted(g.elements, key=lambda a: -g.element_order(a)):
        if x not in span:
            gens.append(x)
            span = subgroup_closure(g, gens)
        if len(span) == g.order:
            break
    cands = [[y for y in h.elements if h.element_order(y) == g.element_order(x)] for x in gens]
    for imgs in itertools.product(*cands):
        phi = _extend(g, h, gens, imgs)
        if phi is not None and len(set(phi)) == g.order:
            try:
                return GroupHom(g, h, tuple(phi))
            except GroupError:
                continue
    return None


def _extend(g, h, gens, imgs):
    phi = {0: 0}
    frontier = [0]
    while frontier:
        nxt = []
        for a in frontier:
            for x, y in zip(gens, imgs):
                b = g.mul(a, x)
                v = h.mul(phi[a], y)
                if b in phi:
                    if phi[b] != v:
                        return None
                else:
                    phi[b] = v
                    nxt.append(b)
        frontier = nxt
    return [phi[a] for a in g.elements]
