"""Finitely generated abelian groups in invariant-factor form.

A group is ``Z^r + Z/d1 + ... + Z/dk`` with ``2 <= d1 | d2 | ... | dk``.
The canonical form makes isomorphism testing plain equality, which is what
all the multiplier comparisons rely on.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import gcd, prod
from typing import Iterable, Sequence

from .intmat import SparseIntMatrix, invariant_chain, snf


@dataclass(frozen=True, order=True)
class FgAbelianGroup:
    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(t) for t in self.torsion))
        if self.free_rank < 0:
            raise ValueError("free rank must be nonnegative")
        for t in self.torsion:
            if t < 2:
                raise ValueError(f"invariant factor {t} < 2")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"torsion {self.torsion} is not a divisibility chain")

    @classmethod
    def from_cyclic(cls, orders: Iterable[int]) -> "FgAbelianGroup":
        """Direct sum of cyclic groups Z/n (n = 0 meaning Z)."""
        orders = list(orders)
        free = sum(1 for n in orders if n == 0)
        return cls(free, tuple(invariant_chain(n for n in orders if n)))

    @classmethod
    def trivial(cls) -> "FgAbelianGroup":
        return cls()

    @classmethod
    def cyclic(cls, n: int) -> "FgAbelianGroup":
        return cls.from_cyclic([n])

    @classmethod
    def parse(cls, text: str) -> "FgAbelianGroup":
        """Inverse of ``str``: accepts ``0``, ``Z``, ``Z^3 + Z/2 + Z/4``."""
        s = text.strip()
        if s in ("0", "1"):
            return cls()
        rank, orders = 0, []
        for part in s.split("+"):
            part = part.strip()
            m = re.fullmatch(r"Z(?:\^(\d+))?", part)
            if m:
                rank += int(m.group(1) or 1)
                continue
            m = re.fullmatch(r"Z/(\d+)", part)
            if m:
                orders.append(int(m.group(1)))
                continue
            raise ValueError(f"cannot parse abelian group term {part!r} in {text!r}")
        return cls.from_cyclic([0] * rank + orders)

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"

    def __repr__(self) -> str:
        return f"FgAbelianGroup({self})"

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def order(self) -> int | None:
        """Cardinality, or ``None`` for an infinite group."""
        return prod(self.torsion) if self.free_rank == 0 else None

    @property
    def cyclic_orders(self) -> tuple[int, ...]:
        """Orders of the coordinate generators: torsion first, then 0 for Z."""
        return self.torsion + (0,) * self.free_rank

    def elementary_divisors(self) -> list[int]:
        out = []
        for t in self.torsion:
            n, p = t, 2
            while p * p <= n:
                if n % p == 0:
                    q = 1
                    while n % p == 0:
                        n //= p
                        q *= p
                    out.append(q)
                p += 1
            if n > 1:
                out.append(n)
        return sorted(out)

    def __add__(self, other: "FgAbelianGroup") -> "FgAbelianGroup":
        return direct_sum(self, other)


def from_presentation(rel: SparseIntMatrix) -> FgAbelianGroup:
    """Cokernel of ``rel``: generators are rows, relations are columns."""
    res = snf(rel, transforms=False)
    r = res.rank
    return FgAbelianGroup(rel.rows - r, tuple(d for d in res.invariant_factors if d > 1))


def direct_sum(*groups: FgAbelianGroup) -> FgAbelianGroup:
    return FgAbelianGroup.from_cyclic([n for g in groups for n in g.cyclic_orders])


def tensor(a: FgAbelianGroup, b: FgAbelianGroup) -> FgAbelianGroup:
    # Z (x) Z = Z, Z (x) Z/n = Z/n, Z/m (x) Z/n = Z/gcd(m, n); bilinear over sums
    return FgAbelianGroup.from_cyclic([gcd(m, n) for m in a.cyclic_orders for n in b.cyclic_orders])


def tor(a: FgAbelianGroup, b: FgAbelianGroup) -> FgAbelianGroup:
    return FgAbelianGroup.from_cyclic([gcd(m, n) for m in a.torsion for n in b.torsion])


def kunneth_h3(h1: Sequence[FgAbelianGroup], h2: Sequence[FgAbelianGroup]) -> FgAbelianGroup:
    """Degree-3 homology of a product from the factors' H1, H2, H3.

    ``h1`` and ``h2`` are indexed by degree (entry 0 is ignored; H0 = Z is
    assumed).  Returns H3(G1) + H2(G1)(x)H1(G2) + H1(G1)(x)H2(G2) + H3(G2)
    + Tor(H1(G1), H1(G2)).
    """
    return direct_sum(
        h1[3],
        tensor(h1[2], h2[1]),
        tensor(h1[1], h2[2]),
        h2[3],
        tor(h1[1], h2[1]),
    )


def is_subquotient_bound(sub: FgAbelianGroup, big: FgAbelianGroup) -> bool:
    """True when the finite group ``sub`` is isomorphic to a quotient of ``big``.

    For finite abelian groups this holds iff, prime by prime, the sorted
    exponent partition of ``sub`` is dominated entrywise by that of ``big``.
    """
    if not (sub.is_finite and big.is_finite):
        raise ValueError("quotient test is only implemented for finite groups")

    def parts(g):
        out: dict[int, list[int]] = {}
        for q in g.elementary_divisors():
            p = min(d for d in range(2, q + 1) if q % d == 0)
            e = 0
            while q > 1:
                q //= p
                e += 1
            out.setdefault(p, []).append(e)
        return {p: sorted(es, reverse=True) for p, es in out.items()}

    ps, pb = parts(sub), parts(big)
    for p, es in ps.items():
        eb = pb.get(p, [])
        if len(es) > len(eb) or any(x > y for x, y in zip(es, eb)):
            return False
    return True


TRIVIAL = FgAbelianGroup()
Z = FgAbelianGroup(1)
