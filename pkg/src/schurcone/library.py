"""Named test groups and the standard (G, N) / (G, M, N) batteries."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from . import groups as gr
from .expr import Evaluated, evaluate, subgroup_members


def a4_action_path() -> str:
    """Path of the bundled action file: Z(3) rotating the involutions of Z(2) x Z(2)."""
    return str(resources.files("schurcone") / "data" / "a4_action.json")


def a4_expr() -> str:
    return f"sd(Z(2) x Z(2), Z(3), @{a4_action_path()})"


# printed expressions; "A4" is expanded at evaluation time
LIBRARY_EXPRS = [
    "Z(2)", "Z(3)", "Z(4)", "Z(5)", "Z(6)", "Z(7)", "Z(8)", "Z(9)", "Z(10)", "Z(11)", "Z(12)",
    "Z(2) x Z(2)", "Z(2) x Z(4)", "Z(2) x Z(2) x Z(2)", "Z(3) x Z(3)", "Z(2) x Z(6)",
    "D(3)", "D(4)", "D(5)", "D(6)", "Q8", "S(3)", "A4", "sd(Z(3), Z(4), inv)",
    "Z(13)", "Z(14)", "Z(15)", "Z(16)", "D(7)", "D(8)", "Z(4) x Z(4)", "Z(2) x Z(8)",
    "Z(2) x Z(2) x Z(4)", "Z(2) x D(4)", "Z(2) x Q8",
]


def resolve(text: str) -> Evaluated:
    if text == "A4":
        ev = evaluate(a4_expr())
        ev.group.name = "A4"
        return ev
    return evaluate(text)


def library(max_order: int = 16) -> list[tuple[str, gr.FiniteGroup]]:
    out = []
    for text in LIBRARY_EXPRS:
        g = resolve(text).group
        if g.order <= max_order:
            out.append((text, g))
    return out


@dataclass(frozen=True)
class PairCase:
    group: str
    sub: str  # subgroup syntax, see expr.parse_sub

    def build(self) -> tuple[gr.FiniteGroup, gr.NormalSubgroup]:
        g = resolve(self.group).group
        return g, gr.NormalSubgroup(g, subgroup_members(g, self.sub))


@dataclass(frozen=True)
class TripleCase:
    group: str
    m: str
    n: str

    def build(self) -> tuple[gr.FiniteGroup, gr.NormalSubgroup, gr.NormalSubgroup]:
        g = resolve(self.group).group
        return (g, gr.NormalSubgroup(g, subgroup_members(g, self.m)),
                gr.NormalSubgroup(g, subgroup_members(g, self.n)))


# element indices: D(n) has r^i s^j at i + n j; Q8 lists 1,-1,i,-i,j,-j,k,-k;
# products list (a, b) at a |G2| + b
FIVE_TERM_PAIRS = [
    PairCase("D(4)", "gen[1]"),            # rotations Z4
    PairCase("S(3)", "derived"),           # A3
    PairCase("Z(4)", "gen[2]"),            # 2Z4
    PairCase("Q8", "center"),
    PairCase("D(4)", "center"),
    PairCase("D(4)", "gen[2,4]"),          # Klein four subgroup {1, r^2, s, r^2 s}
    PairCase("Z(2) x Z(2)", "gen[1]"),
    PairCase("Z(6)", "gen[2]"),
    PairCase("Q8", "gen[2]"),              # <i>
    PairCase("A4", "gen[1,2]"),            # Klein four in A4
    PairCase("Z(2) x Z(4)", "gen[2]"),
    PairCase("D(3)", "whole"),
    PairCase("Z(8)", "trivial"),
]

# all with G = MN
PUSHOUT_TRIPLES = [
    TripleCase("Z(2) x Z(2)", "gen[2]", "gen[1]"),
    TripleCase("Z(4)", "whole", "whole"),
    TripleCase("Z(2) x Z(2)", "whole", "gen[1]"),
    TripleCase("D(4)", "gen[1]", "gen[2,4]"),
    TripleCase("Z(6)", "gen[2]", "gen[3]"),
    TripleCase("Q8", "gen[2]", "gen[4]"),
]

# extra triples without G = MN, for Mayer-Vietoris exactness
OTHER_TRIPLES = [
    TripleCase("Z(4)", "gen[2]", "gen[2]"),
    TripleCase("D(4)", "gen[1]", "center"),
    TripleCase("Z(2) x Z(4)", "gen[4]", "gen[2]"),
]
