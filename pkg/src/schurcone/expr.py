"""Group expressions: parse, print, evaluate.

Grammar (whitespace is insignificant, ``x`` is left-associative)::

    expr   := term ("x" term)*
    term   := "Z(" int ")" | "D(" int ")" | "Q8" | "S(" int ")"
            | "sd(" expr "," expr "," action ")" | "quot(" expr "," sub ")"
            | "(" expr ")"
    sub    := "gen[" int ("," int)* "]" | "derived" | "center" | "whole" | "trivial"
    action := "inv" | "@" path

``@path`` names a JSON file ``{"action": [[...], ...]}`` whose row q is the
automorphism of the normal factor by which element q acts.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

from . import groups as gr


class ExprSyntaxError(ValueError):
    def __init__(self, text: str, pos: int, msg: str):
        super().__init__(f"{msg} at position {pos}: {text!r}")
        self.text, self.pos, self.msg = text, pos, msg


class ExprEvalError(ValueError):
    """Semantic errors: non-normal quotient, invalid action, unsupported size."""


# -- AST ----------------------------------------------------------------------


@dataclass(frozen=True)
class Cyclic:
    n: int

    def __str__(self):
        return f"Z({self.n})"


@dataclass(frozen=True)
class Dihedral:
    n: int

    def __str__(self):
        return f"D({self.n})"


@dataclass(frozen=True)
class Quaternion:
    def __str__(self):
        return "Q8"


@dataclass(frozen=True)
class Symmetric:
    n: int

    def __str__(self):
        return f"S({self.n})"


@dataclass(frozen=True)
class Product:
    left: object
    right: object

    def __str__(self):
        r = f"({self.right})" if isinstance(self.right, Product) else str(self.right)
        return f"{self.left} x {r}"


@dataclass(frozen=True)
class Inversion:
    def __str__(self):
        return "inv"


@dataclass(frozen=True)
class ActionFile:
    path: str

    def __str__(self):
        return f"@{self.path}"


@dataclass(frozen=True)
class Semidirect:
    normal: object
    acting: object
    action: object

    def __str__(self):
        return f"sd({self.normal}, {self.acting}, {self.action})"


@dataclass(frozen=True)
class Gen:
    indices: tuple[int, ...]

    def __str__(self):
        return "gen[" + ",".join(map(str, self.indices)) + "]"


@dataclass(frozen=True)
class NamedSub:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Quotient:
    group: object
    sub: object

    def __str__(self):
        return f"quot({self.group}, {self.sub})"


SUB_NAMES = ("derived", "center", "whole", "trivial")
# longest keywords first so that "quot" never lexes as something shorter
_KEYWORDS = ("quot", "sd", "gen", "derived", "center", "whole", "trivial", "inv", "Q8", "Z", "D", "S", "x")
_PUNCT = "()[],"


def _tokenize(text: str) -> list[tuple[str, object, int]]:
    toks, i, n = [], 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in _PUNCT:
            toks.append((c, c, i))
            i += 1
            continue
        if c.isdigit():
            m = re.match(r"\d+", text[i:])
            toks.append(("int", int(m.group()), i))
            i += len(m.group())
            continue
        if c == "@":
            m = re.match(r"@([^\s,()]+)", text[i:])
            if not m:
                raise ExprSyntaxError(text, i, "expected a file path after '@'")
            toks.append(("path", m.group(1), i))
            i += len(m.group())
            continue
        for kw in _KEYWORDS:
            if text.startswith(kw, i):
                toks.append(("kw", kw, i))
                i += len(kw)
                break
        else:
            raise ExprSyntaxError(text, i, f"unexpected character {c!r}")
    toks.append(("end", None, n))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def error(self, msg):
        raise ExprSyntaxError(self.text, self.peek()[2], msg)

    def take(self, kind, value=None):
        t = self.peek()
        if t[0] != kind or (value is not None and t[1] != value):
            want = value if value is not None else kind
            got = t[1] if t[0] != "end" else "end of input"
            self.error(f"expected {want!r}, found {got!r}")
        self.i += 1
        return t[1]

    def is_kw(self, value):
        t = self.peek()
        return t[0] == "kw" and t[1] == value

    def expr(self):
        node = self.term()
        while self.is_kw("x"):
            self.i += 1
            node = Product(node, self.term())
        return node

    def int_arg(self):
        self.take("(")
        n = self.take("int")
        self.take(")")
        return n

    def term(self):
        t = self.peek()
        if t[0] == "(":
            self.i += 1
            node = self.expr()
            self.take(")")
            return node
        if t[0] != "kw":
            self.error("expected a group")
        kw = t[1]
        self.i += 1
        if kw == "Z":
            return Cyclic(self.int_arg())
        if kw == "D":
            return Dihedral(self.int_arg())
        if kw == "S":
            return Symmetric(self.int_arg())
        if kw == "Q8":
            return Quaternion()
        if kw == "sd":
            self.take("(")
            a = self.expr()
            self.take(",")
            b = self.expr()
            self.take(",")
            act = self.action()
            self.take(")")
            return Semidirect(a, b, act)
        if kw == "quot":
            self.take("(")
            a = self.expr()
            self.take(",")
            s = self.sub()
            self.take(")")
            return Quotient(a, s)
        self.i -= 1
        self.error(f"{kw!r} does not start a group")

    def action(self):
        t = self.peek()
        if t[0] == "kw" and t[1] == "inv":
            self.i += 1
            return Inversion()
        if t[0] == "path":
            self.i += 1
            return ActionFile(t[1])
        self.error("expected an action ('inv' or '@file')")

    def sub(self):
        t = self.peek()
        if t[0] == "kw" and t[1] in SUB_NAMES:
            self.i += 1
            return NamedSub(t[1])
        if t[0] == "kw" and t[1] == "gen":
            self.i += 1
            self.take("[")
            idx = [self.take("int")]
            while self.peek()[0] == ",":
                self.i += 1
                idx.append(self.take("int"))
            self.take("]")
            return Gen(tuple(idx))
        self.error("expected a subgroup (gen[...], derived, center, whole, trivial)")

    def finish(self):
        if self.peek()[0] != "end":
            self.error("unexpected trailing input")


def parse_group(text: str):
    p = _Parser(text)
    node = p.expr()
    p.finish()
    return node


def parse_sub(text: str):
    p = _Parser(text)
    node = p.sub()
    p.finish()
    return node


def to_text(node) -> str:
    return str(node)


# -- evaluation ---------------------------------------------------------------


@dataclass
class Evaluated:
    """A group together with any structure its expression provides."""

    expr: object
    group: gr.FiniteGroup
    semidirect: gr.SemidirectProduct | None = None
    product: gr.DirectProduct | None = None

    @property
    def text(self) -> str:
        return str(self.expr)


MAX_ORDER = 128


def evaluate(node) -> Evaluated:
    if isinstance(node, str):
        node = parse_group(node)
    return _evaluate(node)


@lru_cache(maxsize=256)
def _evaluate(node) -> Evaluated:
    name = str(node)
    if isinstance(node, Cyclic):
        if node.n < 1:
            raise ExprEvalError("Z(n) needs n >= 1")
        g = gr.cyclic(node.n)
    elif isinstance(node, Dihedral):
        if node.n < 1:
            raise ExprEvalError("D(n) needs n >= 1")
        g = gr.dihedral(node.n)
    elif isinstance(node, Quaternion):
        g = gr.quaternion8()
    elif isinstance(node, Symmetric):
        if not 1 <= node.n <= 4:
            raise ExprEvalError("S(n) is supported for 1 <= n <= 4")
        g = gr.symmetric(node.n)
    elif isinstance(node, Product):
        a, b = _evaluate(node.left).group, _evaluate(node.right).group
        if a.order * b.order > MAX_ORDER:
            raise ExprEvalError(f"product of order {a.order * b.order} exceeds {MAX_ORDER}")
        dp = gr.direct_product(a, b)
        dp.group.name = name
        return Evaluated(node, dp.group, product=dp)
    elif isinstance(node, Semidirect):
        n, q = _evaluate(node.normal).group, _evaluate(node.acting).group
        if n.order * q.order > MAX_ORDER:
            raise ExprEvalError(f"semidirect product of order {n.order * q.order} exceeds {MAX_ORDER}")
        try:
            if isinstance(node.action, Inversion):
                action = gr.inversion_action(n, q)
            else:
                action = load_action(node.action.path)
            sp = gr.semidirect_product(n, q, action)
        except (gr.GroupError, OSError, ValueError, KeyError) as exc:
            raise ExprEvalError(f"invalid action in {name}: {exc}") from exc
        sp.group.name = name
        return Evaluated(node, sp.group, semidirect=sp)
    elif isinstance(node, Quotient):
        base = _evaluate(node.group).group
        members = subgroup_members(base, node.sub)
        if not gr.is_normal(base, members):
            raise ExprEvalError(f"{node.sub} is not normal in {node.group}")
        g, _ = gr.quotient(base, members)
    else:
        raise ExprEvalError(f"cannot evaluate {node!r}")
    g.name = name
    return Evaluated(node, g)


def load_action(path: str) -> list[list[int]]:
    with open(Path(path), encoding="utf-8") as fh:
        data = json.load(fh)
    return [list(row) for row in data["action"]]


def subgroup_members(g: gr.FiniteGroup, sub) -> tuple[int, ...]:
    if isinstance(sub, str):
        sub = parse_sub(sub)
    if isinstance(sub, Gen):
        bad = [i for i in sub.indices if not 0 <= i < g.order]
        if bad:
            raise ExprEvalError(f"element index {bad[0]} out of range for a group of order {g.order}")
        return gr.subgroup_closure(g, sub.indices)
    name = sub.name
    if name == "derived":
        return gr.derived_subgroup(g).members
    if name == "center":
        return gr.center(g).members
    if name == "whole":
        return tuple(g.elements)
    if name == "trivial":
        return (0,)
    raise ExprEvalError(f"unknown subgroup {name!r}")


def normal_subgroup(g: gr.FiniteGroup, sub) -> gr.NormalSubgroup:
    members = subgroup_members(g, sub)
    if not gr.is_normal(g, members):
        raise ExprEvalError(f"{sub} is not a normal subgroup of {g.name}")
    return gr.NormalSubgroup(g, members)
