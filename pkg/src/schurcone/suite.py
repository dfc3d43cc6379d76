"""The acceptance battery: one function per numbered criterion.

Each function returns a :class:`CriterionResult`; the ``items`` list holds
one record per instance checked.  Keys named in ``VOLATILE_KEYS`` carry
timings or counters and are excluded when comparing two runs.
"""

from __future__ import annotations

import itertools
import json
import os
import random
import subprocess
import sys
import tempfile
import time
from dataclasses import dataclass, field
from math import gcd
from typing import Callable

from . import groups as gr
from .abgrp import TRIVIAL, FgAbelianGroup, kunneth_h3
from .barhom import BOUNDARY_CHECKS, DEFAULT_MAX_RANK, ChainComplexError, homology_group
from .cones import (
    ellis_triple_multiplier,
    group_homology,
    pair_complex,
    pair_multiplier,
    schur_multiplier,
    triple_multiplier_pushout,
    triple_pushout_complex,
)
from .formulas import (
    homology_list,
    meet_mod_commutator,
    multiplier_direct_product_formula,
    relative_h2_oracle,
    verify_five_term,
    verify_mayer_vietoris,
    verify_semidirect_split,
)
from .intmat import SparseIntMatrix, determinant, snf
from .library import FIVE_TERM_PAIRS, OTHER_TRIPLES, PUSHOUT_TRIPLES, library, resolve

VOLATILE_KEYS = frozenset({"seconds", "timing_ms", "cache_hits", "stats"})


@dataclass
class CriterionResult:
    number: int
    title: str
    items: list[dict] = field(default_factory=list)
    seconds: float = 0.0
    note: str = ""

    @property
    def passed(self) -> bool:
        return bool(self.items) and all(it["passed"] for it in self.items)

    def add(self, label: str, passed: bool, **info) -> dict:
        item = {"label": label, "passed": bool(passed), **info}
        self.items.append(item)
        return item

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        ok = sum(1 for i in self.items if i["passed"])
        return f"criterion {self.number:2d} {status}  {self.title} ({ok}/{len(self.items)} instances)"

    def to_json(self) -> dict:
        out = {"number": self.number, "title": self.title, "passed": self.passed, "items": self.items,
               "seconds": round(self.seconds, 3)}
        if self.note:
            out["note"] = self.note
        return out


def _timed_item(res: CriterionResult, label: str, fn: Callable[[], tuple[bool, dict]], limit: float | None = None):
    t0 = time.perf_counter()
    ok, info = fn()
    dt = time.perf_counter() - t0
    within = limit is None or dt < limit
    if limit is not None:
        info["time_limit_s"] = limit
        info["within_time_limit"] = within
    res.add(label, ok and within, seconds=round(dt, 3), **info)


# -- criteria -------------------------------------------------------------------


def criterion_1(max_rank: int = DEFAULT_MAX_RANK) -> CriterionResult:
    res = CriterionResult(1, "H3(Z_m) = Z_m and H2(Z_m) = 0 for m = 2..8")
    for m in range(2, 9):
        def run(m=m):
            g = gr.cyclic(m)
            h3, h2 = group_homology(g, 3, max_rank), group_homology(g, 2, max_rank)
            ok = h3 == FgAbelianGroup.cyclic(m) and h2 == TRIVIAL
            return ok, {"H3": str(h3), "H2": str(h2), "expected_H3": f"Z/{m}"}
        _timed_item(res, f"Z({m})", run, limit=10.0)
    return res


PRODUCT_FACTORS = ["Z(2)", "Z(3)", "Z(4)", "Z(5)", "Z(6)", "Z(7)", "Z(8)",
                   "Z(2) x Z(2)", "Z(2) x Z(4)", "S(3)", "D(4)", "Q8"]


def product_instances(max_order: int = 16) -> list[tuple[str, str]]:
    out = []
    for i, a in enumerate(PRODUCT_FACTORS):
        for b in PRODUCT_FACTORS[i:]:
            if resolve(a).group.order * resolve(b).group.order <= max_order:
                out.append((a, b))
    return out


def criterion_2(max_rank: int = DEFAULT_MAX_RANK) -> CriterionResult:
    res = CriterionResult(2, "H2 of products equals M(G1) + M(G2) + G1ab (x) G2ab")
    t0 = time.perf_counter()
    for a, b in product_instances():
        def run(a=a, b=b):
            g1, g2 = resolve(a).group, resolve(b).group
            direct = schur_multiplier(gr.direct_product(g1, g2).group, max_rank)
            formula = multiplier_direct_product_formula(
                schur_multiplier(g1, max_rank), schur_multiplier(g2, max_rank),
                group_homology(g1, 1, max_rank), group_homology(g2, 1, max_rank))
            return direct == formula, {"H2": str(direct), "formula": str(formula)}
        _timed_item(res, f"{a} x {b}", run)
    total = time.perf_counter() - t0
    res.add("at least 10 instances", len(res.items) >= 10, count=len(res.items))
    res.add("suite under 5 minutes", total < 300.0, seconds=round(total, 3))
    return res


def criterion_3(max_rank: int = DEFAULT_MAX_RANK) -> CriterionResult:
    res = CriterionResult(3, "pair multiplier M(G,G) equals H2(G), |G| <= 12")
    for label, g in library(12):
        def run(g=g):
            mp, h2 = pair_multiplier(g, gr.whole(g), max_rank), schur_multiplier(g, max_rank)
            return mp == h2, {"M(G,G)": str(mp), "H2": str(h2)}
        _timed_item(res, label, run)
    return res


def criterion_4(max_rank: int = DEFAULT_MAX_RANK) -> CriterionResult:
    res = CriterionResult(4, "pair multiplier M(G,1) = 0, |G| <= 12")
    for label, g in library(12):
        def run(g=g):
            mp = pair_multiplier(g, gr.trivial_subgroup(g), max_rank)
            return mp.is_trivial, {"M(G,1)": str(mp)}
        _timed_item(res, label, run)
    return res


def criterion_5(max_rank: int = DEFAULT_MAX_RANK) -> CriterionResult:
    res = CriterionResult(5, "five-term sequence exact at every node")
    for case in FIVE_TERM_PAIRS:
        def run(case=case):
            g, n = case.build()
            rep = verify_five_term(g, n, case.group, max_rank)
            seq = rep.sequences[0]
            nodes = [{"node": c.node, "exact": c.exact, "composite_zero": c.composite_zero,
                      "image": str(c.image), "kernel": str(c.kernel)} for c in seq.checks]
            return seq.exact, {"sub": case.sub, "nodes": nodes, "truncated": bool(seq.note)}
        _timed_item(res, f"({case.group}, {case.sub})", run)
    res.add("at least 10 pairs", len(FIVE_TERM_PAIRS) >= 10, count=len(FIVE_TERM_PAIRS))
    return res


def criterion_6(max_rank: int = DEFAULT_MAX_RANK) -> CriterionResult:
    res = CriterionResult(6, "H2(cone(G -> G/N)) = N/[N,G]")
    for case in FIVE_TERM_PAIRS:
        def run(case=case):
            g, n = case.build()
            h2 = homology_group(pair_complex(g, n, 3, max_rank).cone, 2)
            oracle = relative_h2_oracle(g, n)
            return h2 == oracle, {"H2(cone)": str(h2), "N/[N,G]": str(oracle)}
        _timed_item(res, f"({case.group}, {case.sub})", run)
    return res


def criterion_7(max_rank: int = DEFAULT_MAX_RANK) -> CriterionResult:
    res = CriterionResult(7, "G = MN: H1(pushout) = 0 and H2(pushout) = (M cap N)/[M,N]")
    for case in PUSHOUT_TRIPLES:
        def run(case=case):
            g, m, n = case.build()
            assert len(gr.product_subgroup(g, m.members, n.members)) == g.order
            po = triple_pushout_complex(g, m, n, 3, max_rank).pushout
            h1, h2 = homology_group(po, 1), homology_group(po, 2)
            oracle = meet_mod_commutator(g, m, n)
            return h1.is_trivial and h2 == oracle, {"H1": str(h1), "H2": str(h2), "oracle": str(oracle)}
        _timed_item(res, f"({case.group}, {case.m}, {case.n})", run)
    res.add("at least 3 triples", len(res.items) >= 3, count=len(res.items))
    return res


SEMIDIRECT_CASES = [
    ("sd(Z(3), Z(2), inv)", "S(3)"),
    ("sd(Z(4), Z(2), inv)", "D(4)"),
    ("sd(Z(3), Z(4), inv)", None),
    ("A4", None),
    ("sd(Z(6), Z(2), inv)", "D(6)"),
]


def criterion_8(max_rank: int = DEFAULT_MAX_RANK) -> CriterionResult:
    res = CriterionResult(8, "M(G) = M(G,N) + M(Q) for semidirect products")
    for text, iso_to in SEMIDIRECT_CASES:
        def run(text=text, iso_to=iso_to):
            sp = resolve(text).semidirect
            rep = verify_semidirect_split(sp.group, sp.normal, sp.retraction, sp.section, text, max_rank)
            info = {"order": sp.group.order, **rep.values}
            ok = rep.passed
            if iso_to is not None:
                iso = gr.find_isomorphism(sp.group, resolve(iso_to).group) is not None
                info["isomorphic_to"] = iso_to
                ok = ok and iso
            return ok, info
        _timed_item(res, text, run)
    res.add("an order-12 instance", any(it.get("order") == 12 and it["passed"] for it in res.items))
    return res


def criterion_9(max_rank: int = DEFAULT_MAX_RANK) -> CriterionResult:
    res = CriterionResult(9, "G = MN: Ellis H4 equals pushout H3, |G| <= 8")
    for case in PUSHOUT_TRIPLES:
        g, _, _ = case.build()
        if g.order > 8:
            continue

        def run(case=case):
            g, m, n = case.build()
            e4 = ellis_triple_multiplier(g, m, n, max_rank)
            x3 = triple_multiplier_pushout(g, m, n, max_rank)
            return e4 == x3, {"ellis_H4": str(e4), "pushout_H3": str(x3)}
        _timed_item(res, f"({case.group}, {case.m}, {case.n})", run, limit=300.0)
    res.add("at least 3 triples", len(res.items) >= 3, count=len(res.items))
    return res


ABELIAN_FACTORS = ["Z(2)", "Z(3)", "Z(4)", "Z(5)", "Z(6)", "Z(7)", "Z(8)", "Z(2) x Z(2)", "Z(2) x Z(4)"]


def abelian_instances(max_order: int = 16) -> list[tuple[str, str]]:
    out = []
    for i, a in enumerate(ABELIAN_FACTORS):
        for b in ABELIAN_FACTORS[i:]:
            if resolve(a).group.order * resolve(b).group.order <= max_order:
                out.append((a, b))
    return out


def criterion_10(max_rank: int = DEFAULT_MAX_RANK) -> CriterionResult:
    res = CriterionResult(10, "Kunneth H3 formula equals H3 of abelian products")
    for a, b in abelian_instances():
        def run(a=a, b=b):
            g1, g2 = resolve(a).group, resolve(b).group
            predicted = kunneth_h3(homology_list(g1, 3, max_rank), homology_list(g2, 3, max_rank))
            direct = group_homology(gr.direct_product(g1, g2).group, 3, max_rank)
            return predicted == direct, {"H3": str(direct), "kunneth": str(predicted)}
        _timed_item(res, f"{a} x {b}", run)
    return res


def criterion_11(max_rank: int = DEFAULT_MAX_RANK) -> CriterionResult:
    res = CriterionResult(11, "Mayer-Vietoris exactness of every pushout up to degree 3")
    for case in PUSHOUT_TRIPLES + OTHER_TRIPLES:
        def run(case=case):
            g, m, n = case.build()
            rep = verify_mayer_vietoris(g, m, n, [case.group, case.m, case.n], max_rank)
            seq = rep.sequences[0]
            return seq.exact, {"nodes": [{"node": c.node, "exact": c.exact} for c in seq.checks],
                               "truncated": bool(seq.note)}
        _timed_item(res, f"({case.group}, {case.m}, {case.n})", run)
    return res


def criterion_12(suite_cmd: list[str] | None = None, timeout: float = 3600.0) -> CriterionResult:
    """Two consecutive runs of the suite command, cache-cold then cache-warm."""
    res = CriterionResult(12, "suite output identical cold vs warm cache (timing excluded)")
    cmd = suite_cmd or [sys.executable, "-m", "schurcone.cli", "--json"]
    with tempfile.TemporaryDirectory(prefix="schurcone-det-") as tmp:
        outs = []
        for run in ("cold", "warm"):
            t0 = time.perf_counter()
            proc = subprocess.run(cmd + ["--cache-dir", tmp, "suite", "--skip", "12"],
                                  capture_output=True, text=True, timeout=timeout,
                                  env={**os.environ, "PYTHONHASHSEED": "0"})
            dt = time.perf_counter() - t0
            try:
                doc = json.loads(proc.stdout)
            except ValueError:
                doc = None
            outs.append(doc)
            hits = doc.get("cache_hits") if doc else None
            res.add(f"{run} run completed", doc is not None, exit_code=proc.returncode,
                    seconds=round(dt, 3), cache_hits=hits)
        same = outs[0] is not None and strip_volatile(outs[0]) == strip_volatile(outs[1])
        res.add("results identical", same)
        warm_hits = outs[1].get("cache_hits", 0) if outs[1] else 0
        res.add("warm run used the cache", warm_hits > 0, cache_hits=warm_hits)
    return res


def strip_volatile(doc):
    if isinstance(doc, dict):
        return {k: strip_volatile(v) for k, v in doc.items() if k not in VOLATILE_KEYS}
    if isinstance(doc, list):
        return [strip_volatile(v) for v in doc]
    return doc


def determinantal_divisors(rows: list[list[int]]) -> list[int]:
    """d_k = gcd of all k x k minors; invariant factors are d_k / d_{k-1}."""
    m, n = len(rows), len(rows[0]) if rows else 0
    out = []
    for k in range(1, min(m, n) + 1):
        g = 0
        for ri in itertools.combinations(range(m), k):
            for ci in itertools.combinations(range(n), k):
                sub = SparseIntMatrix.from_dense([[rows[i][j] for j in ci] for i in ri], k)
                g = gcd(g, determinant(sub))
        if g == 0:
            break
        out.append(g)
    return out


def invariant_factors_from_divisors(ds: list[int]) -> list[int]:
    prev, out = 1, []
    for d in ds:
        out.append(d // prev)
        prev = d
    return out


def random_matrix(rng: random.Random, max_dim: int = 6, bound: int = 9) -> list[list[int]]:
    m, n = rng.randint(1, max_dim), rng.randint(1, max_dim)
    return [[rng.randint(-bound, bound) for _ in range(n)] for _ in range(m)]


def snf_matches_oracle(rows: list[list[int]]) -> bool:
    a = SparseIntMatrix.from_dense(rows, len(rows[0]))
    res = snf(a)
    expected = invariant_factors_from_divisors(determinantal_divisors(rows))
    if list(res.invariant_factors) != expected:
        return False
    # the transforms must reproduce the diagonal form
    d = res.left @ a @ res.right
    diag = {(i, i): v for i, v in enumerate(res.diag) if v}
    return d.entries == diag


def criterion_13(samples: int = 500, seed: int = 20240607) -> CriterionResult:
    res = CriterionResult(13, "SNF equals the determinantal-divisor oracle; d^2 = 0 never fails")
    rng = random.Random(seed)
    bad = []
    t0 = time.perf_counter()
    for i in range(samples):
        rows = random_matrix(rng)
        if not snf_matches_oracle(rows):
            bad.append(i)
    res.add(f"{samples} random matrices up to 6x6, entries in [-9, 9]", not bad,
            mismatches=bad, seconds=round(time.perf_counter() - t0, 3))
    # ChainComplex raises on any d^2 != 0; build a fresh sweep of cones so the
    # check has run at least once even when this criterion runs on its own
    before = BOUNDARY_CHECKS["complexes"]
    failures = []
    for case in FIVE_TERM_PAIRS:
        g, n = case.build()
        try:
            pair_complex(g, n)
        except ChainComplexError as exc:
            failures.append(f"{case.group} {case.sub}: {exc}")
    checked = BOUNDARY_CHECKS["complexes"] - before
    res.add("d^2 = 0 on every complex built", not failures and checked > 0, failures=failures,
            stats=dict(BOUNDARY_CHECKS))
    return res


CRITERIA: dict[int, Callable[..., CriterionResult]] = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5, 6: criterion_6,
    7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10, 11: criterion_11,
    12: criterion_12, 13: criterion_13,
}

_TAKES_BUDGET = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11}


def run_criterion(number: int, max_rank: int = DEFAULT_MAX_RANK) -> CriterionResult:
    fn = CRITERIA[number]
    t0 = time.perf_counter()
    res = fn(max_rank) if number in _TAKES_BUDGET else fn()
    res.seconds = time.perf_counter() - t0
    return res


def run_suite(numbers=None, max_rank: int = DEFAULT_MAX_RANK, progress: Callable[[str], None] | None = None):
    out = []
    for k in numbers or sorted(CRITERIA):
        res = run_criterion(k, max_rank)
        if progress:
            progress(res.line())
        out.append(res)
    return out
