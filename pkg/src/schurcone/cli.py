"""Command-line front end.

Exit codes: 0 ok, 2 parse error, 3 precondition error, 4 size budget
exceeded, 5 verification failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from typing import Sequence

from . import __version__
from . import cache as cachemod
from . import formulas as fm
from . import groups as gr
from .barhom import DEFAULT_MAX_RANK, BudgetExceeded
from .cones import (ellis_triple_multiplier, group_homology, long_exact_sequence, mayer_vietoris,
                    pair_complex, pair_multiplier, triple_multiplier_pushout, triple_pushout_complex)
from .expr import ExprEvalError, ExprSyntaxError, normal_subgroup, parse_sub, subgroup_members
from .library import FIVE_TERM_PAIRS, OTHER_TRIPLES, PUSHOUT_TRIPLES, library, resolve

EXIT_OK, EXIT_PARSE, EXIT_PRECONDITION, EXIT_BUDGET, EXIT_VERIFY = 0, 2, 3, 4, 5

THEOREM_IDS = ("2.1", "2.2", "2.3", "2.5-window", "2.6i", "2.6ii", "2.6iii", "2.7", "2.8", "3.2i", "3.3",
               "3.5-window", "3.6i", "3.6ii", "3.6iii", "five-term", "mv-les")


class CliError(Exception):
    def __init__(self, code: int, msg: str):
        super().__init__(msg)
        self.code = code


# -- report ---------------------------------------------------------------------


def make_report(command: str, inputs: Sequence[str], results: dict, sequences: Sequence[dict],
                t0: float, cache: cachemod.DiskCache | None) -> dict:
    # field order is part of the contract
    return {
        "command": command,
        "inputs": list(inputs),
        "results": results,
        "sequences": list(sequences),
        "timing_ms": round((time.perf_counter() - t0) * 1000.0, 3),
        "cache_hits": cache.hits if cache else 0,
        "tool_version": __version__,
    }


# -- argument helpers -------------------------------------------------------------


def _group(text: str):
    return resolve(text)


def _sub(g: gr.FiniteGroup, text: str) -> tuple[int, ...]:
    return subgroup_members(g, parse_sub(text))


def _normal(g: gr.FiniteGroup, text: str) -> gr.NormalSubgroup:
    return normal_subgroup(g, parse_sub(text))


# -- commands ---------------------------------------------------------------------


def cmd_multiplier(args) -> tuple[dict, list, list[str]]:
    ev = _group(args.expr)
    m = group_homology(ev.group, 2, args.max_rank)
    return {"M(G)": str(m)}, [], [ev.text]


def cmd_homology(args):
    if not 0 <= args.degree <= 4:
        raise CliError(EXIT_PRECONDITION, "--degree must be between 0 and 4")
    ev = _group(args.expr)
    h = group_homology(ev.group, args.degree, args.max_rank)
    return {f"H{args.degree}(G)": str(h)}, [], [ev.text]


def cmd_pair(args):
    ev = _group(args.expr)
    n = _normal(ev.group, args.sub)
    out = {"M(G,N)": str(pair_multiplier(ev.group, n, args.max_rank))}
    seqs = []
    if args.sequence:
        pc = pair_complex(ev.group, n, 3, args.max_rank)
        seqs.append(long_exact_sequence(pc.cone, 3, {"A": "G", "B": "G/N", "C": "K(G,N)"}, "five-term").to_json())
    return out, seqs, [ev.text, args.sub]


def cmd_triple(args):
    ev = _group(args.expr)
    m, n = _normal(ev.group, args.sub1), _normal(ev.group, args.sub2)
    if args.ellis:
        out = {"M(G,M,N) ellis": str(ellis_triple_multiplier(ev.group, m, n, args.max_rank))}
    else:
        out = {"M(G,M,N)": str(triple_multiplier_pushout(ev.group, m, n, args.max_rank))}
    seqs = []
    if args.sequence and not args.ellis:
        seqs.append(mayer_vietoris(triple_pushout_complex(ev.group, m, n, 3, args.max_rank)).to_json())
    return out, seqs, [ev.text, args.sub1, args.sub2]


def cmd_elements(args):
    ev = _group(args.expr)
    g = ev.group
    rows = [{"index": a, "label": g.labels[a], "order": g.element_order(a)} for a in g.elements]
    return {"order": str(g.order), "elements": rows}, [], [ev.text]


# -- verify -------------------------------------------------------------------------

# default inputs per theorem id (used when no inputs are given)
DEFAULT_INPUTS: dict[str, list[list[str]]] = {
    "2.1": [[t] for t, g in library(12)],
    "2.2": [[t] for t, g in library(12)],
    "2.3": [["D(4)", "gen[1]", "S(3)", "derived"], ["D(4)", "whole", "Q8", "whole"],
            ["Z(2) x Z(2)", "trivial", "S(3)", "trivial"]],
    "2.5-window": [["Z(2)", "whole", "Z(2)", "trivial"], ["Z(2)", "trivial", "Z(4)", "gen[2]"],
                   ["S(3)", "derived", "Z(2)", "whole"]],
    "2.6i": [["Z(2)", "trivial", "Z(2)", "trivial"], ["Z(4)", "gen[2]", "Z(2)", "trivial"],
             ["D(4)", "gen[1]", "Z(2)", "trivial"]],
    "2.6ii": [["Z(4)", "gen[2]", "Z(3)", "trivial"], ["S(3)", "derived", "Z(3)", "whole"]],
    "2.6iii": [["Z(2)", "trivial", "Z(3)", "trivial"], ["Z(4)", "gen[2]", "Z(3)", "trivial"]],
    "2.7": [["sd(Z(3), Z(2), inv)"], ["sd(Z(4), Z(2), inv)"], ["sd(Z(3), Z(4), inv)"], ["A4"]],
    "2.8": [["D(4)", "gen[1]", "gen[2]"], ["D(4)", "gen[1]", "gen[1]"], ["D(4)", "gen[4]", "gen[1]"]],
    "3.2i": [[c.group, c.m, c.n] for c in PUSHOUT_TRIPLES],
    "3.3": [["Z(2) x Z(2)", "gen[2]", "gen[1]", "Z(4)", "whole", "whole"],
            ["Z(2) x Z(2)", "gen[2]", "gen[1]", "Z(2) x Z(2)", "gen[1]", "gen[2]"],
            ["D(4)", "whole", "gen[1]", "Z(2)", "trivial", "trivial"]],
    "3.5-window": [["Z(2)", "whole", "trivial", "Z(2)", "trivial", "whole"],
                   ["Z(2)", "trivial", "whole", "Z(4)", "gen[2]", "gen[2]"]],
    "3.6i": [["Z(2)", "whole", "trivial", "Z(2)", "trivial", "whole"],
             ["Z(4)", "gen[2]", "trivial", "Z(2)", "trivial", "trivial"]],
    "3.6ii": [["Z(4)", "gen[2]", "trivial", "Z(3)", "trivial", "whole"]],
    "3.6iii": [["Z(2)", "trivial", "whole", "Z(3)", "trivial", "trivial"],
               ["Z(4)", "gen[2]", "trivial", "Z(3)", "trivial", "whole"]],
    "five-term": [[c.group, c.sub] for c in FIVE_TERM_PAIRS],
    "mv-les": [[c.group, c.m, c.n] for c in PUSHOUT_TRIPLES + OTHER_TRIPLES],
}

ARITY = {"2.1": 1, "2.2": 1, "2.3": 4, "2.5-window": 4, "2.6i": 4, "2.6ii": 4, "2.6iii": 4, "2.7": 1,
         "2.8": 3, "3.2i": 3, "3.3": 6, "3.5-window": 6, "3.6i": 6, "3.6ii": 6, "3.6iii": 6,
         "five-term": 2, "mv-les": 3}


def run_verification(tid: str, inputs: Sequence[str], max_rank: int) -> fm.VerificationReport:
    r = max_rank
    if tid in ("2.1", "2.2"):
        ev = _group(inputs[0])
        fn = fm.verify_whole_pair if tid == "2.1" else fm.verify_trivial_pair
        return fn(ev.group, inputs[0], r)
    if tid == "2.3":
        g1, g2 = _group(inputs[0]).group, _group(inputs[2]).group
        pairs = [(g1, _normal(g1, inputs[1])), (g2, _normal(g2, inputs[3]))]
        return fm.verify_free_product_pairs(pairs, list(inputs), r)
    if tid == "3.3":
        g1, g2 = _group(inputs[0]).group, _group(inputs[3]).group
        triples = [(g1, _normal(g1, inputs[1]), _normal(g1, inputs[2])),
                   (g2, _normal(g2, inputs[4]), _normal(g2, inputs[5]))]
        return fm.verify_free_product_triples(triples, list(inputs), r)
    if tid == "2.5-window":
        g1, g2 = _group(inputs[0]).group, _group(inputs[2]).group
        return fm.verify_direct_product_window(g1, _normal(g1, inputs[1]), g2, _normal(g2, inputs[3]),
                                               list(inputs), r)
    if tid == "3.5-window":
        g1, g2 = _group(inputs[0]).group, _group(inputs[3]).group
        return fm.verify_triple_direct_product_window(
            g1, _normal(g1, inputs[1]), _normal(g1, inputs[2]), g2, _normal(g2, inputs[4]),
            _normal(g2, inputs[5]), list(inputs), r)
    if tid in ("2.6i", "2.6ii", "2.6iii"):
        g1, g2 = _group(inputs[0]).group, _group(inputs[2]).group
        return fm.remark_case_sequences(tid, g1, _normal(g1, inputs[1]), g2, _normal(g2, inputs[3]),
                                        labels=list(inputs), max_rank=r)
    if tid in ("3.6i", "3.6ii", "3.6iii"):
        g1, g2 = _group(inputs[0]).group, _group(inputs[3]).group
        return fm.remark_case_sequences(tid, g1, _normal(g1, inputs[2]), g2, _normal(g2, inputs[5]),
                                        _normal(g1, inputs[1]), _normal(g2, inputs[4]), list(inputs), r)
    if tid == "2.7":
        ev = _group(inputs[0])
        sp = ev.semidirect
        if sp is None:
            raise CliError(EXIT_PRECONDITION, "2.7 needs a semidirect expression sd(N, Q, action)")
        return fm.verify_semidirect_split(sp.group, sp.normal, sp.retraction, sp.section, inputs[0], r)
    if tid == "2.8":
        g = _group(inputs[0]).group
        return fm.verify_second_iso_pairs(g, _sub(g, inputs[1]), _sub(g, inputs[2]), list(inputs), r)
    if tid == "3.2i":
        g = _group(inputs[0]).group
        return fm.verify_ellis_agreement(g, _normal(g, inputs[1]), _normal(g, inputs[2]), list(inputs), r)
    if tid == "five-term":
        g = _group(inputs[0]).group
        rep = fm.verify_five_term(g, _normal(g, inputs[1]), inputs[0], r)
        rep.inputs = list(inputs)
        return rep
    if tid == "mv-les":
        g = _group(inputs[0]).group
        return fm.verify_mayer_vietoris(g, _normal(g, inputs[1]), _normal(g, inputs[2]), list(inputs), r)
    raise CliError(EXIT_PARSE, f"unknown theorem id {tid!r}")


def cmd_verify(args):
    tid = args.theorem
    if tid not in THEOREM_IDS:
        raise CliError(EXIT_PARSE, f"unknown theorem id {tid!r}; choose from {', '.join(THEOREM_IDS)}")
    if args.inputs:
        k = ARITY[tid]
        if len(args.inputs) % k:
            raise CliError(EXIT_PARSE, f"{tid} takes inputs in groups of {k}")
        batches = [args.inputs[i:i + k] for i in range(0, len(args.inputs), k)]
    else:
        batches = DEFAULT_INPUTS[tid]
    reports = [run_verification(tid, b, args.max_rank) for b in batches]
    seqs = [s.to_json() for rep in reports for s in rep.sequences]
    results = {"verdict": "pass" if all(r.passed for r in reports) else "fail",
               "reports": [_report_json(r) for r in reports]}
    inputs = [" ".join(b) for b in batches]
    return results, seqs, inputs


def _report_json(rep: fm.VerificationReport) -> dict:
    d = rep.to_json()
    d.pop("sequences")
    d["sequences"] = [s.name for s in rep.sequences]
    return d


def cmd_suite(args):
    from .suite import CRITERIA, run_suite

    numbers = sorted(CRITERIA)
    if args.only:
        numbers = _parse_numbers(args.only)
    if args.skip:
        skip = set(_parse_numbers(args.skip))
        numbers = [n for n in numbers if n not in skip]
    progress = None if args.json else (lambda line: print(line, flush=True))
    results = run_suite(numbers, args.max_rank, progress)
    out = {"verdict": "pass" if all(r.passed for r in results) else "fail",
           "criteria": [r.to_json() for r in results]}
    return out, [], [str(n) for n in numbers]


def _parse_numbers(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part:
            a, b = part.split("-")
            out += range(int(a), int(b) + 1)
        elif part:
            out.append(int(part))
    return out


# -- text rendering ---------------------------------------------------------------


def render_text(command: str, results: dict) -> str:
    if command == "elements":
        return "\n".join(f"{e['index']:>4}  {e['label']:<16} order {e['order']}" for e in results["elements"])
    if command == "verify":
        lines = []
        for r in results["reports"]:
            lines.append(f"{r['theorem_id']} [{' '.join(r['inputs'])}]: {r['verdict']}")
            for c in r["checks"]:
                mark = "ok  " if c["passed"] else "FAIL"
                lines.append(f"    {mark} {c['name']}" + (f"  ({c['detail']})" if c["detail"] else ""))
            for note in r["notes"]:
                lines.append(f"    note: {note}")
        lines.append(f"verdict: {results['verdict']}")
        return "\n".join(lines)
    if command == "suite":
        return f"suite verdict: {results['verdict']}"
    if len(results) == 1:
        return next(iter(results.values()))
    return "\n".join(f"{k}: {v}" for k, v in results.items())


# -- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="emit a JSON report")
    common.add_argument("--cache-dir", default=argparse.SUPPRESS,
                        help=f"cache directory (default: ${cachemod.ENV_VAR} or ~/.cache/schurcone)")
    common.add_argument("--max-rank", type=int, default=argparse.SUPPRESS,
                        help=f"largest allowed rank of any complex in any degree (default {DEFAULT_MAX_RANK})")
    common.add_argument("--no-cache", action="store_true", default=argparse.SUPPRESS, help="disable the disk cache")
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)

    p = argparse.ArgumentParser(prog="schurcone", parents=[common],
                                description="Schur multipliers of groups, pairs and triples from bar complexes.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, metavar="command")

    s = sub.add_parser("multiplier", parents=[common], help="M(G) = H2(G)")
    s.add_argument("expr")
    s.set_defaults(func=cmd_multiplier)

    s = sub.add_parser("homology", parents=[common], help="H_k(G), k <= 4")
    s.add_argument("expr")
    s.add_argument("--degree", type=int, required=True)
    s.set_defaults(func=cmd_homology)

    s = sub.add_parser("pair", parents=[common], help="M(G,N) = H3 of the cone of G -> G/N")
    s.add_argument("expr")
    s.add_argument("--sub", required=True)
    s.add_argument("--sequence", action="store_true", help="also report the five-term sequence")
    s.set_defaults(func=cmd_pair)

    s = sub.add_parser("triple", parents=[common], help="triple multiplier M(G,M,N)")
    s.add_argument("expr")
    s.add_argument("--sub1", required=True, help="M")
    s.add_argument("--sub2", required=True, help="N")
    mode = s.add_mutually_exclusive_group()
    mode.add_argument("--ellis", action="store_true", help="H4 of the cone of cones")
    mode.add_argument("--pushout", action="store_true", help="H3 of the homotopy pushout (default)")
    s.add_argument("--sequence", action="store_true", help="also report the Mayer-Vietoris sequence")
    s.set_defaults(func=cmd_triple)

    s = sub.add_parser("verify", parents=[common], help="check a theorem on given or default inputs")
    s.add_argument("theorem", metavar="theorem-id", help=", ".join(THEOREM_IDS))
    s.add_argument("inputs", nargs="*")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("suite", parents=[common], help="run the acceptance battery")
    s.add_argument("--only", help="criteria to run, e.g. 1,3-5")
    s.add_argument("--skip", help="criteria to leave out")
    s.set_defaults(func=cmd_suite)

    s = sub.add_parser("elements", parents=[common], help="list element indices and labels")
    s.add_argument("expr")
    s.set_defaults(func=cmd_elements)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    opts = {"json": False, "cache_dir": None, "max_rank": DEFAULT_MAX_RANK, "no_cache": False, "verbose": False}
    for k, v in opts.items():
        if not hasattr(args, k):
            setattr(args, k, v)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    disk = None if args.no_cache else cachemod.DiskCache(args.cache_dir or cachemod.default_cache_dir())
    t0 = time.perf_counter()
    try:
        with cachemod.using(disk):
            results, seqs, inputs = args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except ExprSyntaxError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ExprEvalError, gr.GroupError, fm.PreconditionError) as exc:
        print(f"precondition error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    report = make_report(args.command, inputs, results, seqs, t0, disk)
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        print(render_text(args.command, results))
    if args.command in ("verify", "suite") and results.get("verdict") != "pass":
        return EXIT_VERIFY
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
