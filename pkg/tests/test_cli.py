import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from schurcone import cli

SCHEMA = json.loads(resources.files("schurcone").joinpath("report.schema.json").read_text())


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, "--json", *argv)
    doc = json.loads(out) if out else None
    if doc is not None:
        jsonschema.validate(doc, SCHEMA)
    return code, doc, err


@pytest.mark.parametrize("argv,expect", [
    (["multiplier", "Z(2) x Z(2)"], "Z/2"),
    (["homology", "Z(5)", "--degree", "3"], "Z/5"),
    (["pair", "D(4)", "--sub", "gen[1]"], "Z/2"),
    # the two factors: ker(M wedge N -> G) = Z/2 (x) Z/2
    (["triple", "Z(2) x Z(2)", "--sub1", "gen[2]", "--sub2", "gen[1]"], "Z/2"),
    (["triple", "Z(2) x Z(2)", "--sub1", "gen[2]", "--sub2", "gen[1]", "--ellis"], "Z/2"),
    (["multiplier", "Q8"], "0"),
])
def test_text_values(capsys, argv, expect):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    assert out.strip() == expect


def test_report_field_order_and_schema(capsys):
    code, doc, _ = run_json(capsys, "pair", "D(4)", "--sub", "gen[1]", "--sequence")
    assert code == 0
    assert list(doc) == ["command", "inputs", "results", "sequences", "timing_ms", "cache_hits", "tool_version"]
    assert doc["results"] == {"M(G,N)": "Z/2"}
    assert doc["sequences"][0]["exact"]


def test_flags_after_subcommand(capsys):
    code, doc, _ = run(capsys, "multiplier", "D(4)", "--json", "--no-cache")
    assert code == 0 and json.loads(doc)["results"]["M(G)"] == "Z/2"


def test_exit_codes(capsys):
    assert run(capsys, "multiplier", "Z(2")[0] == cli.EXIT_PARSE
    assert run(capsys, "pair", "S(3)", "--sub", "gen[1]")[0] == cli.EXIT_PRECONDITION
    assert run(capsys, "homology", "Z(2)", "--degree", "5")[0] == cli.EXIT_PRECONDITION
    code, _, err = run(capsys, "--max-rank", "100", "multiplier", "S(3)")
    assert code == cli.EXIT_BUDGET
    assert "rank 125" in err and "S(3)" in err
    assert run(capsys, "verify", "9.9")[0] == cli.EXIT_PARSE
    assert run(capsys, "verify", "2.7", "Z(6)")[0] == cli.EXIT_PRECONDITION


def test_unknown_subcommand_prints_usage(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["frobnicate"])
    assert exc.value.code != 0
    assert "usage" in capsys.readouterr().err


def test_verify_inputs(capsys):
    code, doc, _ = run_json(capsys, "verify", "five-term", "D(4)", "gen[1]", "Q8", "center")
    assert code == 0
    assert doc["results"]["verdict"] == "pass"
    assert len(doc["results"]["reports"]) == 2
    assert doc["inputs"] == ["D(4) gen[1]", "Q8 center"]


@pytest.mark.parametrize("tid", ["2.1", "2.2", "2.7", "2.8", "3.2i", "2.6iii", "3.5-window"])
def test_verify_defaults(capsys, tid):
    code, doc, _ = run_json(capsys, "verify", tid)
    assert code == 0, doc
    assert doc["results"]["verdict"] == "pass"


def test_elements(capsys):
    code, out, _ = run(capsys, "elements", "Q8")
    assert code == 0
    assert len(out.strip().splitlines()) == 8


def test_deterministic_output(capsys, tmp_path):
    docs = []
    for _ in range(2):
        code, doc, _ = run_json(capsys, "--cache-dir", str(tmp_path), "verify", "mv-les", "D(4)", "gen[1]", "center")
        docs.append(doc)
    for d in docs:
        d.pop("timing_ms"), d.pop("cache_hits")
        for r in d["results"]["reports"]:
            r.pop("timing_ms")
    assert json.dumps(docs[0]) == json.dumps(docs[1])


def test_cold_then_warm_processes(tmp_path):
    argv = [sys.executable, "-m", "schurcone.cli", "--json", "--cache-dir", str(tmp_path),
            "triple", "D(4)", "--sub1", "gen[1]", "--sub2", "gen[2,4]"]
    cold, warm = (json.loads(subprocess.run(argv, capture_output=True, text=True, check=True).stdout)
                  for _ in range(2))
    assert cold["cache_hits"] == 0 and warm["cache_hits"] > 0
    assert cold["results"] == warm["results"]


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "schurcone.cli", "--cache-dir", str(tmp_path), "multiplier",
                           "D(3)"], capture_output=True, text=True, check=True)
    assert proc.stdout.strip() == "0"
