import io
import json
import sys
from pathlib import Path

import pytest

from lsys_model import cli
from lsys_model.commands import HANDLERS
from lsys_model.laws import check_string, fib_laws
from lsys_model.trees import from_record, parse_tree

GRAMMARS = Path(__file__).resolve().parent.parent / "grammars"


def run(*argv, env=None):
    out = io.StringIO()
    err = io.StringIO()
    status = cli.run(list(argv), stdout=out, stderr=err, env=env or {})
    return status, out.getvalue(), err.getvalue()


def test_derive_from_grammar_file():
    status, out, _ = run("derive", "-g", str(GRAMMARS / "fib.gram"), "-n", "6")
    assert status == 0
    assert out.splitlines() == ["0", "1", "01", "101", "01101", "10101101", "0110110101101"]


def test_derive_json_generations_recheck_clean():
    status, out, _ = run("derive", "-g", "fib", "-n", "10", "--json")
    assert status == 0
    record = json.loads(out)
    assert record["grammar"] == "fib"
    assert record["steps"] == 10
    assert len(record["generations"]) == 11
    assert all(check_string(fib_laws(), gen).ok for gen in record["generations"])


def test_derive_with_symbol_mapping():
    status, out, _ = run("derive", "-g", "xor-ab", "-n", "2", "--map", "a=1", "--map", "b=0")
    assert status == 0
    assert out.splitlines() == ["1", "10", "1001"]


def test_stats_lines():
    status, out, _ = run("stats", "-g", "fib", "-n", "6")
    assert status == 0
    assert out.splitlines()[-1] == "6 13 0:5 1:8"


def test_check_string_violation_exits_one():
    status, out, _ = run("check", "-s", "11101")
    assert status == 1
    assert "*111 at position 0 (Second Law)" in out


def test_check_string_json():
    status, out, _ = run("check", "-s", "10101101", "--json")
    assert status == 0
    assert json.loads(out) == {"string": "10101101", "ok": True, "violations": []}


def test_check_grammar_uses_bound_from_env():
    status, out, _ = run("check", "-g", "fib", "--json", env={"LSYS_MODEL_MAX_GEN": "9"})
    assert status == 0
    assert json.loads(out) == {"grammar": "fib", "bound": 9, "ok": True, "failure": None}


def test_check_symmetric_grammar_fails():
    status, out, _ = run("check", "-g", "xor-01", "-n", "5")
    assert status == 1
    assert "fails at generation 3" in out
    assert "*00 at position 2" in out


def test_check_with_inline_laws():
    status, _, _ = run("check", "-s", "0110", "--forbid", "11")
    assert status == 1
    status, _, _ = run("check", "-s", "0110", "--forbid", "000")
    assert status == 0


def test_check_with_law_file():
    status, _, _ = run("check", "-s", "0101", "--laws", str(GRAMMARS / "fib.laws"))
    assert status == 0


def test_ngrams_and_trees():
    status, out, _ = run("ngrams", "-s", "10101101", "-n", "3")
    assert status == 0
    assert out.strip() == "101 010 101 011 110 101"

    status, out, _ = run("ngrams", "-s", "011", "--trees", "--json")
    record = json.loads(out)
    assert record["trees"] == [
        {"window": "01", "trees": ["1[0 1]"]},
        {"window": "11", "trees": ["1[1 1]"]},
    ]


def test_allowed():
    status, out, _ = run("allowed", "-n", "2")
    assert status == 0
    assert out.strip() == "01 10 11"


def test_concat():
    assert run("concat", "-a", "01", "-b", "11")[0] == 1
    assert run("concat", "-a", "10", "-b", "110")[0] == 0
    status, _, err = run("concat", "-a", "00", "-b", "1")
    assert status == 2
    assert "first operand is ill-formed" in err


def test_closure_lists_pairs():
    status, out, _ = run("closure", "--max", "3")
    assert status == 0
    lines = out.splitlines()
    assert "*11-101" in lines
    assert "*01-11" in lines
    assert "*10-110" not in lines


def test_elementary_tags_non_constituents():
    status, out, _ = run("elementary", "-b", "2")
    assert status == 0
    assert out.splitlines() == ["1[0 1]", "1[1 0]", "1[1 1]  [model-permitted, non-constituent]"]

    status, out, _ = run("elementary", "-b", "1", "-g", "fib", "--json")
    record = json.loads(out)
    assert record["lonely_beta"] == "0"
    assert {entry["tree"] for entry in record["trees"]} == {"0[1]", "1[0]", "1[1]"}


def test_compose_frontier_and_root():
    status, out, _ = run("compose", "--host", "1[0 1]", "--guest", "0[1]", "--leaf", "1")
    assert status == 0
    assert out.splitlines()[0] == "1[0[1] 1]"
    assert "nac: ok" in out

    status, out, _ = run("compose", "--host", "1[0]", "--guest", "1[1]", "--root", "--json")
    record = json.loads(out)
    assert parse_tree(record["tree"]) == from_record(record["record"])
    assert record["frontier"] == "01"


def test_compose_label_mismatch_is_usage_error():
    status, _, err = run("compose", "--host", "1[0 1]", "--guest", "0[1]", "--leaf", "2")
    assert status == 2
    assert "label mismatch" in err


def test_tree_dot_and_json_round_trip():
    status, out, _ = run("tree", "-g", "fib", "-n", "2", "--dot")
    assert status == 0
    assert out.startswith('digraph "fib"')

    status, out, _ = run("tree", "-g", "fib", "-n", "4", "--json")
    record = json.loads(out)
    _, text, _ = run("tree", "-g", "fib", "-n", "4")
    assert from_record(record["tree"]) == parse_tree(text.strip())


def test_points_json():
    status, out, _ = run("points", "-g", "fib", "-n", "3", "--json")
    assert status == 0
    points = {p["node"]: p["class"] for p in json.loads(out)["points"]}
    assert points[1] == "k"
    assert points[4] == "n"
    assert points[6] == "s"


def test_classify():
    assert run("classify", "-g", "xor-ab")[1].strip() == "xor-ab: symmetric"
    assert run("classify", "-g", "bif")[1].strip() == "bif: asymmetric (lonely beta 0)"


def test_same_model():
    assert run("same-model", "-g1", "fib", "-g2", "bif", "-n", "20")[0] == 0
    status, out, _ = run("same-model", "-g1", "fib", "-g2", "xor-01", "-n", "20")
    assert status == 1
    assert out.splitlines()[-1] == "same model: no"


def test_ca_runs_and_checks_axes():
    status, out, _ = run("ca", "--steps", "1", "--init", "010")
    assert status == 0
    assert out == "010\n000\n"

    status, out, _ = run("ca", "--steps", "1", "--init", "01", "--check-axis", "y")
    assert status == 0

    status, out, _ = run("ca", "--steps", "1", "--init", "00", "--check-axis", "x", "--json")
    assert status == 1
    record = json.loads(out)
    assert record["rule"] == 232
    assert record["verdict"]["violations"][0]["row"] == 0


def test_export_json_file(tmp_path):
    target = tmp_path / "fib.json"
    status, _, _ = run("export", "-g", "fib", "-n", "2", "--format", "json", "-o", str(target))
    assert status == 0
    record = json.loads(target.read_text(encoding="utf-8"))
    assert str(from_record(record["tree"])) == "0[1[0 1]]"


def test_grammar_from_config_env(tmp_path):
    config = tmp_path / "lsys.yaml"
    config.write_text("grammars:\n  fib-ab:\n    axiom: a\n    rules:\n      a: b\n      b: a b\n", encoding="utf-8")
    status, out, _ = run("derive", "-g", "fib-ab", "-n", "3", env={"LSYS_MODEL_CONFIG": str(config)})
    assert status == 0
    assert out.splitlines() == ["a", "b", "ab", "bab"]


USAGE_ERROR_CASES = [
    ["frobnicate"],
    ["derive", "--bogus"],
    ["derive", "-g", "missing.gram"],
    ["derive", "-g", "fib", "-n", "-1"],
    ["stats", "-g", "fib", "-n", "-1"],
    ["stats", "-g", "nosuch"],
    ["check"],
    ["check", "-s", "012"],
    ["ngrams", "-s", "00", "--trees"],
    ["ngrams", "-s", "0101"],
    ["ngrams", "-s", "0101", "-n", "9"],
    ["allowed", "-n", "0"],
    ["concat", "-a", "00", "-b", "1"],
    ["closure", "--max", "1"],
    ["elementary", "-b", "3"],
    ["compose", "--host", "1[0 1]", "--guest", "0[1]"],
    ["compose", "--host", "1[0 1]", "--guest", "0[1]", "--leaf", "2"],
    ["tree", "-g", "fib", "-n", "-1"],
    ["points", "-g", "xor-ab"],
    ["classify", "-g", "nosuch"],
    ["same-model", "-g1", "fib", "-g2", "nosuch"],
    ["ca", "--init", "012"],
    ["ca", "--init", "0110", "--rule", "300"],
    ["ca", "--init", "", "--steps", "0"],
    ["export", "-g", "bif", "--format", "svg"],
    ["export", "-g", "nosuch"],
]


@pytest.mark.parametrize("argv", USAGE_ERROR_CASES)
def test_usage_errors_exit_two(argv):
    assert run(*argv)[0] == 2


def test_every_verb_has_a_usage_error_case():
    covered = {argv[0] for argv in USAGE_ERROR_CASES}
    assert set(HANDLERS) <= covered


def test_tree_rejects_multi_symbol_axiom(tmp_path):
    path = tmp_path / "pair.gram"
    path.write_text("axiom: 0 1\nrule: 0 -> 1\nrule: 1 -> 0 1\n", encoding="utf-8")
    status, out, err = run("tree", "-g", str(path), "-n", "2")
    assert status == 2
    assert out == ""
    assert err.strip()
    assert run("derive", "-g", str(path), "-n", "2")[0] == 0


def test_export_to_missing_directory_exits_two(tmp_path):
    status, _, err = run("export", "-g", "fib", "-o", str(tmp_path / "missing" / "fib.dot"))
    assert status == 2
    assert err.strip()


def test_malformed_grammar_file_exits_two(tmp_path):
    path = tmp_path / "bad.gram"
    path.write_text("axiom: 0\nrule: 0 -> 1\n", encoding="utf-8")
    status, _, err = run("derive", "-g", str(path))
    assert status == 2
    assert "symbol 1 has no rule" in err


def test_log_level_env_configures_logging(mocker):
    configure = mocker.patch.object(cli, "configure_logging")
    status, _, _ = run("allowed", "-n", "1", env={"LOG_LEVEL": "debug"})
    assert status == 0
    configure.assert_called_once_with("DEBUG")


def test_main_exits_with_run_status(monkeypatch):
    monkeypatch.setattr(sys, "argv", ["lsys-model", "check", "-s", "00"])
    monkeypatch.setattr(sys, "stdout", io.StringIO())
    with pytest.raises(SystemExit) as excinfo:
        cli.main()
    assert excinfo.value.code == 1
