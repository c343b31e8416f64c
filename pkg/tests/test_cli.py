import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from tropdiff import ParseError
from tropdiff.cli import UsageError, main, parse_invocation

EQ = "(e^-4,1)*x1 + (1,8)*x1' + (e^-1,8)*x1''"


@pytest.fixture(scope="module")
def validator():
    schema = json.loads(resources.files("tropdiff").joinpath("schemas/output.json").read_text())
    jsonschema.Draft202012Validator.check_schema(schema)
    return jsonschema.Draft202012Validator(schema)


def run_json(capsys, *argv):
    code = main([*argv, "--output", "json"])
    out = capsys.readouterr().out
    return code, json.loads(out), out


INVOCATIONS = [
    ("check", "--pair", "T2", "--eq", EQ, "--sol", "1 + t^2", "--deg", "16"),
    ("check", "--eq", EQ, "--sol", "1 + t^3"),
    ("check", "--eq", "(1,1)*x1' + (1,1)*x1''", "--sol", "1 + O(t^2)"),
    ("check", "--pair", "B", "--eq", "x + x'", "--sol", "{0,1,4}"),
    ("enumerate", "--pair", "B", "--eq", "x + x'", "--max-deg", "5"),
    ("solve-coeff", "--eq", EQ, "--slot", "5"),
    ("solve-coeff", "--eq", "(1,1)*x1 + (1,2)*x1'^2", "--slot", "1"),
    ("scan", "--paper-demo"),
    ("scan", "--eq", EQ, "--max-slot", "3", "--prefix", "2"),
    ("tropicalize", "--eq", "x1'' - 4*x1", "--enhancement", "padic"),
    ("tropicalize", "--eq", "x1' - x1", "--sol", "1 + t + 1/2*t^2", "--deg", "2", "--enhancement", "grigoriev"),
    ("classical-solve", "--eq", "x1'' + x1", "--init", "0, 1", "--deg", "12"),
    ("classical-solve", "--eq", "x1' - x1", "--init", "1", "--deg", "12", "--enhancement", "padic", "--prime", "3"),
    ("verify", "--suite", "axioms", "--cases", "30"),
    ("verify", "--suite", "leibniz", "--pair", "T2", "--prime", "2", "--cases", "20"),
]


@pytest.mark.parametrize("argv", INVOCATIONS, ids=lambda a: " ".join(a[:3]))
def test_json_output_validates_and_is_deterministic(capsys, validator, argv):
    code, report, raw = run_json(capsys, *argv)
    validator.validate(report)
    assert report["verb"] == argv[0]
    assert report["status"] == code
    code2, _, raw2 = run_json(capsys, *argv)
    assert (code2, raw2) == (code, raw)


def test_error_reports_validate(capsys, validator):
    code, report, _ = run_json(capsys, "check", "--pair", "Q")
    assert code == 3
    validator.validate(report)
    code, report, _ = run_json(capsys, "classical-solve", "--eq", "x1*x1'", "--init", "1")
    assert code == 4
    validator.validate(report)


def test_check_reports_terms_and_verdict(capsys):
    code, report, _ = run_json(capsys, "check", "--pair", "T2", "--eq", EQ, "--sol", "1 + t^2", "--deg", "16")
    assert code == 0
    assert report["verdict"] == "yes"
    assert [t["value"] for t in report["terms"]] == ["(e^-4, 1)", "(e^-1, 4)", "(e^-1, 4)"]


def test_exit_codes_follow_verdicts(capsys):
    assert run_json(capsys, "check", "--eq", EQ, "--sol", "1 + t^3")[0] == 1
    assert run_json(capsys, "check", "--eq", "(1,1)*x1' + (1,1)*x1''", "--sol", "1 + O(t^2)")[0] == 2
    assert run_json(capsys, "solve-coeff", "--eq", EQ, "--slot", "3")[0] == 1


def test_enumerate_matches_brute_force(capsys):
    code, report, _ = run_json(capsys, "enumerate", "--pair", "B", "--eq", "x + x'", "--max-deg", "5")
    assert code == 0
    sols = report["solutions"]
    assert sols[0] == [] and len(sols) == 17
    assert all({0, 1} <= set(s) for s in sols[1:])


def test_paper_demo_prints_five_verdicts(capsys):
    code = main(["--paper-demo"])
    out = capsys.readouterr().out
    assert code == 0
    verdicts = [line.split(": ", 1)[1] for line in out.splitlines() if line.startswith("slot")]
    assert verdicts == ["none", "all_positive_c", "none", "all_positive_c", "single_value c = 1/8"]


def test_numbers_are_exact_strings(capsys):
    _, report, _ = run_json(capsys, "solve-coeff", "--eq", EQ, "--slot", "5")
    assert report["result"]["c"] == "1/8"
    _, report, _ = run_json(capsys, "classical-solve", "--eq", "x1' - x1", "--init", "1", "--deg", "4")
    assert report["solution"] == "1 + t + (1/2)t^2 + (1/6)t^3 + (1/24)t^4 + O(t^5)"


def test_verify_reports_counts(capsys):
    code, report, _ = run_json(capsys, "verify", "--suite", "axioms", "--cases", "25")
    assert code == 0 and report["passed"]
    assert all(r["checked"] > 0 for r in report["results"])


@pytest.mark.parametrize("argv,needle", [
    (["check", "--pair", "Q"], "unknown pair"),
    (["frobnicate"], "invalid choice"),
    (["check", "--eq", EQ, "--sol", "1", "--bogus"], "unrecognized"),
    (["check", "--eq", "(e^-4,1)*x1 + (1,8)*y", "--sol", "1"], "position"),
    (["enumerate", "--pair", "T2", "--eq", "x", "--max-deg", "3"], "pair B"),
    (["verify", "--suite", "axioms", "--prime", "4"], "not a prime"),
    (["check", "--eq", EQ, "--sol", "1", "--deg", "0"], "trunc_deg"),
    ([], "verb is required"),
])
def test_usage_errors(argv, needle):
    with pytest.raises((UsageError, ParseError), match=needle):
        parse_invocation(argv)
    assert main(argv) == 3


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults\npair = B\nprime = 3\ntrunc_deg = 9\noutput = json\n")
    cmd = parse_invocation(["check", "--config", str(cfg), "--eq", "x + x'", "--sol", "{0,1}"])
    assert (cmd.config.pair, cmd.config.prime, cmd.config.trunc_deg, cmd.config.output) == ("B", 3, 9, "json")
    cmd = parse_invocation(["check", "--config", str(cfg), "--pair", "T2", "--eq", EQ, "--sol", "1"])
    assert cmd.config.pair == "T2"
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = blue\n")
    with pytest.raises(UsageError, match="unknown key"):
        parse_invocation(["verify", "--suite", "axioms", "--config", str(bad)])


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "tropdiff", "--paper-demo", "--output", "json"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert [r["verdict"] for r in json.loads(proc.stdout)["results"]] == [
        "none", "all_positive_c", "none", "all_positive_c", "single_value"]
