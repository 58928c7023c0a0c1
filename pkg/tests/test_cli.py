import json
import subprocess
import sys

import pytest

from dkernel import cli
from dkernel.specfile import bundled_specs


def run(*argv):
    args = cli.build_parser().parse_args(list(argv))
    return cli.execute(args)


CASES = [
    (["prolong", "--spec", "circle", "--ideal", "x^2 + y^2 - 1"], 0),
    (["check", "d-subvariety", "--spec", "circle", "--candidate", "point"], 1),
    (["check", "d-point", "--spec", "ga", "--point", "y=0"], 0),
    (["check", "d-point", "--spec", "ga", "--point", "y=1"], 1),
    (["check", "d-group", "--spec", "ga"], 0),
    (["check", "d-group", "--spec", "e_tc"], 1),
    (["check", "twisted", "--spec", "e_tc", "--a", "x"], 0),
    (["check", "twisted", "--spec", "gm_twisted", "--a", "x"], 0),
    (["check", "coderivation", "--spec", "e_tc", "--a", "x"], 0),
    (["check", "coderivation", "--spec", "e_tc"], 1),
    (["check", "hopf-axioms", "--spec", "gl2"], 0),
    (["magic", "--spec", "e_tc", "--a", "x", "--c", "c"], 0),
    (["magic", "--spec", "gm_twisted", "--a", "x", "--c=-lam^2/2"], 0),
    (["magic", "--spec", "gm_twisted", "--a", "x", "--c", "lam"], 1),
    (["pi", "--spec", "gm_twisted", "--a", "x"], 0),
    (["useq", "--spec", "e_tc", "--a", "x"], 0),
    (["ore", "mul", "--spec", "weyl", "--p", "x", "--q", "y"], 0),
    (["ore", "inner", "--spec", "shift_inner", "--f", "y"], 0),
    (["ore", "inner", "--spec", "weyl", "--f", "y"], 1),
    (["ore", "shape", "--spec", "e_tc"], 0),
    (["ore", "shape", "--spec", "e_tc", "--coproduct", "z@1*z@2"], 1),
    (["dme", "delta-ideal", "--spec", "ky_dme", "--ideal", "y"], 0),
    (["dme", "delta-ideal", "--spec", "ky_dme", "--ideal", "y - 1"], 1),
    (["dme", "locally-closed", "--spec", "ky_dme", "--candidate", "zero", "--among", "Y"], 0),
    (["dme", "primitivity", "--spec", "ky_dme", "--candidate", "zero", "--m", "y", "--among", "Y"], 1),
    (["dme", "primitivity", "--spec", "ky_dme", "--candidate", "zero", "--m", "y - 1", "--among", "Y"], 0),
    (["dme", "rationality", "--spec", "ky_dme", "--candidate", "zero", "--p", "y", "--q", "1"], 0),
]


@pytest.mark.parametrize("argv, code", CASES, ids=[" ".join(c[0][:3]) + f" {i}" for i, c in enumerate(CASES)])
def test_exit_codes(argv, code):
    got, report = run(*argv)
    assert got == code, report
    assert report["verdict"] is (code == 0)
    assert "error" not in report


@pytest.mark.parametrize(
    "argv",
    [
        ["check", "d-group", "--spec", "no_such_spec"],
        ["check", "hopf-axioms", "--spec", "weyl"],
        ["check", "twisted", "--spec", "e_tc", "--a", "y"],
        ["check", "d-point", "--spec", "ga", "--point", "z=1"],
        ["dme", "delta-ideal", "--spec", "ky_dme", "--ideal", "y +"],
    ],
)
def test_errors_exit_2(argv):
    code, report = run(*argv)
    assert code == 2 and report["verdict"] is None and report["error"]


def test_resource_cap_reported():
    code, report = run("check", "hopf-axioms", "--spec", "gl2", "--max-basis", "1")
    assert code == 2
    assert report["resource_events"] and report["resource_events"][0]["kind"] == "exhausted"


def test_non_delta_candidate_in_family_is_an_error():
    code, report = run("dme", "locally-closed", "--spec", "ky_dme", "--candidate", "zero")
    assert code == 2 and "Y1" in report["error"]


def test_reports_are_deterministic():
    argv = ["pi", "--spec", "e_tc", "--a", "x"]
    a, b = run(*argv)[1], run(*argv)[1]
    a.pop("elapsed_ms"), b.pop("elapsed_ms")
    assert cli.render(a, "json") == cli.render(b, "json")


@pytest.mark.parametrize("name", bundled_specs())
def test_every_bundled_spec_runs(name):
    code, report = run("check", "well-defined", "--spec", name)
    if report.get("error"):
        assert code == 2 and "no delta data" in report["error"]
    else:
        assert code == 0


def test_console_entry_point_json():
    out = subprocess.run(
        [sys.executable, "-m", "dkernel.cli", "check", "twisted", "--spec", "e_tc", "--a", "x"],
        capture_output=True, text=True, check=False,
    )
    assert out.returncode == 0
    report = json.loads(out.stdout)
    assert report["verdict"] is True and report["command"] == "check twisted"


def test_pretty_output(capsys):
    assert cli.main(["check", "d-group", "--spec", "ga", "--pretty"]) == 0
    assert "verdict: True" in capsys.readouterr().out


def test_list_specs(capsys):
    assert cli.main(["list-specs"]) == 0
    assert "e_tc" in capsys.readouterr().out.split()


def test_run_command_on_a_parsed_document():
    from dkernel.specfile import load_spec

    doc = load_spec("e_tc")
    code, report = cli.run_command(doc, "check twisted", {"a": "x"})
    assert code == 0 and report["verdict"] is True
    code, report = cli.run_command(doc, "magic", {"a": "x", "c": "c"})
    assert code == 0 and report["result"]["c"] == "c"
    code, report = cli.run_command(doc, "check d-group")
    assert code == 1
    with pytest.raises(KeyError):
        cli.run_command(doc, "check d-group", {"bogus": 1})
