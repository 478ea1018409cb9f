from __future__ import annotations

import json

import pytest

from jsc.cli import JobSpec, main, run
from jsc.report import parse_report

from conftest import DATA, GOLDEN, ROOT


def test_bounds_matches_golden(monkeypatch, capsys):
    monkeypatch.chdir(ROOT)
    assert main(["bounds", "data/odd_even.txt", "--t-max", "4", "--format", "machine"]) == 0
    out = capsys.readouterr().out
    assert out == (GOLDEN / "odd_even_bounds.json").read_text()
    rep = parse_report(out)
    assert (rep.best_interval_jsr.lower, rep.best_interval_jsr.upper) == (1.0, 1.0)


def test_machine_output_is_byte_identical(tmp_path):
    path = tmp_path / "report.json"
    runs = []
    for _ in range(2):
        assert main(["perturb", str(DATA / "positive_pair.txt"), "--t-max", "3",
                     "--trials", "3", "--format", "machine", "--out", str(path)]) == 0
        runs.append(path.read_bytes())
    assert runs[0] == runs[1]
    doc = json.loads(runs[0])
    assert doc["job"]["seed"] == 0 and doc["tool_version"]


def test_subradius_nilpotent_member(capsys):
    code = main(["subradius", str(DATA / "sigma_k3.txt"), "--t-max", "8", "--cone", "orthant",
                 "--format", "machine"])
    captured = capsys.readouterr()
    assert code == 0
    rep = parse_report(captured.out)
    assert (rep.interval.lower, rep.interval.upper) == (0.0, 0.0)
    assert "warning" in captured.err


def test_cone_check_rotation_is_an_answer(capsys):
    assert main(["cone-check", str(DATA / "rotation.txt")]) == 0
    assert "not invariant" in capsys.readouterr().out


@pytest.mark.parametrize("command", ["bounds", "subradius", "kron", "trace-seq", "cone-check",
                                     "perturb", "verify"])
def test_every_command_runs(command, capsys):
    args = [command, str(DATA / "positive_pair.txt"), "--t-max", "4", "--k-max", "2",
            "--trials", "2", "--samples", "300"]
    assert main(args) == 0
    assert capsys.readouterr().out.strip()


def test_budget_exit_code(capsys):
    assert main(["bounds", str(DATA / "odd_even.txt"), "--t-max", "40"]) == 3
    assert "largest admissible t_max is 20" in capsys.readouterr().err


def test_dimension_cap_exit_code(capsys):
    assert main(["kron", str(DATA / "positive_pair.txt"), "--k-max", "4", "--dim-cap", "8"]) == 3


def test_validation_exit_codes(tmp_path, capsys):
    assert main(["bounds", str(tmp_path / "missing.txt")]) == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("dim 2\nmatrices 1\n1 2 3\n4 5 6\n")
    assert main(["bounds", str(bad)]) == 2
    assert "line 3" in capsys.readouterr().err
    assert main(["bounds", str(DATA / "odd_even.txt"), "--t-max", "0"]) == 2
    assert main(["cone-check", str(DATA / "odd_even.txt")]) == 2


def test_numerical_exit_code(monkeypatch):
    from jsc import cli
    from jsc.errors import NumericalError

    def boom(*a, **k):
        raise NumericalError("no convergence")

    monkeypatch.setattr(cli, "enumerate_bounds", boom)
    assert run(JobSpec("bounds", str(DATA / "odd_even.txt"))) == 4


def test_verify_failure_exit_code(monkeypatch):
    from jsc import cli
    from jsc.checks import VerifyReport

    def failing(*a, **k):
        rep = VerifyReport()
        rep.add("forced", False)
        return rep

    monkeypatch.setattr(cli, "verify", failing)
    assert run(JobSpec("verify", str(DATA / "odd_even.txt"))) == 1


def test_bad_flag_exits_via_argparse():
    with pytest.raises(SystemExit) as info:
        main(["bounds", str(DATA / "odd_even.txt"), "--norm", "fro"])
    assert info.value.code == 2
