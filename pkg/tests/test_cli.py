"""End-to-end tests of the command-line interface and its exit codes."""

import json
from fractions import Fraction

import numpy as np
import pytest

from g2inv.cli import main
from g2inv.formats import arch_from_dict, nonarch_from_dict, save_graph, save_tau
from g2inv.metric_graph import PMGraph
from g2inv.theta_surface import SiegelMatrix

GENERIC_TAU = SiegelMatrix(
    np.array([[0.12 + 1.3j, 0.21 + 0.33j], [0.21 + 0.33j, -0.17 + 1.1j]])
)


@pytest.fixture
def tau_file(tmp_path):
    path = tmp_path / "tau.json"
    save_tau(str(path), GENERIC_TAU)
    return str(path)


def test_nonarch_type_matches_spec_example(capsys):
    assert main(["nonarch", "--type", "VII", "--params", "1,1,1"]) == 0
    out = capsys.readouterr().out
    assert "phi      1/9" in out
    assert "lambda   3/10" in out


def test_nonarch_type_i_all_zero(capsys):
    assert main(["nonarch", "--type", "I", "--format", "structured"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert all(doc[k] == "0" for k in ("delta0", "delta1", "rKK", "epsilon", "phi", "lambda"))


def test_nonarch_file_matches_inline_type(tmp_path, capsys):
    # a subdivided loop at a genus-1 vertex, total length 2: same surface
    # shape as --type III --params 2
    graph = PMGraph(
        [("v", 1), ("c1", 0), ("c2", 0)],
        [
            ("s1", "v", "c1", Fraction(1, 2)),
            ("s2", "c1", "c2", Fraction(3, 4)),
            ("s3", "c2", "v", Fraction(3, 4)),
        ],
    )
    path = tmp_path / "graph.json"
    save_graph(str(path), graph)
    assert main(["nonarch", str(path), "--format", "structured"]) == 0
    from_file = json.loads(capsys.readouterr().out)
    assert main(["nonarch", "--type", "III", "--params", "2", "--format", "structured"]) == 0
    inline = json.loads(capsys.readouterr().out)
    assert from_file == inline
    assert nonarch_from_dict(from_file) == nonarch_from_dict(inline)


def test_nonarch_wrong_genus_exits_3(tmp_path, capsys):
    circle = PMGraph([("v", 0)], [("e", "v", "v", Fraction(1))])
    path = tmp_path / "circle.json"
    save_graph(str(path), circle)
    assert main(["nonarch", str(path)]) == 3
    assert "genus 1" in capsys.readouterr().err


def test_nonarch_parse_failures_exit_2(tmp_path, capsys):
    assert main(["nonarch"]) == 2
    assert main(["nonarch", "--type", "II", "--params", "0"]) == 2
    assert main(["nonarch", "--type", "II", "--params", "1,2"]) == 2
    assert main(["nonarch", "--type", "II", "--params", "x"]) == 2
    assert main(["nonarch", "--type", "II", "--params", "-3"]) == 2
    assert main(["nonarch", str(tmp_path / "missing.json")]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("not json")
    assert main(["nonarch", str(bad)]) == 2
    graph = tmp_path / "g.json"
    save_graph(str(graph), PMGraph([("v", 2)]))
    assert main(["nonarch", str(graph), "--type", "I"]) == 2
    capsys.readouterr()


def test_unknown_subcommand_exits_2():
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 2


def test_arch_structured_output_round_trips(tau_file, capsys):
    args = [
        "arch", tau_file,
        "--samples", "20000",
        "--seed", "6",
        "--target-stderr", "0.01",
        "--format", "structured",
    ]
    assert main(args) == 0
    first = capsys.readouterr().out
    assert main(args) == 0
    second = capsys.readouterr().out
    assert first == second
    doc = json.loads(first)
    report = arch_from_dict(doc)
    assert report.phi > 0
    assert doc["seed"] == 6
    assert doc["samples"] == 20000
    assert doc["method"] == "monte-carlo"
    assert json.dumps(arch_from_dict(json.loads(first)).__dict__["phi"]) == json.dumps(report.phi)


def test_arch_reports_config_for_reproducibility(tau_file, capsys):
    assert (
        main(
            [
                "arch", tau_file,
                "--samples", "20000",
                "--seed", "2",
                "--method", "lattice-rule",
                "--target-stderr", "0.01",
            ]
        )
        == 0
    )
    out = capsys.readouterr().out
    for key in ("log_delta2", "log_h", "delta_f", "log_s", "phi", "lambda",
                "residual", "seed", "method", "tolerance"):
        assert key in out
    assert "+-" in out


def test_arch_degenerate_exits_5(tmp_path, capsys):
    path = tmp_path / "ii.json"
    save_tau(str(path), SiegelMatrix(1j * np.eye(2)))
    assert main(["arch", str(path), "--samples", "10000"]) == 5
    err = capsys.readouterr().err
    assert "[1/2 1/2; 1/2 1/2]" in err


def test_arch_unreachable_target_exits_6(tau_file, capsys):
    code = main(["arch", tau_file, "--samples", "10000", "--target-stderr", "1e-12"])
    assert code == 6
    capsys.readouterr()


def test_arch_validation_exits_2(tmp_path, tau_file, capsys):
    assert main(["arch", str(tmp_path / "absent.json")]) == 2
    assert main(["arch", tau_file, "--samples", "5000"]) == 2
    short = tmp_path / "short.json"
    short.write_text('{"tau": ["1i", "0"]}')
    assert main(["arch", str(short)]) == 2
    skew = tmp_path / "skew.json"
    skew.write_text('{"tau": ["1i", "0.2", "0.3", "1i"]}')
    assert main(["arch", str(skew)]) == 2
    capsys.readouterr()


def test_tolerance_env_var(tau_file, capsys, monkeypatch):
    monkeypatch.setenv("G2INV_TOL", "1e-8")
    args = ["arch", tau_file, "--samples", "20000", "--target-stderr", "0.01",
            "--format", "structured"]
    assert main(args) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["tolerance"] == 1e-8
    monkeypatch.setenv("G2INV_TOL", "banana")
    assert main(args) == 2
    monkeypatch.setenv("G2INV_TOL", "-1")
    assert main(args) == 2
    capsys.readouterr()


def test_verify_is_seeded_and_exact(capsys):
    assert main(["verify", "--samples", "3", "--seed", "9"]) == 0
    first = capsys.readouterr().out
    assert first.count("3/3 pass") == 7
    assert main(["verify", "--samples", "3", "--seed", "9"]) == 0
    assert capsys.readouterr().out == first


def test_verify_zero_samples_is_vacuous_pass(capsys):
    assert main(["verify", "--samples", "0"]) == 0
    out = capsys.readouterr().out
    assert out.count("0/0 pass") == 7


def test_table_structured(capsys):
    assert main(["table", "--format", "structured"]) == 0
    doc = json.loads(capsys.readouterr().out)
    rows = {row["type"]: row for row in doc["rows"]}
    assert len(rows) == 7
    assert rows["II(a)"]["phi"] == "a"
    assert rows["V(a, b)"]["lambda"] == "a/10 + b/10"
    assert "a*b*c" in rows["VII(a, b, c)"]["rKK"]
