"""CLI surface: subcommands, exit codes, determinism, schema conformance."""

import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import numpy as np
import pytest

import metricgeo as mg
from metricgeo import formats
from metricgeo.cli import main

SCHEMA = json.loads(
    (Path(__file__).resolve().parent.parent / "docs" / "report-schema.json").read_text()
)


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    doc = json.loads(out) if out.strip() else None
    if doc is not None:
        jsonschema.validate(doc, SCHEMA)
    return code, doc


@pytest.fixture
def broom_file(tmp_path):
    path = tmp_path / "broom.json"
    code = main(["gen", "broom", "--sequence", "dyadic", "--n", "8", "--output", str(path)])
    assert code == 0
    return path


@pytest.fixture
def zigzag_file(tmp_path):
    path = tmp_path / "zigzag.json"
    curve = mg.DiscreteCurve(coords=np.array([[0.0, 0.0], [2.0, 0.0], [0.5, 0.0]]))
    path.write_text(formats.curve_to_json(curve))
    return path


class TestCheckCommands:
    def test_validate_pass(self, capsys, broom_file):
        code, doc = run_cli(capsys, "validate", str(broom_file))
        assert code == 0 and doc["verdict"] == "pass"
        assert doc["inputs"][0]["sha256"]

    def test_validate_violation_exit_one(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"labels": ["a", "b", "c"], "dist": [[0,1,5],[1,0,1],[5,1,0]], "tolerance": 1e-9}')
        code, doc = run_cli(capsys, "validate", str(bad))
        assert code == 1
        assert doc["payload"]["violations"][0][0] == "triangle"

    def test_validate_malformed_exit_two(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"labels": ["a"], "dist": [[0, 1], [1, 0]]}')
        code, _ = run_cli(capsys, "validate", str(bad))
        assert code == 2

    def test_sra_check_designated_tips(self, capsys, broom_file):
        code, doc = run_cli(
            capsys, "sra", "check", str(broom_file), "--alpha", "0.5", "--subset", "tips"
        )
        assert code == 0
        assert doc["payload"]["verdict"] == "pass"

    def test_sra_check_violation_carries_witness(self, capsys, tmp_path):
        line = mg.normed_space_from_points([[0.0], [1.0], [2.0]], "l2")
        path = tmp_path / "line.json"
        path.write_text(formats.space_to_json(line))
        code, doc = run_cli(capsys, "sra", "check", str(path), "--alpha", "0.5")
        assert code == 1
        witness = doc["payload"]["witness"]
        assert (witness["x"], witness["z"], witness["y"]) == (0, 1, 2)

    def test_sra_max(self, capsys, broom_file):
        code, doc = run_cli(capsys, "sra", "max", str(broom_file), "--alpha", "0.5", "--greedy")
        assert code == 0 and doc["payload"]["mode"] == "greedy"

    def test_angle(self, capsys, broom_file):
        code, doc = run_cli(
            capsys, "angle", str(broom_file), "--x", "y1", "--z", "root", "--y", "y2"
        )
        assert code == 0 and 0 <= doc["payload"]["radians"] <= 3.15

    def test_atb_point_with_budget(self, capsys, broom_file):
        code, doc = run_cli(
            capsys,
            "atb", "point", str(broom_file),
            "--p", "root", "--epsilon", "1.0", "--candidates", "tips", "--l", "4",
        )
        assert code == 1  # 8 separated tips, so ATB fails at L = 4
        assert doc["payload"]["cardinality"] == 8

    def test_atb_star_on_graph(self, capsys, tmp_path):
        graph = mg.path_graph([1.0, 1.0])
        path = tmp_path / "path.json"
        path.write_text(formats.graph_to_json(graph))
        code, doc = run_cli(
            capsys, "atb", "star", str(path), "--p", "0", "--epsilon", "0.5", "--targets", "1,2"
        )
        assert code == 0 and doc["payload"]["witness_pair"] == [0, 1]

    def test_beta(self, capsys):
        code, doc = run_cli(capsys, "beta", "--epsilon", "0.1")
        assert code == 0
        assert doc["payload"]["beta"] == pytest.approx(2.2673945060613444e-4)

    def test_bound_n_of_l(self, capsys):
        code, doc = run_cli(capsys, "bound", "n-of-l", "--l", "3")
        assert code == 0
        assert doc["payload"]["n"] == 10
        assert doc["payload"]["exact"] is True

    def test_bound_ntilde(self, capsys):
        code, doc = run_cli(capsys, "bound", "ntilde", "--alpha", "0.6")
        assert code == 0 and doc["payload"]["n_tilde"] == 7

    def test_curve_check_zigzag_violation(self, capsys, zigzag_file):
        code, doc = run_cli(capsys, "curve", "check", str(zigzag_file))
        assert code == 1
        assert doc["payload"]["witness"] == [0, 1, 2]

    def test_curve_length(self, capsys, zigzag_file):
        code, doc = run_cli(capsys, "curve", "length", str(zigzag_file))
        assert code == 0 and doc["payload"]["polygonal_length"] == pytest.approx(3.5)

    def test_curve_extract_sra(self, capsys, tmp_path):
        path = tmp_path / "axis.json"
        assert main(["gen", "heisenberg", "--steps", "19", "--curve", "--output", str(path)]) == 0
        code, doc = run_cli(
            capsys, "curve", "extract-sra", str(path), "--alpha", "0.5", "--target-size", "5"
        )
        assert code == 0 and doc["payload"]["found"]

    def test_descend(self, capsys):
        code, doc = run_cli(
            capsys,
            "descend", "--matrix", "1,0;0,0.5", "--start", "1,1",
            "--step", "0.5", "--iterations", "40",
        )
        assert code == 0 and doc["payload"]["self_contracted"]

    def test_descend_unstable_step_exit_two(self, capsys):
        code, _ = run_cli(
            capsys,
            "descend", "--matrix", "4,0;0,1", "--start", "1,1",
            "--step", "0.3", "--iterations", "10",
        )
        assert code == 2

    def test_quasiconvex_requires_seed(self, capsys):
        with pytest.raises(SystemExit) as err:
            main(["quasiconvex", "--objective", "sqnorm", "--dim", "2", "--trials", "10"])
        assert err.value.code == 2

    def test_quasiconvex_counterexample(self, capsys):
        code, doc = run_cli(
            capsys,
            "quasiconvex", "--objective", "sin_first", "--dim", "1",
            "--trials", "4000", "--seed", "9",
        )
        assert code == 1 and doc["payload"]["counterexample"] is not None

    def test_doubling(self, capsys, broom_file):
        code, doc = run_cli(
            capsys, "doubling", str(broom_file), "--centers", "root", "--radii", "2.0"
        )
        assert code == 0 and doc["payload"]["constant"] == 2

    def test_separated(self, capsys, broom_file):
        code, doc = run_cli(capsys, "separated", str(broom_file), "--r", "1.0")
        assert code == 0 and doc["payload"]["exact"]

    def test_lrb(self, capsys, tmp_path):
        path = tmp_path / "tripod.json"
        path.write_text(formats.graph_to_json(mg.star_graph(3)))
        code, doc = run_cli(capsys, "lrb", str(path), "--p", "0", "--horizon", "2.0")
        assert code == 0 and doc["payload"]["constant"] == pytest.approx(1.0)

    def test_stable_norm(self, capsys):
        code, doc = run_cli(
            capsys,
            "stable-norm", "--generators", "1,0;-1,0;0,1;0,-1", "--g", "1,1", "--k-max", "32",
        )
        assert code == 0
        assert doc["payload"]["estimate"] == 2.0
        assert doc["payload"]["bracket_width"] == 0.0


class TestGenCommands:
    def test_laakso_graph_document(self, capsys):
        code, doc = run_cli(capsys, "gen", "laakso", "--level", "2")
        assert code == 0
        assert len(doc["edges"]) == 36
        assert doc["metadata"]["root"] == 0

    def test_laakso_sra_points_space(self, capsys):
        code, doc = run_cli(capsys, "gen", "laakso", "--level", "3", "--sra-points", "3")
        assert code == 0
        assert doc["labels"] == ["x1", "x2", "x3"]
        assert doc["dist"][0][1] == 0.375
        assert doc["metadata"]["designated"]["sra_points"] == [0, 1, 2]

    def test_laakso_full_space_flag(self, capsys):
        code, doc = run_cli(capsys, "gen", "laakso", "--level", "1", "--space")
        assert code == 0 and len(doc["labels"]) == 6

    def test_heisenberg_space(self, capsys):
        code, doc = run_cli(capsys, "gen", "heisenberg", "--steps", "4")
        assert code == 0 and len(doc["labels"]) == 5

    def test_cayley_space(self, capsys):
        code, doc = run_cli(
            capsys, "gen", "cayley", "--generators", "1,0;-1,0;0,1;0,-1", "--radius", "2"
        )
        assert code == 0 and "0,0" in doc["labels"]

    def test_sample_requires_seed(self, capsys):
        with pytest.raises(SystemExit) as err:
            main(["gen", "sample", "--dim", "2", "--count", "5"])
        assert err.value.code == 2

    def test_sample_deterministic(self, capsys):
        args = ["gen", "sample", "--dim", "2", "--count", "6", "--norm", "linf", "--seed", "4"]
        code, doc1 = run_cli(capsys, *args)
        code2, doc2 = run_cli(capsys, *args)
        assert code == code2 == 0 and doc1 == doc2


class TestCliContract:
    def test_unknown_subcommand_exits_two(self):
        with pytest.raises(SystemExit) as err:
            main(["frobnicate"])
        assert err.value.code == 2

    def test_reports_byte_identical_modulo_timing(self, capsys, broom_file):
        argv = ["sra", "check", str(broom_file), "--alpha", "0.3", "--subset", "tips"]
        main(argv)
        first = json.loads(capsys.readouterr().out)
        main(argv)
        second = json.loads(capsys.readouterr().out)
        first.pop("timing")
        second.pop("timing")
        assert json.dumps(first, sort_keys=True) == json.dumps(second, sort_keys=True)

    def test_output_flag_writes_file(self, tmp_path, capsys):
        target = tmp_path / "report.json"
        code = main(["beta", "--epsilon", "0.5", "--output", str(target)])
        assert code == 0
        assert capsys.readouterr().out == ""
        jsonschema.validate(json.loads(target.read_text()), SCHEMA)

    def test_module_entry_point(self, tmp_path):
        proc = subprocess.run(
            [sys.executable, "-m", "metricgeo", "bound", "n-of-l", "--l", "2"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert json.loads(proc.stdout)["payload"]["n"] == 3

    def test_stdin_dash_input(self, tmp_path):
        space = mg.normed_space_from_points([[0.0], [1.0]], "l2")
        proc = subprocess.run(
            [sys.executable, "-m", "metricgeo", "validate", "-"],
            input=formats.space_to_json(space),
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
