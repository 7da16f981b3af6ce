"""Command line interface, driven in process through main()."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from zenopt.cli import main
from zenopt.experiments import CATALOG

TINY_CNF = "p cnf 2 1\n1 2 0\n"
UNSAT_CNF = "p cnf 1 2\n1 0\n-1 0\n"


@pytest.fixture
def outdir(tmp_path, monkeypatch):
    monkeypatch.setenv("ZENOPT_OUT", str(tmp_path))
    return tmp_path


def write_cnf(tmp_path, text, name="instance.cnf"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_no_arguments_is_usage_error(capsys):
    assert main([]) == 2
    capsys.readouterr()


def test_experiment_list_prints_catalog(outdir, capsys):
    assert main(["experiment", "--list"]) == 0
    assert capsys.readouterr().out.split() == sorted(CATALOG)


def test_experiment_unknown_name(outdir, capsys):
    assert main(["experiment", "no-such-figure"]) == 2
    assert "unknown experiment" in capsys.readouterr().err


def test_experiment_without_name(outdir, capsys):
    assert main(["experiment"]) == 2
    capsys.readouterr()


def test_experiment_writes_outputs_and_config(outdir, capsys):
    assert main(["experiment", "stirap-check"]) == 0
    printed = [Path(line) for line in capsys.readouterr().out.splitlines()]
    assert all(p.exists() for p in printed)
    cfg = json.loads((outdir / "experiment-stirap-check-config.json").read_text())
    assert cfg["command"] == "experiment"
    assert cfg["name"] == "stirap-check"


def test_witness_verdicts(outdir, tmp_path, capsys):
    sat = write_cnf(tmp_path, TINY_CNF)
    assert main(["witness", "--cnf", sat]) == 0
    assert capsys.readouterr().out.strip() == "satisfiable"
    unsat = write_cnf(tmp_path, UNSAT_CNF, "unsat.cnf")
    assert main(["witness", "--cnf", unsat]) == 0
    assert capsys.readouterr().out.strip() == "unsatisfiable"


def test_witness_add_clause_flips_verdict(outdir, tmp_path, capsys):
    path = write_cnf(tmp_path, "p cnf 1 1\n1 0\n")
    assert main(["witness", "--cnf", path, "--add-clause", "-1"]) == 0
    assert capsys.readouterr().out.strip() == "unsatisfiable"


def test_witness_rejects_bad_inputs(outdir, tmp_path, capsys):
    assert main(["witness"]) == 2
    assert main(["witness", "--cnf", str(tmp_path / "missing.cnf")]) == 2
    assert main(["witness", "--bundled", "--theta", "9.0"]) == 2
    bad = write_cnf(tmp_path, "p cnf 2 1\n1 x 0\n", "bad.cnf")
    assert main(["witness", "--cnf", bad]) == 2
    both = write_cnf(tmp_path, TINY_CNF, "both.cnf")
    assert main(["witness", "--bundled", "--cnf", both]) == 2
    assert main(["witness", "--bundled", "--add-clause", "0"]) == 2
    assert main(["witness", "--bundled", "--add-clause", "99"]) == 2
    capsys.readouterr()


def test_sweep_requires_engine_and_instance(outdir, capsys):
    assert main(["sweep", "--bundled"]) == 2
    assert main(["sweep", "--engine", "projected"]) == 2
    capsys.readouterr()


def test_sweep_projected_writes_trace(outdir, tmp_path, capsys):
    path = write_cnf(tmp_path, TINY_CNF)
    rc = main(
        [
            "sweep",
            "--engine",
            "projected",
            "--cnf",
            path,
            "--target",
            "01",
            "--times",
            "5.0",
            "--steps",
            "100",
            "--record-points",
            "9",
        ]
    )
    assert rc == 0
    csv = (outdir / "sweep-projected.csv").read_text().splitlines()
    assert csv[0] == "total_time,theta,survival,success"
    assert len(csv) == 1 + 9
    capsys.readouterr()


def test_sweep_measurement_uses_round_count(outdir, tmp_path, capsys):
    path = write_cnf(tmp_path, TINY_CNF)
    rc = main(
        [
            "sweep",
            "--engine",
            "measurement",
            "--cnf",
            path,
            "--target",
            "01",
            "--measurements",
            "20",
            "--record-points",
            "5",
        ]
    )
    assert rc == 0
    csv = (outdir / "sweep-measurement.csv").read_text().splitlines()
    assert csv[0] == "n_measurements,theta,survival,success"
    assert csv[1].startswith("20,")
    capsys.readouterr()


def test_sweep_tf_engine(outdir, tmp_path, capsys):
    path = write_cnf(tmp_path, TINY_CNF)
    rc = main(
        [
            "sweep",
            "--engine",
            "tf",
            "--cnf",
            path,
            "--target",
            "01",
            "--times",
            "30.0",
            "--steps",
            "200",
            "--record-points",
            "5",
        ]
    )
    assert rc == 0
    header = (outdir / "sweep-tf.csv").read_text().splitlines()[0]
    assert header == "total_time,s,survival,success"
    capsys.readouterr()


def test_sweep_unsat_projected_is_protocol_failure(outdir, tmp_path, capsys):
    path = write_cnf(tmp_path, UNSAT_CNF)
    rc = main(
        [
            "sweep",
            "--engine",
            "projected",
            "--cnf",
            path,
            "--target",
            "0",
            "--times",
            "1.0",
            "--steps",
            "20",
        ]
    )
    assert rc == 1
    assert "protocol failure" in capsys.readouterr().err


def test_sweep_target_validation(outdir, tmp_path, capsys):
    path = write_cnf(tmp_path, TINY_CNF)
    base = ["sweep", "--engine", "projected", "--cnf", path, "--times", "1.0"]
    assert main(base) == 2  # no planted assignment, no --target
    assert main(base + ["--target", "012"]) == 2
    capsys.readouterr()


def test_spectrum_rows(outdir, capsys):
    assert main(["spectrum", "--bundled", "--points", "3"]) == 0
    csv = (outdir / "spectrum.csv").read_text().splitlines()
    assert csv[0] == "theta,track,eigenvalue,color,kernel_count"
    assert len(csv) == 1 + 3 * 243
    capsys.readouterr()


def test_solve_iterative_reports_assignment(outdir, tmp_path, capsys):
    path = write_cnf(tmp_path, TINY_CNF)
    rc = main(
        [
            "solve-iterative",
            "--cnf",
            path,
            "--seed",
            "1",
            "--time",
            "50.0",
            "--steps",
            "100",
        ]
    )
    assert rc == 0
    verdict = capsys.readouterr().out.strip()
    assert verdict in {"01", "10", "11"}


def test_solve_iterative_unsat_and_missing_seed(outdir, tmp_path, capsys):
    unsat = write_cnf(tmp_path, UNSAT_CNF)
    assert main(["solve-iterative", "--cnf", unsat, "--seed", "0"]) == 0
    assert capsys.readouterr().out.strip() == "unsatisfiable"
    sat = write_cnf(tmp_path, TINY_CNF, "sat.cnf")
    assert main(["solve-iterative", "--cnf", sat]) == 2
    capsys.readouterr()


def test_generate_deterministic_with_header(outdir, capsys):
    args = ["generate", "--planted", "--vars", "4", "--seed", "11"]
    assert main(args) == 0
    first = capsys.readouterr().out
    assert main(args) == 0
    assert capsys.readouterr().out == first
    assert first.startswith("c planted 0000\np cnf 4 ")


def test_generate_flag_requirements(outdir, capsys):
    assert main(["generate", "--vars", "4", "--seed", "1"]) == 2
    assert main(["generate", "--planted", "--seed", "1"]) == 2
    assert main(["generate", "--planted", "--vars", "0", "--seed", "1"]) == 2
    assert main(["generate", "--planted", "--vars", "4"]) == 2
    capsys.readouterr()


def test_generate_to_file(outdir, capsys):
    rc = main(
        ["generate", "--planted", "--vars", "3", "--seed", "2", "--file", "out.cnf"]
    )
    assert rc == 0
    assert (outdir / "out.cnf").read_text().startswith("c planted 000\n")
    capsys.readouterr()


def test_config_replay_is_byte_identical(outdir, tmp_path, capsys):
    assert main(["spectrum", "--bundled", "--points", "4"]) == 0
    capsys.readouterr()
    first = (outdir / "spectrum.csv").read_bytes()
    config = outdir / "spectrum-config.json"
    replay_dir = tmp_path / "replay"
    rc = main(["spectrum", "--config", str(config), "--out", str(replay_dir)])
    assert rc == 0
    capsys.readouterr()
    assert (replay_dir / "spectrum.csv").read_bytes() == first
    # the rewritten config differs only in its out entry
    a = json.loads(config.read_text())
    b = json.loads((replay_dir / "spectrum-config.json").read_text())
    a.pop("out"), b.pop("out")
    assert a == b


def test_config_flag_overrides_file(outdir, capsys):
    assert main(["spectrum", "--bundled", "--points", "3"]) == 0
    capsys.readouterr()
    config = outdir / "spectrum-config.json"
    rc = main(["spectrum", "--config", str(config), "--points", "2"])
    assert rc == 0
    capsys.readouterr()
    csv = (outdir / "spectrum.csv").read_text().splitlines()
    assert len(csv) == 1 + 2 * 243


def test_config_validation(outdir, tmp_path, capsys):
    wrong = tmp_path / "wrong.json"
    wrong.write_text(json.dumps({"command": "witness", "bundled": True}))
    assert main(["spectrum", "--config", str(wrong)]) == 2
    unknown = tmp_path / "unknown.json"
    unknown.write_text(json.dumps({"command": "witness", "gamma": 2.0}))
    assert main(["witness", "--config", str(unknown)]) == 2
    broken = tmp_path / "broken.json"
    broken.write_text("{nope")
    assert main(["witness", "--config", str(broken)]) == 2
    listed = tmp_path / "list.json"
    listed.write_text(json.dumps([1, 2]))
    assert main(["witness", "--config", str(listed)]) == 2
    assert main(["witness", "--config", str(tmp_path / "absent.json")]) == 2
    assert main(["witness", "--bundled", "--config"]) == 2
    capsys.readouterr()
