import csv
import io
import json
import math

import pytest

from cvrsp import cli

FINITE4 = {
    "protocol": "finite",
    "params": {"alphas": [0.5, 0.5, 0.5, 0.5], "phases": [0.0, 0.7, 1.9, 4.0]},
}


def write(tmp_path, data, name="cfg.json"):
    path = tmp_path / name
    path.write_text(data if isinstance(data, str) else json.dumps(data))
    return str(path)


def read_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_run_finite_csv(tmp_path, capsys):
    assert cli.main(["run", write(tmp_path, FINITE4)]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == ",".join(cli.RUN_COLUMNS)
    rows = read_csv(out)
    assert len(rows) == 4
    for row in rows:
        assert abs(float(row["fidelity"]) - 1) < 1e-12
        assert abs(float(row["probability"]) - 0.25) < 1e-12
        assert row["message_kind"] == "integer" and row["discarded"] == "false"
        assert row["dropped_weight"] == ""


def test_run_writes_file_with_flags(tmp_path):
    out = tmp_path / "report.json"
    cfg = write(tmp_path, dict(FINITE4, mode={"sample": {"runs": 50, "seed": 3}}))
    assert cli.main(["run", cfg, "--format", "json", "--out", str(out), "--seed", "11"]) == 0
    report = json.loads(out.read_text())
    assert report["seed"] == 11 and len(report["rows"]) == 50
    assert report["summary"]["n_runs"] == 50
    assert report["columns"] == list(cli.RUN_COLUMNS)
    assert not list(tmp_path.glob(".rsp-*"))


def test_output_path_from_config(tmp_path):
    out = tmp_path / "r.csv"
    cfg = write(tmp_path, dict(FINITE4, output={"format": "csv", "path": str(out)}))
    assert cli.main(["run", cfg]) == 0
    assert len(read_csv(out.read_text())) == 4


def test_photon_cutoff_negative_support(tmp_path, capsys):
    cfg = {
        "protocol": "photon_cutoff",
        "params": {"cutoff": 3, "resource_dim": 16,
                   "coeffs": [[-1, math.sqrt(0.2), 0], [0, math.sqrt(0.4), 0], [1, 0, math.sqrt(0.4)]]},
    }
    assert cli.main(["run", write(tmp_path, cfg)]) == 0
    rows = read_csv(capsys.readouterr().out)
    kept = [r for r in rows if r["discarded"] == "false"]
    assert kept and all(abs(float(r["dropped_weight"]) - 0.2) < 1e-9 for r in kept)
    discard = [r for r in rows if r["discarded"] == "true"]
    assert len(discard) == 1 and discard[0]["outcome_id"] == "-1" and discard[0]["fidelity"] == ""


@pytest.mark.parametrize(
    "content",
    [
        "{not json",
        {"protocol": "finite"},
        {"protocol": "teleport", "params": {}},
        dict(FINITE4, extra=1),
        dict(FINITE4, mode="sample"),
        dict(FINITE4, mode={"sample": {"runs": 0, "seed": 1}}),
        dict(FINITE4, output={"format": "xml"}),
        {"protocol": "finite", "params": {"alphas": [0.5, 0.5], "phases": [0, 0]}},
        {"protocol": "finite", "params": {"alphas": [1.0], "phases": [0], "colour": "red"}},
    ],
)
def test_run_rejects_invalid_config(tmp_path, capsys, content):
    assert cli.main(["run", write(tmp_path, content)]) == 2
    assert capsys.readouterr().err.startswith("rsp:")


def test_run_missing_file(tmp_path, capsys):
    assert cli.main(["run", str(tmp_path / "absent.json")]) == 2
    assert "absent.json" in capsys.readouterr().err


def test_invariant_violation_exit_code(tmp_path, monkeypatch, capsys):
    from cvrsp import engine

    monkeypatch.setattr(engine, "invariant_violations", lambda batch, tol=1e-8: list(batch.runs))
    assert cli.main(["run", write(tmp_path, FINITE4)]) == 3
    assert "below fidelity" in capsys.readouterr().err


def test_run_is_byte_identical(tmp_path):
    cfg = write(tmp_path, {
        "protocol": "phase", "params": {"r": 0.6, "n_meas": 4, "chi": 0.3},
        "mode": {"sample": {"runs": 200, "seed": 5}},
    })
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert cli.main(["run", cfg, "--out", str(a)]) == 0
    assert cli.main(["run", cfg, "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_verify_all_passes(capsys):
    assert cli.main(["verify"]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out and "PASS qmath." in out


def test_verify_phase_alias_has_closed_form_check(capsys):
    assert cli.main(["verify", "rsp_phase"]) == 0
    assert "phase.success_probability_closed_form" in capsys.readouterr().out


def test_verify_unknown_suite(capsys):
    assert cli.main(["verify", "nonsense"]) == 2


def test_verify_perturbed_unitary_fails(capsys):
    assert cli.main(["verify", "finite", "--perturb", "1e-3"]) != 0
    out = capsys.readouterr().out
    assert "FAIL finite.group_law" in out


def test_sweep_phase_success_probability(tmp_path, capsys):
    cfg = {"protocol": "phase", "params": {"r": 0.5, "chi": 0.2},
           "axis": {"name": "n_meas", "values": list(range(1, 11))}}
    assert cli.main(["sweep", write(tmp_path, cfg)]) == 0
    rows = read_csv(capsys.readouterr().out)
    assert len(rows) == 10
    assert all(float(r["abs_deviation"]) < 1e-9 for r in rows)


def test_sweep_squeezing_monotone(tmp_path, capsys):
    cfg = {"protocol": "phase", "params": {"n_meas": 4}, "axis": {"name": "r", "values": [0, 0.25, 0.5]}}
    assert cli.main(["sweep", write(tmp_path, cfg)]) == 0
    vals = [float(r["simulated"]) for r in read_csv(capsys.readouterr().out)]
    assert vals[0] == pytest.approx(1.0) and vals[0] > vals[1] > vals[2]


def test_sweep_quadrature_grid_json(tmp_path):
    out = tmp_path / "s.json"
    cfg = {"protocol": "quadrature", "params": {"dx": 0.3, "poly": [0.2, 0.4]},
           "axis": {"name": "m", "values": [4, 8, 16]}, "output": {"format": "json", "path": str(out)}}
    assert cli.main(["sweep", write(tmp_path, cfg)]) == 0
    rows = json.loads(out.read_text())["rows"]
    assert [r["value"] for r in rows] == [4, 8, 16]
    assert all(abs(r["simulated"] - 1) < 1e-10 for r in rows)


def test_sweep_empty_axis(tmp_path):
    cfg = {"protocol": "phase", "params": {"n_meas": 4}, "axis": {"name": "r", "values": []}}
    assert cli.main(["sweep", write(tmp_path, cfg)]) == 2


def test_sweep_bad_value(tmp_path):
    cfg = {"protocol": "phase", "params": {"n_meas": 4}, "axis": {"name": "r", "values": [-1]}}
    assert cli.main(["sweep", write(tmp_path, cfg)]) == 2


def test_bad_arguments():
    assert cli.main([]) == 2
    assert cli.main(["frobnicate"]) == 2


def test_number_formatting_round_trips():
    for x in (0.1, 1 / 3, 1e-300, 0.9999999999999996):
        assert float(cli.fmt(x)) == x
    assert cli.fmt(None) == "" and cli.fmt(True) == "true" and cli.fmt(7) == "7"
