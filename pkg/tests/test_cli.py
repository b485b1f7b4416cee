import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from portkit.cli import EXIT_CONFIG, EXIT_NUMERIC, EXIT_OK, main, parse_sweep_csv, sweep_csv_header, sweep_csv_line
from portkit.solver import SweepRow

CONFIGS = Path(__file__).resolve().parent.parent / "configs"
BASE = json.loads((CONFIGS / "base_cara.json").read_text())


def write(tmp_path, obj, name="cfg.json"):
    path = tmp_path / name
    path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(path)


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


@pytest.mark.parametrize("command", ["moments", "indices", "solve"])
@pytest.mark.parametrize("config", sorted(p.name for p in CONFIGS.glob("*.json")))
def test_shipped_configs_run(command, config):
    code, text = run(command, "--config", str(CONFIGS / config))
    assert code == EXIT_OK
    assert text


def test_moments_output_reports_both_backends_and_the_closed_form():
    code, text = run("moments", "--config", str(CONFIGS / "base_cara.json"))
    assert code == EXIT_OK
    for label in ("choquet", "distributional", "closed-form", "choquet - closed"):
        assert label in text


def test_indices_output():
    code, text = run("indices", "--config", str(CONFIGS / "crra_indices.json"))
    assert code == EXIT_OK
    assert "0.25  0.75  1.25" in text


def test_singular_indices_are_printed_as_such(tmp_path):
    cfg = dict(BASE, utility={"family": "linear"})
    code, text = run("indices", "--config", write(tmp_path, cfg))
    assert code == EXIT_OK
    assert "singular" in text


def test_solve_writes_json_with_the_seed(tmp_path):
    out = tmp_path / "solve.json"
    code, _ = run("solve", "--config", str(CONFIGS / "base_cara.json"), "--json", str(out), "--seed", "7")
    assert code == EXIT_OK
    payload = json.loads(out.read_text())
    assert payload["seed"] == 7
    assert payload["alpha_exact"] == pytest.approx(6.149666001909789, rel=1e-12)


@pytest.mark.parametrize(
    "mutate, key",
    [
        (lambda c: "{not json", "<json>"),
        (lambda c: {k: v for k, v in c.items() if k != "w0"}, "w0"),
        (lambda c: {k: v for k, v in c.items() if k != "risky"}, "risky"),
        (lambda c: dict(c, sweep={"k": []}), "sweep.k"),
        (lambda c: dict(c, sweep={"k": [0.1, -0.2]}), "sweep.k[1]"),
        (lambda c: dict(c, backend="both-ish"), "backend"),
        (lambda c: dict(c, extra=1), "extra"),
        (lambda c: dict(c, r=-1.5), "r"),
        (lambda c: dict(c, risky={"triangular": [1, 0, 2]}), "risky.triangular"),
        (lambda c: dict(c, utility={"family": "cara"}), "utility.lambda"),
        (lambda c: dict(c, quadrature={"abs_tol": "tiny"}), "quadrature.abs_tol"),
    ],
)
def test_config_errors_exit_2_naming_the_key(tmp_path, capsys, mutate, key):
    code, _ = run("sweep", "--config", write(tmp_path, mutate(BASE)))
    assert code == EXIT_CONFIG
    assert f"[{key}]" in capsys.readouterr().err


def test_missing_config_file_exits_2(tmp_path):
    assert run("solve", "--config", str(tmp_path / "absent.json"))[0] == EXIT_CONFIG


def test_sweep_without_multipliers_exits_2(tmp_path):
    cfg = {k: v for k, v in BASE.items() if k != "sweep"}
    assert run("sweep", "--config", write(tmp_path, cfg))[0] == EXIT_CONFIG


def test_unwritable_csv_exits_2():
    code, _ = run("sweep", "--config", str(CONFIGS / "base_cara.json"), "--csv", "/nonexistent/dir/out.csv")
    assert code == EXIT_CONFIG


def test_tolerance_env_var_is_validated(tmp_path, monkeypatch):
    monkeypatch.setenv("PORTKIT_QUAD_TOL", "fine")
    assert run("moments", "--config", str(CONFIGS / "base_cara.json"))[0] == EXIT_CONFIG


def test_model_failures_exit_3(tmp_path, capsys):
    negative = dict(BASE, risky={"triangular": [-0.06, -0.01, 0.04]})
    code, _ = run("sweep", "--config", write(tmp_path, negative), "--csv", str(tmp_path / "s.csv"))
    assert code == EXIT_NUMERIC
    assert "ModelError" in capsys.readouterr().err
    assert (tmp_path / "s.csv").read_text().endswith("# aborted\n")
    infeasible = {"w0": 1.0, "risky": {"triangular": [0.0, 0.05, 0.1]}, "utility": {"family": "hara", "theta": 1, "eta": 0, "gamma": 3}, "sweep": {"k": [1.0]}}
    assert run("sweep", "--config", write(tmp_path, infeasible, "arb.json"))[0] == EXIT_NUMERIC


def test_sweep_csv_round_trip_and_row_count(tmp_path):
    path = tmp_path / "sweep.csv"
    code, _ = run("sweep", "--config", str(CONFIGS / "base_cara.json"), "--csv", str(path))
    assert code == EXIT_OK
    rows = parse_sweep_csv(path.read_text())
    assert len(rows) == 2 * len(BASE["sweep"]["k"])
    assert {r.backend for r in rows} == {"choquet", "distributional"}
    assert sweep_csv_header() + "".join(sweep_csv_line(r) for r in rows) == path.read_text()


def test_backend_flag_selects_one_backend(tmp_path):
    path = tmp_path / "sweep.csv"
    code, _ = run("sweep", "--config", str(CONFIGS / "base_cara.json"), "--backend", "distributional", "--csv", str(path))
    assert code == EXIT_OK
    rows = parse_sweep_csv(path.read_text())
    assert len(rows) == len(BASE["sweep"]["k"])


def test_csv_round_trip_preserves_singular_entries():
    row = SweepRow(0.1, 0.001, 1.5, 1.4, None, None, 0.1, None, None, "choquet", None)
    back = parse_sweep_csv(sweep_csv_header() + sweep_csv_line(row))
    assert back == [row]


def test_sweep_csv_is_byte_deterministic_across_processes(tmp_path):
    outputs = []
    for i in range(2):
        path = tmp_path / f"run{i}.csv"
        proc = subprocess.run(
            [sys.executable, "-m", "portkit", "sweep", "--config", str(CONFIGS / "base_cara.json"),
             "--csv", str(path), "--seed", "11"],
            capture_output=True, text=True,
        )
        assert proc.returncode == EXIT_OK, proc.stderr
        outputs.append(path.read_bytes())
    assert outputs[0] == outputs[1]
