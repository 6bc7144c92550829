import json

import numpy as np
import pytest

from kryloverg.cli import main
from kryloverg.models import load_matrix


def write_config(tmp_path, payload, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def test_goe_cdf_subcommand(capsys):
    code = main(["stats", "goe-cdf", "--dim", "3", "--x", "0.25"])
    assert code == 0
    out = capsys.readouterr().out.strip()
    assert float(out) == pytest.approx(0.5, abs=1e-12)


def test_rmt_sweep_end_to_end(tmp_path, capsys):
    cfg = write_config(
        tmp_path,
        {
            "experiment": "rmt_lambda",
            "grid": [0.1, 1.0],
            "dim": 10,
            "n_realizations": 2,
            "master_seed": 4,
        },
    )
    code = main(["rmt-sweep", "--config", cfg, "--out", str(tmp_path / "out")])
    assert code == 0
    csv_path = tmp_path / "out" / "rmt_lambda.csv"
    meta_path = tmp_path / "out" / "rmt_lambda.meta.json"
    assert csv_path.exists() and meta_path.exists()
    assert csv_path.read_text().startswith("param,eta_mean")


def test_seed_override_changes_output(tmp_path):
    payload = {
        "experiment": "rmt_lambda",
        "grid": [0.5, 2.0],
        "dim": 8,
        "n_realizations": 1,
        "master_seed": 4,
    }
    cfg = write_config(tmp_path, payload)
    main(["rmt-sweep", "--config", cfg, "--out", str(tmp_path / "a")])
    main(["rmt-sweep", "--config", cfg, "--seed", "5", "--out", str(tmp_path / "b")])
    a = (tmp_path / "a" / "rmt_lambda.csv").read_text()
    b = (tmp_path / "b" / "rmt_lambda.csv").read_text()
    assert a != b


def test_config_error_exit_code(tmp_path):
    cfg = write_config(tmp_path, {"experiment": "rmt_lambda", "grid": [1.0], "dim": 8, "junk": 1})
    assert main(["rmt-sweep", "--config", cfg]) == 2


def test_command_config_mismatch(tmp_path):
    cfg = write_config(
        tmp_path, {"experiment": "rmt_lambda", "grid": [1.0, 2.0], "dim": 8}
    )
    assert main(["chain-sweep", "--config", cfg]) == 2


def test_total_failure_exit_code(tmp_path):
    # dim=2 leaves fewer than three levels, so every realization fails
    cfg = write_config(
        tmp_path, {"experiment": "rmt_lambda", "grid": [1.0, 2.0], "dim": 2}
    )
    assert main(["rmt-sweep", "--config", cfg, "--out", str(tmp_path / "out")]) == 4


def test_arnoldi_dump_with_basis_and_matrix(tmp_path):
    cfg = write_config(
        tmp_path,
        {
            "experiment": "chain_hz",
            "grid": [0.4, 1.0],
            "n_sites": 4,
            "tau": 1.0,
            "disorder_sigma": 0.2,
            "n_realizations": 2,
            "master_seed": 8,
        },
    )
    code = main(
        [
            "arnoldi-dump",
            "--config",
            cfg,
            "--grid-point",
            "1",
            "--realization",
            "1",
            "--out",
            str(tmp_path / "dump"),
            "--dump-basis",
            "--dump-matrix",
        ]
    )
    assert code == 0
    payload = json.loads((tmp_path / "dump" / "chain_hz.arnoldi.json").read_text())
    assert payload["dim"] == 16
    assert payload["grid_value"] == 1.0
    assert "basis" in payload
    u = load_matrix(tmp_path / "dump" / "chain_hz.unitary.bin")
    assert u.shape == (16, 16)
    assert np.max(np.abs(u.conj().T @ u - np.eye(16))) < 1e-10


def test_tau_scan_cli(tmp_path):
    cfg = write_config(
        tmp_path,
        {
            "experiment": "tau_scan",
            "grid": [0.5, 1.0],
            "n_sites": 4,
            "h_z": 0.5,
            "dump_sequences_at": [1.0],
            "output_path": "scan",
        },
    )
    code = main(["tau-scan", "--config", cfg, "--out", str(tmp_path / "out")])
    assert code == 0
    assert (tmp_path / "out" / "scan.csv").exists()
    assert (tmp_path / "out" / "scan.seq00.json").exists()
