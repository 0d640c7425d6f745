import json
from pathlib import Path

import jsonschema
import pytest
from click.testing import CliRunner

from sqdkit.cli import main

DATA = Path(__file__).resolve().parent.parent / "data" / "h2o_sto3g_8e6o.fcidump"
SCHEMA = json.loads(
    (Path(__file__).resolve().parent.parent / "src" / "sqdkit" / "schemas"
     / "result.schema.json").read_text())


def run(*args):
    return CliRunner().invoke(main, [str(a) for a in args])


def payload_of(result):
    return json.loads(result.output[result.output.index("{"):])


def validate(payload):
    jsonschema.validate(payload, SCHEMA)


def test_fci_command(tmp_path):
    out = tmp_path / "fci.json"
    result = run("fci", "--fcidump", DATA, "--out", out)
    assert result.exit_code == 0
    payload = json.loads(out.read_text())
    validate(payload)
    assert payload["fci_energy"] == pytest.approx(-75.01259, abs=1e-3)
    assert payload["space_dimension"] == 225
    assert payload["hf_weight"] == pytest.approx(0.972, abs=5e-3)
    assert payload["hf_energy"] == pytest.approx(-74.9619, abs=1e-3)


def test_fci_missing_file():
    result = run("fci", "--fcidump", "/nonexistent/file.fcidump")
    assert result.exit_code == 2
    assert "error" in result.output or result.stderr_bytes


def test_fci_toy_matches_oracle(tmp_path):
    from conftest import TOY_1ORB
    import numpy as np
    import sys

    sys.path.insert(0, str(Path(__file__).parent))
    from oracles import fock_matrix
    from sqdkit import parse_fcidump

    path = tmp_path / "toy.fcidump"
    path.write_text(TOY_1ORB)
    result = run("fci", "--fcidump", path, "--out", tmp_path / "toy.json")
    assert result.exit_code == 0
    payload = json.loads((tmp_path / "toy.json").read_text())
    ints = parse_fcidump(TOY_1ORB)
    fock = fock_matrix(ints)
    sector = [0b11]  # alpha bit 0 + beta bit 0 -> index 0b11
    exact = fock[0b11, 0b11] + ints.core_energy
    assert payload["fci_energy"] == pytest.approx(exact, abs=1e-10)


def test_qsci_records(tmp_path):
    out = tmp_path / "qsci.json"
    result = run("qsci", "--fcidump", DATA, "--shots", "1000,10000",
                 "--seed", 5, "--out", out)
    assert result.exit_code == 0
    payload = json.loads(out.read_text())
    validate(payload)
    assert [r["shots"] for r in payload["records"]] == [1000, 10000]
    for record in payload["records"]:
        assert set(record) >= {"method", "shots", "energy", "abs_error",
                               "subspace_size", "n_discovered", "n_valid",
                               "seed"}
        assert record["method"] == "qsci"
    assert payload["records"][1]["abs_error"] < 1.6e-3


def test_qsci_reproducible(tmp_path):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    for out in (a, b):
        assert run("qsci", "--fcidump", DATA, "--shots", "500", "--seed", 9,
                   "--out", out).exit_code == 0
    assert a.read_text() == b.read_text()


def test_sqd_records_noisy(tmp_path):
    out = tmp_path / "sqd.json"
    result = run("sqd", "--fcidump", DATA, "--shots", "1000", "--seed", 3,
                 "--noise-p01", 0.01, "--noise-p10", 0.01, "--out", out)
    assert result.exit_code == 0
    payload = json.loads(out.read_text())
    validate(payload)
    record = payload["records"][0]
    assert record["method"] == "sqd"
    assert record["n_discovered"] > record["n_valid"]


def test_sqd_csv_format(tmp_path):
    out = tmp_path / "sqd.csv"
    result = run("sqd", "--fcidump", DATA, "--shots", "500", "--seed", 1,
                 "--format", "csv", "--out", out)
    assert result.exit_code == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0].startswith("method,shots,")
    assert len(lines) == 2


def test_vqe_exact(tmp_path):
    out = tmp_path / "vqe.json"
    result = run("vqe", "--fcidump", DATA, "--exact", "--sweeps", 3,
                 "--out", out)
    assert result.exit_code == 0
    payload = json.loads(out.read_text())
    validate(payload)
    assert payload["energy"] == pytest.approx(-75.0125, abs=2e-4)
    assert payload["abs_error"] < 2e-4
    assert payload["n_terms"] == 551
    assert abs(payload["n_groups_general"] - 31) <= 5


def test_sample_command(tmp_path):
    out = tmp_path / "dist.json"
    result = run("sample", "--fcidump", DATA, "--shots", 200, "--seed", 7,
                 "--out", out)
    assert result.exit_code == 0
    payload = json.loads(out.read_text())
    validate(payload)
    dist = payload["distribution"]
    assert dist["total"] == 200
    assert sum(dist["counts"].values()) == 200
    assert all(len(k) == 12 for k in dist["counts"])


def test_bad_shots_list():
    result = run("qsci", "--fcidump", DATA, "--shots", "10,-5")
    assert result.exit_code == 2


def test_coupon_grid(tmp_path):
    out = tmp_path / "coupon.json"
    result = run("coupon", "--m-grid", "10,20", "--p-max", 0.972,
                 "--mc-trials", 2000, "--mc-max-m", 12, "--out", out)
    assert result.exit_code == 0
    payload = json.loads(out.read_text())
    validate(payload)
    rows = payload["rows"]
    assert [r["m"] for r in rows] == [10, 20]
    assert rows[0]["lower_bound"] < rows[1]["lower_bound"]
    assert "exact" in rows[0]
    assert "mc_mean" in rows[0] and "mc_mean" not in rows[1]


def test_coupon_csv(tmp_path):
    out = tmp_path / "coupon.csv"
    result = run("coupon", "--m-grid", "5,10", "--format", "csv", "--out", out)
    assert result.exit_code == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0].startswith("m,p_max,lower_bound")
    assert len(lines) == 3


def test_coupon_needs_input():
    assert run("coupon").exit_code == 2


def test_metadata_and_hash_stability(tmp_path):
    out1 = tmp_path / "m1.json"
    out2 = tmp_path / "m2.json"
    run("fci", "--fcidump", DATA, "--out", out1)
    run("fci", "--fcidump", DATA, "--out", out2)
    p1 = json.loads(out1.read_text())
    p2 = json.loads(out2.read_text())
    assert p1["config_hash"] == p2["config_hash"]
    assert p1 == p2
    run("fci", "--fcidump", DATA, "--seed", 1, "--out", out2)
    assert json.loads(out2.read_text())["config_hash"] != p1["config_hash"]
