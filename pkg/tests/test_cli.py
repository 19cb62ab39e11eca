import json
import subprocess
import sys

import numpy as np
import pytest

from photonperm import cli, graphlib


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.RESULTS_ENV, str(tmp_path / "results"))
    return tmp_path


@pytest.fixture
def k3_file(workdir):
    g = graphlib.Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
    path = workdir / "k3.json"
    path.write_text(graphlib.graph_to_json(g))
    return str(path)


def journal_records(workdir):
    path = workdir / "results" / "journal.jsonl"
    if not path.exists():
        return []
    return [json.loads(line) for line in path.read_text().splitlines()]


def test_permanent_exact(k3_file, workdir, capsys):
    status, record = cli.run_command(["permanent", "--graph", k3_file, "--exact"])
    assert status == 0
    assert capsys.readouterr().out.strip() == "2"
    assert record.estimates["permanent"] == pytest.approx(2.0)
    assert record.backend == "exact"
    assert len(record.input_digest) == 64
    assert len(journal_records(workdir)) == 1


def test_permanent_sampled_reproducible(k3_file, workdir, capsys):
    args = ["permanent", "--graph", k3_file, "--samples", "50000", "--seed", "7"]
    status, first = cli.run_command(args)
    assert status == 0
    lo, hi = first.estimates["confidence_interval"]
    assert lo <= 2.0 <= hi
    status, second = cli.run_command(args)
    assert status == 0
    assert first.estimates == second.estimates
    records = journal_records(workdir)
    assert len(records) == 2
    assert records[0]["stopping_rule"] == "samples=50000"


def test_unknown_flag_no_record(k3_file, workdir):
    status, record = cli.run_command(["permanent", "--graph", k3_file, "--bogus"])
    assert status == 2
    assert record is None
    assert journal_records(workdir) == []


def test_missing_file_error(workdir):
    status, record = cli.run_command(["permanent", "--graph", "nope.json", "--exact"])
    assert status == 1
    assert record is None
    assert journal_records(workdir) == []


def test_encode_artifact(k3_file, workdir):
    status, record = cli.run_command(["encode", "--graph", k3_file])
    assert status == 0
    artifact = workdir / "results" / f"{record.record_id}_unitary.json"
    doc = json.loads(artifact.read_text())
    assert doc["m"] == 6 and doc["n"] == 3
    assert record.estimates["scale"] == pytest.approx(2.0)


def test_digest_tracks_content(workdir, k3_file):
    _, first = cli.run_command(["permanent", "--graph", k3_file, "--exact"])
    _, again = cli.run_command(["permanent", "--graph", k3_file, "--exact"])
    assert first.input_digest == again.input_digest
    p4 = workdir / "p4.json"
    p4.write_text(
        graphlib.graph_to_json(
            graphlib.Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
        )
    )
    _, other = cli.run_command(["permanent", "--graph", str(p4), "--exact"])
    assert other.input_digest != first.input_digest


def test_perm_poly(k3_file, workdir):
    status, record = cli.run_command(
        ["perm-poly", "--graph", k3_file, "--exact", "--seed", "1"]
    )
    assert status == 0
    coeffs = record.estimates["coefficients"]
    assert np.abs(np.array(coeffs) - np.array([-2.0, 3.0, 0.0, 1.0])).max() <= 1e-8
    artifact = workdir / "results" / f"{record.record_id}_poly.csv"
    assert artifact.read_text().startswith("x,value")


def test_gi(workdir, k3_file):
    p3 = workdir / "p3.json"
    p3.write_text(
        graphlib.graph_to_json(graphlib.Graph.from_edges(3, [(0, 1), (1, 2)]))
    )
    status, record = cli.run_command(
        ["gi", "--graph-a", k3_file, "--graph-b", str(p3), "--exact", "--seed", "2"]
    )
    assert status == 0
    assert record.estimates["verdict"] == "DISTINGUISHED"


def test_dense_subgraph(workdir):
    g = graphlib.Graph.from_edges(
        6, [(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 5), (4, 5)]
    )
    path = workdir / "g.json"
    path.write_text(graphlib.graph_to_json(g))
    status, record = cli.run_command(
        ["dense-subgraph", "--graph", str(path), "-k", "3",
         "--anchors", "1", "--exact", "--seed", "0"]
    )
    assert status == 0
    assert record.estimates["top_candidate"] == "1,2,3"


def test_boost_w(workdir):
    mat = workdir / "mat.json"
    json.dump([[0, 1, 1], [1, 0, 1], [1, 1, 0]], mat.open("w"))
    status, record = cli.run_command(
        ["boost-w", "--matrix", str(mat), "--row", "1", "--w-grid", "1:3:0.5"]
    )
    assert status == 0
    assert record.estimates["permanent"] == pytest.approx(2.0)
    artifact = workdir / "results" / f"{record.record_id}_boost_w.csv"
    assert artifact.read_text().startswith("w,probability")


def test_boost_eps(workdir):
    mat = workdir / "mat.json"
    json.dump([[0, 1], [1, 0]], mat.open("w"))
    status, record = cli.run_command(
        ["boost-eps", "--matrix", str(mat), "--eps-grid", "0,0.5,1"]
    )
    assert status == 0
    assert record.estimates["permanent"] == pytest.approx(1.0)


def test_sample(k3_file, workdir):
    status, record = cli.run_command(
        ["sample", "--graph", k3_file, "--samples", "20000", "--seed", "3"]
    )
    assert status == 0
    assert record.total_samples == 20000
    assert record.postselected_count > 0
    counts = json.loads(
        (workdir / "results" / f"{record.record_id}_counts.json").read_text()
    )
    assert sum(counts.values()) == 20000


def test_generated_seed_recorded(k3_file, workdir):
    status, record = cli.run_command(
        ["permanent", "--graph", k3_file, "--samples", "1000"]
    )
    assert status == 0
    assert record.seed is not None
    assert journal_records(workdir)[0]["seed"] == record.seed


def test_table1_determinism(workdir):
    args = ["table1", "--p-grid", "1.0", "--graphs-per-p", "1", "--n", "4",
            "--postselected", "50", "--seed", "6"]
    status, first = cli.run_command(args)
    assert status == 0
    status, second = cli.run_command(args)
    assert first.estimates == second.estimates
    row = first.estimates["rows"][0]
    assert row["mu_exact"] == pytest.approx(9.0)  # K4 permanent


def test_table1_experiment_pooled_band():
    rows = cli.table1_experiment([1.0], 2, 4, postselected=100, seed=1)
    row = rows[0]
    assert row["mu_exact"] == pytest.approx(9.0)
    assert abs(row["mu_estimate"] - row["mu_exact"]) <= row["pooled_half_width"]


def test_console_script(k3_file, workdir):
    proc = subprocess.run(
        [sys.executable, "-m", "photonperm.cli", "permanent",
         "--graph", k3_file, "--exact"],
        capture_output=True, text=True,
        env={"PATH": "/usr/bin:/bin", cli.RESULTS_ENV: str(workdir / "results")},
    )
    assert proc.returncode == 0
    assert proc.stdout.strip() == "2"
