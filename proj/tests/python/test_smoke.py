import json
import os
import subprocess

import numpy as np
import pytest

import mclab


def test_svd_matches_numpy():
    rng = np.random.default_rng(0)
    a = rng.uniform(-1, 1, size=(7, 5))
    u, s, v = mclab.svd(a)
    np.testing.assert_allclose(s, np.linalg.svd(a, compute_uv=False), atol=1e-12)
    np.testing.assert_allclose(u @ np.diag(s) @ v.T, a, atol=1e-12)
    assert mclab.nuclear_norm(a) == pytest.approx(s.sum(), abs=1e-12)


def test_cut_norm_and_distance():
    assert mclab.cut_norm_exact(np.array([[1.0, -1.0], [-1.0, 1.0]])) == 1.0
    lo, hi = mclab.cut_norm_bounds(np.ones((4, 4)))
    assert lo == pytest.approx(1.0) and hi >= lo
    d = np.zeros((3, 3))
    d[0, 0] = 1.0
    value, exact, rows, cols = mclab.cut_distance(d, np.zeros((3, 3)))
    assert exact and value == pytest.approx(1 / 9)
    assert sorted(rows) == [0, 1, 2] and sorted(cols) == [0, 1, 2]


def test_parity_relabels_to_blocks():
    rows, cols = mclab.parity_block_perm(8)
    p = mclab.gen_parity(8)
    assert np.array_equal(p[np.ix_(rows, cols)], mclab.gen_diagonal_blocks(8))


def test_completion_full_reveal():
    rng = np.random.default_rng(1)
    a = rng.uniform(-1, 1, size=(6, 6))
    r = mclab.complete_modified(a, np.ones((6, 6)), 1.0)
    assert r["converged"]
    assert mclab.avg_frobenius(r["estimate"] - a) <= 1e-6


def test_graphon_helpers():
    half = mclab.discretize_step([0, 0.5, 1], [0, 1], np.array([[1.0], [0.0]]), 4, 3)
    assert np.array_equal(half, mclab.gen_half_rows(4)[:, :3])
    v = mclab.recovery_verdict_step([0, 0.5, 1], [0, 1], np.array([[1.0], [0.0]]))
    assert not v["admits_recovery"] and v["phi"][0] == 0.5
    assert mclab.recovery_verdict_step([0, 1], [0, 1], np.array([[0.5]]))["admits_recovery"]


def test_probe_and_refinement():
    r = mclab.probe(mclab.gen_half_rows(8), 1)
    assert r["verdict"] == "violation-found"
    assert r["full_diff"] == pytest.approx(2 ** -0.5)
    levels = mclab.refinement_sequence(np.eye(8), 3)
    assert [lv["j"] for lv in levels] == [1, 2, 3]
    assert all(lv["status"] != "violated" for lv in levels)


def test_errors_map_to_python_exceptions():
    with pytest.raises(ValueError):
        mclab.cut_norm_exact(np.zeros((30, 30)))
    with pytest.raises(ValueError):
        mclab.complete_modified(np.zeros((2, 2)), np.full((2, 2), 0.5), 1.0)


@pytest.mark.skipif("MCLAB_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_generate_probe(tmp_path):
    cli = os.environ["MCLAB_CLI"]
    mask = tmp_path / "mask.txt"
    subprocess.run([cli, "generate", "half-rows", "6", "-o", str(mask)], check=True)
    out = subprocess.run([cli, "probe", str(mask)], check=True, capture_output=True, text=True).stdout
    assert json.loads(out)["verdict"] == "violation-found"
    bad = subprocess.run([cli, "cutnorm", str(tmp_path / "nope.txt")], capture_output=True, text=True)
    assert bad.returncode == 1
