import json

import numpy as np
import pytest
from click.testing import CliRunner

from framesign.cli import main
from framesign.io import read_csv


def run(*args):
    return CliRunner().invoke(main, [str(a) for a in args])


def test_szwarc_writes_artifacts(tmp_path):
    res = run("szwarc", "--bn", "linear", "--B", 0.5, "--nmax", 2000, "--x", "-2:2:41", "--out", tmp_path)
    assert res.exit_code == 0, res.output
    assert (tmp_path / "envelope.csv").exists() and (tmp_path / "regularity.json").exists()
    assert len(list(tmp_path.glob("mate_nevai_x*.csv"))) == 41
    cfg, cols, data = read_csv(tmp_path / "envelope.csv")
    assert cfg["command"] == "szwarc" and cols[0] == "x" and data.shape == (41, 3)
    reg = json.loads((tmp_path / "regularity.json").read_text())
    assert all(p["converged"] for p in reg["points"])


def test_carleson_json(tmp_path):
    res = run("carleson", "--alpha", 2, "--depth", 12, "--out", tmp_path)
    assert res.exit_code == 0
    doc = json.loads((tmp_path / "carleson.json").read_text())
    assert abs(doc["constant"] - (2 - 2.0**-12)) <= 1e-12
    assert doc["config"] == {"command": "carleson", "alpha": 2.0, "depth": 12}


def test_signmass_profile_monotone(tmp_path):
    res = run("signmass", "--system", "haar", "--levels", 10, "--q", 2, "--thresholds", 10, "--out", tmp_path)
    assert res.exit_code == 0, res.output
    _, cols, data = read_csv(tmp_path / "profile.csv")
    assert cols == ["x", "n", "plus", "minus", "ratio"]
    m = 2**11
    plus = data[:, 2].reshape(-1, m)
    minus = data[:, 3].reshape(-1, m)
    assert np.all(np.diff(plus, axis=0) >= 0) and np.all(np.diff(minus, axis=0) >= 0)
    _, cols, div = read_csv(tmp_path / "divergence.csv")
    assert cols == ["x", "first_n_at_10"] and div.shape == (m, 2)


def test_outputs_deterministic(tmp_path):
    for d in ("a", "b"):
        assert run("quadrature", "--N", 60, "--nmax", 10, "--out", tmp_path / d).exit_code == 0
    for name in ("quadrature.json", "nodes.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


@pytest.mark.parametrize(
    "args",
    [
        ("szwarc", "--B", 1.0),
        ("szwarc", "--x", "0:1"),
        ("frame-bounds", "--system", "trig"),
        ("frame-bounds", "--system", "haar", "--levels", 3, "--E", "0.7,0.2"),
        ("carleson", "--depth", -1),
    ],
)
def test_validation_exit_code(tmp_path, args):
    res = run(*args, "--out", tmp_path)
    assert res.exit_code == 2


def test_unknown_command(tmp_path):
    assert run("nope", "--out", tmp_path).exit_code == 2


def test_numerical_failure_exit_code(tmp_path):
    # x = 1e9 is far right of every b_n up to n_max: the trace has no valid range
    res = run("szwarc", "--nmax", 200, "--x", "1e9:1e9:1", "--out", tmp_path)
    assert res.exit_code == 3


def test_reorder_exhaustion_writes_partial(tmp_path):
    res = run("reorder", "--depth", 4, "--out", tmp_path)
    assert res.exit_code == 3
    doc = json.loads((tmp_path / "reorder.json").read_text())
    assert doc["status"] == "exhausted" and doc["block_ends"] == [1, 2]


def test_reorder_success(tmp_path):
    res = run("reorder", "--depth", 5, "--targets", "0.5,0.25", "--out", tmp_path)
    assert res.exit_code == 0, res.output
    doc = json.loads((tmp_path / "reorder.json").read_text())
    assert doc["status"] == "ok" and len(doc["order"]) == 2**7
    assert all(r <= t for r, t in zip(doc["ratios"], doc["targets"]))


@pytest.mark.parametrize(
    "args, files",
    [
        (("dyadic-bessel", "--max-depth", 5), ["dyadic_bessel.csv"]),
        (("dilation", "--depth", 3), ["dilation.json"]),
        (("cosine", "--K", 4, "--m", 256), ["cosine.json"]),
        (("frame-bounds", "--system", "legendre", "--size", 8, "--duplicate", "--E", "0,0.5"), ["frame_bounds.json", "bessel_tails.csv"]),
        (("laguerre-gap", "--kmax", 200), ["laguerre_gap.csv", "laguerre_sums.csv", "laguerre.json"]),
    ],
)
def test_other_commands(tmp_path, args, files):
    res = run(*args, "--out", tmp_path)
    assert res.exit_code == 0, res.output
    for f in files:
        assert (tmp_path / f).exists()


def test_plot_flag_writes_png(tmp_path):
    pytest.importorskip("matplotlib")
    res = run("dyadic-bessel", "--max-depth", 4, "--out", tmp_path, "--plot")
    assert res.exit_code == 0, res.output
    assert (tmp_path / "dyadic_bessel.png").read_bytes()[:4] == b"\x89PNG"


def test_dilation_restriction_flag(tmp_path):
    run("dilation", "--depth", 3, "--out", tmp_path)
    doc = json.loads((tmp_path / "dilation.json").read_text())
    assert doc["restriction_exact"] is True and doc["gram_defect"] < 1e-8
