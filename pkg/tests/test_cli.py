import hashlib
import json
import math

import numpy as np
import pytest
from click.testing import CliRunner

import sbf.multipliers as mp_
from sbf import __version__
from sbf.cli import main
from sbf.fields import PeriodicVectorField
from sbf.geometry import FourierCurve, rescale_to_unit_length
from sbf.io import content_hash, dump_json, fmt, metadata_lines


@pytest.fixture
def run():
    runner = CliRunner()

    def call(*args):
        return runner.invoke(main, [str(a) for a in args], catch_exceptions=False)
    return call


def write_field(path, values):
    path.write_text(PeriodicVectorField(values).to_json())
    return path


def wave(n, mean=(0.0, 0.0, 0.0)):
    s = np.arange(n) / n
    return np.stack([np.sin(2 * np.pi * s), np.cos(4 * np.pi * s), 0.5 * np.sin(2 * np.pi * s)],
                    axis=1) + mean


def read_csv(path):
    lines = path.read_text().splitlines()
    meta = [ln for ln in lines if ln.startswith("#")]
    body = [ln for ln in lines if not ln.startswith("#")]
    return meta, body[0].split(","), [list(map(float, ln.split(","))) for ln in body[1:]]


# ---------------------------------------------------------------- io helpers

def test_fmt_round_trips():
    for x in (0.1, 1 / 3, -2.5e-300, 123456789.123):
        assert float(fmt(x)) == x
    assert fmt(3) == "3" and fmt(True) == "true"
    assert fmt(float("nan")) == "nan" and fmt(-math.inf) == "-inf"


def test_content_hash_framing():
    data = b"abc\n"
    assert content_hash(data) == hashlib.sha256(b"blob 4\x00abc\n").hexdigest()


def test_metadata_and_json():
    lines = metadata_lines("sbf x", {"b": 1, "a": 2}, {"f": "h"})
    assert lines[0] == f"# tool: sbf {__version__}"
    assert lines[2] == '# config: {"a": 2, "b": 1}'
    out = json.loads(dump_json({"v": np.float64(0.1), "bad": float("nan")}, {"k": 1}))
    assert list(out) == ["metadata", "v", "bad"] and out["bad"] == "nan"


# ---------------------------------------------------------------- commands

def test_version(run):
    res = run("--version")
    assert res.exit_code == 0 and __version__ in res.output


def test_multipliers_table(run, tmp_path):
    out = tmp_path / "m.csv"
    assert run("multipliers", "--eps", 0.01, "--kmax", 128, "--out", out).exit_code == 0
    meta, header, rows = read_csv(out)
    assert header == ["k", "z", "m_t_inv", "m_n_inv", "m_t", "m_n", "bi_t", "bi_n"]
    assert len(rows) == 257
    assert any(m.startswith("# config:") and '"kmax": 128' in m for m in meta)
    row = {h: v for h, v in zip(header, rows[128 + 5])}
    assert row["k"] == 5
    assert row["m_t_inv"] == mp_.dtn_eigen("t", 0.01, 5)
    assert row["bi_n"] == pytest.approx(row["m_n_inv"], rel=1e-10)
    first = out.read_bytes()
    run("multipliers", "--eps", 0.01, "--kmax", 128, "--out", out)
    assert out.read_bytes() == first


def test_multipliers_bad_input(run, tmp_path):
    assert run("multipliers", "--eps", -1, "--kmax", 4, "--out", tmp_path / "x").exit_code == 2
    assert run("multipliers", "--eps", 0.1, "--kmax", 0, "--out", tmp_path / "x").exit_code == 2


def test_verify_exit_codes(run, tmp_path, monkeypatch):
    res = run("verify", "--suite", "bessel", "--out", tmp_path / "r.json")
    assert res.exit_code == 0
    assert json.loads(res.output)["pass"] is True
    assert "metadata" in json.loads((tmp_path / "r.json").read_text())
    orig = mp_.double_layer_tangential
    monkeypatch.setattr(mp_, "double_layer_tangential", lambda z: (orig(z)[0], -orig(z)[1]))
    assert run("verify", "--suite", "symbols").exit_code == 1


def test_dtn_straight(run, tmp_path):
    vel = write_field(tmp_path / "v.json", wave(32))
    out = tmp_path / "f.csv"
    assert run("dtn", "--velocity", vel, "--eps", 0.05, "--out", out).exit_code == 0
    meta, header, rows = read_csv(out)
    assert header == ["s", "fx", "fy", "fz"] and len(rows) == 32
    assert any(content_hash(vel.read_bytes()) in m for m in meta)
    report = json.loads(out.with_suffix(".json").read_text())
    assert report["status"] == "ok" and report["geometry"] == "straight"
    # round trip through ntd
    f_json = write_field(tmp_path / "f.json", np.array(rows)[:, 1:])
    back = tmp_path / "v.csv"
    assert run("ntd", "--force", f_json, "--eps", 0.05, "--out", back).exit_code == 0
    assert np.allclose(np.array(read_csv(back)[2])[:, 1:], wave(32), atol=1e-12)


def test_dtn_input_errors(run, tmp_path):
    vel = write_field(tmp_path / "v.json", wave(16, mean=(0, 0, 1.0)))
    out = tmp_path / "f.csv"
    assert run("dtn", "--velocity", vel, "--out", out).exit_code == 2          # no eps
    assert run("dtn", "--velocity", vel, "--eps", 0.05, "--out", out).exit_code == 2  # mean
    assert run("dtn", "--velocity", vel, "--eps", 0.05, "--zero-mode", "drop",
               "--out", out).exit_code == 0
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 4}')
    assert run("dtn", "--velocity", bad, "--eps", 0.05, "--out", out).exit_code == 2
    assert run("dtn", "--velocity", tmp_path / "missing.json", "--eps", 0.05,
               "--out", out).exit_code == 2


def test_dtn_curved(run, tmp_path):
    curve = rescale_to_unit_length(FourierCurve.perturbed_circle(0.05, 3, eps=0.05))
    cpath = tmp_path / "c.json"
    cpath.write_text(curve.to_json())
    vel = write_field(tmp_path / "v.json", wave(32))
    out = tmp_path / "f.csv"
    assert run("dtn", "--velocity", vel, "--curve", cpath, "--out", out).exit_code == 0
    report = json.loads(out.with_suffix(".json").read_text())
    assert report["residual"] < 1e-10 and report["eta"] > 0
    # radius too large for the curvature
    assert run("dtn", "--velocity", vel, "--curve", cpath, "--eps", 0.3,
               "--out", out).exit_code == 2


def test_evolve_outputs(run, tmp_path):
    cpath = tmp_path / "c.json"
    cpath.write_text(FourierCurve.circle(eps=0.05).to_json())
    out = tmp_path / "run"
    res = run("evolve", "--curve", cpath, "--dt", 1e-6, "--steps", 4, "--snapshot-every", 2,
              "--out-dir", out)
    assert res.exit_code == 0
    _, header, rows = read_csv(out / "diagnostics.csv")
    assert header[:3] == ["step", "t", "lambda"] and len(rows) == 5
    snaps = sorted(p.name for p in (out / "snapshots").iterdir())
    assert snaps == ["step_0000000.json", "step_0000002.json", "step_0000004.json"]
    final = FourierCurve.from_json((out / "final.json").read_text())
    assert final.eps == 0.05
    assert json.loads((out / "report.json").read_text())["abort_reason"] is None


def test_evolve_abort_and_bad_input(run, tmp_path):
    cpath = tmp_path / "c.json"
    cpath.write_text(FourierCurve.circle(eps=0.05).to_json())
    res = run("evolve", "--curve", cpath, "--dt", 1e-2, "--steps", 3, "--out-dir", tmp_path / "a")
    assert res.exit_code == 3
    assert json.loads((tmp_path / "a" / "report.json").read_text())["abort_reason"]
    ell = tmp_path / "e.json"
    ell.write_text(FourierCurve.ellipse(0.2, 0.1, eps=0.01).to_json())
    assert run("evolve", "--curve", ell, "--dt", 1e-7, "--steps", 1,
               "--out-dir", tmp_path / "b").exit_code == 2
    assert run("evolve", "--curve", ell, "--dt", 1e-7, "--steps", 1, "--reparameterize",
               "--out-dir", tmp_path / "b").exit_code == 0
    assert run("evolve", "--curve", cpath, "--dt", -1, "--steps", 1,
               "--out-dir", tmp_path / "c").exit_code == 2


def test_converge_dt(run, tmp_path):
    out = tmp_path / "dt.csv"
    assert run("converge", "--study", "dt", "--dt", 1e-6, "--steps", 2, "--out", out).exit_code == 0
    _, header, rows = read_csv(out)
    assert len(rows) >= 2 and all(np.isfinite(r[0]) for r in rows)
