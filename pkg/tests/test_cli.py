import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from lkms import cli
from lkms.config import ConfigError, parse_config

HOT = {
    "mass": 0.0,
    "beta": {"affine": {"c": 1.0, "C": [0, 0, 0, 0, 0, 0], "beta_tilde": [0, 0, 0, 0]}},
    "grid": {
        "q_points": [[3, 0, 0, 0], [2, 0.5, 0, 0]],
        "z_points": {"linspace": {"start": [0, 0, 0, 0], "stop": [0.4, 0.2, 0, 0], "num": 3}},
    },
    "seed": 5,
    "worldline": {"origin": [0, 0, 0, 0], "direction": [1, 0, 0, 0], "tau": [1, 2, 4]},
}


def write_config(tmp_path, doc, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def run(tmp_path, command, doc, *extra):
    cfg = write_config(tmp_path, doc)
    out = tmp_path / f"{command}.out"
    code = cli.main([command, "--config", cfg, "--out", str(out), *extra])
    return code, (out.read_bytes() if out.exists() else None)


# ---- config -----------------------------------------------------------------


def test_parse_config_full():
    cfg = parse_config(HOT)
    assert cfg.mass == 0.0 and cfg.beta.c == 1.0
    assert len(cfg.q_points) == 2 and len(cfg.z_points) == 3
    np.testing.assert_allclose(cfg.z_points[1], [0.2, 0.1, 0, 0])
    assert cfg.seed == 5 and cfg.quadrature.rel_tol == 1e-10
    assert len(cfg.worldline.points()) == 3


@pytest.mark.parametrize(
    "patch, message",
    [
        ({"extra": 1}, "unknown key"),
        ({"beta": {"affine": {"c": 1, "d": 2}}}, "unknown key"),
        ({"beta": {"constant": [1, 0, 0]}}, "list of 4"),
        ({"beta": {"affine": {"C": [1, 0, 0, 0, 0, 0], "c": 0}, "constant": [1, 0, 0, 0]}}, "exactly one"),
        ({"mass": -1.0}, "non-negative"),
        ({"mass": "0"}, "number"),
        ({"grid": {"q_points": [[0, 0, 0, 0]], "r_points": []}}, "unknown key"),
        ({"quadrature": {"rel_tol": -1}}, "quadrature"),
        ({"seed": 1.5}, "seed"),
        ({"grid": {"z_points": {"linspace": {"start": [0, 0, 0, 0], "stop": [1, 0, 0, 0], "num": -2}}}}, "num"),
    ],
)
def test_parse_config_rejects(patch, message):
    doc = {**HOT, **patch}
    with pytest.raises(ConfigError, match=message):
        parse_config(doc)


def test_missing_required_key():
    with pytest.raises(ConfigError, match="missing"):
        parse_config({"mass": 0.0})


# ---- eval -------------------------------------------------------------------


def test_eval_coincidence_grid(tmp_path):
    doc = {
        "mass": 0.0,
        "beta": {"constant": [1, 0, 0, 0]},
        "grid": {"q_points": [[0, 0, 0, 0], [5, 1, 2, 3]], "z_points": [[0, 0, 0, 0]]},
    }
    code, data = run(tmp_path, "eval", doc)
    assert code == 0
    rows = list(csv.DictReader(data.decode().splitlines()))
    assert [float(r["W"]) for r in rows] == pytest.approx([1 / 12, 1 / 12], abs=1e-8)


def test_eval_format(tmp_path):
    code, data = run(tmp_path, "eval", HOT)
    assert code == 0
    assert b"\r" not in data and data.endswith(b"\n")
    lines = data.decode("utf-8").splitlines()
    assert lines[0] == "q0,q1,q2,q3,z0,z1,z2,z3,W,err_estimate"
    assert len(lines) == 1 + 2 * 3
    # q is the outer loop
    assert [ln.split(",")[0] for ln in lines[1:]] == ["3"] * 3 + ["2"] * 3
    # 17 significant digits round-trip every float
    for ln in lines[1:]:
        for cell in ln.split(","):
            assert float("%.17g" % float(cell)) == float(cell)
            assert cell == "%.17g" % float(cell)


def test_eval_empty_grid(tmp_path):
    doc = {**HOT, "grid": {"q_points": [], "z_points": []}}
    code, data = run(tmp_path, "eval", doc)
    assert code == 0
    assert data == b"q0,q1,q2,q3,z0,z1,z2,z3,W,err_estimate\n"


def test_eval_invalid_beta(tmp_path, capsys):
    doc = {"mass": 0.0, "beta": {"constant": [1, 2, 0, 0]}, "grid": {"q_points": [[0, 0, 0, 0]], "z_points": [[0, 0, 0, 0]]}}
    code, data = run(tmp_path, "eval", doc)
    assert code == 2 and data is None
    assert "[1.0, 2.0" in capsys.readouterr().err


def test_eval_quadrature_failure_removes_output(tmp_path):
    doc = {
        "mass": 2.0,
        "beta": {"constant": [0.3, 0, 0, 0]},
        "grid": {"q_points": [[0, 0, 0, 0]], "z_points": [[7, 3, 0, 0]]},
        "quadrature": {"rel_tol": 1e-15, "abs_tol": 1e-300, "max_refinements": 1},
    }
    out = tmp_path / "eval.out"
    out.write_text("stale")
    code, data = run(tmp_path, "eval", doc)
    assert code == 3 and data is None


def test_bad_config_file(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    assert cli.main(["eval", "--config", str(path)]) == 2
    assert cli.main(["eval", "--config", str(tmp_path / "missing.json")]) == 2


def test_threads_from_env(tmp_path, monkeypatch):
    monkeypatch.setenv("LKMS_THREADS", "3")
    code, threaded = run(tmp_path, "eval", HOT)
    monkeypatch.delenv("LKMS_THREADS")
    code2, serial = run(tmp_path, "eval", HOT, "--threads", "1")
    assert code == code2 == 0 and threaded == serial
    monkeypatch.setenv("LKMS_THREADS", "many")
    assert run(tmp_path, "eval", HOT)[0] == 2


def test_output_path_from_config(tmp_path):
    target = tmp_path / "from_config.csv"
    cfg = write_config(tmp_path, {**HOT, "output_path": str(target)})
    assert cli.main(["eval", "--config", cfg]) == 0
    assert target.read_text().startswith("q0,")


# ---- check ------------------------------------------------------------------


def test_check_hot_bang_passes(tmp_path):
    code, data = run(tmp_path, "check", HOT)
    report = json.loads(data)
    assert code == 0 and report["pass"] is True
    names = [s["name"] for s in report["suites"]]
    assert names == ["detailed_balance", "constraint1", "constraint2", "w_pde_mixed", "w_pde_box"]
    for suite in report["suites"]:
        assert list(suite) == ["name", "max_residual", "scale", "samples", "tol", "pass"]


def test_check_rotation_fails_constraints(tmp_path):
    doc = {
        "mass": 0.0,
        "beta": {"affine": {"c": 0.0, "C": [0.5, 0, 0, 0, 0, 0], "beta_tilde": [3, 0, 0, 0]}},
        "grid": {"q_points": [[0, 0, 0, 0]], "z_points": [[0.2, 0.1, 0, 0]]},
    }
    code, data = run(tmp_path, "check", doc)
    suites = {s["name"]: s for s in json.loads(data)["suites"]}
    assert code == 1
    assert suites["detailed_balance"]["pass"]
    assert not suites["constraint2"]["pass"]


def test_check_massive_nonconstant_fails_at_rest_probe(tmp_path):
    doc = {
        "mass": 1.0,
        "beta": {"affine": {"c": 1.0}},
        "grid": {"q_points": [[2, 0, 0, 0]], "z_points": []},
    }
    code, data = run(tmp_path, "check", doc)
    suites = {s["name"]: s for s in json.loads(data)["suites"]}
    assert code == 1
    assert suites["constraint1"]["max_residual"] == 1.0


def test_check_stencil_outside_domain(tmp_path):
    doc = {**HOT, "grid": {"q_points": [[0.005, 0, 0, 0]], "z_points": [[0, 0, 0, 0]]}}
    code, _ = run(tmp_path, "check", doc)
    assert code == 3


# ---- classify and profile ---------------------------------------------------


@pytest.mark.parametrize(
    "beta, mass, kind, region",
    [
        ({"affine": {"c": 1.0}}, 0.0, "HotBang", {"kind": "ForwardCone", "apex": [0.0, 0.0, 0.0, 0.0]}),
        ({"constant": [1, 0, 0, 0]}, 0.5, "GlobalKMS", {"kind": "AllMinkowski"}),
        ({"affine": {"c": -1.0}}, 0.0, "ColdBang", {"kind": "BackwardCone", "apex": [0.0, 0.0, 0.0, 0.0]}),
    ],
)
def test_classify(tmp_path, beta, mass, kind, region):
    code, data = run(tmp_path, "classify", {"mass": mass, "beta": beta})
    verdict = json.loads(data)
    assert code == 0
    assert verdict["kind"] == kind and verdict["region"] == region


def test_classify_not_lkms_is_a_result(tmp_path):
    doc = {"mass": 0.0, "beta": {"affine": {"C": [0.5, 0, 0, 0, 0, 0], "beta_tilde": [1, 0, 0, 0]}}}
    code, data = run(tmp_path, "classify", doc)
    assert code == 0 and json.loads(data)["kind"] == "NotLKMS"


def test_profile_hot_bang(tmp_path):
    code, data = run(tmp_path, "profile", HOT)
    assert code == 0
    rows = [list(map(float, ln.split(","))) for ln in data.decode().splitlines()[1:]]
    np.testing.assert_allclose([r[1] for r in rows], [1, 0.5, 0.25], rtol=1e-15)
    np.testing.assert_allclose([r[2] for r in rows], [1 / 12, 1 / 48, 1 / 192], rtol=1e-14)


def test_profile_constant_and_apex(tmp_path):
    doc = {"mass": 1.0, "beta": {"constant": [2, 0, 0, 0]}, "worldline": {"tau": [0, 1, 5]}}
    code, data = run(tmp_path, "profile", doc)
    rows = data.decode().splitlines()[1:]
    assert code == 0 and len({r.split(",", 1)[1] for r in rows}) == 1
    apex = {**HOT, "worldline": {"tau": [0, 1]}}
    assert run(tmp_path, "profile", apex)[0] == 3
    assert run(tmp_path, "profile", {"mass": 0.0, "beta": {"affine": {"c": 1.0}}})[0] == 2


# ---- process-level ----------------------------------------------------------


def test_help_documents_exit_codes():
    proc = subprocess.run([sys.executable, "-m", "lkms", "check", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0
    for code in ("0", "1", "2", "3"):
        assert f"  {code}  " in proc.stdout
    assert "LKMS_THREADS" in proc.stdout


def test_determinism_across_processes(tmp_path):
    cfg = write_config(tmp_path, HOT)
    outputs = []
    for i in range(2):
        out = tmp_path / f"check{i}.json"
        subprocess.run([sys.executable, "-m", "lkms", "check", "--config", cfg, "--out", str(out)], check=True)
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1]
