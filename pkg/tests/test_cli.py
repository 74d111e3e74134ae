from __future__ import annotations

import json
import math

import numpy as np
import pytest

from ruled_ricci.cli import main
from ruled_ricci.gallery import parallel_circles
from ruled_ricci.scene import Scene, load_scene


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_gallery_list_and_show(capsys):
    code, out, _ = run(capsys, "gallery", "list")
    assert code == 0 and "borderline" in out and "helicoid" in out
    code, out, _ = run(capsys, "gallery", "show", "parallel_circles", "--param", "ell=0.25")
    assert json.loads(out)["params"] == {"ell": 0.25}
    code, out, _ = run(capsys, "gallery", "toml", "borderline", "--which", "alpha")
    assert 'x = "-cos(t)*sech(t)"' in out


def test_construct_borderline_mesh(tmp_path, capsys):
    code, out, _ = run(capsys, "construct", "--source", "gallery:borderline", "--grid", "200x50",
                       "--out", str(tmp_path))
    assert code == 0
    obj = (tmp_path / "patch.obj").read_text().splitlines()
    assert sum(l.startswith("v ") for l in obj) == 10000
    assert sum(l.startswith("f ") for l in obj) == 199 * 49
    assert json.loads(out)["check"]["passed"] is True


def test_construct_parallel_circles_matches_closed_form(tmp_path, capsys):
    code, _, _ = run(capsys, "construct", "--source", "gallery:parallel_circles", "--param", "ell=0.5",
                     "--grid", "41x4", "--out", str(tmp_path))
    assert code == 0
    data = np.loadtxt(tmp_path / "alpha.csv", delimiter=",", skiprows=1)
    e = parallel_circles(0.5)
    worst = max(np.linalg.norm(row[1:] - e.alpha(row[0])) for row in data)
    assert worst <= 1e-6


def test_construct_great_circle_is_a_validation_error(tmp_path, capsys):
    (tmp_path / "gc.toml").write_text('x = "cos(t)"\ny = "sin(t)"\nz = "0"\ndomain = [0.0, 6.0]\n')
    code, _, err = run(capsys, "construct", "--source", f"curve:{tmp_path / 'gc.toml'}", "--out", str(tmp_path))
    assert code == 2
    assert "great circle" in err
    check = json.loads(err[err.index("{"):])
    assert check["regular_ok"] is False and check["passed"] is False


def test_check_helicoid_passes_with_refinement(tmp_path, capsys):
    code, out, _ = run(capsys, "check", "--source", "patch:helicoid", "--param", "a=1", "--h2",
                       "--out", str(tmp_path))
    rep = json.loads(out)
    assert code == 0 and rep["passed"]
    assert 1.7 <= rep["convergence_order"] <= 2.3
    assert (tmp_path / "report.json").exists()
    assert (tmp_path / "residuals.csv").read_text().startswith("t,u,residual,normalized,normalized_h2\n")


def test_check_right_conoid_fails(capsys):
    code, out, _ = run(capsys, "check", "--source", "patch:right_conoid", "--param", "w=t^2")
    assert code == 1
    assert json.loads(out)["max_normalized_residual"] > 1.0


def test_report_helicoid_columns(capsys):
    code, out, _ = run(capsys, "report", "--source", "patch:helicoid", "--grid", "5x6")
    lines = out.strip().splitlines()
    assert lines[0] == "t,u,E,F,G,K_closed,K_forms,H_closed,H_forms,lambda"
    assert len(lines) == 31
    for line in lines[1:]:
        row = [float(x) for x in line.split(",")]
        assert row[5] == pytest.approx(-1 / (1 + row[1] ** 2) ** 2, rel=1e-15)


def test_report_parallel_circles_tri_oracle(capsys):
    _, out, _ = run(capsys, "report", "--source", "gallery:parallel_circles", "--param", "ell=0.75")
    for line in out.strip().splitlines()[1:]:
        row = [float(x) for x in line.split(",")]
        assert abs(row[5] - row[6]) <= 1e-7 * max(abs(row[5]), abs(row[6]))
        assert abs(row[7] - row[8]) <= 1e-7 * max(abs(row[7]), abs(row[8])) + 1e-12


def test_report_tangent_developable(capsys):
    _, out, _ = run(capsys, "report", "--source", "patch:tangent_developable", "--grid", "6x5")
    for line in out.strip().splitlines()[1:]:
        row = line.split(",")
        assert abs(float(row[5])) <= 1e-9 and abs(float(row[6])) <= 1e-9
        assert math.isnan(float(row[7]))


def test_scene_file_and_overrides(tmp_path, capsys):
    (tmp_path / "s.toml").write_text(
        '[source]\npatch = "helicoid"\nparams = { a = 2.0 }\n\nu_range = [-1.0, 1.0]\ngrid = [6, 5]\nout = "res"\n'
    )
    scene = load_scene(tmp_path / "s.toml")
    assert scene.kind == "patch" and scene.params == {"a": 2.0} and scene.out == tmp_path / "res"
    code, out, _ = run(capsys, "export", "--scene", str(tmp_path / "s.toml"), "--grid", "4x4")
    assert code == 0 and json.loads(out)["vertices"] == 16
    assert (tmp_path / "res" / "patch.obj").exists()


def test_scene_with_curve_file(tmp_path, capsys):
    e = parallel_circles(0.5)
    from ruled_ricci.export import dump_curve_definition

    (tmp_path / "b.toml").write_text(dump_curve_definition(e.curve_definition("B")))
    (tmp_path / "s.toml").write_text('[source]\ncurve = "b.toml"\ntau0 = 1.0\n')
    code, out, _ = run(capsys, "check", "--scene", str(tmp_path / "s.toml"))
    assert code == 0 and json.loads(out)["passed"]


def test_outputs_are_deterministic(tmp_path, capsys):
    for d in ("a", "b"):
        run(capsys, "check", "--source", "gallery:borderline", "--grid", "4x4", "--out", str(tmp_path / d))
    assert (tmp_path / "a" / "report.json").read_bytes() == (tmp_path / "b" / "report.json").read_bytes()
    assert (tmp_path / "a" / "residuals.csv").read_bytes() == (tmp_path / "b" / "residuals.csv").read_bytes()


def test_threads_env(monkeypatch, capsys):
    _, one, _ = run(capsys, "check", "--source", "patch:helicoid", "--grid", "4x4")
    monkeypatch.setenv("RULED_RICCI_THREADS", "3")
    _, many, _ = run(capsys, "check", "--source", "patch:helicoid", "--grid", "4x4")
    assert one == many


@pytest.mark.parametrize(
    "argv, code",
    [
        (["check", "--source", "gallery:nope"], 2),
        (["check", "--source", "patch:helicoid", "--grid", "3x10"], 2),
        (["check", "--source", "patch:helicoid", "--h", "-1"], 2),
        (["check", "--source", "gallery:parallel_circles", "--param", "ell=1.5"], 2),
        (["check", "--scene", "/nonexistent/scene.toml"], 4),
        (["check", "--source", "patch:right_conoid", "--param", "w=sin("], 2),
    ],
)
def test_exit_codes(argv, code, capsys):
    assert main(argv) == code


def test_numeric_failure_exit_code(capsys):
    # the u-range straddles the edge of regression, where det g = 0
    code = main(["check", "--source", "patch:tangent_developable", "--u-range", "-1", "1", "--grid", "4x5"])
    assert code == 3


def test_scene_validation():
    with pytest.raises(ValueError):
        Scene(u_range=(0.0, math.inf)).validate()
    with pytest.raises(ValueError):
        Scene(kind="curve").validate()
