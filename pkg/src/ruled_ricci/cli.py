"""``ruled-ricci`` command line.

Exit codes: 0 success / Ricci check passed, 1 Ricci check failed,
2 invalid input, 3 numerical failure, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .constant_torsion import validate_spherical
from .errors import NumericError, PreconditionError, RuledRicciError, SphericalCurveError
from .export import MeshBuffer, dump_curve_definition, fmt, write_csv, write_obj
from .gallery import ENTRIES, PATCHES
from .ricci import MetricField, ricci_residual_fd, worker_count
from .ruled_surface import (
    RuledPatch,
    distribution_parameter,
    gauss_curvature_closed,
    mean_curvature_closed,
    shape_operator_sample,
)
from .scene import Scene, load_scene, parse_source, sample_curve, tomllib

EXIT_OK, EXIT_FAIL, EXIT_INVALID, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3, 4

MESH_GRID = (40, 20)
CHECK_GRID = (10, 10)
REPORT_COLUMNS = ("t", "u", "E", "F", "G", "K_closed", "K_forms", "H_closed", "H_forms", "lambda")


def _grid_arg(text: str) -> tuple[int, int]:
    try:
        n, m = (int(p) for p in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected NxM, got {text!r}") from None
    return n, m


def _param_arg(text: str) -> tuple[str, object]:
    key, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected KEY=VALUE, got {text!r}")
    try:
        return key, float(value)
    except ValueError:
        return key, value


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=True)


def _rows_parallel(fn, items):
    n = worker_count(None)
    if n > 1:
        with ThreadPoolExecutor(max_workers=n) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def _scene(args) -> Scene:
    scene = load_scene(args.scene) if args.scene else Scene()
    kw = {"grid": args.grid, "h": args.h, "tol": args.tol, "out": args.out}
    if args.h2:
        kw["h2"] = True
    if args.source:
        kind, name = parse_source(args.source)
        if kind == "curve":
            with open(name, "rb") as fh:
                data = tomllib.load(fh)
            kw.update(kind=kind, name=None, curve=data.get("curve", data))
        else:
            kw.update(kind=kind, name=name)
        if not args.param:
            kw["params"] = {}
    if args.param:
        kw["params"] = {**(scene.params if not args.source else {}), **dict(args.param)}
    if args.tau0 is not None:
        kw["tau0"] = args.tau0
    if args.u_range is not None:
        kw["u_range"] = tuple(args.u_range)
    if args.t_range is not None:
        kw["t_range"] = tuple(args.t_range)
    return scene.with_overrides(**kw)


def _out_dir(scene: Scene) -> Path:
    out = scene.out or Path("out")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _mesh_channels(patch, ts, us) -> dict[str, np.ndarray]:
    def row(t):
        vals = []
        for u in us:
            try:
                s = shape_operator_sample(patch, float(t), float(u))
                vals.append((s.K, s.H))
            except PreconditionError:
                vals.append((math.nan, math.nan))
        return vals

    grid = np.array(_rows_parallel(row, ts)).reshape(-1, 2)
    return {"K": grid[:, 0], "H": grid[:, 1]}


def _write_mesh(patch, grid, out: Path, stem: str = "patch") -> Path:
    ts, us = patch.grid(*grid)
    mesh = MeshBuffer.from_patch(patch, *grid, _mesh_channels(patch, ts, us))
    path = out / f"{stem}.obj"
    write_obj(mesh, path)
    return path


# ----------------------------------------------------------------- commands
def cmd_gallery(args) -> int:
    if args.action == "list":
        for name, fn in ENTRIES.items():
            e = fn()
            print(f"{name}\tcurve\ttau0={e.tau0:g}\t{e.notes}")
        for name, fn in PATCHES.items():
            print(f"{name}\tpatch\t{(fn.__doc__ or '').strip().splitlines()[0]}")
        return EXIT_OK
    if not args.name:
        raise ValueError(f"gallery {args.action} needs an entry name")
    params = dict(args.param or [])
    if args.name in PATCHES:
        if args.action != "show":
            raise ValueError(f"{args.name} is a ruled patch, not a curve entry")
        kw = dict(params)
        if args.name == "right_conoid":
            kw["w_expr"] = kw.pop("w", "t")
        p = PATCHES[args.name](**kw)
        print(_dump({"name": p.name, "t_range": list(p.t_range), "u_range": list(p.u_range), "canonical": p.canonical}))
        return EXIT_OK
    if args.name not in ENTRIES:
        raise ValueError(f"unknown gallery entry {args.name!r}")
    entry = ENTRIES[args.name](**params)
    if args.action == "show":
        print(_dump(entry.summary()))
    else:
        sys.stdout.write(dump_curve_definition(entry.curve_definition(args.which)))
    return EXIT_OK


def cmd_construct(args) -> int:
    scene = _scene(args)
    B, interval = scene.spherical_curve()
    check = validate_spherical(B, 200, interval)
    alpha = scene.construct()
    out = _out_dir(scene)
    n_t, n_u = scene.grid_or(MESH_GRID)
    write_csv(out / "alpha.csv", ["t", "x", "y", "z"], sample_curve(alpha, alpha.domain, n_t))
    patch = RuledPatch(alpha, alpha.B, alpha.domain, scene.u_range, f"canonical({alpha.B.name})", True, scene.tau0)
    obj = _write_mesh(patch, (n_t, n_u), out)
    summary = {"alpha_csv": str(out / "alpha.csv"), "mesh": str(obj), "vertices": n_t * n_u, "check": check.to_dict()}
    (out / "construct.json").write_text(_dump(summary) + "\n")
    print(_dump(summary))
    return EXIT_OK


def cmd_check(args) -> int:
    scene = _scene(args)
    patch = scene.patch()
    report = ricci_residual_fd(
        MetricField.from_patch(patch), grid=scene.grid_or(CHECK_GRID), h=scene.h, refine=scene.h2, threshold=scene.tol
    )
    text = report.to_json()
    if scene.out is not None:
        out = _out_dir(scene)
        (out / "report.json").write_text(text + "\n")
        header = ["t", "u", "residual", "normalized"] + (["normalized_h2"] if scene.h2 else [])
        write_csv(out / "residuals.csv", header, report.rows())
    print(text)
    return EXIT_OK if report.passed else EXIT_FAIL


def _maybe(fn, *a) -> float:
    try:
        return fn(*a)
    except PreconditionError:
        return math.nan


def report_rows(patch, grid: tuple[int, int]) -> list[list[float]]:
    ts, us = patch.grid(*grid)

    def row(t):
        t = float(t)
        lam = _maybe(distribution_parameter, patch, t)
        rows = []
        for u in us:
            u = float(u)
            s = shape_operator_sample(patch, t, u)
            k_closed = gauss_curvature_closed(patch, t, u) if not math.isnan(lam) else math.nan
            h_closed = _maybe(mean_curvature_closed, patch, t, u) if patch.canonical else math.nan
            rows.append([t, u, s.metric.E, s.metric.F, s.metric.G, k_closed, s.K, h_closed, s.H, lam])
        return rows

    return [r for block in _rows_parallel(row, ts) for r in block]


def cmd_report(args) -> int:
    scene = _scene(args)
    patch = scene.patch()
    rows = report_rows(patch, scene.grid_or(MESH_GRID))
    if scene.out is not None:
        write_csv(_out_dir(scene) / "report.csv", REPORT_COLUMNS, rows)
    else:
        print(",".join(REPORT_COLUMNS))
        for r in rows:
            print(",".join(fmt(v) for v in r))
    return EXIT_OK


def cmd_export(args) -> int:
    scene = _scene(args)
    patch = scene.patch()
    grid = scene.grid_or(MESH_GRID)
    path = _write_mesh(patch, grid, _out_dir(scene))
    print(_dump({"mesh": str(path), "vertices": grid[0] * grid[1]}))
    return EXIT_OK


# ------------------------------------------------------------------- parser
def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scene", type=Path, help="scene TOML file")
    common.add_argument("--source", help="gallery:NAME, patch:NAME or curve:FILE.toml (overrides the scene)")
    common.add_argument("--param", action="append", type=_param_arg, metavar="KEY=VALUE", help="source parameter")
    common.add_argument("--out", type=Path, help="output directory")
    common.add_argument("--grid", type=_grid_arg, metavar="NxM", help="grid resolution n_t x n_u")
    common.add_argument("--h", type=float, help="finite-difference step")
    common.add_argument("--tol", type=float, help="pass threshold for the normalized residual")
    common.add_argument("--h2", action="store_true", help="also run at h/2 and report the convergence order")
    common.add_argument("--tau0", type=float, help="prescribed torsion for curve sources")
    common.add_argument("--u-range", type=float, nargs=2, metavar=("U0", "U1"))
    common.add_argument("--t-range", type=float, nargs=2, metavar=("T0", "T1"))

    p = argparse.ArgumentParser(prog="ruled-ricci", description="Ruled Ricci surfaces: construction and checks.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gallery", help="list, show or export gallery entries")
    g.add_argument("action", choices=["list", "show", "toml"])
    g.add_argument("name", nargs="?")
    g.add_argument("--param", action="append", type=_param_arg, metavar="KEY=VALUE")
    g.add_argument("--which", choices=["B", "alpha"], default="B", help="curve to export with 'toml'")
    g.set_defaults(func=cmd_gallery)

    for name, fn, text in (
        ("construct", cmd_construct, "integrate alpha from B; write alpha.csv and the patch mesh"),
        ("check", cmd_check, "finite-difference Ricci residual report"),
        ("report", cmd_report, "per-grid-point fundamental-form table"),
        ("export", cmd_export, "write the patch as OBJ with a scalar sidecar"),
    ):
        sp = sub.add_parser(name, parents=[common], help=text)
        sp.set_defaults(func=fn)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SphericalCurveError as e:
        print(f"error: {e}", file=sys.stderr)
        if e.check is not None:
            print(_dump(e.check.to_dict()), file=sys.stderr)
        return EXIT_INVALID
    except NumericError as e:
        print(f"numeric error: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as e:
        print(f"I/O error: {e}", file=sys.stderr)
        return EXIT_IO
    except (RuledRicciError, ValueError, KeyError, TypeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
