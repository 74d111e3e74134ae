"""Mesh, CSV and curve-definition writers.

Floats go out as ``repr`` (shortest round-trip) in CSV and as 17 significant
digits in OBJ, so output is byte-stable across runs and re-reads exactly.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
import tomli_w

from .curves import ExprCurve
from .ruled_surface import RuledPatch

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib


def fmt(x) -> str:
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])


@dataclass
class MeshBuffer:
    """Vertices of an ``n_t x n_u`` grid in row-major order plus quad faces."""

    n_t: int
    n_u: int
    vertices: np.ndarray
    channels: dict[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, dtype=float).reshape(-1, 3)
        if self.n_t < 2 or self.n_u < 2:
            raise ValueError("mesh needs at least a 2 x 2 grid")
        if len(self.vertices) != self.n_t * self.n_u:
            raise ValueError(f"{len(self.vertices)} vertices for a {self.n_t} x {self.n_u} grid")
        for name, values in self.channels.items():
            if len(values) != len(self.vertices):
                raise ValueError(f"channel {name!r} has {len(values)} values for {len(self.vertices)} vertices")

    def index(self, i: int, j: int) -> int:
        """0-based vertex index of grid cell (i, j)."""
        return i * self.n_u + j

    def quads(self) -> list[tuple[int, int, int, int]]:
        """1-based quads ``(a, b, d, c)`` so each face winds around its cell."""
        out = []
        for i in range(self.n_t - 1):
            for j in range(self.n_u - 1):
                a, b = self.index(i, j) + 1, self.index(i, j + 1) + 1
                c, d = self.index(i + 1, j) + 1, self.index(i + 1, j + 1) + 1
                out.append((a, b, d, c))
        return out

    @classmethod
    def from_patch(cls, patch: RuledPatch, n_t: int, n_u: int, channels: dict | None = None) -> "MeshBuffer":
        ts, us = patch.grid(n_t, n_u)
        verts = [patch(float(t), float(u)) for t in ts for u in us]
        return cls(n_t, n_u, np.array(verts), dict(channels or {}))


def write_obj(mesh: MeshBuffer, path: str | Path, sidecar: str | Path | None = None) -> None:
    """Write ``v``/``f`` lines; scalar channels go to a CSV keyed by vertex index."""
    with open(path, "w") as fh:
        for x, y, z in mesh.vertices:
            fh.write(f"v {x:.17g} {y:.17g} {z:.17g}\n")
        for q in mesh.quads():
            fh.write("f {} {} {} {}\n".format(*q))
    if mesh.channels:
        if sidecar is None:
            sidecar = Path(path).with_suffix(".scalars.csv")
        names = sorted(mesh.channels)
        rows = ([k + 1] + [mesh.channels[n][k] for n in names] for k in range(len(mesh.vertices)))
        write_csv(sidecar, ["vertex"] + names, rows)


def read_obj_vertices(path: str | Path) -> np.ndarray:
    """Vertex coordinates of an OBJ file (``v`` lines only)."""
    verts = []
    with open(path) as fh:
        for line in fh:
            parts = line.split()
            if parts and parts[0] == "v":
                verts.append([float(p) for p in parts[1:4]])
    return np.array(verts)


# -------------------------------------------------------- curve definitions
def load_curve_definition(source: str | Path | dict, name: str | None = None) -> ExprCurve:
    """Build an :class:`ExprCurve` from a curve-definition table or TOML file.

    Expected keys: ``x``, ``y``, ``z`` (expression strings), optional
    ``parameters`` table, ``domain = [t_min, t_max]`` and ``variable``.
    """
    if isinstance(source, dict):
        data = source
    else:
        with open(source, "rb") as fh:
            data = tomllib.load(fh)
        data = data.get("curve", data)
    missing = [k for k in ("x", "y", "z") if k not in data]
    if missing:
        raise ValueError(f"curve definition is missing {', '.join(missing)}")
    lo, hi = data.get("domain", [-math.inf, math.inf])
    return ExprCurve.from_strings(
        str(data["x"]),
        str(data["y"]),
        str(data["z"]),
        parameters={k: float(v) for k, v in data.get("parameters", {}).items()},
        domain=(float(lo), float(hi)),
        variable=data.get("variable", "t"),
        name=name or data.get("name", "curve"),
    )


def dump_curve_definition(definition: dict) -> str:
    """TOML text for a curve definition (see ``GalleryEntry.curve_definition``)."""
    d = dict(definition)
    lo, hi = d.get("domain", [-math.inf, math.inf])
    # TOML has inf, but keep the file readable by loaders that reject it
    if math.isfinite(lo) and math.isfinite(hi):
        d["domain"] = [float(lo), float(hi)]
    else:
        d.pop("domain", None)
    return tomli_w.dumps(d)
