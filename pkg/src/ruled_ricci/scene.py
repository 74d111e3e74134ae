"""Scene files: which surface to build, on what grid, with which tolerances.

A scene is a TOML file such as::

    u_range = [-2.0, 2.0]
    grid = [40, 20]
    h = 1e-3
    tol = 1e-3
    out = "out"

    [source]
    gallery = "parallel_circles"      # or patch = "helicoid", or curve = "B.toml"
    params = { ell = 0.5 }
    tau0 = 1.0

Run settings may also sit inside ``[source]``.  ``[source.curve]`` may hold
an inline curve definition.  Command-line flags override every value read
from the file.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .constant_torsion import ConstructedCurve, integrate_alpha
from .curves import SpaceCurve
from .export import load_curve_definition, tomllib
from .gallery import ENTRIES, PATCHES, GalleryEntry, canonical_patch
from .ricci import DEFAULT_STEP, PASS_THRESHOLD
from .ruled_surface import RuledPatch

SOURCE_KINDS = ("gallery", "patch", "curve")


@dataclass(frozen=True)
class Scene:
    kind: str = "gallery"
    name: str | None = "borderline"
    params: dict = field(default_factory=dict)
    curve: dict | None = None
    tau0: float = 1.0
    t_range: tuple[float, float] | None = None
    u_range: tuple[float, float] = (-2.0, 2.0)
    grid: tuple[int, int] | None = None
    h: float = DEFAULT_STEP
    tol: float = PASS_THRESHOLD
    h2: bool = False
    out: Path | None = None

    def validate(self) -> "Scene":
        if self.kind not in SOURCE_KINDS:
            raise ValueError(f"source kind must be one of {SOURCE_KINDS}, got {self.kind!r}")
        if self.kind == "gallery" and self.name not in ENTRIES:
            raise ValueError(f"unknown gallery entry {self.name!r} (have {', '.join(ENTRIES)})")
        if self.kind == "patch" and self.name not in PATCHES:
            raise ValueError(f"unknown patch {self.name!r} (have {', '.join(PATCHES)})")
        if self.kind == "curve" and self.curve is None:
            raise ValueError("a curve source needs a curve definition")
        if self.grid is not None and min(self.grid) < 4:
            raise ValueError(f"grid must be at least 4 x 4, got {self.grid[0]} x {self.grid[1]}")
        if not all(math.isfinite(x) for x in self.u_range) or self.u_range[0] >= self.u_range[1]:
            raise ValueError(f"u_range must be a finite increasing pair, got {self.u_range}")
        if self.t_range is not None and not self.t_range[0] < self.t_range[1]:
            raise ValueError(f"t_range must be increasing, got {self.t_range}")
        if not self.h > 0:
            raise ValueError(f"h must be positive, got {self.h}")
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        return self

    def with_overrides(self, **kw) -> "Scene":
        return replace(self, **{k: v for k, v in kw.items() if v is not None}).validate()

    def grid_or(self, default: tuple[int, int]) -> tuple[int, int]:
        return self.grid if self.grid is not None else default

    # ------------------------------------------------------------ building
    def entry(self) -> GalleryEntry:
        return ENTRIES[self.name](**self.params)

    def spherical_curve(self) -> tuple[SpaceCurve, tuple[float, float]]:
        """The binormal indicatrix B and the t-interval to use for it."""
        if self.kind == "gallery":
            e = self.entry()
            return e.B, self.t_range or e.probe_domain
        if self.kind == "curve":
            B = load_curve_definition(self.curve)
            return B, self.t_range or B.finite_domain()
        raise ValueError(f"a {self.kind} source has no spherical curve to integrate")

    def construct(self) -> ConstructedCurve:
        """Integrate alpha from B.

        Gallery sources are translated so that alpha agrees with the closed
        form at the base point; curve sources pass through the origin there.
        """
        B, interval = self.spherical_curve()
        alpha = integrate_alpha(B, self.tau0, interval=interval)
        if self.kind == "gallery":
            shift = self.entry().alpha(alpha.t0)
            alpha.values = alpha.values + shift
        return alpha

    def patch(self) -> RuledPatch:
        if self.kind == "gallery":
            return canonical_patch(self.entry(), self.u_range, self.t_range)
        if self.kind == "patch":
            kw = dict(self.params)
            if self.t_range is not None:
                kw["t_range"] = self.t_range
            if self.name == "right_conoid":
                kw["w_expr"] = kw.pop("w", "t")
            return PATCHES[self.name](u_range=self.u_range, **kw)
        alpha = self.construct()
        return RuledPatch(
            alpha=alpha,
            beta=alpha.B,
            t_range=alpha.domain,
            u_range=self.u_range,
            name=f"canonical({alpha.B.name})",
            canonical=True,
            tau0=self.tau0,
        )


def _pair(v, key):
    if v is None:
        return None
    if len(v) != 2:
        raise ValueError(f"{key} must have two entries")
    return (float(v[0]), float(v[1]))


def parse_source(spec: str) -> tuple[str, str]:
    """``gallery:borderline`` -> ("gallery", "borderline")."""
    kind, sep, name = spec.partition(":")
    if not sep or kind not in SOURCE_KINDS:
        raise ValueError(f"source must look like KIND:NAME with KIND in {SOURCE_KINDS}, got {spec!r}")
    return kind, name


def load_scene(path: str | Path) -> Scene:
    path = Path(path)
    with open(path, "rb") as fh:
        data = tomllib.load(fh)
    src = data.get("source", {})
    kinds = [k for k in SOURCE_KINDS if k in src]
    if len(kinds) != 1:
        raise ValueError(f"[source] needs exactly one of {SOURCE_KINDS}")
    kind = kinds[0]
    name, curve = None, None
    if kind == "curve":
        c = src["curve"]
        if isinstance(c, str):
            with open(path.parent / c, "rb") as fh:
                c = tomllib.load(fh)
            c = c.get("curve", c)
        curve = dict(c)
    else:
        name = src[kind]

    def get(key, default=None):
        return data.get(key, src.get(key, default))

    grid = get("grid")
    out = get("out")
    return Scene(
        kind=kind,
        name=name,
        params=dict(src.get("params", {})),
        curve=curve,
        tau0=float(src.get("tau0", 1.0)),
        t_range=_pair(get("t_range"), "t_range"),
        u_range=_pair(get("u_range"), "u_range") or (-2.0, 2.0),
        grid=(int(grid[0]), int(grid[1])) if grid is not None else None,
        h=float(get("h", DEFAULT_STEP)),
        tol=float(get("tol", PASS_THRESHOLD)),
        h2=bool(get("h2", False)),
        out=(path.parent / out) if out is not None else None,
    ).validate()


def sample_curve(curve: SpaceCurve, interval: tuple[float, float], n: int) -> list[list[float]]:
    return [[float(t), *map(float, curve(float(t)))] for t in np.linspace(*interval, n)]
