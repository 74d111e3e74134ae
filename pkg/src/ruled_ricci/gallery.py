"""Closed-form examples of ruled Ricci surfaces, plus negative controls.

Curves here are written directly in jet arithmetic rather than going through
the expression parser, so they double as an independent check on it.  Each
entry also carries the same formulas as expression strings, which is what
gets exported to curve-definition TOML.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from . import jet as J
from .constant_torsion import verify_binormal
from .curves import ExprCurve, FunctionCurve, SpaceCurve
from .errors import PreconditionError
from .expr import Expression, eval_jet, parse
from .jet import Jet3
from .ruled_surface import RuledPatch

BINORMAL_TOL = 1e-6


@dataclass(frozen=True)
class GalleryEntry:
    name: str
    params: dict
    alpha: SpaceCurve
    B: SpaceCurve
    domain: tuple[float, float]
    probe_domain: tuple[float, float]
    tau0: float
    complete: bool
    notes: str
    alpha_exprs: tuple[str, str, str]
    B_exprs: tuple[str, str, str]
    param_spec: dict = field(default_factory=dict)

    def curve_definition(self, which: str = "B") -> dict:
        """TOML-ready curve definition of ``alpha`` or ``B``."""
        exprs = self.B_exprs if which == "B" else self.alpha_exprs
        lo, hi = self.domain
        return {
            "name": f"{self.name}.{which}",
            "variable": "t",
            "x": exprs[0],
            "y": exprs[1],
            "z": exprs[2],
            "parameters": dict(self.params),
            "domain": [lo, hi],
        }

    def summary(self) -> dict:
        return {
            "name": self.name,
            "params": dict(self.params),
            "param_spec": dict(self.param_spec),
            "domain": list(self.domain),
            "probe_domain": list(self.probe_domain),
            "tau0": self.tau0,
            "complete": self.complete,
            "notes": self.notes,
            "alpha": list(self.alpha_exprs),
            "B": list(self.B_exprs),
        }


# ------------------------------------------------------- parallel circles
def parallel_circles(ell: float = 0.5) -> GalleryEntry:
    """Circles of radius ``ell`` on S^2 and the unit-torsion helices they bind."""
    if not 0.0 < ell < 1.0:
        raise PreconditionError(f"parallel_circles needs 0 < ell < 1, got {ell!r}")
    w = math.sqrt(1.0 - ell * ell)

    def B(t: Jet3):
        a = t / ell
        return (ell * J.sin(a), -ell * J.cos(a), Jet3(w))

    def alpha(t: Jet3):
        a = t / ell
        return (-ell * w * J.cos(a), -ell * w * J.sin(a), -ell * t)

    dom = (0.0, 2.0 * math.pi * ell)
    return GalleryEntry(
        name="parallel_circles",
        params={"ell": ell},
        alpha=FunctionCurve(alpha, dom, "parallel_circles.alpha"),
        B=FunctionCurve(B, dom, "parallel_circles.B"),
        domain=dom,
        probe_domain=dom,
        tau0=1.0,
        complete=True,
        notes="closed binormal circle; ell -> 1 tends to the helicoid, ell -> 0 to a vertical line",
        alpha_exprs=(
            "-ell*sqrt(1 - ell^2)*cos(t/ell)",
            "-ell*sqrt(1 - ell^2)*sin(t/ell)",
            "-ell*t",
        ),
        B_exprs=("ell*sin(t/ell)", "-ell*cos(t/ell)", "sqrt(1 - ell^2)"),
        param_spec={"ell": "0 < ell < 1"},
    )


# --------------------------------------------------------- anti-Salkowski
ANTI_SALKOWSKI_EDGE = 0.95


def anti_salkowski(ell: float = 1.0 / 3.0) -> GalleryEntry:
    """Unit-torsion curves with non-constant curvature on ``(-1/ell, 1/ell)``."""
    if not ell > 0.0 or abs(ell - 1.0 / math.sqrt(3.0)) < 1e-12:
        raise PreconditionError(f"anti_salkowski needs ell > 0 and ell != 1/sqrt(3), got {ell!r}")
    q = math.sqrt(1.0 + ell * ell)
    c = ell / (1.0 - 2.0 * ell ** 2 - 3.0 * ell ** 4)

    def theta(t: Jet3) -> Jet3:
        return q * J.asin(ell * t) / ell

    def alpha(t: Jet3):
        th = theta(t)
        a = -2.0 + 3.0 * ell ** 2 * t * t + 3.0 * ell ** 4 * t * t
        b = q * (1.0 + 3.0 * ell ** 2) * t * J.sqrt(1.0 - ell * ell * t * t)
        s = J.asin(ell * t)
        z = (2.0 * s + J.sin(2.0 * s)) / (4.0 * ell * q)
        ct, st = J.cos(th), J.sin(th)
        return (ct * (c * a) - st * (c * b), st * (c * a) + ct * (c * b), -z)

    def B(t: Jet3):
        th = theta(t)
        d = -q * J.sqrt(1.0 - ell * ell * t * t)
        ct, st = J.cos(th), J.sin(th)
        e = ell * ell * t
        return ((ct * d - st * e) / q, (st * d + ct * e) / q, ell * t / q)

    th = "(sqrt(1 + ell^2)*asin(ell*t)/ell)"
    a = "(-2 + 3*ell^2*t^2 + 3*ell^4*t^2)"
    b = "(sqrt(1 + ell^2)*(1 + 3*ell^2)*t*sqrt(1 - ell^2*t^2))"
    cc = "(ell/(1 - 2*ell^2 - 3*ell^4))"
    z = "((2*asin(ell*t) + sin(2*asin(ell*t)))/(4*ell*sqrt(1 + ell^2)))"
    d = "(-sqrt(1 + ell^2)*sqrt(1 - ell^2*t^2))"
    dom = (-1.0 / ell, 1.0 / ell)
    edge = ANTI_SALKOWSKI_EDGE / ell
    return GalleryEntry(
        name="anti_salkowski",
        params={"ell": ell},
        alpha=FunctionCurve(alpha, dom, "anti_salkowski.alpha"),
        B=FunctionCurve(B, dom, "anti_salkowski.B"),
        domain=dom,
        probe_domain=(-edge, edge),
        tau0=1.0,
        complete=False,
        notes=(
            "bounded parameter interval, derivatives blow up at |ell t| = 1; "
            "curvature vanishes at t = 0 where the Frenet binormal flips to -B; "
            "ell -> 0 tends to the helicoid"
        ),
        alpha_exprs=(
            f"cos{th}*{cc}*{a} - sin{th}*{cc}*{b}",
            f"sin{th}*{cc}*{a} + cos{th}*{cc}*{b}",
            f"-{z}",
        ),
        B_exprs=(
            f"(cos{th}*{d} - sin{th}*ell^2*t)/sqrt(1 + ell^2)",
            f"(sin{th}*{d} + cos{th}*ell^2*t)/sqrt(1 + ell^2)",
            "ell*t/sqrt(1 + ell^2)",
        ),
        param_spec={"ell": "ell > 0, ell != 1/sqrt(3)"},
    )


# --------------------------------------------------------------- borderline
BORDERLINE_PROBE = (-5.0, 5.0)


def borderline() -> GalleryEntry:
    """Spherical curve defined on all of R, accumulating on the equator."""

    def B(t: Jet3):
        th = J.tanh(t)
        return (th * J.cos(t), th * J.sin(t), J.sech(t))

    def alpha(t: Jet3):
        s = J.sech(t)
        return (-J.cos(t) * s, -J.sin(t) * s, J.tanh(t) - t)

    dom = (-math.inf, math.inf)
    return GalleryEntry(
        name="borderline",
        params={},
        alpha=FunctionCurve(alpha, dom, "borderline.alpha"),
        B=FunctionCurve(B, dom, "borderline.B"),
        domain=dom,
        probe_domain=BORDERLINE_PROBE,
        tau0=1.0,
        complete=True,
        notes="defined on the whole line; numerical work uses a finite window",
        alpha_exprs=("-cos(t)*sech(t)", "-sin(t)*sech(t)", "tanh(t) - t"),
        B_exprs=("tanh(t)*cos(t)", "tanh(t)*sin(t)", "sech(t)"),
    )


ENTRIES: dict[str, Callable[..., GalleryEntry]] = {
    "parallel_circles": parallel_circles,
    "anti_salkowski": anti_salkowski,
    "borderline": borderline,
}


# -------------------------------------------------------------- ruled patches
def _ruling_circle(t: Jet3):
    return (J.cos(t), J.sin(t), Jet3(0.0))


def helicoid(
    a: float = 1.0,
    b: float = 0.0,
    t_range: tuple[float, float] = (-math.pi, math.pi),
    u_range: tuple[float, float] = (-2.0, 2.0),
) -> RuledPatch:
    """(0, 0, a t + b) + u (cos t, sin t, 0); distribution parameter a."""
    if a == 0:
        raise PreconditionError("helicoid needs a != 0 (a = 0 sweeps a plane)")
    axis = FunctionCurve(lambda t: (Jet3(0.0), Jet3(0.0), a * t + b), name="helicoid.axis")
    return RuledPatch(
        alpha=axis,
        beta=FunctionCurve(_ruling_circle, name="great_circle"),
        t_range=t_range,
        u_range=u_range,
        name=f"helicoid(a={a:g}, b={b:g})",
        canonical=True,
        tau0=None,
    )


def right_conoid(
    w_expr: str | Expression,
    t_range: tuple[float, float] = (0.2, 1.5),
    u_range: tuple[float, float] = (-2.0, 2.0),
    parameters: dict | None = None,
) -> RuledPatch:
    """(0, 0, w(t)) + u (cos t, sin t, 0); Ricci exactly when w is affine."""
    w = w_expr if isinstance(w_expr, Expression) else parse(w_expr, parameters or {})
    axis = FunctionCurve(lambda t: (Jet3(0.0), Jet3(0.0), eval_jet(w, t.d0)), name=f"conoid.axis[{w.source}]")
    return RuledPatch(
        alpha=axis,
        beta=FunctionCurve(_ruling_circle, name="great_circle"),
        t_range=t_range,
        u_range=u_range,
        name=f"right_conoid(w={w.source})",
    )


def tangent_developable(
    radius: float = 1.0,
    pitch: float = 1.0,
    t_range: tuple[float, float] = (0.0, 2.0 * math.pi),
    u_range: tuple[float, float] = (0.5, 2.0),
) -> RuledPatch:
    """Tangent surface of a helix, parametrized so that |T'| = 1.

    The edge of regression sits at u = 0, so ``u_range`` must avoid it.
    """
    r = math.hypot(radius, pitch)
    k = r / radius

    def alpha(t: Jet3):
        return (radius * J.cos(k * t), radius * J.sin(k * t), pitch * k * t)

    def tangent(t: Jet3):
        return (-radius * J.sin(k * t) / r, radius * J.cos(k * t) / r, Jet3(pitch / r))

    return RuledPatch(
        alpha=FunctionCurve(alpha, name="helix"),
        beta=FunctionCurve(tangent, name="helix.T"),
        t_range=t_range,
        u_range=u_range,
        name=f"tangent_developable(r={radius:g}, p={pitch:g})",
    )


def canonical_patch(
    entry: GalleryEntry,
    u_range: tuple[float, float] = (-2.0, 2.0),
    t_range: tuple[float, float] | None = None,
    check: bool = True,
) -> RuledPatch:
    """Binormal surface ``alpha + u B`` of a gallery entry."""
    t_range = t_range or entry.probe_domain
    if check:
        dev = verify_binormal(entry.alpha, entry.B, grid=64, interval=t_range)
        if dev > BINORMAL_TOL:
            raise PreconditionError(f"{entry.name}: B is not the binormal of alpha (deviation {dev:.3e})")
    return RuledPatch(
        alpha=entry.alpha,
        beta=entry.B,
        t_range=t_range,
        u_range=u_range,
        name=f"canonical({entry.name})",
        canonical=True,
        tau0=entry.tau0,
    )


def expr_curves(entry: GalleryEntry) -> tuple[ExprCurve, ExprCurve]:
    """The entry's alpha and B rebuilt from their expression strings."""
    return tuple(  # type: ignore[return-value]
        ExprCurve.from_strings(*exprs, parameters=entry.params, domain=entry.domain, name=f"{entry.name}.{tag}")
        for tag, exprs in (("alpha", entry.alpha_exprs), ("B", entry.B_exprs))
    )


PATCHES = {
    "helicoid": helicoid,
    "right_conoid": right_conoid,
    "tangent_developable": tangent_developable,
}
