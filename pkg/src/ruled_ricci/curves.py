"""Space curves and their Frenet apparatus.

Torsion follows the convention ``B' = tau N`` (so ``N' = -kappa T - tau B``),
which is the opposite sign of the usual triple-product formula.  The sign is
fixed once, in :data:`TORSION_SIGN`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import DomainError, NonRegularCurveError
from .expr import Expression, eval_jet, parse
from .jet import Jet3
from .quadrature import adaptive_simpson

# tau = TORSION_SIGN * <a' x a'', a'''> / |a' x a''|^2 gives B' = +tau N
TORSION_SIGN = -1.0

KAPPA_MIN = 1e-10


class SpaceCurve:
    """A parametric curve in R^3 with exact derivatives up to order 3.

    Subclasses implement :meth:`jets`, returning a ``(4, 3)`` array whose rows
    are the position and its first three derivatives.
    """

    name: str = "curve"
    domain: tuple[float, float] = (-math.inf, math.inf)

    def jets(self, t: float) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, t: float) -> np.ndarray:
        return self.jets(t)[0]

    def check_domain(self, t: float) -> None:
        a, b = self.domain
        slack = 1e-12 * max(1.0, abs(t))
        if not (a - slack <= t <= b + slack):
            raise DomainError(f"{self.name}: t={t!r} outside domain [{a}, {b}]")

    def components(self, t: float) -> tuple[Jet3, Jet3, Jet3]:
        d = self.jets(t)
        return tuple(Jet3(*d[:, i]) for i in range(3))  # type: ignore[return-value]

    def finite_domain(self, interval: tuple[float, float] | None = None) -> tuple[float, float]:
        a, b = interval if interval is not None else self.domain
        if not (math.isfinite(a) and math.isfinite(b)):
            raise ValueError(f"{self.name}: an explicit finite interval is required (domain {self.domain})")
        return float(a), float(b)


class FunctionCurve(SpaceCurve):
    """Curve given by a Python function mapping a jet of ``t`` to three jets."""

    def __init__(
        self,
        fn: Callable[[Jet3], Sequence[Jet3]],
        domain: tuple[float, float] = (-math.inf, math.inf),
        name: str = "curve",
    ):
        self.fn = fn
        self.domain = (float(domain[0]), float(domain[1]))
        self.name = name

    def jets(self, t: float) -> np.ndarray:
        self.check_domain(t)
        x, y, z = self.fn(Jet3.variable(float(t)))
        return np.array([Jet3.lift(x).as_tuple(), Jet3.lift(y).as_tuple(), Jet3.lift(z).as_tuple()]).T


class ExprCurve(SpaceCurve):
    """Curve whose components are parsed :class:`~ruled_ricci.expr.Expression` s."""

    def __init__(
        self,
        x: Expression,
        y: Expression,
        z: Expression,
        domain: tuple[float, float] = (-math.inf, math.inf),
        bindings: Mapping[str, float] | None = None,
        name: str = "curve",
    ):
        self.exprs = (x, y, z)
        self.bindings = dict(bindings or {})
        self.domain = (float(domain[0]), float(domain[1]))
        self.name = name

    @classmethod
    def from_strings(
        cls,
        x: str,
        y: str,
        z: str,
        parameters: Mapping[str, float] | None = None,
        domain: tuple[float, float] = (-math.inf, math.inf),
        variable: str = "t",
        name: str = "curve",
    ) -> "ExprCurve":
        params = dict(parameters or {})
        exprs = [parse(s, params, variable) for s in (x, y, z)]
        return cls(*exprs, domain=domain, name=name)

    def jets(self, t: float) -> np.ndarray:
        self.check_domain(t)
        cols = [eval_jet(e, t, self.bindings).as_tuple() for e in self.exprs]
        return np.array(cols).T


@dataclass(frozen=True)
class FrenetData:
    T: np.ndarray | None
    N: np.ndarray | None
    B: np.ndarray | None
    kappa: float
    tau: float | None
    regular: bool


def speed(curve: SpaceCurve, t: float) -> float:
    return float(np.linalg.norm(curve.jets(t)[1]))


def arc_length(curve: SpaceCurve, t0: float, t1: float, tol: float = 1e-10) -> float:
    """Length of ``curve`` between ``t0`` and ``t1`` (signed by orientation)."""
    return float(adaptive_simpson(lambda s: speed(curve, s), t0, t1, tol))


def frenet(curve: SpaceCurve, t: float, kappa_min: float | None = None) -> FrenetData:
    """Frenet frame, curvature and torsion at ``t``.

    At points where the curvature falls below ``kappa_min`` (default
    ``KAPPA_MIN / |alpha'|``) the frame is reported as non-regular with
    ``N``, ``B`` and ``tau`` unset.
    """
    _, d1, d2, d3 = curve.jets(t)
    v = float(np.linalg.norm(d1))
    if v == 0.0:
        raise NonRegularCurveError(f"{curve.name}: vanishing speed at t={t!r}")
    T = d1 / v
    cross = np.cross(d1, d2)
    c = float(np.linalg.norm(cross))
    kappa = c / v ** 3
    if kappa_min is None:
        kappa_min = KAPPA_MIN / v
    if kappa < kappa_min:
        return FrenetData(T, None, None, kappa, None, False)
    B = cross / c
    N = np.cross(B, T)
    tau = TORSION_SIGN * float(np.dot(cross, d3)) / (c * c)
    return FrenetData(T, N, B, kappa, tau, True)


def curvature(curve: SpaceCurve, t: float) -> float:
    return frenet(curve, t).kappa


def torsion(curve: SpaceCurve, t: float) -> float:
    fr = frenet(curve, t)
    if not fr.regular:
        raise NonRegularCurveError(f"{curve.name}: torsion undefined at t={t!r} (kappa={fr.kappa:.3g})")
    return fr.tau  # type: ignore[return-value]


class ArcLengthCurve(SpaceCurve):
    """Unit-speed reparametrization ``s -> curve(t(s))`` of a regular curve.

    The cumulative arc length is tabulated once on a uniform grid; ``t(s)`` is
    recovered by Newton iteration inside the bracketing table cell, falling
    back to bisection whenever a Newton step leaves the bracket.
    """

    def __init__(self, curve: SpaceCurve, table_size: int = 256, tol: float = 1e-10):
        a, b = curve.finite_domain()
        self.base = curve
        self.name = f"{curve.name}[s]"
        self.tol = tol
        self.t_nodes = np.linspace(a, b, table_size + 1)
        pieces = [0.0]
        cell_tol = tol / table_size
        for lo, hi in zip(self.t_nodes[:-1], self.t_nodes[1:]):
            pieces.append(adaptive_simpson(self._speed, lo, hi, cell_tol))
        self.s_nodes = np.cumsum(pieces)
        self.domain = (0.0, float(self.s_nodes[-1]))

    def _speed(self, t: float) -> float:
        v = speed(self.base, t)
        if v == 0.0:
            raise NonRegularCurveError(f"{self.base.name}: vanishing speed at t={t!r}")
        return v

    def parameter_at(self, s: float) -> float:
        """Original parameter ``t`` with arc length ``s`` from the domain start."""
        self.check_domain(s)
        k = int(np.clip(np.searchsorted(self.s_nodes, s) - 1, 0, len(self.t_nodes) - 2))
        lo, hi = float(self.t_nodes[k]), float(self.t_nodes[k + 1])
        s_lo, s_hi = float(self.s_nodes[k]), float(self.s_nodes[k + 1])
        anchor = lo
        t = lo + (hi - lo) * (s - s_lo) / (s_hi - s_lo)
        step_tol = 1e-12 * max(1.0, abs(anchor))
        for _ in range(100):
            g = s_lo + float(adaptive_simpson(self._speed, anchor, t, 1e-14)) - s
            if g > 0:
                hi = t
            else:
                lo = t
            t_new = t - g / self._speed(t)
            if not lo <= t_new <= hi:
                t_new = 0.5 * (lo + hi)
            step, t = t_new - t, t_new
            if abs(step) <= step_tol:
                break
        return t

    def jets(self, s: float) -> np.ndarray:
        t = self.parameter_at(s)
        _, d1, d2, d3 = base = self.base.jets(t)
        v = float(np.linalg.norm(d1))
        v1 = float(np.dot(d1, d2)) / v
        v2 = (float(np.dot(d2, d2)) + float(np.dot(d1, d3)) - v1 * v1) / v
        # derivatives of t(s): t' = 1/v, t'' = -v'/v^3, t''' = -(v'' v - 3 v'^2)/v^5
        t1 = 1.0 / v
        t2 = -v1 / v ** 3
        t3 = -(v2 * v - 3.0 * v1 * v1) / v ** 5
        return np.array([
            base[0],
            d1 * t1,
            d2 * t1 * t1 + d1 * t2,
            d3 * t1 ** 3 + 3.0 * d2 * t1 * t2 + d1 * t3,
        ])


def reparametrize_arclength(curve: SpaceCurve, table_size: int = 256) -> ArcLengthCurve:
    return ArcLengthCurve(curve, table_size)
