"""Curves of prescribed constant torsion built from their binormal indicatrix.

Given a unit-speed curve ``B`` on the unit sphere and ``tau0 != 0``,

    alpha(t) = (1/tau0) * integral_{t0}^{t} B'(s) x B(s) ds

has constant torsion ``tau0`` and binormal ``+-B`` wherever
``<B x B', B''> != 0``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from numpy.polynomial import legendre

from .curves import SpaceCurve, frenet
from .errors import GreatCircleError, NonRegularCurveError, PreconditionError, SphericalCurveError
from .quadrature import cumulative_simpson

SPHERE_TOL = 1e-8
TRIPLE_MIN = 1e-8
# widest node interval allowed in the cumulative table
MAX_NODE_WIDTH = 0.1

_GL_X, _ = legendre.leggauss(6)


@dataclass(frozen=True)
class SphericalCurveCheck:
    probes: int
    max_norm_deviation: float
    max_speed_deviation: float
    min_abs_triple: float
    max_abs_triple: float
    sign_changes: int
    norm_ok: bool
    speed_ok: bool
    regular_ok: bool

    @property
    def passed(self) -> bool:
        return self.norm_ok and self.speed_ok and self.regular_ok

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d


def validate_spherical(
    B: SpaceCurve, grid: int = 200, interval: tuple[float, float] | None = None
) -> SphericalCurveCheck:
    """Check ``|B| = 1``, ``|B'| = 1`` and ``<B x B', B''> != 0`` on ``grid`` probes.

    Isolated sign changes of the triple product are counted but do not fail
    the check: the construction stays smooth across them, only the Frenet
    binormal of the result flips to ``-B``.
    """
    if grid < 2:
        raise ValueError("grid must be >= 2")
    a, b = B.finite_domain(interval)
    ts = np.linspace(a, b, grid)
    norm_dev = np.empty(grid)
    speed_dev = np.empty(grid)
    triple = np.empty(grid)
    for i, t in enumerate(ts):
        d = B.jets(t)
        norm_dev[i] = abs(np.linalg.norm(d[0]) - 1.0)
        speed_dev[i] = abs(np.linalg.norm(d[1]) - 1.0)
        triple[i] = np.dot(np.cross(d[0], d[1]), d[2])
    signs = np.sign(triple[np.abs(triple) >= TRIPLE_MIN])
    return SphericalCurveCheck(
        probes=grid,
        max_norm_deviation=float(norm_dev.max()),
        max_speed_deviation=float(speed_dev.max()),
        min_abs_triple=float(np.abs(triple).min()),
        max_abs_triple=float(np.abs(triple).max()),
        sign_changes=int(np.count_nonzero(np.diff(signs))),
        norm_ok=bool(norm_dev.max() <= SPHERE_TOL),
        speed_ok=bool(speed_dev.max() <= SPHERE_TOL),
        regular_ok=bool(np.abs(triple).min() >= TRIPLE_MIN),
    )


def _integrand(B: SpaceCurve, t: float) -> np.ndarray:
    d = B.jets(t)
    return np.cross(d[1], d[0])


class ConstructedCurve(SpaceCurve):
    """Constant-torsion curve obtained by cumulative quadrature.

    Positions come from an adaptive node table; between nodes the integrand
    is replaced by its degree-5 interpolant at six Gauss-Legendre points and
    integrated exactly.  Derivatives never touch the table: they are formed
    from the jets of ``B`` directly.
    """

    def __init__(
        self,
        B: SpaceCurve,
        tau0: float,
        t0: float,
        tol: float = 1e-10,
        interval: tuple[float, float] | None = None,
    ):
        a, b = B.finite_domain(interval)
        if not a <= t0 <= b:
            raise ValueError(f"base point t0={t0!r} outside [{a}, {b}]")
        self.B = B
        self.tau0 = float(tau0)
        self.t0 = float(t0)
        self.tol = float(tol)
        self.domain = (a, b)
        self.name = f"alpha[{B.name}]"

        f = lambda s: _integrand(B, s)
        parts_n, parts_v = [], []
        if t0 > a:
            n, v = cumulative_simpson(f, a, t0, tol, max_width=MAX_NODE_WIDTH)
            parts_n.append(n[:-1])
            parts_v.append(v[:-1] - v[-1])
        parts_n.append(np.array([t0]))
        parts_v.append(np.zeros((1, 3)))
        if t0 < b:
            n, v = cumulative_simpson(f, t0, b, tol, max_width=MAX_NODE_WIDTH)
            parts_n.append(n[1:])
            parts_v.append(v[1:])
        self.nodes = np.concatenate(parts_n)
        self.values = np.concatenate(parts_v) / self.tau0

        # per-segment antiderivative of the degree-5 interpolant, in x in [-1, 1]
        lo, hi = self.nodes[:-1], self.nodes[1:]
        half = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        samples = np.array([[_integrand(B, m + h * x) for x in _GL_X] for m, h in zip(mid, half)])
        coef = legendre.legfit(_GL_X, samples.transpose(1, 0, 2).reshape(6, -1), 5)
        coef = coef.reshape(6, len(lo), 3)
        self._anti = legendre.legint(coef, lbnd=-1.0, axis=0)  # (7, nseg, 3)
        self._half = half

    def position(self, t: float) -> np.ndarray:
        self.check_domain(t)
        k = int(np.clip(np.searchsorted(self.nodes, t, side="right") - 1, 0, len(self.nodes) - 2))
        lo = self.nodes[k]
        h = self._half[k]
        x = min(max((t - lo) / h - 1.0, -1.0), 1.0)
        partial = legendre.legval(x, self._anti[:, k, :]) * h
        return self.values[k] + partial / self.tau0

    def jets(self, t: float) -> np.ndarray:
        pos = self.position(t)
        d = self.B.jets(t)
        inv = 1.0 / self.tau0
        return np.array([
            pos,
            np.cross(d[1], d[0]) * inv,
            np.cross(d[2], d[0]) * inv,
            (np.cross(d[3], d[0]) + np.cross(d[2], d[1])) * inv,
        ])


def integrate_alpha(
    B: SpaceCurve,
    tau0: float,
    t0: float | None = None,
    tol: float = 1e-10,
    interval: tuple[float, float] | None = None,
    grid: int = 200,
) -> ConstructedCurve:
    """Build the curve of constant torsion ``tau0`` whose binormal is ``B``.

    ``interval`` restricts ``B``'s domain (required when it is unbounded);
    ``t0`` defaults to its midpoint and is where the result passes through
    the origin.
    """
    if tau0 == 0 or not math.isfinite(tau0):
        raise PreconditionError(f"tau0 must be finite and non-zero, got {tau0!r}")
    a, b = B.finite_domain(interval)
    check = validate_spherical(B, grid, (a, b))
    if check.max_abs_triple < TRIPLE_MIN and check.norm_ok and check.speed_ok:
        raise GreatCircleError(
            f"{B.name} is a great circle (<B x B', B''> = 0 everywhere); its ruled Ricci "
            "surface is the helicoid: use the 'helicoid' gallery entry instead",
            check,
        )
    if not check.passed:
        raise SphericalCurveError(f"{B.name} fails the spherical-curve hypotheses", check)
    if t0 is None:
        t0 = 0.5 * (a + b)
    return ConstructedCurve(B, tau0, t0, tol, (a, b))


def verify_binormal(
    alpha: SpaceCurve, B: SpaceCurve, grid: int = 200, interval: tuple[float, float] | None = None
) -> float:
    """Largest distance between alpha's Frenet binormal and ``+-B`` on ``grid`` probes."""
    if interval is None:
        interval = (max(alpha.domain[0], B.domain[0]), min(alpha.domain[1], B.domain[1]))
    a, b = alpha.finite_domain(interval)
    worst = 0.0
    for t in np.linspace(a, b, grid):
        fr = frenet(alpha, t)
        if not fr.regular:
            raise NonRegularCurveError(f"{alpha.name}: binormal undefined at t={t!r}")
        Bt = B(t)
        worst = max(worst, min(float(np.linalg.norm(fr.B - Bt)), float(np.linalg.norm(fr.B + Bt))))
    return worst
