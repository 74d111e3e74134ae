"""Ruled-surface geometry for X(t, u) = alpha(t) + u beta(t).

Most formulas here assume the standard gauge: ``|beta| = |beta'| = 1``,
``<beta, beta'> = 0`` and alpha is the line of striction (``<alpha', beta'> = 0``).
The gauge is checked, never repaired.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .curves import SpaceCurve, frenet
from .errors import NonRegularCurveError, NormalizationError, PreconditionError
from .jet import Jet3

GAUGE_TOL = 1e-8
DEVELOPABLE_TOL = 1e-9
RICCI_TOL = 1e-7
NAN = float("nan")


@dataclass(eq=False)
class RuledPatch:
    """Generating curves over the rectangle ``t_range x u_range``.

    ``canonical`` marks patches generated by a constant-torsion curve and its
    binormal (or the helicoid); ``tau0`` is that torsion when defined.
    """

    alpha: SpaceCurve
    beta: SpaceCurve
    t_range: tuple[float, float]
    u_range: tuple[float, float]
    name: str = "patch"
    canonical: bool = False
    tau0: float | None = None
    _cache: dict = field(default_factory=dict, repr=False)

    def curve_jets(self, t: float) -> tuple[np.ndarray, np.ndarray]:
        key = float(t)
        hit = self._cache.get(key)
        if hit is None:
            hit = (self.alpha.jets(key), self.beta.jets(key))
            if len(self._cache) > 8192:
                self._cache.clear()
            self._cache[key] = hit
        return hit

    def __call__(self, t: float, u: float) -> np.ndarray:
        a, b = self.curve_jets(t)
        return a[0] + u * b[0]

    def partials(self, t: float, u: float) -> dict[str, np.ndarray]:
        a, b = self.curve_jets(t)
        return {
            "X_t": a[1] + u * b[1],
            "X_u": b[0],
            "X_tt": a[2] + u * b[2],
            "X_tu": b[1],
            "X_uu": np.zeros(3),
        }

    def grid(self, n_t: int, n_u: int) -> tuple[np.ndarray, np.ndarray]:
        return np.linspace(*self.t_range, n_t), np.linspace(*self.u_range, n_u)


@dataclass(frozen=True)
class MetricSample:
    E: float
    F: float
    G: float

    @property
    def detg(self) -> float:
        return self.E * self.G - self.F * self.F


@dataclass(frozen=True)
class ShapeSample:
    L: float
    M: float
    Nn: float
    K: float
    H: float
    normal: np.ndarray
    metric: MetricSample


# ------------------------------------------------------------------- gauge
def gauge_defects(patch: RuledPatch, t: float) -> dict[str, float]:
    """Deviations from the standard gauge at ``t`` (all zero when it holds)."""
    a, b = patch.curve_jets(t)
    return {
        "|beta|-1": float(np.linalg.norm(b[0]) - 1.0),
        "|beta'|-1": float(np.linalg.norm(b[1]) - 1.0),
        "<beta,beta'>": float(np.dot(b[0], b[1])),
        "<alpha',beta'>": float(np.dot(a[1], b[1])),
    }


def check_gauge(patch: RuledPatch, t: float, tol: float = GAUGE_TOL, striction: bool = True) -> None:
    for key, value in gauge_defects(patch, t).items():
        if key == "<alpha',beta'>" and not striction:
            continue
        if abs(value) > tol:
            raise NormalizationError(f"{patch.name}: gauge violated at t={t!r}: {key} = {value:.3e}")


# ------------------------------------------------------- jet vector helpers
def _shift(d: np.ndarray) -> list[Jet3]:
    """Jets of the derivative of a curve; the top order is unknown (nan)."""
    return [Jet3(d[1, i], d[2, i], d[3, i], NAN) for i in range(3)]


def _lift(d: np.ndarray) -> list[Jet3]:
    return [Jet3(*d[:, i]) for i in range(3)]


def _jdot(a: Sequence[Jet3], b: Sequence[Jet3]) -> Jet3:
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def _jcross(a: Sequence[Jet3], b: Sequence[Jet3]) -> list[Jet3]:
    return [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]


# --------------------------------------------------- distribution parameter
def distribution_parameter(patch: RuledPatch, t: float, check: bool = True) -> float:
    """lambda(t) with ``alpha' x beta = lambda beta'`` (sign is orientation dependent)."""
    if check:
        _check_lambda_pre(patch, t)
    a, b = patch.curve_jets(t)
    n2 = float(np.dot(b[1], b[1]))
    return float(np.dot(np.cross(a[1], b[0]), b[1])) / n2


def _check_lambda_pre(patch: RuledPatch, t: float) -> None:
    a, b = patch.curve_jets(t)
    if float(np.linalg.norm(b[1])) == 0.0:
        raise PreconditionError(f"{patch.name}: beta' vanishes at t={t!r} (cylindrical)")
    for label, value in (("<alpha',beta'>", np.dot(a[1], b[1])), ("<beta,beta'>", np.dot(b[0], b[1]))):
        if abs(value) > GAUGE_TOL:
            raise PreconditionError(f"{patch.name}: {label} = {float(value):.3e} at t={t!r}; expected 0")


def lambda_jet(patch: RuledPatch, t: float) -> Jet3:
    """lambda and its first two t-derivatives (third slot is nan)."""
    a, b = patch.curve_jets(t)
    da, bb, db = _shift(a), _lift(b), _shift(b)
    return _jdot(_jcross(da, bb), db) / _jdot(db, db)


def speed_sq_jet(curve: SpaceCurve, t: float) -> Jet3:
    """|alpha'|^2 and its first two derivatives (third slot is nan)."""
    da = _shift(curve.jets(t))
    return _jdot(da, da)


# -------------------------------------------------------- line of striction
class StrictionCurve(SpaceCurve):
    """alpha - h beta with ``h = <alpha', beta'> / |beta'|^2``.

    Position and the first two derivatives are exact.  The third derivative
    would need fourth derivatives of the inputs, so it is taken by a 5-point
    central difference of the exact second derivative.
    """

    FD_STEP = 1e-3

    def __init__(self, alpha: SpaceCurve, beta: SpaceCurve):
        self.alpha, self.beta = alpha, beta
        self.name = f"striction({alpha.name}, {beta.name})"
        lo = max(alpha.domain[0], beta.domain[0])
        hi = min(alpha.domain[1], beta.domain[1])
        self.domain = (lo, hi)

    def offset(self, t: float) -> Jet3:
        a, b = self.alpha.jets(t), self.beta.jets(t)
        da, db = _shift(a), _shift(b)
        n2 = _jdot(db, db)
        if n2.d0 == 0.0:
            raise PreconditionError(f"beta' vanishes at t={t!r} (cylindrical direction)")
        return _jdot(da, db) / n2

    def _low_jets(self, t: float) -> np.ndarray:
        h = self.offset(t)
        a, b = self.alpha.jets(t), self.beta.jets(t)
        out = np.empty((3, 3))
        for i in range(3):
            comp = Jet3(*a[:, i]) - h * Jet3(*b[:, i])
            out[:, i] = (comp.d0, comp.d1, comp.d2)
        return out

    def jets(self, t: float) -> np.ndarray:
        self.check_domain(t)
        low = self._low_jets(t)
        d = self.FD_STEP
        lo, hi = self.domain
        if t - 2 * d < lo or t + 2 * d > hi:
            # one-sided fallback near the ends: second-order forward/backward
            sgn = 1.0 if t - 2 * d < lo else -1.0
            f0 = low[2]
            f1 = self._low_jets(t + sgn * d)[2]
            f2 = self._low_jets(t + sgn * 2 * d)[2]
            d3 = sgn * (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * d)
        else:
            fm2 = self._low_jets(t - 2 * d)[2]
            fm1 = self._low_jets(t - d)[2]
            fp1 = self._low_jets(t + d)[2]
            fp2 = self._low_jets(t + 2 * d)[2]
            d3 = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * d)
        return np.vstack([low, d3])


def striction_line(alpha: SpaceCurve, beta: SpaceCurve) -> StrictionCurve:
    return StrictionCurve(alpha, beta)


def striction_offset(alpha: SpaceCurve, beta: SpaceCurve, t: float) -> float:
    """``h = <alpha', beta'> / |beta'|^2`` at ``t``."""
    return StrictionCurve(alpha, beta).offset(t).d0


def striction_offset_frenet(alpha: SpaceCurve, beta: SpaceCurve, t: float) -> float:
    """Same offset written in alpha's Frenet frame.

    With ``beta = b1 T + b2 N + b3 B`` and ``'`` the arc-length derivative,
    ``h = (b1' - kappa b2) / |beta'|^2``.  Requires kappa > 0.
    """
    a, b = alpha.jets(t), beta.jets(t)
    fr = frenet(alpha, t)
    if not fr.regular:
        raise NonRegularCurveError(f"{alpha.name}: Frenet frame undefined at t={t!r}")
    v = float(np.linalg.norm(a[1]))
    dv = float(np.dot(a[1], a[2])) / v
    dT_dt = a[2] / v - a[1] * dv / (v * v)
    b1_s = (float(np.dot(b[1], fr.T)) + float(np.dot(b[0], dT_dt))) / v
    b2 = float(np.dot(b[0], fr.N))
    dbeta_s_sq = float(np.dot(b[1], b[1])) / (v * v)
    return (b1_s - fr.kappa * b2) / dbeta_s_sq


# ------------------------------------------------------- fundamental forms
def first_fundamental_form(patch: RuledPatch, t: float, u: float, check: bool = True) -> MetricSample:
    if check:
        check_gauge(patch, t, striction=False)
    p = patch.partials(t, u)
    return MetricSample(
        float(np.dot(p["X_t"], p["X_t"])),
        float(np.dot(p["X_t"], p["X_u"])),
        float(np.dot(p["X_u"], p["X_u"])),
    )


def gauss_curvature_closed(patch: RuledPatch, t: float, u: float) -> float:
    """K = -lambda^2 / (lambda^2 + u^2)^2."""
    lam = distribution_parameter(patch, t)
    lam2 = lam * lam
    if lam2 == 0.0:
        return 0.0
    return -lam2 / (lam2 + u * u) ** 2


def shape_operator_sample(patch: RuledPatch, t: float, u: float) -> ShapeSample:
    """Second fundamental form and K, H from exact second derivatives of X."""
    p = patch.partials(t, u)
    n = np.cross(p["X_t"], p["X_u"])
    nn = float(np.linalg.norm(n))
    if nn == 0.0:
        raise PreconditionError(f"{patch.name}: degenerate normal at (t, u) = ({t!r}, {u!r})")
    normal = n / nn
    g = MetricSample(
        float(np.dot(p["X_t"], p["X_t"])),
        float(np.dot(p["X_t"], p["X_u"])),
        float(np.dot(p["X_u"], p["X_u"])),
    )
    L = float(np.dot(p["X_tt"], normal))
    M = float(np.dot(p["X_tu"], normal))
    Nn = float(np.dot(p["X_uu"], normal))
    detg = g.detg
    K = (L * Nn - M * M) / detg
    H = (g.E * Nn - 2.0 * g.F * M + g.G * L) / (2.0 * detg)
    return ShapeSample(L, M, Nn, K, H, normal, g)


def gauss_curvature_intrinsic(patch: RuledPatch, t: float, u: float) -> float:
    """Brioschi formula on the induced metric, with exact metric derivatives.

    Uses only E, F, G and their first and second partials, so it is
    independent of both the normal vector and the distribution parameter.
    """
    a, b = patch.curve_jets(t)
    xt = a[1] + u * b[1]
    xtt = a[2] + u * b[2]
    bt, btt = b[1], b[2]
    E = xt @ xt
    F = xt @ b[0]
    G = b[0] @ b[0]
    E_t = 2.0 * xt @ xtt
    E_u = 2.0 * xt @ bt
    E_uu = 2.0 * bt @ bt
    F_t = xtt @ b[0] + xt @ bt
    F_u = bt @ b[0]
    F_tu = btt @ b[0] + bt @ bt
    G_t = 2.0 * b[0] @ bt
    G_u = 0.0
    G_tt = 2.0 * (bt @ bt + b[0] @ btt)
    m1 = np.array([
        [-0.5 * E_uu + F_tu - 0.5 * G_tt, 0.5 * E_t, F_t - 0.5 * E_u],
        [F_u - 0.5 * G_t, E, F],
        [0.5 * G_u, F, G],
    ])
    m2 = np.array([
        [0.0, 0.5 * E_u, 0.5 * G_t],
        [0.5 * E_u, E, F],
        [0.5 * G_t, F, G],
    ])
    return float((np.linalg.det(m1) - np.linalg.det(m2)) / (E * G - F * F) ** 2)


def mean_curvature_closed(patch: RuledPatch, t: float, u: float) -> float:
    """H = -kappa / (2 sqrt(1 + tau0^2 u^2)) on a canonical patch.

    kappa is the curvature of the line of striction.  If beta is the
    negative of alpha's Frenet binormal (as happens past an inflection of
    alpha) the surface normal flips, and so does the sign of H.
    """
    if not patch.canonical:
        raise PreconditionError(f"{patch.name}: mean_curvature_closed needs a canonical patch")
    fr = frenet(patch.alpha, t)
    if not fr.regular:
        return 0.0
    if patch.tau0 is None:
        raise PreconditionError(f"{patch.name}: torsion undefined on a patch with curved striction line")
    _, b = patch.curve_jets(t)
    align = float(np.dot(fr.B, b[0]))
    if abs(abs(align) - 1.0) > 1e-6:
        raise PreconditionError(f"{patch.name}: beta is not the binormal of alpha at t={t!r}")
    sign = 1.0 if align > 0 else -1.0
    return -sign * fr.kappa / (2.0 * math.sqrt(1.0 + (patch.tau0 * u) ** 2))


# ----------------------------------------------------------- classification
@dataclass(frozen=True)
class Classification:
    kind: str  # developable | ricci | non_ricci
    evidence: dict


def classify(patch: RuledPatch, probes: int = 50, tol: float = RICCI_TOL) -> Classification:
    """Developable, Ricci or non-Ricci, by the lambda^2 = |alpha'|^2 = c^2 test."""
    ts = np.linspace(*patch.t_range, probes)
    lam = np.empty(probes)
    sp2 = np.empty(probes)
    for i, t in enumerate(ts):
        check_gauge(patch, t, striction=True)
        lam[i] = distribution_parameter(patch, t, check=False)
        a, _ = patch.curve_jets(t)
        sp2[i] = float(np.dot(a[1], a[1]))
    lam2 = lam * lam
    evidence = {
        "probes": probes,
        "lambda_min": float(lam.min()),
        "lambda_max": float(lam.max()),
        "speed_sq_min": float(sp2.min()),
        "speed_sq_max": float(sp2.max()),
    }
    if np.max(np.abs(lam)) <= DEVELOPABLE_TOL:
        evidence["max_abs_lambda"] = float(np.max(np.abs(lam)))
        return Classification("developable", evidence)
    scale = max(1.0, float(np.max(sp2)))
    mismatch = float(np.max(np.abs(lam2 - sp2))) / scale
    spread = float(lam2.max() - lam2.min()) / scale
    evidence["max_deviation"] = max(mismatch, spread)
    evidence["lambda_sq_vs_speed_sq"] = mismatch
    evidence["lambda_sq_spread"] = spread
    if mismatch <= tol and spread <= tol:
        evidence["c"] = float(math.sqrt(np.mean(lam2)))
        return Classification("ricci", evidence)
    return Classification("non_ricci", evidence)
