"""Ricci-condition residual K*Lap(K) - |grad K|^2 - 4 K^3 on (t, u) metrics.

Three independent routes are provided:

* finite differences on an arbitrary :class:`MetricField`
  (:func:`grad_norm_sq`, :func:`laplace_beltrami`, :func:`ricci_residual_fd`);
* closed forms for ``g = (lambda^2 + u^2) dt^2 + du^2``
  (:func:`closed_form_residual` and friends);
* the coefficient tables for ``g = (f^2 + u^2) dt^2 + 2 delta dt du + du^2``
  with ``delta = sqrt(f^2 - lambda^2)`` (:func:`lemma_coefficients`).
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import MarginError, NumericError, PreconditionError
from .expr import eval_jet, parse
from .jet import Jet3
from .ruled_surface import RuledPatch, distribution_parameter, first_fundamental_form

EPS_NORMALIZE = 1e-30
PASS_THRESHOLD = 1e-3
DEFAULT_STEP = 1e-3

ScalarField = Callable[[float, float], float]
JetFunction = Callable[[float], Jet3]


def jet_function(source: str, parameters: dict | None = None) -> JetFunction:
    """Parse a one-variable expression into a ``t -> Jet3`` callable."""
    expr = parse(source, parameters or {})
    return lambda t: eval_jet(expr, t)


def constant_jet(c: float) -> JetFunction:
    return lambda t: Jet3(c)


@dataclass(frozen=True)
class MetricField:
    """Metric coefficients and Gauss curvature as functions of ``(t, u)``."""

    E: ScalarField
    F: ScalarField
    G: ScalarField
    K: ScalarField
    t_range: tuple[float, float]
    u_range: tuple[float, float]
    provenance: str = "custom"

    @classmethod
    def from_patch(cls, patch: RuledPatch) -> "MetricField":
        """Induced metric of a ruled patch, with K from the closed form in lambda."""
        lam_cache: dict[float, float] = {}

        def lam(t: float) -> float:
            v = lam_cache.get(t)
            if v is None:
                v = lam_cache[t] = distribution_parameter(patch, t)
            return v

        def K(t: float, u: float) -> float:
            l2 = lam(t) ** 2
            return 0.0 if l2 == 0.0 else -l2 / (l2 + u * u) ** 2

        def form(t: float, u: float):
            return first_fundamental_form(patch, t, u, check=False)

        return cls(
            E=lambda t, u: form(t, u).E,
            F=lambda t, u: form(t, u).F,
            G=lambda t, u: form(t, u).G,
            K=K,
            t_range=tuple(patch.t_range),
            u_range=tuple(patch.u_range),
            provenance=f"patch:{patch.name}",
        )

    @classmethod
    def from_ansatz(
        cls,
        f_fn: JetFunction,
        lambda_fn: JetFunction,
        t_range: tuple[float, float],
        u_range: tuple[float, float],
        label: str = "ansatz",
    ) -> "MetricField":
        """``(f^2 + u^2) dt^2 + 2 sqrt(f^2 - lambda^2) dt du + du^2``."""

        def delta(t: float) -> float:
            f, lam = f_fn(t).d0, lambda_fn(t).d0
            d2 = f * f - lam * lam
            if d2 < -1e-12 * max(1.0, f * f):
                raise PreconditionError(f"f^2 < lambda^2 at t={t!r}")
            return math.sqrt(max(d2, 0.0))

        def K(t: float, u: float) -> float:
            l2 = lambda_fn(t).d0 ** 2
            return 0.0 if l2 == 0.0 else -l2 / (l2 + u * u) ** 2

        return cls(
            E=lambda t, u: f_fn(t).d0 ** 2 + u * u,
            F=lambda t, u: delta(t),
            G=lambda t, u: 1.0,
            K=K,
            t_range=tuple(t_range),
            u_range=tuple(u_range),
            provenance=f"ansatz:{label}",
        )

    def inverse(self, t: float, u: float) -> tuple[float, float, float, float]:
        """``(g^tt, g^tu, g^uu, sqrt(det g))`` at a point."""
        E, F, G = self.E(t, u), self.F(t, u), self.G(t, u)
        det = E * G - F * F
        if not det > 0.0:
            raise NumericError(f"degenerate metric at ({t!r}, {u!r}): det g = {det!r}")
        return G / det, -F / det, E / det, math.sqrt(det)


def _check_margin(field: MetricField, t: float, u: float, h: float) -> None:
    (t0, t1), (u0, u1) = field.t_range, field.u_range
    m = 2.0 * h
    if t - m < t0 or t + m > t1 or u - m < u0 or u + m > u1:
        raise MarginError(f"({t!r}, {u!r}) is closer than 2h = {m!r} to the domain boundary")


def _d5(f: Callable[[float], float], x: float, d: float) -> float:
    """Five-point central first derivative, fourth order."""
    return (f(x - 2 * d) - 8.0 * f(x - d) + 8.0 * f(x + d) - f(x + 2 * d)) / (12.0 * d)


def grad_norm_sq(field: MetricField, t: float, u: float, h: float = DEFAULT_STEP) -> float:
    """``g^ij dK_i dK_j`` with second-order central differences of K."""
    _check_margin(field, t, u, h)
    K = field.K
    Kt = (K(t + h, u) - K(t - h, u)) / (2.0 * h)
    Ku = (K(t, u + h) - K(t, u - h)) / (2.0 * h)
    gtt, gtu, guu, _ = field.inverse(t, u)
    return gtt * Kt * Kt + 2.0 * gtu * Kt * Ku + guu * Ku * Ku


def _flux(field: MetricField, t: float, u: float, d: float) -> tuple[float, float]:
    K = field.K
    Kt = _d5(lambda s: K(s, u), t, d)
    Ku = _d5(lambda s: K(t, s), u, d)
    gtt, gtu, guu, sq = field.inverse(t, u)
    return sq * (gtt * Kt + gtu * Ku), sq * (gtu * Kt + guu * Ku)


def laplace_beltrami(field: MetricField, t: float, u: float, h: float = DEFAULT_STEP) -> float:
    """Divergence form ``(1/sqrt g) d_i (sqrt g g^ij d_j K)``.

    Inner gradients use a five-point stencil of step h/2 at the staggered
    half-step points; the outer divergence is a central difference of step h.
    Overall accuracy is second order in h.
    """
    _check_margin(field, t, u, h)
    d = 0.5 * h
    pt_plus, _ = _flux(field, t + d, u, d)
    pt_minus, _ = _flux(field, t - d, u, d)
    _, pu_plus = _flux(field, t, u + d, d)
    _, pu_minus = _flux(field, t, u - d, d)
    sq = field.inverse(t, u)[3]
    return ((pt_plus - pt_minus) + (pu_plus - pu_minus)) / (h * sq)


def normalized(residual: float, K: float) -> float:
    return residual / (abs(K) ** 3 + EPS_NORMALIZE)


def fd_residual(field: MetricField, t: float, u: float, h: float = DEFAULT_STEP) -> tuple[float, float]:
    """Raw and normalized FD residual at one point."""
    K = field.K(t, u)
    r = K * laplace_beltrami(field, t, u, h) - grad_norm_sq(field, t, u, h) - 4.0 * K ** 3
    return r, normalized(r, K)


@dataclass
class RicciReport:
    grid: tuple[int, int]
    h: float
    t_values: np.ndarray
    u_values: np.ndarray
    residual: np.ndarray
    normalized: np.ndarray
    provenance: str = ""
    normalized_h2: np.ndarray | None = None
    threshold: float = PASS_THRESHOLD
    extra: dict = field(default_factory=dict)

    @property
    def max_normalized_residual(self) -> float:
        return float(np.max(np.abs(self.normalized)))

    @property
    def mean_normalized_residual(self) -> float:
        return float(np.mean(np.abs(self.normalized)))

    @property
    def worst_point(self) -> tuple[float, float]:
        i, j = np.unravel_index(np.argmax(np.abs(self.normalized)), self.normalized.shape)
        return float(self.t_values[i]), float(self.u_values[j])

    @property
    def convergence_order(self) -> float | None:
        """log2 of the max residual ratio between steps h and h/2.

        Both runs use the same interior points.  For a Ricci metric the exact
        residual is zero, so this measures the order of the stencils; for a
        non-Ricci metric it is near zero because the residual does not vanish.
        """
        if self.normalized_h2 is None:
            return None
        fine = float(np.max(np.abs(self.normalized_h2)))
        coarse = self.max_normalized_residual
        if fine == 0.0 or coarse == 0.0:
            return None
        return math.log2(coarse / fine)

    @property
    def passed(self) -> bool:
        return self.max_normalized_residual <= self.threshold

    def to_dict(self) -> dict:
        d = {
            "provenance": self.provenance,
            "grid": list(self.grid),
            "h": self.h,
            "threshold": self.threshold,
            "max_normalized_residual": self.max_normalized_residual,
            "mean": self.mean_normalized_residual,
            "worst_point": list(self.worst_point),
            "convergence_order": self.convergence_order,
            "passed": self.passed,
        }
        if self.normalized_h2 is not None:
            d["max_normalized_residual_h2"] = float(np.max(np.abs(self.normalized_h2)))
        d.update(self.extra)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def rows(self):
        """Per-point records ``(t, u, residual, normalized[, normalized_h2])``."""
        for i, t in enumerate(self.t_values):
            for j, u in enumerate(self.u_values):
                row = [float(t), float(u), float(self.residual[i, j]), float(self.normalized[i, j])]
                if self.normalized_h2 is not None:
                    row.append(float(self.normalized_h2[i, j]))
                yield row


def interior_grid(field: MetricField, n_t: int, n_u: int, inset: float = 0.1) -> tuple[np.ndarray, np.ndarray]:
    """``n_t x n_u`` points with a relative inset from every edge of the domain."""
    (t0, t1), (u0, u1) = field.t_range, field.u_range
    dt, du = inset * (t1 - t0), inset * (u1 - u0)
    return np.linspace(t0 + dt, t1 - dt, n_t), np.linspace(u0 + du, u1 - du, n_u)


def worker_count(workers: int | None) -> int:
    if workers is None:
        workers = int(os.environ.get("RULED_RICCI_THREADS", "1") or 1)
    return max(1, workers)


def _residual_grid(field: MetricField, ts: np.ndarray, us: np.ndarray, h: float, workers: int):
    def row(t):
        out = [fd_residual(field, float(t), float(u), h) for u in us]
        return [r for r, _ in out], [n for _, n in out]

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(row, ts))
    else:
        rows = [row(t) for t in ts]
    raw = np.array([r for r, _ in rows])
    norm = np.array([n for _, n in rows])
    if not (np.all(np.isfinite(raw)) and np.all(np.isfinite(norm))):
        raise NumericError("non-finite Ricci residual on the grid")
    return raw, norm


def ricci_residual_fd(
    field: MetricField,
    grid: tuple[int, int] = (10, 10),
    h: float = DEFAULT_STEP,
    refine: bool = False,
    threshold: float = PASS_THRESHOLD,
    points: tuple[np.ndarray, np.ndarray] | None = None,
    workers: int | None = None,
) -> RicciReport:
    """Finite-difference Ricci residual on an interior grid.

    With ``refine=True`` the same points are re-evaluated at step h/2 and the
    report carries a convergence-order estimate.
    """
    ts, us = points if points is not None else interior_grid(field, *grid)
    n = worker_count(workers)
    raw, norm = _residual_grid(field, ts, us, h, n)
    fine = _residual_grid(field, ts, us, 0.5 * h, n)[1] if refine else None
    return RicciReport(
        grid=(len(ts), len(us)),
        h=h,
        t_values=np.asarray(ts),
        u_values=np.asarray(us),
        residual=raw,
        normalized=norm,
        provenance=field.provenance,
        normalized_h2=fine,
        threshold=threshold,
    )


# ------------------------------------------------- delta = 0 closed forms
def _lam(lambda_fn: JetFunction, t: float) -> tuple[float, float, float]:
    j = lambda_fn(t)
    return j.d0, j.d1, j.d2


def closed_form_grad_norm_sq(lambda_fn: JetFunction, t: float, u: float) -> float:
    lam, dl, _ = _lam(lambda_fn, t)
    l2, w = lam * lam, lam * lam + u * u
    poly = (4 * l2 + dl * dl) * u ** 4 + (4 * l2 * l2 - 2 * l2 * dl * dl) * u * u + l2 * l2 * dl * dl
    return 4 * l2 / w ** 7 * poly


def closed_form_k_laplacian(lambda_fn: JetFunction, t: float, u: float) -> float:
    """K * Lap(K) for ``g = (lambda^2 + u^2) dt^2 + du^2``."""
    lam, dl, ddl = _lam(lambda_fn, t)
    l2, w = lam * lam, lam * lam + u * u
    poly = (
        (8 * l2 + dl * dl + lam * ddl) * u ** 4
        + (6 * l2 * l2 - 9 * l2 * dl * dl) * u * u
        - 2 * l2 ** 3
        + 4 * l2 * l2 * dl * dl
        - l2 * l2 * lam * ddl
    )
    return 2 * l2 / w ** 7 * poly


def ricci_polynomial(lambda_fn: JetFunction, t: float) -> tuple[float, float, float]:
    """Coefficients of ``u^4, u^2, u^0`` of the delta = 0 Ricci polynomial."""
    lam, dl, ddl = _lam(lambda_fn, t)
    return (dl * dl - lam * ddl, 5 * lam * lam * dl * dl, -(lam ** 4) * (2 * dl * dl - lam * ddl))


def closed_form_residual(lambda_fn: JetFunction, t: float, u: float) -> float:
    """Residual for ``g = (lambda^2 + u^2) dt^2 + du^2``.

    Equals ``-2 lambda^2 P(u) / (lambda^2 + u^2)^7`` where P is
    :func:`ricci_polynomial`; zero exactly when lambda is constant.
    """
    lam = lambda_fn(t).d0
    c4, c2, c0 = ricci_polynomial(lambda_fn, t)
    p = c4 * u ** 4 + c2 * u * u + c0
    return -2.0 * lam * lam * p / (lam * lam + u * u) ** 7


def closed_form_gauss(lambda_fn: JetFunction, t: float, u: float) -> float:
    l2 = lambda_fn(t).d0 ** 2
    return 0.0 if l2 == 0.0 else -l2 / (l2 + u * u) ** 2


# --------------------------------------------------- delta != 0 tables
@dataclass(frozen=True)
class LemmaCoefficients:
    """Coefficient tables indexed by power of u (``a[i]`` multiplies ``u**i``)."""

    t: float
    f: float
    lam: float
    delta: float
    dlam: float
    a: tuple[float, ...]
    b: tuple[float, ...]
    c: tuple[float, ...]

    def _w(self, u: float) -> float:
        return self.lam * self.lam + u * u

    def grad_norm_sq(self, u: float) -> float:
        return 4 * self.lam ** 2 / self._w(u) ** 7 * np.polyval(self.a[::-1], u)

    def k_laplacian(self, u: float) -> float:
        if self.delta == 0.0:
            raise PreconditionError("the b table divides by delta; use the delta = 0 closed form")
        return -2 * self.lam ** 2 / (self.delta * self._w(u) ** 7) * np.polyval(self.b[::-1], u)

    def residual(self, u: float) -> float:
        """Ricci residual ``sum c_i u^i / (delta (lambda^2 + u^2)^7)``."""
        if self.delta == 0.0:
            raise PreconditionError("the c table vanishes identically at delta = 0; use closed_form_residual")
        return float(np.polyval(self.c[::-1], u)) / (self.delta * self._w(u) ** 7)

    def c_identity(self) -> tuple[float, float]:
        """Both sides of ``c1/(2 lam^5) - c3/(2 lam^3) = -12 delta^2 lambda'``."""
        lhs = self.c[1] / (2 * self.lam ** 5) - self.c[3] / (2 * self.lam ** 3)
        return lhs, -12.0 * self.delta ** 2 * self.dlam


def lemma_coefficients(f_fn: JetFunction, lambda_fn: JetFunction, t: float) -> LemmaCoefficients:
    fj, lj = f_fn(t), lambda_fn(t)
    f2 = fj * fj
    F, dF = f2.d0, f2.d1
    lam, dl, ddl = lj.d0, lj.d1, lj.d2
    d2 = F - lam * lam
    if d2 < -1e-12 * max(1.0, F):
        raise PreconditionError(f"f^2 < lambda^2 at t={t!r}")
    dl2 = dl * dl
    delta = math.sqrt(max(d2, 0.0))
    a = (
        lam ** 4 * dl2,
        -4 * delta * lam ** 3 * dl,
        2 * lam ** 2 * (2 * F - dl2),
        4 * delta * lam * dl,
        4 * lam ** 2 + dl2,
    )
    b = (
        delta * lam ** 4 * (lam * ddl + 2 * F - 4 * dl2),
        lam ** 3 * (-17 * lam ** 2 * dl - lam * dF + 19 * F * dl),
        3 * delta * lam ** 2 * (2 * lam ** 2 - 4 * F + 3 * dl2),
        lam * (11 * lam ** 2 * dl - lam * dF - 9 * F * dl),
        delta * (-8 * lam ** 2 - dl2 - lam * ddl),
    )
    c = (
        2 * delta * lam ** 6 * (2 * lam ** 2 - 2 * F + 2 * dl2 - lam * ddl),
        2 * lam ** 5 * (9 * lam ** 2 * dl - 11 * F * dl + lam * dF),
        2 * delta * lam ** 4 * (-4 * lam ** 2 + 4 * F - 5 * dl2),
        2 * lam ** 3 * (-3 * lam ** 2 * dl + F * dl + lam * dF),
        2 * delta * lam ** 2 * (lam * ddl - dl2),
    )
    return LemmaCoefficients(t, fj.d0, lam, delta, dl, a, b, c)


def ansatz_residual(f_fn: JetFunction, lambda_fn: JetFunction, t: float, u: float, delta_tol: float = 1e-12) -> float:
    """Ricci residual of the (f, lambda) metric, choosing the valid closed route.

    The c table carries an overall factor of delta, so at delta = 0 it
    vanishes identically and would report every metric as Ricci; there the
    delta = 0 polynomial is used instead.
    """
    L = lemma_coefficients(f_fn, lambda_fn, t)
    if L.delta <= delta_tol * max(1.0, abs(L.f)):
        return closed_form_residual(lambda_fn, t, u)
    return L.residual(u)
