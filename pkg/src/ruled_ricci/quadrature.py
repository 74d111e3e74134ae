"""Adaptive Simpson quadrature for scalar or vector integrands."""

from __future__ import annotations

from typing import Callable

import numpy as np

from .errors import NumericError

MAX_DEPTH = 40


def _check(v, x):
    if not np.all(np.isfinite(v)):
        raise NumericError(f"non-finite integrand at {x!r}")
    return v


def _segments(f, a, b, tol, max_depth, max_width):
    """Yield accepted ``(left, right, integral)`` pieces in left-to-right order."""
    fa = _check(np.asarray(f(a), dtype=float), a)
    fb = _check(np.asarray(f(b), dtype=float), b)
    m = 0.5 * (a + b)
    fm = _check(np.asarray(f(m), dtype=float), m)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    stack = [(a, b, fa, fm, fb, whole, tol, 0)]
    while stack:
        a, b, fa, fm, fb, whole, tol, depth = stack.pop()
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm = _check(np.asarray(f(lm), dtype=float), lm)
        frm = _check(np.asarray(f(rm), dtype=float), rm)
        left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
        right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
        delta = left + right - whole
        wide = max_width is not None and (b - a) > max_width
        if depth >= max_depth or (not wide and np.max(np.abs(delta)) <= 15.0 * tol):
            yield a, b, left + right + delta / 15.0
            continue
        # right half pushed first so the left half is processed first
        stack.append((m, b, fm, frm, fb, right, 0.5 * tol, depth + 1))
        stack.append((a, m, fa, flm, fm, left, 0.5 * tol, depth + 1))


def adaptive_simpson(
    f: Callable[[float], float | np.ndarray],
    a: float,
    b: float,
    tol: float = 1e-10,
    max_depth: int = MAX_DEPTH,
):
    """Integral of ``f`` over ``[a, b]`` to absolute tolerance ``tol``."""
    if a == b:
        return np.zeros_like(np.asarray(f(a), dtype=float))
    if b < a:
        return -adaptive_simpson(f, b, a, tol, max_depth)
    total = None
    for _, _, piece in _segments(f, a, b, tol, max_depth, None):
        total = piece if total is None else total + piece
    return total


def cumulative_simpson(
    f: Callable[[float], float | np.ndarray],
    a: float,
    b: float,
    tol: float = 1e-10,
    max_depth: int = MAX_DEPTH,
    max_width: float | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Adaptive node set on ``[a, b]`` and the running integral from ``a``.

    Returns ``(nodes, values)`` with ``values[0] == 0``.  ``max_width`` forces
    refinement of long intervals so that interpolation between nodes stays
    accurate even where the integrand is nearly polynomial.
    """
    if not b > a:
        raise ValueError("cumulative_simpson needs b > a")
    nodes = [a]
    values = [np.zeros_like(np.asarray(f(a), dtype=float))]
    for _, right, piece in _segments(f, a, b, tol, max_depth, max_width):
        nodes.append(right)
        values.append(values[-1] + piece)
    return np.asarray(nodes), np.asarray(values)
