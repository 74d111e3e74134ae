from __future__ import annotations

import math

import numpy as np
import pytest

from ruled_ricci.constant_torsion import validate_spherical, verify_binormal
from ruled_ricci.curves import frenet
from ruled_ricci.errors import PreconditionError
from ruled_ricci.gallery import (
    ENTRIES,
    anti_salkowski,
    borderline,
    canonical_patch,
    expr_curves,
    helicoid,
    parallel_circles,
    right_conoid,
    tangent_developable,
)
from ruled_ricci.ruled_surface import classify, distribution_parameter, mean_curvature_closed

ALL = [parallel_circles(0.25), parallel_circles(0.5), parallel_circles(0.75),
       anti_salkowski(0.1), anti_salkowski(1 / 3), anti_salkowski(0.57), borderline()]
IDS = [f"{e.name}{e.params}" for e in ALL]


def probes(entry, n=50):
    lo, hi = entry.probe_domain
    return np.linspace(lo, hi, n)


def test_parallel_circles_binormal_at_zero():
    assert parallel_circles(0.5).B(0.0) == pytest.approx([0.0, -0.5, math.sqrt(0.75)])


def test_anti_salkowski_alpha_at_zero():
    ell = 0.1
    a = anti_salkowski(ell).alpha(0.0)
    assert a == pytest.approx([-2 * ell / (1 - 2 * ell ** 2 - 3 * ell ** 4), 0.0, 0.0], abs=1e-15)


def test_borderline_at_zero_and_equator():
    e = borderline()
    assert e.B(0.0) == pytest.approx([0.0, 0.0, 1.0])
    assert e.alpha(0.0) == pytest.approx([-1.0, 0.0, 0.0])
    assert abs(e.B(10.0)[2]) < 1e-4
    for t in range(-5, 6):
        assert np.linalg.norm(e.B(float(t))) == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("bad", [0.0, 1.0, -0.2])
def test_parallel_circles_parameter_range(bad):
    with pytest.raises(PreconditionError):
        parallel_circles(bad)


def test_anti_salkowski_exclusion():
    with pytest.raises(PreconditionError):
        anti_salkowski(1 / math.sqrt(3))
    with pytest.raises(PreconditionError):
        anti_salkowski(0.0)


@pytest.mark.parametrize("entry", ALL, ids=IDS)
def test_unit_torsion(entry):
    for t in probes(entry):
        fr = frenet(entry.alpha, t)
        if fr.regular:
            assert fr.tau == pytest.approx(1.0, abs=1e-7)


@pytest.mark.parametrize("entry", ALL, ids=IDS)
def test_b_is_spherical_and_binormal(entry):
    assert validate_spherical(entry.B, 200, entry.probe_domain).passed
    assert verify_binormal(entry.alpha, entry.B, 64, entry.probe_domain) <= 1e-7


@pytest.mark.parametrize("entry", ALL, ids=IDS)
def test_expression_strings_agree_with_jets(entry):
    a, B = expr_curves(entry)
    for t in probes(entry, 11):
        assert np.allclose(a.jets(t), entry.alpha.jets(t), rtol=1e-12, atol=1e-12)
        assert np.allclose(B.jets(t), entry.B.jets(t), rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("entry", ALL, ids=IDS)
def test_canonical_patch_is_ricci(entry):
    p = canonical_patch(entry)
    c = classify(p)
    assert c.kind == "ricci"
    assert (c.evidence["c"] * entry.tau0) ** 2 == pytest.approx(1.0, abs=1e-7)


def test_canonical_patch_rejects_wrong_pairing():
    e = parallel_circles(0.5)
    other = parallel_circles(0.25)
    bad = type(e)(**{**e.__dict__, "B": other.B})
    with pytest.raises(PreconditionError):
        canonical_patch(bad, t_range=(0.1, 1.5))


def test_summary_and_definition_are_serialisable():
    import json

    for make in ENTRIES.values():
        e = make()
        json.dumps(e.summary())
        assert set(e.curve_definition("alpha")) >= {"x", "y", "z", "parameters", "domain"}


def test_helicoid():
    p = helicoid(1.0, 0.0)
    assert p(0.0, 1.0) == pytest.approx([1.0, 0.0, 0.0])
    c = classify(p)
    assert c.kind == "ricci" and c.evidence["c"] == pytest.approx(1.0)
    assert abs(distribution_parameter(helicoid(2.5), 0.3)) == pytest.approx(2.5)
    for t in np.linspace(-3, 3, 10):
        for u in np.linspace(-2, 2, 10):
            assert abs(mean_curvature_closed(p, t, u)) <= 1e-10
    with pytest.raises(PreconditionError):
        helicoid(0.0)


def test_right_conoids():
    quad = right_conoid("t^2")
    assert classify(quad).kind == "non_ricci"
    for t in (0.3, 0.9, 1.4):
        assert abs(distribution_parameter(quad, t)) == pytest.approx(2 * t)
    assert classify(right_conoid("3*t + 1")).kind == "ricci"
    assert classify(right_conoid("0")).kind == "developable"


def test_tangent_developable_is_developable():
    assert classify(tangent_developable()).kind == "developable"
