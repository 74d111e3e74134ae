from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ruled_ricci import jet as J
from ruled_ricci.constant_torsion import integrate_alpha, validate_spherical, verify_binormal
from ruled_ricci.curves import FunctionCurve, torsion
from ruled_ricci.errors import GreatCircleError, PreconditionError, SphericalCurveError
from ruled_ricci.gallery import anti_salkowski, borderline, parallel_circles
from ruled_ricci.jet import Jet3


def small_circle(ell, domain=(0.0, 3.0)):
    w = math.sqrt(1 - ell * ell)
    return FunctionCurve(lambda t: (ell * J.sin(t / ell), -ell * J.cos(t / ell), Jet3(w)), domain, "circle")


def test_validate_accepts_small_circle():
    chk = validate_spherical(small_circle(0.5))
    assert chk.passed and chk.sign_changes == 0
    assert chk.to_dict()["passed"] is True


def test_validate_reports_off_sphere():
    B = FunctionCurve(lambda t: (J.cos(t), J.sin(t), Jet3(0.1)), (0.0, 1.0))
    chk = validate_spherical(B)
    assert not chk.norm_ok and chk.max_norm_deviation == pytest.approx(math.sqrt(1.01) - 1)


def test_validate_reports_wrong_speed():
    B = FunctionCurve(lambda t: (J.cos(2 * t), J.sin(2 * t), Jet3(0.0)), (0.0, 1.0))
    assert not validate_spherical(B).speed_ok


def test_great_circle_is_rejected_with_pointer():
    B = FunctionCurve(lambda t: (J.cos(t), J.sin(t), Jet3(0.0)), (0.0, 6.0), "equator")
    with pytest.raises(GreatCircleError) as info:
        integrate_alpha(B, 1.0)
    assert "helicoid" in str(info.value)
    assert info.value.check.max_abs_triple < 1e-12


def test_non_spherical_input_carries_check():
    B = FunctionCurve(lambda t: (J.cos(t), 2 * J.sin(t), Jet3(0.0)), (0.0, 1.0))
    with pytest.raises(SphericalCurveError) as info:
        integrate_alpha(B, 1.0)
    assert not info.value.check.passed


@pytest.mark.parametrize("tau0", [0.0, math.inf])
def test_bad_torsion(tau0):
    with pytest.raises(PreconditionError):
        integrate_alpha(small_circle(0.5), tau0)


def test_unbounded_domain_needs_interval():
    with pytest.raises(ValueError):
        integrate_alpha(borderline().B, 1.0)


def test_anti_salkowski_inflection_is_counted_not_fatal():
    e = anti_salkowski(1 / 3)
    chk = validate_spherical(e.B, 200, e.probe_domain)
    assert chk.passed and chk.sign_changes == 1


def test_base_point_is_origin():
    alpha = integrate_alpha(small_circle(0.5), 1.0, t0=1.0)
    assert np.allclose(alpha(1.0), 0.0, atol=1e-15)
    assert alpha.jets(1.0)[1] == pytest.approx(np.cross(alpha.B.jets(1.0)[1], alpha.B(1.0)))


@pytest.mark.parametrize("tau0", [1.0, -0.5, 2.5])
def test_prescribed_torsion(tau0):
    alpha = integrate_alpha(small_circle(0.6), tau0)
    for t in np.linspace(0.1, 2.9, 15):
        assert torsion(alpha, t) == pytest.approx(tau0, rel=1e-10)
    assert verify_binormal(alpha, alpha.B) < 1e-12


def test_position_matches_closed_form_between_nodes():
    e = parallel_circles(0.5)
    alpha = integrate_alpha(e.B, 1.0, t0=0.0)
    shift = e.alpha(0.0)
    for t in np.linspace(0.0, e.domain[1], 101):
        assert np.allclose(alpha(t) + shift, e.alpha(t), atol=1e-9)


def test_node_table_is_fine_enough():
    alpha = integrate_alpha(small_circle(0.5), 1.0)
    assert np.max(np.diff(alpha.nodes)) <= 0.1 + 1e-12


@settings(max_examples=25)
@given(st.floats(0.1, 0.9), st.floats(0.2, 2.8))
def test_round_trip_small_circles(ell, t0):
    """Integrating the binormal of the closed-form helix gives the helix back."""
    e = parallel_circles(ell)
    lo, hi = e.domain
    t0 = lo + (hi - lo) * t0 / 3.0
    alpha = integrate_alpha(e.B, 1.0, t0=t0)
    shift = e.alpha(t0)
    for t in np.linspace(lo, hi, 9):
        assert np.allclose(alpha(t) + shift, e.alpha(t), atol=1e-8)
