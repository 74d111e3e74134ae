"""Ruled Ricci surfaces: constant-torsion curves, canonical ruled patches and
numerical checks of the Ricci condition."""

from __future__ import annotations

from .constant_torsion import ConstructedCurve, SphericalCurveCheck, integrate_alpha, validate_spherical, verify_binormal
from .curves import ArcLengthCurve, ExprCurve, FrenetData, FunctionCurve, SpaceCurve, curvature, frenet, torsion
from .expr import Expression, eval_jet, parse
from .gallery import ENTRIES, PATCHES, GalleryEntry, canonical_patch, helicoid, right_conoid
from .jet import Jet3
from .ricci import (
    LemmaCoefficients,
    MetricField,
    ansatz_residual,
    RicciReport,
    closed_form_residual,
    grad_norm_sq,
    laplace_beltrami,
    lemma_coefficients,
    ricci_residual_fd,
)
from .ruled_surface import RuledPatch, classify, distribution_parameter, gauss_curvature_closed, mean_curvature_closed

__version__ = "0.1.0"

__all__ = [
    "ansatz_residual",
    "ArcLengthCurve",
    "ConstructedCurve",
    "ENTRIES",
    "ExprCurve",
    "Expression",
    "FrenetData",
    "FunctionCurve",
    "GalleryEntry",
    "Jet3",
    "LemmaCoefficients",
    "MetricField",
    "PATCHES",
    "RicciReport",
    "RuledPatch",
    "SpaceCurve",
    "SphericalCurveCheck",
    "annotations",
    "canonical_patch",
    "classify",
    "closed_form_residual",
    "curvature",
    "distribution_parameter",
    "eval_jet",
    "frenet",
    "gauss_curvature_closed",
    "grad_norm_sq",
    "helicoid",
    "integrate_alpha",
    "laplace_beltrami",
    "lemma_coefficients",
    "mean_curvature_closed",
    "parse",
    "ricci_residual_fd",
    "right_conoid",
    "torsion",
    "validate_spherical",
    "verify_binormal",
]
