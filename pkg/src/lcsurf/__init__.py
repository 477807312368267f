"""Conformal invariants of space-like surfaces in Lorentzian space forms.

The pipeline lifts a chart to the light cone of R^{n+2}_2, builds the
conformal moving frame with jet arithmetic, evaluates the conformal
invariants and the residuals of the structure equations, and classifies
the surface from samples on a grid.
"""

from .algebra import Signature, gram_schmidt_indefinite, inner, rank_of_span
from .analysis import Tolerances, analyze_chart, analyze_point
from .classifier import ClassificationReport, classify
from .dsl import ChartSpec, format_chart, load_chart, parse_chart, parse_expression, to_text
from .invariants import RESIDUAL_KEYS, ResidualReport, compute_invariants, point_residuals
from .jets import Jet, jet_variable
from .pipeline import canonical_frame, check_chart, remix_normal_frame

__version__ = "0.1.0"

__all__ = [
    "Signature",
    "gram_schmidt_indefinite",
    "inner",
    "rank_of_span",
    "Tolerances",
    "analyze_chart",
    "analyze_point",
    "ClassificationReport",
    "classify",
    "ChartSpec",
    "format_chart",
    "load_chart",
    "parse_chart",
    "parse_expression",
    "to_text",
    "RESIDUAL_KEYS",
    "ResidualReport",
    "compute_invariants",
    "point_residuals",
    "Jet",
    "jet_variable",
    "canonical_frame",
    "check_chart",
    "remix_normal_frame",
]
