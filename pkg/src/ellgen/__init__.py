"""Equivariant elliptic genera of toric Calabi-Yau 3-folds."""

from .genus import (
    averaged_genus,
    genus_numeric,
    genus_qexp,
    independence_scan,
    reference_genus_numeric,
    reference_genus_qexp,
)
from .series import QSeries, RatFunc, SparseLaurent
from .theta import ComplexParams, theta1_numeric, theta1_qexp, theta1_sum_numeric
from .toric import ToricDiagram, builtin, parse_diagram, validate

__version__ = "0.1.0"

__all__ = [
    "ComplexParams",
    "QSeries",
    "RatFunc",
    "SparseLaurent",
    "ToricDiagram",
    "averaged_genus",
    "builtin",
    "genus_numeric",
    "genus_qexp",
    "independence_scan",
    "parse_diagram",
    "reference_genus_numeric",
    "reference_genus_qexp",
    "theta1_numeric",
    "theta1_qexp",
    "theta1_sum_numeric",
    "validate",
]
