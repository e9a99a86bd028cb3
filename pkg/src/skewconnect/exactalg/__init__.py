"""Exact arithmetic substrate: rationals, prime fields, rational functions,
truncated deformation series, and matrices over any of them."""

from .domain import Domain, is_prime
from .frac import Frac
from .hseries import HSeries
from .matrix import Matrix
from .poly import Poly, PolyRing
from .tower import (
    ScalarTower,
    TowerMode,
    binomial,
    evaluate,
    h_series_power,
    partial_derivative,
)

__all__ = [
    "Domain",
    "Frac",
    "HSeries",
    "Matrix",
    "Poly",
    "PolyRing",
    "ScalarTower",
    "TowerMode",
    "binomial",
    "evaluate",
    "h_series_power",
    "partial_derivative",
    "is_prime",
]
