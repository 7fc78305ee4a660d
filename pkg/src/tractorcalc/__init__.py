"""Exact tractor exterior calculus on the flat Poincare-Einstein model.

Everything is exact rational arithmetic: weighted differential forms with
polynomial components, the four-slot tractor-form operator library, sl(2)
solution-generating series, asymptotic Proca solvers in all weight regimes,
and the holographic boundary operators (detour, gauge companion, Q).
"""

from .forms import (
    ExcludedWeight, Model, ModelScale, WeightedForm, bulk_model,
    divergence_extend, exterior_op, holographic_op, random_form,
)
from .sl2 import (
    FrobeniusPair, HPoly, LogOperator, NormalWord, NOSeries, apply_noseries,
    casimir_products, normal_order, series_solutions,
)
from .solver import (
    ProcaProblemSpec, ResidualReport, SeriesSolution, UnsupportedRegime,
    derive_regime, proca_solve, proca_solve_form, residual_orders,
    scale_duality,
)
from .tractor import TractorForm, random_tractor
from .verify import run_suite

__all__ = [
    "ExcludedWeight", "Model", "ModelScale", "WeightedForm", "bulk_model",
    "divergence_extend", "exterior_op", "holographic_op", "random_form",
    "FrobeniusPair", "HPoly", "LogOperator", "NormalWord", "NOSeries",
    "apply_noseries", "casimir_products", "normal_order", "series_solutions",
    "ProcaProblemSpec", "ResidualReport", "SeriesSolution",
    "UnsupportedRegime", "derive_regime", "proca_solve", "proca_solve_form",
    "residual_orders", "scale_duality", "TractorForm", "random_tractor",
    "run_suite",
]

__version__ = "1.0.0"
