"""Bethe scalar products of the XXZ chain as discrete KP tau-functions."""

from .bethe import BetheSolution, bethe_defect, solve_bethe
from .core import DEFAULT_TOL, SampleConfig, Tolerance, determinant, sample_points
from .dkp import CasoratianSpec, TauFunction, tau, tau_shift
from .slavnov import ExponentiatedData, casoratian_spec, slavnov_det
from .symfun import MiwaMultiset, Partition
from .xxz import ChainSpec, scalar_product_oracle

__version__ = "0.1.0"

__all__ = [
    "BetheSolution", "bethe_defect", "solve_bethe", "DEFAULT_TOL", "SampleConfig", "Tolerance", "determinant",
    "sample_points", "CasoratianSpec", "TauFunction", "tau", "tau_shift", "ExponentiatedData", "casoratian_spec",
    "slavnov_det", "MiwaMultiset", "Partition", "ChainSpec", "scalar_product_oracle",
]
