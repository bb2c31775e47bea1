"""
Redundant-watchdog GSPN models: builder, sweeps, Monte Carlo validation and rendering.
"""

from ariel_rwd.rwd.builder import FAMILIES, RwdModel, build
from ariel_rwd.rwd.montecarlo import MonteCarloEstimate, monte_carlo, simulate_net
from ariel_rwd.rwd.params import RwdParams
from ariel_rwd.rwd.render import render_model
from ariel_rwd.rwd.sweep import SWEEP_HEADER, SweepRow, gnuplot_data, sweep, sweep_csv
from ariel_rwd.rwd.validate import VALIDATION_HEADER, ValidationRow, validate_model, validation_csv

__all__ = [
    "FAMILIES",
    "MonteCarloEstimate",
    "RwdModel",
    "RwdParams",
    "SWEEP_HEADER",
    "SweepRow",
    "VALIDATION_HEADER",
    "ValidationRow",
    "build",
    "gnuplot_data",
    "monte_carlo",
    "render_model",
    "simulate_net",
    "sweep",
    "sweep_csv",
    "validate_model",
    "validation_csv",
]
