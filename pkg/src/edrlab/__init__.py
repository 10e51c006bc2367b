"""Numerical laboratory for error-disturbance relations of indirect quantum measurements."""

from . import bounds, model, qalg
from .bounds import BoundReport, WitnessStrategy, bound_report
from .model import MeasurementModel, ScenarioParams, heisenberg_frame, scenario_model, stats

__all__ = [
    "BoundReport",
    "MeasurementModel",
    "ScenarioParams",
    "WitnessStrategy",
    "bound_report",
    "bounds",
    "heisenberg_frame",
    "model",
    "qalg",
    "scenario_model",
    "stats",
]
__version__ = "0.1.0"
