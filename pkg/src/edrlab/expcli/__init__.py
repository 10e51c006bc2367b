"""Command-line front end: configs, sweeps, frontier curves, verification, CSV."""

from .config import ScenarioConfig, load_config, parse_config
from .csvio import emit_csv
from .frontier import FrontierCurve, frontier
from .sweep import SweepRecord, fraction_tighter, sweep
from .verify import verify

__all__ = [
    "FrontierCurve",
    "ScenarioConfig",
    "SweepRecord",
    "emit_csv",
    "fraction_tighter",
    "frontier",
    "load_config",
    "parse_config",
    "sweep",
    "verify",
]
