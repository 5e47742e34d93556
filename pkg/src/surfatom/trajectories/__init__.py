"""Quantum-trajectory Monte Carlo of the driven atom with semiclassical
center-of-mass motion: photon-counting unraveling, drop and trap scenarios,
ensemble statistics, and quasi-steady-state analysis."""

from .analysis import TrajectoryRecord, eta_series, quasi_mean_eta
from .ensembles import (
    EnsembleStats,
    ScenarioConfig,
    run_drop,
    run_frozen,
    run_recorded,
    run_trap,
)
from .integrator import TrajectoryState, emission_kick, recoil_speed, step_sse
from .rng import Stream

__all__ = [
    "EnsembleStats",
    "ScenarioConfig",
    "Stream",
    "TrajectoryRecord",
    "TrajectoryState",
    "emission_kick",
    "eta_series",
    "quasi_mean_eta",
    "recoil_speed",
    "run_drop",
    "run_frozen",
    "run_recorded",
    "run_trap",
    "step_sse",
]
