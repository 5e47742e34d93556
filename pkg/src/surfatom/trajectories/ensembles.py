"""Scenario runners: atom-mirror drops, near-field traps, frozen-CM checks.

Every ensemble is reproducible bit-exactly from (config, seed): trajectory
k consumes only its own RNG stream and results are reduced in index order.
"""

from dataclasses import dataclass

import numpy as np

from ..constants import G_UM_PER_US2
from ..driven import effective_potential, find_potential_minimum, log_grid
from ..errors import IntegratorError, ScenarioError
from . import kernel
from .analysis import TrajectoryRecord

_QUANTILES = (0.1, 0.25, 0.5, 0.75, 0.9)
_TIMEOUT_WARN_FRACTION = 0.05

GROUND_STATE = np.array([1.0, 0.0, 0.0], dtype=complex)


@dataclass(frozen=True)
class ScenarioConfig:
    """Monte Carlo scenario: geometry, boundaries, budget, seed."""

    kind: str                       # "drop" | "trap"
    n_trajectories: int
    seed: int
    drop_height: float = 1000.0     # um above the surface, drop scenarios
    z_switch: float = 3.0           # ballistic/SSE handover height
    z_absorb: float = 0.02          # lower boundary: atom lost to the surface
    z_escape: float = 0.5           # upper boundary for trap scenarios
    t_max: float = 300.0            # us of SSE time per trajectory
    dt_max: float = 1e-3            # us
    z_start: float | None = None    # trap: explicit start, overrides search

    def __post_init__(self):
        if self.kind not in ("drop", "trap"):
            raise ScenarioError(f"unknown scenario kind {self.kind!r}")
        if self.n_trajectories < 1:
            raise ScenarioError("n_trajectories must be >= 1")
        if not (self.z_absorb < self.z_escape <= self.z_switch):
            raise ScenarioError("require z_absorb < z_escape <= z_switch")
        if self.kind == "drop" and self.drop_height <= self.z_switch:
            raise ScenarioError("drop_height must exceed z_switch")


@dataclass(frozen=True)
class EnsembleStats:
    """Per-trajectory outcomes and summary statistics of one ensemble.

    For traps, `n_reflected` counts escapes through the outer boundary.
    """

    kind: str
    n: int
    seed: int
    z_start: float
    v_start: float
    outcomes: np.ndarray
    t_end: np.ndarray
    z_end: np.ndarray
    v_end: np.ndarray
    jumps_ch1: np.ndarray
    jumps_ch2: np.ndarray
    warnings: tuple

    @property
    def n_reflected(self):
        return int(np.sum(self.outcomes == kernel.OUT_UP))

    @property
    def n_absorbed(self):
        return int(np.sum(self.outcomes == kernel.OUT_ABSORBED))

    @property
    def n_timeout(self):
        return int(np.sum(self.outcomes == kernel.OUT_TIMEOUT))

    @property
    def reflected_fraction(self):
        return self.n_reflected / self.n

    @property
    def mean_jumps(self):
        return float(np.mean(self.jumps_ch1 + self.jumps_ch2))

    @property
    def escape_times(self):
        """Termination times of trajectories that did terminate."""
        mask = self.outcomes != kernel.OUT_TIMEOUT
        return self.t_end[mask]

    def escape_time_quantiles(self, qs=_QUANTILES):
        times = self.escape_times
        if len(times) == 0:
            return {}
        return {q: float(np.quantile(times, q)) for q in qs}

    @property
    def mean_escape_time(self):
        times = self.escape_times
        return float(np.mean(times)) if len(times) else np.nan

    def median_index(self, outcome=kernel.OUT_UP):
        """Index of the trajectory with the median escape time among
        those ending with `outcome` (1 = reflected/escaped, 2 = absorbed)."""
        idx = np.where(self.outcomes == outcome)[0]
        if len(idx) == 0:
            raise ScenarioError("no trajectory with the requested outcome")
        order = np.argsort(self.t_end[idx], kind="stable")
        return int(idx[order[len(order) // 2]])


def _collect(kind, sc, z0, v0, raw):
    outcomes, t_end, z_end, v_end, j1, j2, _, _ = raw
    if np.any(outcomes == kernel.OUT_STEP_ERROR):
        bad = int(np.where(outcomes == kernel.OUT_STEP_ERROR)[0][0])
        raise IntegratorError(f"step-probability guard tripped in trajectory {bad}")
    warnings = ()
    n_timeout = int(np.sum(outcomes == kernel.OUT_TIMEOUT))
    if n_timeout > _TIMEOUT_WARN_FRACTION * sc.n_trajectories:
        warnings = (
            f"timeout fraction {n_timeout / sc.n_trajectories:.1%} exceeds "
            f"{_TIMEOUT_WARN_FRACTION:.0%}: results may be biased",
        )
    return EnsembleStats(
        kind=kind,
        n=sc.n_trajectories,
        seed=sc.seed,
        z_start=z0,
        v_start=v0,
        outcomes=outcomes,
        t_end=t_end,
        z_end=z_end,
        v_end=v_end,
        jumps_ch1=j1,
        jumps_ch2=j2,
        warnings=warnings,
    )


def drop_start(sc):
    """Handover state of a drop: at z_switch after ballistic free fall."""
    v = -np.sqrt(2.0 * G_UM_PER_US2 * (sc.drop_height - sc.z_switch))
    return sc.z_switch, v


def trap_start(h, sc, profile=None):
    """Start position of a trap run: the interior potential minimum.

    An explicit sc.z_start short-circuits the search (used to park atoms
    at a reference position over surfaces whose potential has no minimum).
    """
    if sc.z_start is not None:
        return float(sc.z_start)
    if profile is None:
        profile = effective_potential(h, log_grid(z_min=sc.z_absorb, z_max=2.0))
    found = find_potential_minimum(h, profile, sc.z_absorb, sc.z_escape)
    if found is None:
        raise ScenarioError(
            "no interior potential minimum between the absorption and "
            "escape boundaries; set z_start explicitly to force a start point"
        )
    return found[0]


def run_drop(h, sc):
    """Drop ensemble: reflected when back through z_switch moving up."""
    if sc.kind != "drop":
        raise ScenarioError("config kind must be 'drop'")
    z0, v0 = drop_start(sc)
    raw = kernel.run_ensemble(
        h.kernel_params(), sc.seed, sc.n_trajectories, GROUND_STATE, z0, v0,
        False, True, True, sc.z_absorb, sc.z_switch, sc.t_max, sc.dt_max,
    )
    return _collect("drop", sc, z0, v0, raw)


def run_trap(h, sc, profile=None):
    """Trap ensemble: atoms start at rest at the potential minimum and are
    scored by their first exit through either boundary."""
    if sc.kind != "trap":
        raise ScenarioError("config kind must be 'trap'")
    z0 = trap_start(h, sc, profile)
    raw = kernel.run_ensemble(
        h.kernel_params(), sc.seed, sc.n_trajectories, GROUND_STATE, z0, 0.0,
        False, True, True, sc.z_absorb, sc.z_escape, sc.t_max, sc.dt_max,
    )
    return _collect("trap", sc, z0, 0.0, raw)


@dataclass(frozen=True)
class FrozenStats:
    """Frozen-center-of-mass ensemble: internal dynamics only."""

    mean_rho: np.ndarray        # ensemble average of |psi><psi| at t_max
    t_first_jump: np.ndarray    # NaN where no jump occurred
    jumps_total: np.ndarray


def run_frozen(h, z, psi0, t_total, n, seed, enable_jumps=True):
    """n trajectories at fixed separation z for time t_total."""
    psi0 = np.asarray(psi0, dtype=complex)
    raw = kernel.run_ensemble(
        h.kernel_params(), seed, n, psi0, z, 0.0,
        True, enable_jumps, False, 0.0, np.inf, t_total, 1e-3,
    )
    _, _, _, _, j1, j2, t_first, psi_final = raw
    mean_rho = np.einsum("ki,kj->ij", psi_final, psi_final.conj()) / n
    return FrozenStats(mean_rho=mean_rho, t_first_jump=t_first, jumps_total=j1 + j2)


def run_recorded(
    h,
    sc,
    index,
    rec_stride=16,
    rec_cap=600_000,
    jump_cap=4096,
    profile=None,
    enable_jumps=True,
):
    """Re-run one ensemble member with full time-series recording.

    Because streams are derived from (seed, index), the recorded
    trajectory is bit-identical to the one inside the ensemble.
    """
    if sc.kind == "drop":
        z0, v0 = drop_start(sc)
        z_upper = sc.z_switch
    else:
        z0, v0 = trap_start(h, sc, profile), 0.0
        z_upper = sc.z_escape
    out = kernel.run_single(
        h.kernel_params(), sc.seed, index, GROUND_STATE, z0, v0,
        False, enable_jumps, True, sc.z_absorb, z_upper, sc.t_max, sc.dt_max,
        rec_stride, rec_cap, jump_cap,
    )
    (outcome, t, z, v, j1, j2, _tf, rt, rz, rv, rpsi, jt, jch, _psi) = out
    if outcome == kernel.OUT_STEP_ERROR:
        raise IntegratorError(f"step-probability guard tripped in trajectory {index}")
    return TrajectoryRecord(
        t=rt, z=rz, v=rv, psi=rpsi,
        jump_times=jt, jump_channels=jch,
        outcome=int(outcome), t_end=t, z_end=z, v_end=v,
        n_jumps=int(j1 + j2), index=index, seed=sc.seed,
    )
