"""Driven three-level ladder over a surface: Hamiltonian, steady states,
effective potential, force eigenanalysis, and heating.

The ladder g <-> e1 <-> e2 is driven by two lasers.  Drive amplitudes decay
as exp(-kappa z) above the surface; level shifts and decay enhancements
enter through the z^-3 coefficients from the vdw layer.  In the rotating
frame each diagonal entry is the shifted level energy minus the photon
energy accumulated in reaching it (ground state at infinity = zero):

    H_gg   = delta_g(z)
    H_e1e1 = delta_e1(z) - D1          = -Delta_e1(z) + delta_g(z)
    H_e2e2 = delta_e2(z) - (D1 + D2)   = -Delta_e2(z) + delta_g(z)

with the usual detunings Delta_e1 = D1 - (delta_e1 - delta_g) and
Delta_e2 = D1 + D2 - (delta_e2 - delta_g).  The common delta_g(z) baseline
drops out of the master equation but carries the ground-state surface
attraction, so it must stay in H for forces and potentials to be right.
All rates angular in rad/us, lengths in um.
"""

import itertools
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import cumulative_trapezoid
from scipy.optimize import brentq

from .constants import (
    C_SI,
    C_UM_PER_US,
    G_UM_PER_US2,
    HBAR_KG_UM2_PER_US,
    HBAR_SI,
    KB_SI,
    TWO_PI,
    khz_um3_to_angular,
)
from .errors import ConfigError, DegenerateSteadyStateError, NumericalError
from .vdw import shift_at

_SV_GAP_TOL = 1e-6
_RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class Drive:
    """One laser drive bound to a transition by level names.

    omega0: peak angular Rabi frequency at the surface (rad/us)
    detuning: laser minus free-space transition frequency (rad/us)
    kappa: field amplitude decay rate (1/um); 0 for a propagating beam
    """

    upper: str
    lower: str
    omega0: float
    detuning: float
    kappa: float = 0.0

    def __post_init__(self):
        if self.omega0 < 0.0:
            raise ConfigError("drive omega0 must be >= 0")
        if self.kappa < 0.0:
            raise ConfigError("drive kappa must be >= 0")

    def rabi(self, z):
        return self.omega0 * np.exp(-self.kappa * z)


@dataclass(frozen=True)
class LadderHamiltonian:
    """Position-dependent Hamiltonian and dissipation for the 3-level ladder."""

    scheme: object
    coeffs: object
    drives: tuple
    # derived, filled by build_hamiltonian
    shift_coeffs: tuple = field(default=())     # per-level rad/us.um^3
    decay_coeffs: tuple = field(default=())     # per-channel rad/us.um^3
    rates_fs: tuple = field(default=())         # per-channel rad/us
    omega_transitions: tuple = field(default=())  # per-channel rad/us

    dimension = 3

    def detunings(self, z):
        """(Delta_e1, Delta_e2) at separation z."""
        s_g, s_e1, s_e2 = self.shift_coeffs
        iz3 = 1.0 / z**3
        d1 = self.drives[0].detuning - (s_e1 - s_g) * iz3
        d2 = self.drives[0].detuning + self.drives[1].detuning - (s_e2 - s_g) * iz3
        return d1, d2

    def hamiltonian(self, z):
        """3x3 real-symmetric Hamiltonian at separation z (rad/us)."""
        h01 = 0.5 * self.drives[0].rabi(z)
        h12 = 0.5 * self.drives[1].rabi(z)
        s_g, s_e1, s_e2 = self.shift_coeffs
        iz3 = 1.0 / z**3
        h00 = s_g * iz3
        h11 = s_e1 * iz3 - self.drives[0].detuning
        h22 = s_e2 * iz3 - self.drives[0].detuning - self.drives[1].detuning
        return np.array(
            [[h00, h01, 0.0], [h01, h11, h12], [0.0, h12, h22]], dtype=float
        )

    def dhamiltonian_dz(self, z):
        """Analytic dH/dz at separation z."""
        dh01 = -0.5 * self.drives[0].kappa * self.drives[0].rabi(z)
        dh12 = -0.5 * self.drives[1].kappa * self.drives[1].rabi(z)
        s_g, s_e1, s_e2 = self.shift_coeffs
        iz4 = -3.0 / z**4
        return np.array(
            [
                [s_g * iz4, dh01, 0.0],
                [dh01, s_e1 * iz4, dh12],
                [0.0, dh12, s_e2 * iz4],
            ],
            dtype=float,
        )

    def total_rates(self, z):
        """(R_e1->g, R_e2->e1) total decay rates at z, free space + surface."""
        iz3 = 1.0 / z**3
        return (
            self.rates_fs[0] + self.decay_coeffs[0] * iz3,
            self.rates_fs[1] + self.decay_coeffs[1] * iz3,
        )

    def force_operator(self, z):
        return -self.dhamiltonian_dz(z)

    def kernel_params(self):
        """Pack everything the trajectory kernel needs into a flat array.

        Layout: [omega1_0, kappa1, omega2_0, kappa2, delta1, delta1+delta2,
                 s_g, s_e1, s_e2, r1_fs, r2_fs, denh1, denh2, hbar/m, g,
                 vkick1, vkick2] -- see trajectories.kernel for usage.
        """
        s_g, s_e1, s_e2 = self.shift_coeffs
        hbar_over_m = HBAR_KG_UM2_PER_US / self.scheme.mass_kg
        vkicks = [
            HBAR_KG_UM2_PER_US * w / (C_UM_PER_US * self.scheme.mass_kg)
            for w in self.omega_transitions
        ]
        return np.array(
            [
                self.drives[0].omega0,
                self.drives[0].kappa,
                self.drives[1].omega0,
                self.drives[1].kappa,
                self.drives[0].detuning,
                self.drives[0].detuning + self.drives[1].detuning,
                s_g,
                s_e1,
                s_e2,
                self.rates_fs[0],
                self.rates_fs[1],
                self.decay_coeffs[0],
                self.decay_coeffs[1],
                hbar_over_m,
                G_UM_PER_US2,
                vkicks[0],
                vkicks[1],
            ],
            dtype=float,
        )


def build_hamiltonian(scheme, coeffs, drives):
    """Bind two drives to the ladder and assemble the working Hamiltonian.

    drives must couple (levels[0], levels[1]) and (levels[1], levels[2]),
    in that order; anything else is a configuration error.
    """
    if len(scheme.levels) != 3:
        raise ConfigError("ladder subspace must contain exactly 3 levels")
    if len(drives) != 2:
        raise ConfigError("exactly two drives are required")
    names = [lv.name for lv in scheme.levels]
    expectations = [(names[1], names[0]), (names[2], names[1])]
    for drive, (up, lo) in zip(drives, expectations):
        if (drive.upper, drive.lower) != (up, lo):
            raise ConfigError(
                f"drive {drive.upper}<->{drive.lower} does not match ladder "
                f"rung {up}<->{lo}"
            )
    shift_coeffs = tuple(
        khz_um3_to_angular(coeffs.per_level_shift[n]) for n in names
    )
    channels = [(names[0], names[1]), (names[1], names[2])]
    decay_coeffs = tuple(
        khz_um3_to_angular(coeffs.per_transition_decay[ch]) for ch in channels
    )
    records = [scheme.find_transition(up, lo) for up, lo in expectations]
    return LadderHamiltonian(
        scheme=scheme,
        coeffs=coeffs,
        drives=tuple(drives),
        shift_coeffs=shift_coeffs,
        decay_coeffs=decay_coeffs,
        rates_fs=tuple(t.rate_fs for t in records),
        omega_transitions=tuple(t.omega_angular for t in records),
    )


# lowering operators of the two decay channels, |g><e1| and |e1><e2|
_SIGMA_1 = np.array([[0, 1, 0], [0, 0, 0], [0, 0, 0]], dtype=float)
_SIGMA_2 = np.array([[0, 0, 0], [0, 0, 1], [0, 0, 0]], dtype=float)
_EYE3 = np.eye(3)


def liouvillian(h_matrix, rates):
    """9x9 generator in row-major vectorization: vec(A rho B) = (A (x) B^T) vec(rho)."""
    lv = -1j * (np.kron(h_matrix, _EYE3) - np.kron(_EYE3, h_matrix.T))
    for sigma, rate in zip((_SIGMA_1, _SIGMA_2), rates):
        sds = sigma.T @ sigma
        lv = lv + rate * (
            np.kron(sigma, sigma.conj())
            - 0.5 * np.kron(sds, _EYE3)
            - 0.5 * np.kron(_EYE3, sds.T)
        )
    return lv


@dataclass(frozen=True)
class SteadyStateResult:
    """Steady state of the driven atom at one separation, with diagnostics."""

    z: float
    rho: np.ndarray                 # 3x3, trace 1
    populations: np.ndarray         # diagonal, real
    force_expect: float             # Tr(-dH/dz rho), rad/(us um)
    force_eigvals: np.ndarray       # ascending
    force_eigvecs: np.ndarray       # columns
    eta: np.ndarray                 # populations in the force eigenbasis
    heating_rate: float             # K/s
    residual: float                 # ||L rho|| / ||L||
    min_eig: float                  # smallest eigenvalue of rho
    sv_gap: float                   # second-smallest singular value / largest


def steady_state(h, z, check_unique=True):
    """Solve L(rho) = 0 with unit trace at separation z.

    One row of the 9x9 superoperator is replaced by the trace constraint
    and the square system solved directly; uniqueness is certified by the
    singular-value gap of L.
    """
    if z <= 0.0:
        raise ValueError("separation z must be positive")
    hm = h.hamiltonian(z)
    rates = h.total_rates(z)
    lv = liouvillian(hm, rates)

    sv_gap = np.inf
    if check_unique:
        svals = np.linalg.svd(lv, compute_uv=False)
        sv_gap = svals[-2] / svals[0]
        if sv_gap < _SV_GAP_TOL:
            raise DegenerateSteadyStateError(
                f"nullspace not one-dimensional at z={z}: gap {sv_gap:.2e}"
            )

    a = lv.copy()
    a[0, :] = 0.0
    a[0, 0] = a[0, 4] = a[0, 8] = 1.0       # trace of row-major vec
    b = np.zeros(9, dtype=complex)
    b[0] = 1.0
    vec = np.linalg.solve(a, b)

    residual = np.linalg.norm(lv @ vec) / np.linalg.norm(lv)
    if residual > _RESIDUAL_TOL:
        raise NumericalError(f"steady-state residual {residual:.2e} at z={z}")

    rho = vec.reshape(3, 3)
    rho = 0.5 * (rho + rho.conj().T)
    pops = np.real(np.diag(rho))
    min_eig = float(np.linalg.eigvalsh(rho).min())

    f_op = h.force_operator(z)
    force = float(np.real(np.trace(f_op @ rho)))
    eigvals, eigvecs = np.linalg.eigh(f_op)
    eta = np.real(np.einsum("ai,ab,bi->i", eigvecs.conj(), rho, eigvecs))

    heating = heating_rate(h, z, rho, h.scheme.mass_kg)
    return SteadyStateResult(
        z=z,
        rho=rho,
        populations=pops,
        force_expect=force,
        force_eigvals=eigvals,
        force_eigvecs=eigvecs,
        eta=eta,
        heating_rate=heating,
        residual=residual,
        min_eig=min_eig,
        sv_gap=sv_gap,
    )


def force_eigenanalysis(h, z, rho):
    """Eigenvalues of F(z) = -dH/dz and populations of rho in that basis."""
    eigvals, eigvecs = np.linalg.eigh(h.force_operator(z))
    eta = np.real(np.einsum("ai,ab,bi->i", eigvecs.conj(), rho, eigvecs))
    return eigvals, eta


def heating_rate(h, z, rho, mass_kg):
    """Temperature growth rate (K/s) from isotropic spontaneous emission."""
    rates = h.total_rates(z)
    pops = np.real(np.diag(rho))
    factor = HBAR_SI**2 / (3.0 * C_SI**2 * KB_SI * mass_kg)
    total = 0.0
    for omega, rate, pop in zip(h.omega_transitions, rates, pops[1:]):
        total += (omega * 1e6) ** 2 * (rate * 1e6) * pop
    return factor * total


def _match_branches(prev_vecs, eigvals, eigvecs):
    """Permutation of new eigenpairs maximizing overlap with the previous ones."""
    overlap = np.abs(prev_vecs.conj().T @ eigvecs)
    best, best_score = None, -1.0
    for perm in itertools.permutations(range(3)):
        score = sum(overlap[i, perm[i]] for i in range(3))
        if score > best_score:
            best, best_score = perm, score
    idx = list(best)
    vecs = eigvecs[:, idx].copy()
    # fix gauge so successive eigenvectors keep a positive overlap
    for i in range(3):
        if np.real(np.vdot(prev_vecs[:, i], vecs[:, i])) < 0.0:
            vecs[:, i] = -vecs[:, i]
    return eigvals[idx], vecs


@dataclass(frozen=True)
class PotentialProfile:
    """Gridded steady-state scan: potential, populations, force branches."""

    z: np.ndarray                   # descending, um
    u_eff_mhz: np.ndarray           # ordinary-frequency MHz, 0 at z[0]
    force: np.ndarray               # rad/(us um)
    populations: np.ndarray         # (n, 3)
    force_branches: np.ndarray      # (n, 3), continuity-tracked
    eta_branches: np.ndarray        # (n, 3), same tracking
    heating: np.ndarray             # K/s
    residual_max: float
    min_eig_min: float


def effective_potential(h, grid):
    """Integrate the steady-state force along a descending grid.

    U_eff(z) = int_{z_max}^{z} Tr(dH/dz' rho_ss(z')) dz', reported in
    ordinary-frequency MHz.  Force eigenbranches are reordered point to
    point by maximal eigenvector overlap so they can be plotted as
    continuous curves.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or len(grid) < 2 or not np.all(np.diff(grid) < 0.0):
        raise ValueError("grid must be a descending 1-D array")
    if grid[0] < 2.0:
        raise ValueError(
            "grid must start at >= 2 um, where forces are negligible and "
            "the potential can be anchored to zero"
        )

    n = len(grid)
    integrand = np.empty(n)
    force = np.empty(n)
    pops = np.empty((n, 3))
    fbr = np.empty((n, 3))
    ebr = np.empty((n, 3))
    heat = np.empty(n)
    res_max = 0.0
    eig_min = np.inf

    prev_vecs = None
    for i, z in enumerate(grid):
        ss = steady_state(h, z)
        force[i] = ss.force_expect
        integrand[i] = -ss.force_expect        # Tr(dH/dz rho)
        pops[i] = ss.populations
        heat[i] = ss.heating_rate
        res_max = max(res_max, ss.residual)
        eig_min = min(eig_min, ss.min_eig)
        if prev_vecs is None:
            vals, vecs, eta = ss.force_eigvals, ss.force_eigvecs, ss.eta
        else:
            vals, vecs = _match_branches(prev_vecs, ss.force_eigvals, ss.force_eigvecs)
            eta = np.real(np.einsum("ai,ab,bi->i", vecs.conj(), ss.rho, vecs))
        fbr[i] = vals
        ebr[i] = eta
        prev_vecs = vecs

    u = cumulative_trapezoid(integrand, grid, initial=0.0)      # rad/us
    return PotentialProfile(
        z=grid,
        u_eff_mhz=u / TWO_PI,
        force=force,
        populations=pops,
        force_branches=fbr,
        eta_branches=ebr,
        heating=heat,
        residual_max=res_max,
        min_eig_min=eig_min,
    )


def log_grid(z_min=0.02, z_max=2.0, n=400):
    """Descending log-spaced separation grid."""
    return np.geomspace(z_max, z_min, n)


def find_potential_minimum(h, profile, z_lo, z_hi):
    """Locate an interior local minimum of U_eff inside (z_lo, z_hi).

    The gridded profile brackets the minimum; the exact location is the
    force zero-crossing refined by brentq.  Returns (z_min, u_min_mhz) or
    None when no interior minimum exists.
    """
    z = profile.z
    u = profile.u_eff_mhz
    mask = (z > z_lo) & (z < z_hi)
    idx = np.where(mask)[0]
    for i in idx:
        if i == 0 or i == len(z) - 1:
            continue
        if u[i] < u[i - 1] and u[i] < u[i + 1]:
            # grid descends: z[i-1] > z[i] > z[i+1]; F = -dU/dz flips sign here
            f = lambda zz: steady_state(h, zz).force_expect
            a, b = z[i + 1], z[i - 1]
            fa, fb = f(a), f(b)
            if fa == 0.0:
                z_min = a
            elif fb == 0.0:
                z_min = b
            elif fa * fb < 0.0:
                z_min = brentq(f, a, b, xtol=1e-6)
            else:
                z_min = z[i]
            u_min = float(np.interp(z_min, z[::-1], u[::-1]))
            return float(z_min), u_min
    return None


@dataclass(frozen=True)
class PerturbativeEstimate:
    value: float            # rad/us
    in_regime: bool


def perturbative_vdw_potential(coeffs, drive, z, regime_margin=5.0):
    """Weak-drive estimate of the surface contribution to the potential.

    U ~ (Omega(z)^2 / 4 Delta^2) * deltaE_e^res(z) + deltaE_g^vf(z) for the
    mirror drive: the resonant part of the excited-level shift is sampled
    with the local excitation fraction, the ground level contributes its
    vacuum-fluctuation shift directly.  The flag reports whether the
    detuning dominates both the local Rabi frequency and the shifts.
    """
    if z <= 0.0:
        raise ValueError("separation z must be positive")
    omega_local = drive.rabi(z)
    delta = drive.detuning
    iz3 = 1.0 / z**3
    de_res = khz_um3_to_angular(coeffs.per_level_shift_resonant[drive.upper]) * iz3
    dg_vf = khz_um3_to_angular(coeffs.per_level_shift_fluctuation[drive.lower]) * iz3
    if delta == 0.0:
        return PerturbativeEstimate(value=np.nan, in_regime=False)
    value = (omega_local**2 / (4.0 * delta**2)) * de_res + dg_vf
    shifts = max(abs(de_res), abs(dg_vf))
    in_regime = abs(delta) >= regime_margin * omega_local and abs(
        delta
    ) >= regime_margin * shifts
    return PerturbativeEstimate(value=value, in_regime=in_regime)
