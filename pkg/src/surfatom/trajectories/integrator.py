"""Single-step stochastic Schroedinger evolution in plain numpy.

Mirrors the compiled kernel step for step-level tests and small studies:
same adaptive step rule, same draw order (one uniform for the jump
decision, one more for the recoil projection when a jump fires), same RK4
no-click propagator and velocity-Verlet update.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from ..constants import C_UM_PER_US, HBAR_KG_UM2_PER_US
from ..errors import IntegratorError
from .kernel import DT_NORM_FRAC, DT_RATE_FRAC, DZ_CAP, JUMP_PROB_GUARD

GROUND = np.array([1.0, 0.0, 0.0], dtype=complex)


def recoil_speed(transition, mass_kg):
    """Full photon recoil speed of the emitted photon, um/us."""
    return HBAR_KG_UM2_PER_US * transition.omega_angular / (C_UM_PER_US * mass_kg)


def emission_kick(transition, mass_kg, rng):
    """Velocity change along z from one spontaneous photon.

    The photon leaves in a random direction over the full sphere, so the
    z projection of the recoil is the full recoil speed times a uniform
    draw on [-1, 1).
    """
    return recoil_speed(transition, mass_kg) * rng.symmetric()


@dataclass(frozen=True)
class TrajectoryState:
    """Pure internal state plus classical center-of-mass coordinates."""

    psi: np.ndarray
    z: float
    v: float
    t: float = 0.0
    jump_log: tuple = field(default=())

    def __post_init__(self):
        nrm = np.linalg.norm(self.psi)
        if abs(nrm - 1.0) > 1e-9:
            raise ValueError(f"state norm {nrm} is not 1")


def step_sse(
    state,
    h,
    rng,
    dt_max=1e-3,
    enable_jumps=True,
    enable_gravity=True,
    frozen=False,
):
    """Advance one adaptive step; returns the new TrajectoryState."""
    params = h.kernel_params()
    z = state.z
    hm = h.hamiltonian(z)
    r1, r2 = h.total_rates(z)

    dt = dt_max
    if r1 + r2 > 0.0:
        dt = min(dt, DT_RATE_FRAC / (r1 + r2))
    frob = np.sqrt(np.sum(hm * hm))
    if frob > 0.0:
        dt = min(dt, DT_NORM_FRAC / frob)
    if not frozen and state.v != 0.0:
        dt = min(dt, DZ_CAP / abs(state.v))

    psi = state.psi
    p1 = r1 * abs(psi[1]) ** 2 * dt
    p2 = r2 * abs(psi[2]) ** 2 * dt
    if p1 + p2 > JUMP_PROB_GUARD:
        raise IntegratorError(
            f"per-step jump probability {p1 + p2:.3f} exceeds guard at z={z}"
        )

    v = state.v
    jump_log = state.jump_log
    jumped = False
    if enable_jumps:
        u = rng.uniform()
        if u < p1 + p2:
            jumped = True
            if u < p1:
                psi = np.array([1.0, 0.0, 0.0], dtype=complex)
                kick = params[15]
                channel = 1
            else:
                psi = np.array([0.0, 1.0, 0.0], dtype=complex)
                kick = params[16]
                channel = 2
            if not frozen:
                v = v + kick * (2.0 * rng.uniform() - 1.0)
            jump_log = jump_log + ((state.t, channel),)

    if not jumped:
        h_eff = hm.astype(complex)
        h_eff[1, 1] -= 0.5j * r1
        h_eff[2, 2] -= 0.5j * r2
        k0 = -1j * (h_eff @ psi)
        k1 = -1j * (h_eff @ (psi + 0.5 * dt * k0))
        k2 = -1j * (h_eff @ (psi + 0.5 * dt * k1))
        k3 = -1j * (h_eff @ (psi + dt * k2))
        psi = psi + dt / 6.0 * (k0 + 2.0 * (k1 + k2) + k3)
        psi = psi / np.linalg.norm(psi)

    if frozen:
        return replace(
            state, psi=psi, t=state.t + dt, jump_log=jump_log
        )

    grav = params[14] if enable_gravity else 0.0
    hom = params[13]
    f_old = np.real(np.einsum("i,ij,j->", psi.conj(), h.force_operator(z), psi))
    a_old = hom * f_old - grav
    z_new = z + v * dt + 0.5 * a_old * dt * dt
    f_new = np.real(
        np.einsum("i,ij,j->", psi.conj(), h.force_operator(z_new), psi)
    )
    a_new = hom * f_new - grav
    v_new = v + 0.5 * (a_old + a_new) * dt

    return TrajectoryState(
        psi=psi, z=z_new, v=v_new, t=state.t + dt, jump_log=jump_log
    )
