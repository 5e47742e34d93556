"""Compiled trajectory integrator.

One trajectory = photon-counting unraveling of the driven 3-level ladder
(first-order jump scheme: per-step Bernoulli jump with probability
R <psi|s's|psi> dt, otherwise RK4 under the non-Hermitian no-click
generator, renormalized) coupled to velocity-Verlet center-of-mass motion
under <psi|F(z)|psi> and gravity.

Adaptive step: dt = min(dt_max, 0.01/Gamma_tot, 0.01/||H||_F, 0.2nm/|v|),
which caps the per-step jump probability at ~1% and bounds both phase
error and spatial discretization.

Parameter array layout (see LadderHamiltonian.kernel_params):
  0 omega1_0   1 kappa1    2 omega2_0   3 kappa2
  4 delta1     5 delta1+delta2
  6 s_g        7 s_e1      8 s_e2       (rad/us.um^3 shift coefficients)
  9 r1_fs     10 r2_fs    11 denh1     12 denh2 (rad/us and rad/us.um^3)
 13 hbar/m    14 g        15 vkick1    16 vkick2

Outcome codes: 0 frozen-run complete, 1 exited through the upper boundary
moving up, 2 hit the lower (absorption) boundary, 3 timed out, 4 step-size
guard tripped.
"""

import numpy as np
from numba import njit, prange

from .rng import stream_state, uniform

DT_RATE_FRAC = 0.01
DT_NORM_FRAC = 0.01
DZ_CAP = 2.0e-4          # um of motion per step
JUMP_PROB_GUARD = 0.1

OUT_FROZEN = 0
OUT_UP = 1
OUT_ABSORBED = 2
OUT_TIMEOUT = 3
OUT_STEP_ERROR = 4


@njit(cache=True)
def hamiltonian_parts(P, z):
    """(h00, h01, h11, h12, h22, r1, r2) at separation z; H is real symmetric."""
    iz3 = 1.0 / (z * z * z)
    o1 = P[0] * np.exp(-P[1] * z)
    o2 = P[2] * np.exp(-P[3] * z)
    h00 = P[6] * iz3
    h11 = P[7] * iz3 - P[4]
    h22 = P[8] * iz3 - P[5]
    r1 = P[9] + P[11] * iz3
    r2 = P[10] + P[12] * iz3
    return h00, 0.5 * o1, h11, 0.5 * o2, h22, r1, r2


@njit(cache=True)
def force_parts(P, z):
    """Entries of F(z) = -dH/dz: (f00, f01, f11, f12, f22)."""
    iz4 = 1.0 / (z * z * z * z)
    o1 = P[0] * np.exp(-P[1] * z)
    o2 = P[2] * np.exp(-P[3] * z)
    return (
        3.0 * P[6] * iz4,
        0.5 * P[1] * o1,
        3.0 * P[7] * iz4,
        0.5 * P[3] * o2,
        3.0 * P[8] * iz4,
    )


@njit(cache=True, inline="always")
def _force_expect(P, z, c0, c1, c2):
    f00, f01, f11, f12, f22 = force_parts(P, z)
    p0 = c0.real * c0.real + c0.imag * c0.imag
    p1 = c1.real * c1.real + c1.imag * c1.imag
    p2 = c2.real * c2.real + c2.imag * c2.imag
    x01 = (c0.conjugate() * c1).real
    x12 = (c1.conjugate() * c2).real
    return f00 * p0 + f11 * p1 + f22 * p2 + 2.0 * (f01 * x01 + f12 * x12)


@njit(cache=True)
def run_one(
    P,
    rng_state,
    psi,
    z0,
    v0,
    frozen,
    enable_jumps,
    enable_gravity,
    z_lower,
    z_upper,
    t_max,
    dt_max,
    rec_stride,
    rec_t,
    rec_z,
    rec_v,
    rec_psi,
    jump_t,
    jump_ch,
):
    """Integrate one trajectory; psi is consumed as the initial state."""
    c0 = psi[0]
    c1 = psi[1]
    c2 = psi[2]
    z = z0
    v = v0
    t = 0.0
    grav = P[14] if enable_gravity else 0.0
    hom = P[13]
    vk1 = P[15]
    vk2 = P[16]

    j1 = 0
    j2 = 0
    nrec = 0
    njl = 0
    t_first = np.nan
    rec_cap = rec_t.shape[0]
    jcap = jump_t.shape[0]
    step = 0
    outcome = OUT_TIMEOUT

    while True:
        remaining = t_max - t
        if remaining <= 0.0:
            outcome = OUT_FROZEN if frozen else OUT_TIMEOUT
            break

        iz3 = 1.0 / (z * z * z)
        o1 = P[0] * np.exp(-P[1] * z)
        o2 = P[2] * np.exp(-P[3] * z)
        h01 = 0.5 * o1
        h12 = 0.5 * o2
        h00 = P[6] * iz3
        h11 = P[7] * iz3 - P[4]
        h22 = P[8] * iz3 - P[5]
        r1 = P[9] + P[11] * iz3
        r2 = P[10] + P[12] * iz3

        dt = dt_max
        rtot = r1 + r2
        if rtot > 0.0:
            x = DT_RATE_FRAC / rtot
            if x < dt:
                dt = x
        frob = np.sqrt(
            h00 * h00 + h11 * h11 + h22 * h22 + 2.0 * (h01 * h01 + h12 * h12)
        )
        if frob > 0.0:
            x = DT_NORM_FRAC / frob
            if x < dt:
                dt = x
        if not frozen and v != 0.0:
            x = DZ_CAP / abs(v)
            if x < dt:
                dt = x
        if dt > remaining:
            dt = remaining

        if rec_stride > 0 and step % rec_stride == 0 and nrec < rec_cap:
            rec_t[nrec] = t
            rec_z[nrec] = z
            rec_v[nrec] = v
            rec_psi[nrec, 0] = c0
            rec_psi[nrec, 1] = c1
            rec_psi[nrec, 2] = c2
            nrec += 1

        p1 = r1 * (c1.real * c1.real + c1.imag * c1.imag) * dt
        p2 = r2 * (c2.real * c2.real + c2.imag * c2.imag) * dt
        ptot = p1 + p2
        if ptot > JUMP_PROB_GUARD:
            outcome = OUT_STEP_ERROR
            break

        jumped = False
        if enable_jumps:
            u = uniform(rng_state)
            if u < ptot:
                jumped = True
                if u < p1:
                    c0 = 1.0 + 0.0j
                    c1 = 0.0j
                    c2 = 0.0j
                    dv = vk1 * (2.0 * uniform(rng_state) - 1.0)
                    j1 += 1
                    ch = 1
                else:
                    c0 = 0.0j
                    c1 = 1.0 + 0.0j
                    c2 = 0.0j
                    dv = vk2 * (2.0 * uniform(rng_state) - 1.0)
                    j2 += 1
                    ch = 2
                if not frozen:
                    v += dv
                if np.isnan(t_first):
                    t_first = t
                if njl < jcap:
                    jump_t[njl] = t
                    jump_ch[njl] = ch
                    njl += 1

        if not jumped:
            # RK4 under H_eff = H - (i/2)(r1 P1 + r2 P2), H held at step start
            g1 = 0.5 * r1
            g2 = 0.5 * r2
            k0a = -1j * (h00 * c0 + h01 * c1)
            k0b = -1j * (h01 * c0 + h11 * c1 + h12 * c2) - g1 * c1
            k0c = -1j * (h12 * c1 + h22 * c2) - g2 * c2
            a0 = c0 + 0.5 * dt * k0a
            a1 = c1 + 0.5 * dt * k0b
            a2 = c2 + 0.5 * dt * k0c
            k1a = -1j * (h00 * a0 + h01 * a1)
            k1b = -1j * (h01 * a0 + h11 * a1 + h12 * a2) - g1 * a1
            k1c = -1j * (h12 * a1 + h22 * a2) - g2 * a2
            b0 = c0 + 0.5 * dt * k1a
            b1 = c1 + 0.5 * dt * k1b
            b2 = c2 + 0.5 * dt * k1c
            k2a = -1j * (h00 * b0 + h01 * b1)
            k2b = -1j * (h01 * b0 + h11 * b1 + h12 * b2) - g1 * b1
            k2c = -1j * (h12 * b1 + h22 * b2) - g2 * b2
            d0 = c0 + dt * k2a
            d1 = c1 + dt * k2b
            d2 = c2 + dt * k2c
            k3a = -1j * (h00 * d0 + h01 * d1)
            k3b = -1j * (h01 * d0 + h11 * d1 + h12 * d2) - g1 * d1
            k3c = -1j * (h12 * d1 + h22 * d2) - g2 * d2
            sixth = dt / 6.0
            c0 = c0 + sixth * (k0a + 2.0 * (k1a + k2a) + k3a)
            c1 = c1 + sixth * (k0b + 2.0 * (k1b + k2b) + k3b)
            c2 = c2 + sixth * (k0c + 2.0 * (k1c + k2c) + k3c)
            nrm = np.sqrt(
                c0.real * c0.real
                + c0.imag * c0.imag
                + c1.real * c1.real
                + c1.imag * c1.imag
                + c2.real * c2.real
                + c2.imag * c2.imag
            )
            inv = 1.0 / nrm
            c0 *= inv
            c1 *= inv
            c2 *= inv

        if frozen:
            t += dt
            step += 1
            continue

        a_old = hom * _force_expect(P, z, c0, c1, c2) - grav
        z_new = z + v * dt + 0.5 * a_old * dt * dt
        a_new = hom * _force_expect(P, z_new, c0, c1, c2) - grav
        v += 0.5 * (a_old + a_new) * dt
        z = z_new
        t += dt
        step += 1

        if z <= z_lower:
            outcome = OUT_ABSORBED
            break
        if z >= z_upper and v > 0.0:
            outcome = OUT_UP
            break

    psi[0] = c0
    psi[1] = c1
    psi[2] = c2
    return outcome, t, z, v, j1, j2, t_first, nrec, njl


@njit(cache=True, parallel=True)
def run_ensemble(
    P,
    master_seed,
    n,
    psi0,
    z0,
    v0,
    frozen,
    enable_jumps,
    enable_gravity,
    z_lower,
    z_upper,
    t_max,
    dt_max,
):
    """n independent trajectories; results indexed by trajectory.

    Per-trajectory RNG streams are derived from (master_seed, index), so
    the output is bit-identical for any thread count.
    """
    outcomes = np.empty(n, dtype=np.int64)
    t_end = np.empty(n)
    z_end = np.empty(n)
    v_end = np.empty(n)
    jumps1 = np.empty(n, dtype=np.int64)
    jumps2 = np.empty(n, dtype=np.int64)
    t_first = np.empty(n)
    psi_final = np.empty((n, 3), dtype=np.complex128)

    for k in prange(n):
        state = stream_state(master_seed, k)
        psi = psi0.copy()
        rec_f = np.empty(0)
        rec_c = np.empty((0, 3), dtype=np.complex128)
        jt = np.empty(0)
        jc = np.empty(0, dtype=np.int64)
        out, t, z, v, j1, j2, tf, _, _ = run_one(
            P, state, psi, z0, v0, frozen, enable_jumps, enable_gravity,
            z_lower, z_upper, t_max, dt_max, 0, rec_f, rec_f, rec_f, rec_c,
            jt, jc,
        )
        outcomes[k] = out
        t_end[k] = t
        z_end[k] = z
        v_end[k] = v
        jumps1[k] = j1
        jumps2[k] = j2
        t_first[k] = tf
        psi_final[k] = psi

    return outcomes, t_end, z_end, v_end, jumps1, jumps2, t_first, psi_final


@njit(cache=True)
def run_single(
    P,
    master_seed,
    index,
    psi0,
    z0,
    v0,
    frozen,
    enable_jumps,
    enable_gravity,
    z_lower,
    z_upper,
    t_max,
    dt_max,
    rec_stride,
    rec_cap,
    jump_cap,
):
    """One trajectory with full recording, same stream as ensemble index."""
    state = stream_state(master_seed, index)
    psi = psi0.copy()
    rec_t = np.empty(rec_cap)
    rec_z = np.empty(rec_cap)
    rec_v = np.empty(rec_cap)
    rec_psi = np.empty((rec_cap, 3), dtype=np.complex128)
    jump_time = np.empty(jump_cap)
    jump_channel = np.empty(jump_cap, dtype=np.int64)
    out, t, z, v, j1, j2, tf, nrec, njl = run_one(
        P, state, psi, z0, v0, frozen, enable_jumps, enable_gravity,
        z_lower, z_upper, t_max, dt_max, rec_stride, rec_t, rec_z, rec_v,
        rec_psi, jump_time, jump_channel,
    )
    return (
        out, t, z, v, j1, j2, tf,
        rec_t[:nrec], rec_z[:nrec], rec_v[:nrec], rec_psi[:nrec],
        jump_time[:njl], jump_channel[:njl], psi,
    )
