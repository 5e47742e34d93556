"""Aggregate van der Waals coefficients for a level scheme over a surface.

Each level a acquires a z^-3 shift  delta_a(z) = C_a / z^3  and each
downward transition a -> n a z^-3 decay enhancement  D_na / z^3, with
C_a = -sum_n M_an (dvf + dr)  and  D_na = M_an r_na.  Coefficients are
stored in the tabulated kHz.um^3 convention; the *_at evaluators convert
to angular rad/us.
"""

from dataclasses import dataclass

from .atom import dipole_strength_coeff
from .constants import khz_um3_to_angular
from .materials import image_factors


@dataclass(frozen=True)
class TransitionFactors:
    """One perturbing partner of one level: strength and image factors."""

    level: str          # the perturbed level a
    partner: str        # the partner level n
    omega_na_eV: float  # signed: positive when the partner lies above
    rate_fs: float
    m_coeff: float      # kHz.um^3
    delta_vf: float
    delta_r: float
    r_na: float


@dataclass(frozen=True)
class VdwCoefficients:
    """Shift and decay-enhancement coefficients, kHz.um^3 convention."""

    material: str
    per_transition: tuple               # TransitionFactors rows
    per_level_shift: dict               # level -> C_a
    per_level_shift_resonant: dict      # level -> resonant-only part of C_a
    per_level_shift_fluctuation: dict   # level -> vacuum-fluctuation part
    per_transition_decay: dict          # (lower, upper) -> D >= 0


def compute_vdw(scheme, material):
    """Populate all van der Waals coefficients for scheme over material."""
    rows = []
    shift = {}
    shift_res = {}
    shift_vf = {}
    decay = {}
    for level in scheme.levels:
        c_total = 0.0
        c_res = 0.0
        c_vf = 0.0
        for t, sign in scheme.partners_of(level.name):
            partner = t.upper if sign > 0 else t.lower
            omega_na = sign * t.omega_eV
            m = dipole_strength_coeff(t, sign)
            factors = image_factors(material, -omega_na)
            rows.append(
                TransitionFactors(
                    level=level.name,
                    partner=partner,
                    omega_na_eV=omega_na,
                    rate_fs=t.rate_fs,
                    m_coeff=m,
                    delta_vf=factors.delta_vf,
                    delta_r=factors.delta_r,
                    r_na=factors.r_na,
                )
            )
            c_total -= m * (factors.delta_vf + factors.delta_r)
            c_res -= m * factors.delta_r
            c_vf -= m * factors.delta_vf
            if sign < 0:
                decay[(partner, level.name)] = m * factors.r_na
        shift[level.name] = c_total
        shift_res[level.name] = c_res
        shift_vf[level.name] = c_vf
    return VdwCoefficients(
        material=material.name or material.tag,
        per_transition=tuple(rows),
        per_level_shift=shift,
        per_level_shift_resonant=shift_res,
        per_level_shift_fluctuation=shift_vf,
        per_transition_decay=decay,
    )


def shift_at(coeffs, level, z):
    """Level shift delta_a(z) as an angular rate (rad/us) at separation z (um)."""
    if z <= 0.0:
        raise ValueError("separation z must be positive")
    return khz_um3_to_angular(coeffs.per_level_shift[level]) / z**3


def decay_enhancement_at(coeffs, transition, z):
    """Added decay rate (rad/us) on transition (lower, upper) at separation z."""
    if z <= 0.0:
        raise ValueError("separation z must be positive")
    return khz_um3_to_angular(coeffs.per_transition_decay[transition]) / z**3
