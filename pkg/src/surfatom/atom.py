"""Atomic level schemes, transition data, and laser power bookkeeping.

The simulation subspace is a three-level ladder (ground, first excited,
second excited), but the transition table also carries out-of-subspace
partners whose only job is to contribute to level-shift sums.
"""

import json
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .constants import (
    C_SI,
    C_UM_PER_US,
    EV_TO_RAD_PER_US,
    G_UM_PER_US2,
    H_SI,
    HBAR_SI,
    KB_SI,
    M_K39_KG,
    TWO_PI,
    ev_to_angular,
)
from .errors import ConfigError


@dataclass(frozen=True)
class Level:
    name: str
    J: float            # spin-orbit quantum number, half-integer
    role: str           # "ground" | "excited"

    def __post_init__(self):
        if self.role not in ("ground", "excited"):
            raise ValueError(f"bad level role {self.role!r}")
        degeneracy = 2.0 * self.J + 1.0
        if degeneracy <= 0 or abs(degeneracy - round(degeneracy)) > 1e-9:
            raise ValueError(f"2J+1 must be a positive integer, got J={self.J}")


@dataclass(frozen=True)
class TransitionRecord:
    """One electric-dipole transition: upper level, lower level, energy, rate.

    omega_eV is the (positive) transition energy; rate_fs the free-space
    decay rate of upper -> lower in us^-1.
    """

    upper: str
    lower: str
    omega_eV: float
    rate_fs: float
    J_upper: float
    J_lower: float

    def __post_init__(self):
        if self.omega_eV <= 0.0:
            raise ValueError(f"omega_eV must be positive ({self.upper}-{self.lower})")
        if self.rate_fs <= 0.0:
            raise ValueError(f"rate_fs must be positive ({self.upper}-{self.lower})")

    @property
    def omega_angular(self):
        """Transition angular frequency in rad/us."""
        return ev_to_angular(self.omega_eV)


@dataclass(frozen=True)
class LevelScheme:
    """Ordered ladder subspace plus the full transition table and the mass."""

    levels: tuple
    transitions: tuple
    mass_kg: float

    def __post_init__(self):
        if self.mass_kg <= 0.0:
            raise ValueError("mass_kg must be positive")
        names = [lv.name for lv in self.levels]
        if len(set(names)) != len(names):
            raise ValueError("duplicate level names in scheme")
        # any transition internal to the subspace must link ladder neighbours
        index = {n: i for i, n in enumerate(names)}
        for t in self.transitions:
            if t.upper in index and t.lower in index:
                if abs(index[t.upper] - index[t.lower]) != 1:
                    raise ValueError(
                        f"in-subspace transition {t.upper}-{t.lower} skips a rung"
                    )

    def level(self, name):
        for lv in self.levels:
            if lv.name == name:
                return lv
        raise KeyError(name)

    def level_index(self, name):
        for i, lv in enumerate(self.levels):
            if lv.name == name:
                return i
        raise KeyError(name)

    def find_transition(self, upper, lower):
        for t in self.transitions:
            if t.upper == upper and t.lower == lower:
                return t
        raise KeyError(f"{upper} -> {lower}")

    def partners_of(self, name):
        """All (transition, omega_na_sign) pairs perturbing level `name`.

        omega_na_sign = +1 when the partner lies above the level (upward),
        -1 when below (downward).
        """
        out = []
        for t in self.transitions:
            if t.lower == name:
                out.append((t, +1))
            elif t.upper == name:
                out.append((t, -1))
        return out


def load_scheme(path=None):
    """Load a level scheme from JSON; defaults to the packaged 39K data."""
    if path is None:
        text = resources.files("surfatom.data").joinpath("k39.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    try:
        raw = json.loads(text)
        levels = tuple(
            Level(name=lv["name"], J=lv["J"], role=lv["role"]) for lv in raw["levels"]
        )
        transitions = tuple(
            TransitionRecord(
                upper=t["upper"],
                lower=t["lower"],
                omega_eV=t["omega_eV"],
                rate_fs=t["rate_fs_per_us"],
                J_upper=t["J_upper"],
                J_lower=t["J_lower"],
            )
            for t in raw["transitions"]
        )
        return LevelScheme(levels=levels, transitions=transitions, mass_kg=raw["mass_kg"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad atom data file {path or 'k39.json'}: {exc}") from exc


def dipole_strength_coeff(t, omega_na_sign):
    """Dipole strength coefficient M for a perturbed level, in kHz.um^3.

    omega_na_sign identifies which side of the transition is being
    perturbed: +1 means the partner lies above (upward transition, the
    J-dependent degeneracy factor applies), -1 means below (downward,
    factor 1).  M converts image factors into z^-3 shift and decay laws.
    """
    if omega_na_sign not in (+1, -1):
        raise ValueError("omega_na_sign must be +1 or -1")
    if omega_na_sign > 0:
        j_a, j_n = t.J_lower, t.J_upper
        angular = 1.0 + 2.0 * (j_n - j_a) / (2.0 * j_a + 1.0)
    else:
        angular = 1.0
    reduced_wavelength = C_UM_PER_US / t.omega_angular          # um
    m_angular = t.rate_fs * reduced_wavelength**3 * angular / 16.0
    return m_angular / TWO_PI * 1e3


def saturation_intensity(t):
    """Saturation intensity of the transition in mW/cm^2 (upper level is a)."""
    rate_si = t.rate_fs * 1e6                                   # 1/s
    omega_si = t.omega_angular * 1e6                            # rad/s
    weight = (2.0 * t.J_upper + 1.0) / (2.0 * t.J_lower + 1.0)
    i_si = HBAR_SI * rate_si * omega_si**3 / (12.0 * np.pi * C_SI**2) * weight
    return i_si * 0.1                                           # W/m^2 -> mW/cm^2


def rabi_to_intensity(t, omega_rabi):
    """Optical intensity (mW/cm^2) giving angular Rabi frequency omega_rabi.

    I = 2 I_sat (Omega / R_fs)^2 with both rates angular in rad/us.
    """
    if omega_rabi < 0.0:
        raise ValueError("omega_rabi must be >= 0")
    return 2.0 * saturation_intensity(t) * (omega_rabi / t.rate_fs) ** 2


def thermal_debroglie(mass_kg, t_kelvin):
    """Thermal de Broglie wavelength h / sqrt(2 pi m k_B T), in um."""
    if t_kelvin <= 0.0:
        raise ValueError("temperature must be positive")
    lam_m = H_SI / np.sqrt(2.0 * np.pi * mass_kg * KB_SI * t_kelvin)
    return lam_m * 1e6


def fall_kinematics(height_mm, mass_kg=M_K39_KG):
    """Free-fall speed and kinetic energy after dropping height_mm.

    Returns (speed in um/us, kinetic energy as ordinary frequency in MHz).
    """
    if height_mm < 0.0:
        raise ValueError("height must be >= 0")
    height_um = height_mm * 1e3
    v = np.sqrt(2.0 * G_UM_PER_US2 * height_um)                 # um/us = m/s
    e_joule = 0.5 * mass_kg * v**2                              # v is also m/s
    return v, e_joule / H_SI * 1e-6
