"""Physical constants and unit conversions.

Internal unit system: lengths in um, times in us, energies/rates as angular
frequencies in rad/us.  In these units 1 m/s = 1 um/us and speeds, photon
recoils, and gravitational acceleration all stay O(1)-ish for cold atoms.
Tabulated coefficients are reported in "ordinary-frequency" kHz.um^3, i.e.
(angular coefficient in us^-1.um^3) / (2 pi) * 1e3.
"""

import math

TWO_PI = 2.0 * math.pi

# um/us system
C_UM_PER_US = 2.99792458e8          # speed of light
EV_TO_RAD_PER_US = 1.51926757e9     # hbar*omega = 1 eV  ->  omega in rad/us
G_UM_PER_US2 = 9.81e-6              # gravitational acceleration
HBAR_KG_UM2_PER_US = 1.054571817e-28

# SI values for the few places that want them (heating rate, intensities)
HBAR_SI = 1.054571817e-34           # J s
H_SI = 6.62607015e-34               # J s
KB_SI = 1.380649e-23                # J/K
C_SI = 2.99792458e8                 # m/s
EV_SI = 1.602176634e-19             # J

M_K39_KG = 6.4762e-26               # 39K atomic mass


def ev_to_angular(energy_ev):
    """Photon/level energy in eV -> angular frequency in rad/us."""
    return energy_ev * EV_TO_RAD_PER_US


def angular_to_ev(omega):
    """Angular frequency in rad/us -> energy in eV."""
    return omega / EV_TO_RAD_PER_US


def mhz_x2pi_to_angular(nu_mhz):
    """A '2 pi x MHz' figure (ordinary MHz) -> angular rad/us."""
    return TWO_PI * nu_mhz


def angular_to_mhz(omega):
    """Angular rad/us -> ordinary-frequency MHz."""
    return omega / TWO_PI


def khz_um3_to_angular(coeff):
    """Tabulated kHz.um^3 coefficient -> angular rad/us.um^3."""
    return TWO_PI * 1e-3 * coeff


def angular_to_khz_um3(coeff):
    """Angular rad/us.um^3 coefficient -> tabulated kHz.um^3."""
    return coeff / (TWO_PI * 1e-3)
