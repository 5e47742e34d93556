"""Dielectric response models and near-field image factors.

A planar interface acts back on a nearby dipole through the quasi-static
reflection coefficient (eps - 1)/(eps + 1).  Everything a transition needs
from the surface is condensed into three dimensionless numbers: a
vacuum-fluctuation factor from an integral over imaginary frequencies, and
resonant shift/dissipation factors taken at the (real) transition frequency,
which exist only for downward transitions.

Frequencies here are plain eV; conversion to angular rates happens in the
atomic layer.  All functions are pure.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import QuadratureError, SingularityError

DRUDE = "drude-with-background"
DISPERSIONLESS = "dispersionless"

# fixed-order Gauss-Legendre rule reused by the vacuum-fluctuation integral
_GL_ORDER = 200
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(_GL_ORDER)

_MAX_DOUBLINGS = 8
_REFINE_RTOL = 1e-8


@dataclass(frozen=True)
class DielectricModel:
    """Drude-family permittivity, evaluable on the real and imaginary axes.

    eps(omega)  = eps_inf - omega_p^2 / (omega (omega + i gamma))
    eps(i zeta) = eps_inf + omega_p^2 / (zeta (zeta + gamma))

    A dispersionless model is the constant eps_inf.  omega_p and gamma are
    in eV.
    """

    eps_inf: float
    omega_p: float = 0.0
    gamma: float = 0.0
    tag: str = DRUDE
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.tag not in (DRUDE, DISPERSIONLESS):
            raise ValueError(f"unknown dielectric tag {self.tag!r}")
        if self.eps_inf <= 0.0:
            raise ValueError("eps_inf must be positive")
        if self.tag == DRUDE:
            if self.omega_p < 0.0:
                raise ValueError("omega_p must be >= 0")
            if self.gamma <= 0.0:
                raise ValueError("gamma must be > 0 for a Drude model")

    @property
    def is_dispersionless(self):
        return self.tag == DISPERSIONLESS or self.omega_p == 0.0


def ito():
    """Indium tin oxide, empirical free-electron fit."""
    return DielectricModel(eps_inf=3.8, omega_p=2.19, gamma=0.111, name="ITO")


def ito_star():
    """Dispersionless counterpart of ITO: eps(omega) = eps_inf."""
    return DielectricModel(eps_inf=3.8, tag=DISPERSIONLESS, name="ITO*")


def permittivity(model, omega):
    """Complex permittivity at real frequency omega > 0 (eV)."""
    if omega <= 0.0:
        raise ValueError(f"omega must be positive, got {omega}")
    if model.is_dispersionless:
        return complex(model.eps_inf)
    return model.eps_inf - model.omega_p**2 / (omega * (omega + 1j * model.gamma))


def permittivity_imag_axis(model, zeta):
    """Permittivity on the imaginary axis, eps(i zeta); real and >= eps_inf."""
    if zeta <= 0.0:
        raise ValueError(f"zeta must be positive, got {zeta}")
    if model.is_dispersionless:
        return model.eps_inf
    return model.eps_inf + model.omega_p**2 / (zeta * (zeta + model.gamma))


def quasi_static_image(model, omega):
    """Near-field reflection coefficient (eps - 1)/(eps + 1) at omega (eV)."""
    eps = permittivity(model, omega)
    denom = eps + 1.0
    if abs(denom) < 1e-12:
        raise SingularityError(
            f"surface-polariton pole: |eps({omega} eV) + 1| = {abs(denom):.3e}"
        )
    return (eps - 1.0) / denom


def drude_image_minimum(omega_p, gamma):
    """Closed-form minimum of Re[(eps-1)/(eps+1)] for a pure Drude metal.

    Returns (omega_min, I_min, I_min_imag).  The real part of the image
    factor reaches I_min < 0 at omega_min; I_min_imag is the imaginary part
    at that same frequency.  Both magnitudes diverge as gamma -> 0.
    """
    if omega_p <= 0.0 or gamma <= 0.0:
        raise ValueError("require omega_p > 0 and gamma > 0")
    ratio = gamma / omega_p
    omega_min = np.sqrt(omega_p**2 / 2.0 + gamma * omega_p / np.sqrt(2.0))
    i_min = -0.5 / (np.sqrt(2.0) * ratio + ratio**2)
    i_min_imag = -i_min * np.sqrt(1.0 + np.sqrt(2.0) * ratio)
    return omega_min, i_min, i_min_imag


def _imag_axis_image_grid(model, zeta):
    """(eps(i zeta)-1)/(eps(i zeta)+1) vectorized over a zeta > 0 array."""
    if model.is_dispersionless:
        g = (model.eps_inf - 1.0) / (model.eps_inf + 1.0)
        return np.full_like(zeta, g)
    eps = model.eps_inf + model.omega_p**2 / (zeta * (zeta + model.gamma))
    return (eps - 1.0) / (eps + 1.0)


def vacuum_fluctuation_factor(model, omega_na):
    """Vacuum-fluctuation image factor for a transition at omega_na (eV, signed).

    Evaluates (2/pi) * int_0^inf dz [(eps(iz)-1)/(eps(iz)+1)] * w/(w^2+z^2)
    with the substitution z = |w| tan(theta), which maps the half-line onto
    [0, pi/2) and removes the Lorentzian weight exactly.  Composite
    Gauss-Legendre panels are doubled until the result is stable to 1e-8
    relative.  Antisymmetric in omega_na.
    """
    if omega_na == 0.0:
        raise ValueError("omega_na must be nonzero")
    w = abs(omega_na)

    def theta_integral(n_panels):
        edges = np.linspace(0.0, np.pi / 2.0, n_panels + 1)
        total = 0.0
        for a, b in zip(edges[:-1], edges[1:]):
            theta = 0.5 * (b - a) * _GL_NODES + 0.5 * (a + b)
            zeta = w * np.tan(theta)
            total += 0.5 * (b - a) * np.sum(
                _imag_axis_image_grid(model, zeta) * _GL_WEIGHTS
            )
        return total

    value = theta_integral(1)
    panels = 1
    for _ in range(_MAX_DOUBLINGS):
        panels *= 2
        refined = theta_integral(panels)
        if abs(refined - value) <= _REFINE_RTOL * max(abs(refined), 1e-300):
            return np.sign(omega_na) * (2.0 / np.pi) * refined
        value = refined
    raise QuadratureError(
        f"vacuum-fluctuation integral did not stabilize after {panels} panels"
    )


@dataclass(frozen=True)
class ImageFactors:
    """Per-transition surface factors.

    delta_vf carries the sign of omega_na = -omega_an; delta_r and r_na are
    nonzero only for downward transitions (omega_an > 0) and r_na >= 0 for
    any passive dielectric.
    """

    delta_vf: float
    delta_r: float
    r_na: float


def image_factors(model, omega_an):
    """Bundle of image factors for a transition with energy gap omega_an (eV).

    omega_an = omega_a - omega_n for perturbed state a and partner n;
    positive means a decays toward n.  The resonant factors use a hard
    step: exactly-degenerate input (omega_an == 0) is rejected.
    """
    if omega_an == 0.0:
        raise ValueError("omega_an must be nonzero")
    dvf = vacuum_fluctuation_factor(model, -omega_an)
    if omega_an > 0.0:
        g = quasi_static_image(model, omega_an)
        return ImageFactors(delta_vf=dvf, delta_r=2.0 * g.real, r_na=4.0 * g.imag)
    return ImageFactors(delta_vf=dvf, delta_r=0.0, r_na=0.0)
