"""Surface-enhanced optical potentials for gas-phase alkali atoms.

Layers, bottom to top: materials (dielectric response and image factors),
atom (level scheme and transition data), vdw (aggregate z^-3 coefficients),
driven (steady states of the driven ladder and the effective potential),
trajectories (semiclassical quantum-trajectory Monte Carlo), cli.
"""

from .atom import LevelScheme, TransitionRecord, load_scheme
from .driven import Drive, build_hamiltonian, effective_potential, steady_state
from .materials import DielectricModel, image_factors, ito, ito_star
from .vdw import compute_vdw

__all__ = [
    "DielectricModel",
    "Drive",
    "LevelScheme",
    "TransitionRecord",
    "build_hamiltonian",
    "compute_vdw",
    "effective_potential",
    "image_factors",
    "ito",
    "ito_star",
    "load_scheme",
    "steady_state",
]

__version__ = "0.1.0"
