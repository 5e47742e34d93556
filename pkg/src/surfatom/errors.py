"""Exception hierarchy shared across the package.

The CLI maps these onto distinct exit codes: configuration problems,
numerical failures, and scenario-level failures are kept separate.
"""


class SurfatomError(Exception):
    """Base class for all package errors."""


class ConfigError(SurfatomError):
    """Invalid configuration, input file, or binding."""


class NumericalError(SurfatomError):
    """A numerical procedure failed to meet its contract."""


class QuadratureError(NumericalError):
    """Quadrature refinement did not converge."""


class SingularityError(NumericalError):
    """Evaluation requested exactly at a model singularity."""


class DegenerateSteadyStateError(NumericalError):
    """The Liouvillian nullspace is not one-dimensional."""


class IntegratorError(NumericalError):
    """Trajectory integrator violated a step-size guard."""


class ScenarioError(SurfatomError):
    """A Monte Carlo scenario cannot be set up as requested."""
