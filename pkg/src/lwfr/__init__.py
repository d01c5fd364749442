"""Single-step Lax-Wendroff flux reconstruction solver for hyperbolic
conservation laws, with a Fourier stability analyzer and a Runge-Kutta
reference integrator."""

from .basis import build_operators
from .driver import (BC, Mesh1D, Mesh2D, RunConfig, RunResult,
                     convergence_study, solve)
from .presets import PRESETS, preset

__version__ = "1.0.0"

__all__ = [
    "BC",
    "Mesh1D",
    "Mesh2D",
    "PRESETS",
    "RunConfig",
    "RunResult",
    "build_operators",
    "convergence_study",
    "preset",
    "solve",
    "__version__",
]
