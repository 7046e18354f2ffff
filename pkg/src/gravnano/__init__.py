"""Self-gravity of crystalline nanospheres in the Schrodinger-Newton model."""

__version__ = "0.1.0"

from .core import (  # noqa: E402
    DEFAULT_CONSTANTS,
    InvalidSpecError,
    PhysicalConstants,
    Regime,
    RegimeLabel,
    SphereSpec,
    sphere_mass,
)
from .potentials import ModelKind, PotentialModel  # noqa: E402

__all__ = [
    "__version__",
    "DEFAULT_CONSTANTS",
    "InvalidSpecError",
    "ModelKind",
    "PhysicalConstants",
    "PotentialModel",
    "Regime",
    "RegimeLabel",
    "SphereSpec",
    "sphere_mass",
]
