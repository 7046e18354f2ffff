"""Physical constants, the nanosphere description and regime labels.

All quantities are SI at the API boundary.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import asdict, dataclass

AMU = 1.66053906660e-27

#: mass of one SiO2 formula unit, the default "atom" of a silica crystal
SILICA_UNIT_MASS = 60.08 * AMU

#: realistic zero-point smearing of nuclear positions in a Si crystal
NUCLEUS_RADIUS_REALISTIC = 5e-12
#: clamped-nucleus size
NUCLEUS_RADIUS_CONSERVATIVE = 1e-15


class InvalidSpecError(ValueError):
    """Raised when a physical description violates its invariants."""


@dataclass(frozen=True)
class PhysicalConstants:
    G: float = 6.674e-11
    hbar: float = 1.0546e-34

    def __post_init__(self):
        if not (self.G > 0 and self.hbar > 0):
            raise InvalidSpecError(f"constants must be positive, got G={self.G}, hbar={self.hbar}")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "PhysicalConstants":
        return cls(G=float(data["G"]), hbar=float(data["hbar"]))


DEFAULT_CONSTANTS = PhysicalConstants()


@dataclass(frozen=True)
class SphereSpec:
    """Homogeneous crystalline sphere.

    Parameters
    ----------
    radius : float
        Sphere radius R in m.
    density : float
        Mass density in kg/m^3.
    lattice_constant : float
        Edge of the cubic unit cell (inter-nuclear distance) in m.
    nucleus_radius : float
        Effective nucleus size (clamped radius or zero-point smearing) in m.
    atom_mass : float
        Mass of one elementary atom/molecule of the crystal in kg.
    """

    radius: float
    density: float
    lattice_constant: float = 1e-10
    nucleus_radius: float = NUCLEUS_RADIUS_REALISTIC
    atom_mass: float = SILICA_UNIT_MASS

    def __post_init__(self):
        for name in ("radius", "density", "lattice_constant", "nucleus_radius", "atom_mass"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise InvalidSpecError(f"{name} must be a positive finite number, got {value!r}")
        if not self.nucleus_radius < self.lattice_constant < self.radius:
            raise InvalidSpecError(
                "need nucleus_radius < lattice_constant < radius, got "
                f"{self.nucleus_radius} / {self.lattice_constant} / {self.radius}"
            )

    def mass(self) -> float:
        return sphere_mass(self)

    def atom_count(self) -> float:
        """Number N of elementary atoms, M/m (not rounded)."""
        return self.mass() / self.atom_mass

    def replace(self, **changes) -> "SphereSpec":
        data = asdict(self)
        data.update(changes)
        return SphereSpec(**data)

    def to_dict(self) -> dict:
        return {
            "radius_m": self.radius,
            "density_kg_m3": self.density,
            "lattice_constant_m": self.lattice_constant,
            "nucleus_radius_m": self.nucleus_radius,
            "atom_mass_kg": self.atom_mass,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SphereSpec":
        kwargs = {"radius": float(data["radius_m"]), "density": float(data["density_kg_m3"])}
        optional = {
            "lattice_constant_m": "lattice_constant",
            "nucleus_radius_m": "nucleus_radius",
            "atom_mass_kg": "atom_mass",
        }
        for key, name in optional.items():
            if key in data:
                kwargs[name] = float(data[key])
        return cls(**kwargs)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "SphereSpec":
        return cls.from_dict(json.loads(text))


def sphere_mass(spec: SphereSpec) -> float:
    return spec.density * (4.0 * math.pi / 3.0) * spec.radius**3


def unit_sphere(lattice_constant: float = 0.1, nucleus_radius: float = 0.01) -> SphereSpec:
    """Sphere with R = 1 m and M = 1 kg, for dimensionless checks with G = 1."""
    return SphereSpec(
        radius=1.0,
        density=3.0 / (4.0 * math.pi),
        lattice_constant=lattice_constant,
        nucleus_radius=nucleus_radius,
        atom_mass=1e-3,
    )


class Regime(enum.Enum):
    NUCLEAR = "nuclear"
    ATOMIC = "atomic"
    MESOSCOPIC = "mesoscopic"
    QUANTUM = "quantum"


@dataclass(frozen=True)
class RegimeLabel:
    """A regime together with the widths that delimit all four regimes.

    A width w falls in NUCLEAR for w <= nuclear_max, ATOMIC for
    nuclear_max < w <= atomic_max, MESOSCOPIC up to mesoscopic_max and
    QUANTUM beyond. Boundaries are non-decreasing; an empty atomic band
    is encoded as atomic_max == nuclear_max.
    """

    regime: Regime
    nuclear_max: float
    atomic_max: float
    mesoscopic_max: float

    def __post_init__(self):
        if not (0 < self.nuclear_max <= self.atomic_max < self.mesoscopic_max):
            raise InvalidSpecError(
                f"regime boundaries out of order: {self.nuclear_max}, {self.atomic_max}, {self.mesoscopic_max}"
            )

    def to_dict(self) -> dict:
        return {
            "regime": self.regime.value,
            "nuclear_max_m": self.nuclear_max,
            "atomic_max_m": self.atomic_max,
            "mesoscopic_max_m": self.mesoscopic_max,
        }
