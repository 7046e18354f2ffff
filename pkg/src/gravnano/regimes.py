"""Regime classification and closed-form feasibility estimates."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import DEFAULT_CONSTANTS, PhysicalConstants, Regime, RegimeLabel, SphereSpec
from .dynamics import bound_state_width
from .potentials import ModelKind, PotentialModel

__all__ = [
    "regime_boundaries",
    "classify",
    "mesoscopic_radius",
    "critical_atom_numbers",
    "van_meter_threshold",
    "lambda_crit",
    "lambda_deco",
    "is_robust",
    "dp_collapse_time",
    "entanglement_bound",
    "RegimeReport",
    "regime_report",
]

#: lowest Choquard eigenvalue used by the collapse-time estimate
GROUND_EIGENVALUE = 0.163
VAN_METER_FACTOR = 1.14**3


def regime_boundaries(spec: SphereSpec) -> tuple[float, float, float]:
    """(nuclear_max, atomic_max, mesoscopic_max) widths in m.

    The atomic band ends where the summed single-nucleus kernel equals the
    homogeneous depth, (6/5) R / N. For small N this can fall below
    2 r_nucleus; the atomic band is then empty and its upper edge is pinned
    to the nuclear one.
    """
    nuclear = 2.0 * spec.nucleus_radius
    atomic = max(1.2 * spec.radius / spec.atom_count(), nuclear)
    meso = 2.0 * spec.radius
    atomic = min(atomic, meso * (1.0 - 1e-15))
    return nuclear, atomic, meso


def classify(spec: SphereSpec, width: float, constants: PhysicalConstants = DEFAULT_CONSTANTS) -> RegimeLabel:
    """Label a centre-of-mass width; each band is closed on the right."""
    if not width > 0:
        raise ValueError("width must be positive")
    nuclear, atomic, meso = regime_boundaries(spec)
    if width <= nuclear:
        regime = Regime.NUCLEAR
    elif width <= atomic:
        regime = Regime.ATOMIC
    elif width <= meso:
        regime = Regime.MESOSCOPIC
    else:
        regime = Regime.QUANTUM
    return RegimeLabel(regime, nuclear, atomic, meso)


def mesoscopic_radius(rho: float, constants: PhysicalConstants = DEFAULT_CONSTANTS) -> float:
    """Radius where hbar^2 / (G M^3) equals R for a sphere of density rho."""
    if not rho > 0:
        raise ValueError("rho must be positive")
    return (constants.hbar**2 / (constants.G * rho**3 * (4.0 * math.pi / 3.0) ** 3)) ** 0.1


def critical_atom_numbers(spec: SphereSpec, constants: PhysicalConstants = DEFAULT_CONSTANTS) -> tuple[float, float]:
    """Atom numbers where hbar^2 / (G m^3 N^2) reaches delta and r_nucleus."""
    m = spec.atom_mass
    n_atomic = math.sqrt(constants.hbar**2 / (constants.G * m**3 * spec.lattice_constant))
    return n_atomic, n_atomic * math.sqrt(spec.lattice_constant / spec.nucleus_radius)


def van_meter_threshold(M: float, constants: PhysicalConstants = DEFAULT_CONSTANTS) -> float:
    """Collapse threshold width 1.14^3 hbar^2 / (G M^3) from full time-dependent runs."""
    if not M > 0:
        raise ValueError("M must be positive")
    return VAN_METER_FACTOR * constants.hbar**2 / (constants.G * M**3)


def lambda_crit(spec: SphereSpec, width: float, constants: PhysicalConstants = DEFAULT_CONSTANTS) -> float:
    """Decoherence-strength threshold below which self-gravity is not washed out.

    G^4 M^11 / hbar^7 for width > 2R, G M^2 R^-3 / hbar otherwise. The two
    branches are not dimensionally homogeneous and are used as separate
    threshold families; the jump at width = 2R is intended.
    """
    if not width > 0:
        raise ValueError("width must be positive")
    M = spec.mass()
    G, hbar = constants.G, constants.hbar
    if width > 2.0 * spec.radius:
        return G**4 * M**11 / hbar**7
    return G * M**2 / (spec.radius**3 * hbar)


def lambda_deco(gamma: float, alpha_loc: float) -> float:
    """Localisation rate times inverse squared localisation length."""
    if gamma < 0 or alpha_loc < 0:
        raise ValueError("gamma and alpha_loc must be >= 0")
    return gamma * alpha_loc


def is_robust(spec: SphereSpec, width: float, gamma: float, alpha_loc: float, constants=DEFAULT_CONSTANTS) -> bool:
    return lambda_deco(gamma, alpha_loc) / lambda_crit(spec, width, constants) < 1.0


def dp_collapse_time(M: float, constants: PhysicalConstants = DEFAULT_CONSTANTS) -> float:
    """hbar / (e_0 G^2 M^5 / hbar^2) with e_0 = 0.163."""
    if not M > 0:
        raise ValueError("M must be positive")
    return constants.hbar**3 / (GROUND_EIGENVALUE * constants.G**2 * M**5)


def entanglement_bound(spec: SphereSpec, t: float, constants: PhysicalConstants = DEFAULT_CONSTANTS) -> float:
    """Upper bound (6 G M^2 t / (5 hbar R))^2 on the purity loss between centre of mass and internal motion."""
    if t < 0:
        raise ValueError("t must be >= 0")
    M = spec.mass()
    return (6.0 * constants.G * M**2 * t / (5.0 * constants.hbar * spec.radius)) ** 2


@dataclass(frozen=True)
class RegimeReport:
    label: RegimeLabel
    width: float
    bound_width: float
    mesoscopic_radius: float
    N_c_atomic: float
    N_c_nuclear: float
    van_meter_width: float
    lambda_crit: float
    dp_collapse_time: float
    entanglement_bound: float
    entanglement_time: float

    def to_dict(self) -> dict:
        return {
            "label": self.label.to_dict(),
            "width_m": self.width,
            "bound_width_m": self.bound_width,
            "mesoscopic_radius_m": self.mesoscopic_radius,
            "N_c_atomic": self.N_c_atomic,
            "N_c_nuclear": self.N_c_nuclear,
            "van_meter_width_m": self.van_meter_width,
            "lambda_crit": self.lambda_crit,
            "dp_collapse_time_s": self.dp_collapse_time,
            "entanglement_bound": self.entanglement_bound,
            "entanglement_time_s": self.entanglement_time,
        }


def regime_report(
    spec: SphereSpec,
    width: float,
    constants: PhysicalConstants = DEFAULT_CONSTANTS,
    entanglement_time: float = 1200.0,
) -> RegimeReport:
    M = spec.mass()
    n_at, n_nuc = critical_atom_numbers(spec, constants)
    return RegimeReport(
        label=classify(spec, width, constants),
        width=width,
        bound_width=bound_state_width(spec, PotentialModel(ModelKind.PIECEWISE_SPRING, spec, constants)),
        mesoscopic_radius=mesoscopic_radius(spec.density, constants),
        N_c_atomic=n_at,
        N_c_nuclear=n_nuc,
        van_meter_width=van_meter_threshold(M, constants),
        lambda_crit=lambda_crit(spec, width, constants),
        dp_collapse_time=dp_collapse_time(M, constants),
        entanglement_bound=entanglement_bound(spec, entanglement_time, constants),
        entanglement_time=entanglement_time,
    )
