"""Effective self-gravity kernels and width-dependent spring constants.

Every model provides a pair (V, k) tied by dV/dw = w k(w), where w is the
rms width sqrt(<r^2>) of the centre-of-mass packet. V is the conserved
potential part of the effective energy, k the spring constant of the
harmonic potential k r^2 / 2 that drives the Gaussian dynamics.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .core import DEFAULT_CONSTANTS, PhysicalConstants, SphereSpec

__all__ = [
    "ModelKind",
    "PotentialModel",
    "QuadratureError",
    "v_eff_sphere",
    "v_eff_sphere_quadrature",
    "spring_constant",
    "v_eff_antiderivative",
    "schmidt_kernel",
    "nuclear_kernel",
    "structure_corrected_spring",
    "overlap_branch",
]


class QuadratureError(RuntimeError):
    pass


class ModelKind(enum.Enum):
    EXACT_HOMOGENEOUS = "exact"
    PIECEWISE_SPRING = "piecewise"
    HYPERBOLIC_ONLY = "hyperbolic"
    DIOSI_HARMONIC = "diosi"
    SCHMIDT_ATOMIC = "schmidt"
    NUCLEAR_HARMONIC = "nuclear"
    STRUCTURE_CORRECTED_SPRING = "structure"
    FREE = "free"


@dataclass(frozen=True)
class PotentialModel:
    kind: ModelKind
    spec: SphereSpec
    constants: PhysicalConstants = field(default=DEFAULT_CONSTANTS)
    alpha: float = 1.0

    def __post_init__(self):
        if isinstance(self.kind, str):
            object.__setattr__(self, "kind", ModelKind(self.kind))
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")

    @property
    def mass(self) -> float:
        return self.spec.mass()

    @property
    def k0(self) -> float:
        """Harmonic (small width) spring constant G M^2 / R^3."""
        return self.constants.G * self.mass**2 / self.spec.radius**3


def _as_output(x, scalar):
    return float(x) if scalar else x


def _quintic(x):
    return -1.2 + 0.5 * x**2 - (3.0 / 16.0) * x**3 + x**5 / 160.0


def _sphere_potential(d, radius, gmm):
    """Overlap integral of two homogeneous spheres with G M1 M2 = gmm."""
    d = np.asarray(d, dtype=float)
    x = d / radius
    inner = gmm / radius * _quintic(np.minimum(x, 2.0))
    with np.errstate(divide="ignore"):
        outer = -gmm / np.where(d > 0, d, np.inf)
    return np.where(x <= 2.0, inner, outer)


def _sphere_spring(w, radius, gmm):
    w = np.asarray(w, dtype=float)
    x = w / radius
    inner = gmm / radius**3 * (1.0 - (9.0 / 16.0) * x + x**3 / 32.0)
    with np.errstate(divide="ignore"):
        outer = gmm / np.where(w > 0, w, np.inf) ** 3
    return np.where(x < 2.0, inner, outer)


def _check_nonnegative(d, name="d"):
    arr = np.asarray(d, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr < 0):
        raise ValueError(f"{name} must be finite and >= 0")
    return arr


def _check_positive(w, name="width"):
    arr = np.asarray(w, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr <= 0):
        raise ValueError(f"{name} must be finite and > 0")
    return arr


def overlap_branch(d, spec: SphereSpec):
    """'quintic' where the two sphere copies overlap (d <= 2R), else 'coulomb'."""
    arr = np.asarray(d, dtype=float)
    out = np.where(arr <= 2.0 * spec.radius, "quintic", "coulomb")
    return str(out) if out.ndim == 0 else out


def v_eff_sphere(d, spec: SphereSpec, constants: PhysicalConstants = DEFAULT_CONSTANTS):
    """Exact self-energy between a homogeneous sphere and its copy displaced by d.

    Quintic in d/R for d <= 2R, Coulomb -G M^2 / d beyond.
    """
    arr = _check_nonnegative(d)
    M = spec.mass()
    out = _sphere_potential(arr, spec.radius, constants.G * M * M)
    return _as_output(out, arr.ndim == 0)


def _simpson(f, lo, hi, n):
    if hi <= lo:
        return 0.0
    n += n % 2
    r = np.linspace(lo, hi, n + 1)
    y = f(r)
    h = (hi - lo) / n
    return h / 3.0 * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-1:2].sum())


def _slice_integral(d, R, n):
    """Bracketed slice integral in units G = M = 1, multiplied out by the caller."""
    if d == 0.0:
        # single sphere: full shells of radius r inside the partner
        return _simpson(lambda r: 2.0 * r * r * (1.5 - r * r / (2 * R * R)), 0.0, R, n)

    def cap(r):
        return r * (R * R - (r - d) ** 2) / (2.0 * d)

    inner_lo, inner_hi = d - R, R
    outer_lo, outer_hi = max(R, d - R), d + R
    len_in = max(inner_hi - inner_lo, 0.0)
    len_out = outer_hi - outer_lo
    n_in = max(int(round(n * len_in / (len_in + len_out))), 2) if len_in > 0 else 0
    n_out = max(n - n_in, 2)
    total = 0.0
    if len_in > 0:
        # lower limit d - R < 0 when d < R: the odd part of the integrand over
        # [-(R - d), R - d] reproduces the full shells around the origin
        total += _simpson(lambda r: cap(r) * (1.5 - r * r / (2 * R * R)), inner_lo, inner_hi, n_in)
    total += _simpson(lambda r: cap(r) * R / r, outer_lo, outer_hi, n_out)
    return total


def v_eff_sphere_quadrature(
    d: float,
    spec: SphereSpec,
    constants: PhysicalConstants = DEFAULT_CONSTANTS,
    subdivisions: int = 10_000,
    rtol: float | None = None,
) -> float:
    """Brute-force evaluation of the sphere overlap energy by slice integration.

    The partner sphere is cut into spherical shells of radius r centred on
    the first sphere; each shell's cap inside the partner is weighted by the
    first sphere's potential (interior parabola for r < R, Coulomb tail
    beyond). Composite Simpson, split at r = R where the integrand has a
    kink. If ``rtol`` is given, a Richardson estimate of the truncation
    error is compared against it and :class:`QuadratureError` raised when
    the subdivision count is insufficient.
    """
    if not d >= 0 or not math.isfinite(d):
        raise ValueError(f"d must be finite and >= 0, got {d}")
    if subdivisions < 16:
        raise ValueError("need at least 16 subdivisions")
    R = spec.radius
    M = spec.mass()
    scale = -1.5 * constants.G * M * M / R**4
    value = scale * _slice_integral(float(d), R, subdivisions)
    if rtol is not None:
        coarse = scale * _slice_integral(float(d), R, subdivisions // 2)
        err = abs(value - coarse) / 15.0
        if err > rtol * abs(value):
            raise QuadratureError(
                f"estimated relative error {err / abs(value):.3e} exceeds rtol={rtol:.1e} "
                f"with {subdivisions} subdivisions"
            )
    return float(value)


def spring_constant(width, model: PotentialModel):
    """Spring constant k(w) in J/m^2 for rms width w."""
    w = _check_positive(width)
    G = model.constants.G
    M = model.mass
    R = model.spec.radius
    kind = model.kind
    a = model.alpha
    if kind in (ModelKind.EXACT_HOMOGENEOUS, ModelKind.PIECEWISE_SPRING):
        out = _sphere_spring(a * w, R, G * M * M)
    elif kind is ModelKind.HYPERBOLIC_ONLY:
        out = G * M * M / (a * w) ** 3
    elif kind is ModelKind.DIOSI_HARMONIC:
        out = np.full_like(w, model.k0)
    elif kind is ModelKind.SCHMIDT_ATOMIC:
        out = _schmidt_gnm2(model.spec, model.constants) / w**3
    elif kind is ModelKind.NUCLEAR_HARMONIC:
        out = _sphere_spring(w, model.spec.nucleus_radius, _schmidt_gnm2(model.spec, model.constants))
    elif kind is ModelKind.STRUCTURE_CORRECTED_SPRING:
        out = _sphere_spring(a * w, R, G * M * M) + _sphere_spring(
            w, model.spec.nucleus_radius, _schmidt_gnm2(model.spec, model.constants)
        )
    elif kind is ModelKind.FREE:
        out = np.zeros_like(w)
    else:  # pragma: no cover
        raise ValueError(kind)
    return _as_output(out, w.ndim == 0)


def v_eff_antiderivative(width, model: PotentialModel):
    """Conserved potential V(w) with dV/dw = w k(w), pinned to the exact sphere energy.

    For the piecewise family with alpha != 1 the curve is V(alpha w) / alpha^2,
    which reduces to -G M^2 / (alpha^3 w) on the Coulomb branch.
    """
    w = _check_positive(width)
    G = model.constants.G
    M = model.mass
    R = model.spec.radius
    kind = model.kind
    a = model.alpha
    if kind in (ModelKind.EXACT_HOMOGENEOUS, ModelKind.PIECEWISE_SPRING):
        out = _sphere_potential(a * w, R, G * M * M) / a**2
    elif kind is ModelKind.HYPERBOLIC_ONLY:
        out = -G * M * M / (a**3 * w)
    elif kind is ModelKind.DIOSI_HARMONIC:
        out = G * M * M / R * (-1.2 + 0.5 * (w / R) ** 2)
    elif kind is ModelKind.SCHMIDT_ATOMIC:
        out = -_schmidt_gnm2(model.spec, model.constants) / w
    elif kind is ModelKind.NUCLEAR_HARMONIC:
        out = _sphere_potential(w, model.spec.nucleus_radius, _schmidt_gnm2(model.spec, model.constants))
    elif kind is ModelKind.STRUCTURE_CORRECTED_SPRING:
        out = _sphere_potential(a * w, R, G * M * M) / a**2 + _sphere_potential(
            w, model.spec.nucleus_radius, _schmidt_gnm2(model.spec, model.constants)
        )
    elif kind is ModelKind.FREE:
        out = np.zeros_like(w)
    else:  # pragma: no cover
        raise ValueError(kind)
    return _as_output(out, w.ndim == 0)


def _schmidt_gnm2(spec: SphereSpec, constants: PhysicalConstants) -> float:
    # G N m^2 with N = M / m, i.e. G M m
    return constants.G * spec.atom_count() * spec.atom_mass**2


def schmidt_kernel(d, spec: SphereSpec, constants: PhysicalConstants = DEFAULT_CONSTANTS):
    """Sum of the single-nucleus Coulomb self-kernels, -G N m^2 / d."""
    arr = np.asarray(d, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr <= 0):
        raise ValueError("schmidt_kernel is singular at d = 0; need d > 0")
    out = -_schmidt_gnm2(spec, constants) / arr
    return _as_output(out, arr.ndim == 0)


def schmidt_crossover(spec: SphereSpec) -> float:
    """Distance 5R/(6N) where the Schmidt kernel reaches the homogeneous depth (6/5) G M^2 / R."""
    return 5.0 * spec.radius / (6.0 * spec.atom_count())


def nuclear_kernel(d, spec: SphereSpec, constants: PhysicalConstants = DEFAULT_CONSTANTS):
    """Per-nucleus homogeneous-sphere kernel scaled by N m^2.

    Harmonic-plus-quintic inside d <= 2 r_nucleus, Coulomb -G N m^2 / d beyond,
    so the kernel joins the Schmidt form at large d.
    """
    arr = _check_nonnegative(d)
    out = _sphere_potential(arr, spec.nucleus_radius, _schmidt_gnm2(spec, constants))
    return _as_output(out, arr.ndim == 0)


def structure_corrected_spring(
    spec: SphereSpec,
    constants: PhysicalConstants = DEFAULT_CONSTANTS,
    bohr_radius: float = 1e-10,
) -> tuple[float, float, float]:
    """Return (k_total, k_hom, k_nucleic) in J/m^2.

    k_hom = G M^2 / a0^3 and k_nucleic = G M^2 / (N dx_zp^3), with dx_zp the
    nucleus radius of ``spec``; their ratio is (a0 / dx_zp)^3 / N.
    """
    if not bohr_radius > 0:
        raise ValueError("bohr_radius must be positive")
    N = spec.atom_count()
    if not N > 0:
        raise ValueError("atom count must be positive")
    M = spec.mass()
    gmm = constants.G * M * M
    k_hom = gmm / bohr_radius**3
    k_nuc = gmm / (N * spec.nucleus_radius**3)
    return k_hom + k_nuc, k_hom, k_nuc
