"""Gaussian centre-of-mass dynamics under a width-dependent harmonic self-potential.

The packet is psi(u) ~ exp(-(a + i b) u^2 / (2 L^2) + i phase) per axis, with
L = sqrt(hbar / sqrt(k0 M)) and k0 = G M^2 / R^3. In the dimensionless time
tau = omega t, omega = sqrt(k0 / M), the variational equations read

    da/dtau = 2 a b
    db/dtau = k(w) / k0 + b^2 - a^2
    dphase/dtau = a / 2

where w = sqrt(<r^2>) = sqrt(3/2) L / sqrt(a) and k(w) is the spring constant
of the chosen :class:`~gravnano.potentials.PotentialModel`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .core import DEFAULT_CONSTANTS, PhysicalConstants, SphereSpec
from .potentials import ModelKind, PotentialModel, spring_constant, v_eff_antiderivative

__all__ = [
    "IntegrationError",
    "GaussianState",
    "Trajectory",
    "characteristic_scale",
    "derivatives",
    "evolve",
    "bound_state_width",
    "effective_energy",
    "stability_threshold",
    "free_spread",
    "free_width",
    "separation_time",
    "confinement_bound",
]

_SQRT_3_2 = math.sqrt(1.5)
# integrator tolerance relative to the caller's rel_tol; the global error of
# an embedded 4(5) pair grows over many steps, so the local target is tighter
_TOL_FACTOR = 1e-2
_MIN_RTOL = 2.3e-14


class IntegrationError(RuntimeError):
    """The ODE integration failed (collapse to a <= 0 or step underflow)."""


def characteristic_scale(spec: SphereSpec, constants: PhysicalConstants = DEFAULT_CONSTANTS) -> float:
    """L = sqrt(hbar / sqrt(k0 M)) with k0 = G M^2 / R^3."""
    M = spec.mass()
    k0 = constants.G * M * M / spec.radius**3
    return math.sqrt(constants.hbar / math.sqrt(k0 * M))


@dataclass(frozen=True)
class GaussianState:
    """Variational Gaussian state.

    ``width`` is the 3D rms width sqrt(<r^2>) = sqrt(3) L / sqrt(2 a).
    ``axis_spread`` is the amplitude parameter L / sqrt(a) of the per-axis
    Gaussian exp(-u^2 / (2 dx^2)), the quantity that obeys the free
    spreading law; ``axis_std`` = L / sqrt(2 a) is the per-axis standard
    deviation of |psi|^2.
    """

    a: float
    b: float
    phase: float
    L: float
    M: float

    def __post_init__(self):
        if not (self.a > 0 and math.isfinite(self.a)):
            raise ValueError(f"a must be positive and finite, got {self.a}")
        if not (self.L > 0 and self.M > 0):
            raise ValueError("L and M must be positive")

    def width(self) -> float:
        return _SQRT_3_2 * self.L / math.sqrt(self.a)

    def axis_spread(self) -> float:
        return self.L / math.sqrt(self.a)

    def axis_std(self) -> float:
        return self.L / math.sqrt(2.0 * self.a)

    @classmethod
    def from_spread(cls, delta_x0: float, spec: SphereSpec, constants=DEFAULT_CONSTANTS, b: float = 0.0):
        """Real Gaussian (b = 0 by default) with per-axis amplitude spread delta_x0."""
        if not delta_x0 > 0:
            raise ValueError("delta_x0 must be positive")
        L = characteristic_scale(spec, constants)
        return cls(a=(L / delta_x0) ** 2, b=b, phase=0.0, L=L, M=spec.mass())

    @classmethod
    def from_width(cls, width: float, spec: SphereSpec, constants=DEFAULT_CONSTANTS, b: float = 0.0):
        """State with 3D rms width sqrt(<r^2>) = width."""
        return cls.from_spread(width / _SQRT_3_2, spec, constants, b=b)


@dataclass(frozen=True)
class Trajectory:
    """Sampled solution of :func:`evolve`; all arrays share the time axis."""

    t: np.ndarray
    a: np.ndarray
    b: np.ndarray
    phase: np.ndarray
    width: np.ndarray
    k: np.ndarray
    energy: np.ndarray

    def __len__(self):
        return len(self.t)

    def max_energy_drift(self) -> float:
        e0 = self.energy[0]
        return float(np.max(np.abs(self.energy - e0)) / abs(e0))

    def axis_spread(self, L: float) -> np.ndarray:
        return L / np.sqrt(self.a)


def _omega(model: PotentialModel, M: float) -> float:
    return math.sqrt(model.k0 / M)


def _check_consistent(state: GaussianState, model: PotentialModel):
    if abs(state.M / model.mass - 1.0) > 1e-9:
        raise ValueError(f"state mass {state.M} does not match model sphere mass {model.mass}")


def derivatives(state: GaussianState, model: PotentialModel) -> tuple[float, float, float]:
    """(da/dt, db/dt, dphase/dt) in 1/s."""
    if not state.a > 0:
        raise IntegrationError(f"a = {state.a} <= 0: state collapsed")
    w = _omega(model, state.M)
    k = spring_constant(state.width(), model)
    return (
        2.0 * state.a * state.b * w,
        (k / model.k0 + state.b**2 - state.a**2) * w,
        0.5 * state.a * w,
    )


def _rhs_factory(model: PotentialModel, L: float):
    k0 = model.k0
    scale = _SQRT_3_2 * L

    def rhs(tau, y):
        a, b = y[0], y[1]
        if a <= 0:
            return np.array([0.0, 0.0, 0.0])
        kk = spring_constant(scale / math.sqrt(a), model) / k0
        return np.array([2.0 * a * b, kk + b * b - a * a, 0.5 * a])

    return rhs


def _collapse_event(tau, y):
    return y[0]


_collapse_event.terminal = True
_collapse_event.direction = -1


def _solve(initial: GaussianState, model: PotentialModel, tau_end: float, rel_tol: float, tau_eval=None, dense=False):
    if not (1e-13 <= rel_tol <= 1e-3):
        raise ValueError(f"rel_tol must lie in [1e-13, 1e-3], got {rel_tol}")
    rtol = max(rel_tol * _TOL_FACTOR, _MIN_RTOL)
    y0 = np.array([initial.a, initial.b, initial.phase])
    # b and phase can pass through zero; scale their absolute floor by a
    atol = rtol * np.array([initial.a, max(initial.a, 1.0), max(initial.a, 1.0)]) * 1e-3
    sol = solve_ivp(
        _rhs_factory(model, initial.L),
        (0.0, tau_end),
        y0,
        method="RK45",
        t_eval=tau_eval,
        rtol=rtol,
        atol=atol,
        events=_collapse_event,
        dense_output=dense,
    )
    if sol.status == 1 or (sol.t_events[0].size and sol.t_events[0][0] <= tau_end):
        raise IntegrationError(f"width parameter a reached 0 at t = {sol.t_events[0][0]:.6e} (dimensionless)")
    if sol.status != 0:
        raise IntegrationError(sol.message)
    return sol


def evolve(
    initial: GaussianState,
    model: PotentialModel,
    t_end: float,
    rel_tol: float = 1e-10,
    samples: int = 201,
    times=None,
) -> Trajectory:
    """Integrate the Gaussian equations from t = 0 to ``t_end`` seconds.

    Samples are emitted on ``samples`` evenly spaced times, or on the
    increasing array ``times`` when given (it must lie in [0, t_end]).
    """
    if not t_end > 0:
        raise ValueError("t_end must be positive")
    _check_consistent(initial, model)
    omega = _omega(model, initial.M)
    if times is None:
        t = np.linspace(0.0, t_end, max(int(samples), 2))
    else:
        t = np.asarray(times, dtype=float)
        if t.ndim != 1 or np.any(np.diff(t) <= 0) or t[0] < 0 or t[-1] > t_end:
            raise ValueError("times must be strictly increasing within [0, t_end]")
    sol = _solve(initial, model, t_end * omega, rel_tol, tau_eval=t * omega)
    return _trajectory(t, sol.y, initial, model)


def _trajectory(t, y, initial: GaussianState, model: PotentialModel) -> Trajectory:
    a, b, ph = y
    width = _SQRT_3_2 * initial.L / np.sqrt(a)
    k = np.asarray(spring_constant(width, model), dtype=float)
    energy = _energy(a, b, width, initial, model)
    return Trajectory(t=np.asarray(t), a=a, b=b, phase=ph, width=width, k=k, energy=energy)


def _energy(a, b, width, state: GaussianState, model: PotentialModel):
    hbar_omega = model.constants.hbar * _omega(model, state.M)
    kinetic = 0.75 * hbar_omega * (a * a + b * b) / a
    return kinetic + np.asarray(v_eff_antiderivative(width, model), dtype=float)


def effective_energy(state: GaussianState, model: PotentialModel) -> float:
    """(3 hbar^2 / 4M) (a^2 + b^2) / (a L^2) + V(w), in J."""
    _check_consistent(state, model)
    return float(_energy(state.a, state.b, state.width(), state, model))


def bound_state_width(
    spec: SphereSpec,
    model: PotentialModel | None = None,
    constants: PhysicalConstants | None = None,
) -> float:
    """Width of the stationary real Gaussian, solving a^2 = k(w(a)) / k0.

    Written in w, the condition is k(w) w^4 / k0 = 9 L^4 / 4, whose left side
    increases monotonically, so the root is bracketed on a log grid and
    polished by Brent's method.
    """
    if model is None:
        model = PotentialModel(ModelKind.PIECEWISE_SPRING, spec, constants or DEFAULT_CONSTANTS)
    if model.kind not in (ModelKind.PIECEWISE_SPRING, ModelKind.HYPERBOLIC_ONLY, ModelKind.EXACT_HOMOGENEOUS):
        raise ValueError(f"bound states need a piecewise or hyperbolic model, got {model.kind.value}")
    constants = constants or model.constants
    spec = model.spec
    L = characteristic_scale(spec, constants)
    k0 = model.k0
    target = 2.25 * L**4
    R = spec.radius

    def f(logw):
        w = math.exp(logw)
        return math.log(spring_constant(w, model) * w**4 / k0) - math.log(target)

    # the root is near 1.2 L on the harmonic side and equals the hyperbolic
    # width 9 alpha^3 hbar^2 / (4 G M^3) beyond 2R
    M = spec.mass()
    w_hyp = 2.25 * model.alpha**3 * constants.hbar**2 / (constants.G * M**3)
    lo = math.log(0.1 * min(L, w_hyp))
    hi = math.log(10.0 * max(L, w_hyp, 2.0 * R))
    flo, fhi = f(lo), f(hi)
    if flo * fhi > 0:
        raise ValueError(f"no bound state in width bracket [{math.exp(lo):.3e}, {math.exp(hi):.3e}] m")
    return math.exp(brentq(f, lo, hi, xtol=1e-15, rtol=1e-15, maxiter=500))


def stability_threshold(M: float, alpha: float = 1.0, constants: PhysicalConstants = DEFAULT_CONSTANTS) -> float:
    """(9/8) alpha^3 hbar^2 / (G M^3): real Gaussians narrower than this escape."""
    if not M > 0:
        raise ValueError("M must be positive")
    return 1.125 * alpha**3 * constants.hbar**2 / (constants.G * M**3)


def free_spread(delta_x0: float, M: float, t, constants: PhysicalConstants = DEFAULT_CONSTANTS):
    """Per-axis amplitude spread of a free Gaussian, dx0 sqrt(1 + (hbar t / (dx0^2 M))^2)."""
    if not (delta_x0 > 0 and M > 0):
        raise ValueError("delta_x0 and M must be positive")
    tt = np.asarray(t, dtype=float)
    out = delta_x0 * np.sqrt(1.0 + (constants.hbar * tt / (delta_x0**2 * M)) ** 2)
    return float(out) if tt.ndim == 0 else out


def free_width(delta_x0: float, M: float, t, constants: PhysicalConstants = DEFAULT_CONSTANTS):
    """3D rms width sqrt(3/2) * free_spread of the free packet."""
    return _SQRT_3_2 * free_spread(delta_x0, M, t, constants)


def separation_time(
    spec: SphereSpec,
    delta_x0: float,
    threshold: float,
    model: PotentialModel | None = None,
    rel_tol: float = 1e-10,
    horizon: float = 1e5,
    constants: PhysicalConstants | None = None,
    grid: int = 4000,
) -> float:
    """Earliest t (s) at which free and self-gravitating 3D widths differ by ``threshold``.

    The self-gravitating packet starts as a real Gaussian with per-axis
    spread ``delta_x0``. The gap is scanned on a uniform grid over
    ``horizon`` and the first crossing is refined with Brent's method on
    the integrator's dense output.
    """
    if model is None:
        model = PotentialModel(ModelKind.PIECEWISE_SPRING, spec, constants or DEFAULT_CONSTANTS)
    constants = constants or model.constants
    if threshold < 0:
        raise ValueError("threshold must be >= 0")
    if threshold == 0:
        return 0.0
    state = GaussianState.from_spread(delta_x0, spec, constants)
    M = state.M
    omega = _omega(model, M)
    # late-time integration can be far more expensive than the crossing
    # itself, so the window grows geometrically up to the horizon
    window = horizon / 1024.0
    while True:
        window = min(2.0 * window, horizon)
        found = _first_crossing(state, model, delta_x0, threshold, window, omega, rel_tol, grid, constants)
        if found is not None:
            return found
        if window >= horizon:
            break
    raise ValueError(f"widths never separate by {threshold:.3e} m within {horizon:.3e} s")


def _first_crossing(state, model, delta_x0, threshold, window, omega, rel_tol, grid, constants):
    sol = _solve(state, model, window * omega, rel_tol, dense=True)
    M = state.M

    def gap(t):
        a = sol.sol(t * omega)[0]
        w = _SQRT_3_2 * state.L / math.sqrt(a)
        return abs(free_width(delta_x0, M, t, constants) - w) - threshold

    ts = np.linspace(0.0, window, grid + 1)
    if gap(ts[0]) >= 0:
        return 0.0
    for t0, t1 in zip(ts[:-1], ts[1:]):
        if gap(t1) >= 0:
            return float(brentq(gap, t0, t1, xtol=1e-12 * window, rtol=1e-12))
    return None


def confinement_bound(spec: SphereSpec, constants: PhysicalConstants = DEFAULT_CONSTANTS) -> float:
    """Smallest initial spread sqrt(hbar^2 R / (1.4 G M^3)) that stays trapped."""
    M = spec.mass()
    return math.sqrt(constants.hbar**2 * spec.radius / (1.4 * constants.G * M**3))
