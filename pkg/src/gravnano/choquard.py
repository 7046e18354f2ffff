"""Radial bound states of the stationary Choquard equation.

Units hbar = G = M = 1. With V = -Phi - E (E > 0 the binding eigenvalue)
the radial system is

    phi'' + 2 phi' / r = -2 V phi
    V''   + 2 V'   / r = -4 pi phi^2

shot outward from phi(0) = A, V(0) = V0 on a uniform grid with classical RK4.
For fixed A the node count of the (eventually diverging) trial solution grows
with V0; the eigenvalue sits at the jump from n to n + 1 nodes, located by
vectorised multisection. Any solution is rescaled to unit norm with the
symmetry phi -> lam^2 phi(lam r), under which E / N^2 is invariant and the
total energies E_K, E_P scale as N^3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import simpson
from scipy.optimize import least_squares

from .core import DEFAULT_CONSTANTS, PhysicalConstants, SphereSpec

__all__ = [
    "ShootingError",
    "RadialGrid",
    "ChoquardSolution",
    "shoot_state",
    "virial_check",
    "SpectrumFit",
    "spectrum_fit",
    "diosi_ground_state",
]

FOUR_PI = 4.0 * math.pi
# trial solutions with |phi| above this multiple of phi(0) count as diverged
_BLOWUP = 4.0
# accepted states must decay below this fraction of their peak before truncation
_TAIL_FRACTION = 1e-3


class ShootingError(RuntimeError):
    pass


@dataclass(frozen=True)
class RadialGrid:
    """Uniform grid of ``steps`` intervals on [0, r_max] (r_max at unit central amplitude)."""

    r_max: float = 40.0
    steps: int = 8000

    def __post_init__(self):
        if not self.r_max > 0:
            raise ValueError("r_max must be positive")
        if self.steps < 100:
            raise ValueError("need at least 100 steps")

    @property
    def h(self) -> float:
        return self.r_max / self.steps

    def refined(self) -> "RadialGrid":
        """Half the step on twice the range."""
        return RadialGrid(2.0 * self.r_max, 4 * self.steps)


@dataclass(frozen=True)
class ChoquardSolution:
    """Bound state rescaled to unit norm.

    ``eigenvalue`` is e_n (binding energy in units G^2 M^5 / hbar^2);
    ``r`` is in units hbar^2 / (G M^3).
    """

    node_count: int
    eigenvalue: float
    r: np.ndarray = field(repr=False)
    phi: np.ndarray = field(repr=False)
    E_K: float
    E_P: float
    N_norm: float
    v0: float
    amplitude: float
    grid: RadialGrid

    @property
    def E_total(self) -> float:
        return self.E_K + self.E_P

    def to_dict(self) -> dict:
        r1, r2, r3 = virial_check(self)
        return {
            "n": self.node_count,
            "e_n": self.eigenvalue,
            "E_K": self.E_K,
            "E_P": self.E_P,
            "N_norm": self.N_norm,
            "virial_residuals": [r1, r2, r3],
        }


def _series_start(v0, amp, r):
    """Values and slopes of (phi, V) at small r from the Taylor expansion about r = 0."""
    a2 = amp * amp
    c4 = (v0 * v0 + 2.0 * math.pi * a2) / 30.0
    d4 = 2.0 * math.pi * a2 * v0 / 15.0
    phi = amp * (1.0 - v0 / 3.0 * r**2 + c4 * r**4)
    dphi = amp * (-2.0 * v0 / 3.0 * r + 4.0 * c4 * r**3)
    V = v0 - 2.0 * math.pi * a2 / 3.0 * r**2 + d4 * r**4
    dV = -4.0 * math.pi * a2 / 3.0 * r + 4.0 * d4 * r**3
    return phi, dphi, V, dV


def _rhs(r, p, dp, V, dV):
    return dp, -2.0 * V * p - 2.0 * dp / r, dV, -FOUR_PI * p * p - 2.0 * dV / r


def _integrate(v0s, amp, r_max, steps, keep=False):
    """RK4 on a batch of trial V0 values.

    Returns node counts, and with ``keep`` also the full profiles.
    Diverged trajectories are frozen at the step they cross the blow-up bound.
    """
    v0s = np.atleast_1d(np.asarray(v0s, dtype=float))
    h = r_max / steps
    r = h
    y = list(_series_start(v0s, amp, np.float64(h)))
    alive = np.ones(v0s.shape, dtype=bool)
    nodes = np.zeros(v0s.shape, dtype=np.int64)
    sign = np.sign(y[0])
    if keep:
        out = np.empty((4, steps + 1, v0s.size))
        out[:, 0, :] = 0.0
        out[0, 0, :] = amp
        out[2, 0, :] = v0s
        out[:, 1, :] = np.array(y)
    cap = _BLOWUP * amp
    for i in range(1, steps):
        k1 = _rhs(r, *y)
        k2 = _rhs(r + 0.5 * h, *[y[j] + 0.5 * h * k1[j] for j in range(4)])
        k3 = _rhs(r + 0.5 * h, *[y[j] + 0.5 * h * k2[j] for j in range(4)])
        k4 = _rhs(r + h, *[y[j] + h * k3[j] for j in range(4)])
        new = [
            np.where(alive, y[j] + h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]), y[j])
            for j in range(4)
        ]
        r += h
        y = new
        s = np.sign(y[0])
        crossed = alive & (s != sign) & (s != 0)
        nodes += crossed
        sign = np.where(crossed, s, sign)
        alive &= np.abs(y[0]) < cap
        if keep:
            out[:, i + 1, :] = y
        if not alive.any() and not keep:
            break
    if keep:
        return nodes, out
    return nodes


def _bracket(n, amp, grid, r_max, scan=96):
    v0s = amp * np.geomspace(1e-3, 1e2, scan)
    nodes = _integrate(v0s, amp, r_max, grid.steps)
    above = np.nonzero(nodes > n)[0]
    if above.size == 0:
        raise ShootingError(f"no trial solution with more than {n} nodes; enlarge the grid")
    j = above[0]
    if j == 0:
        raise ShootingError(f"smallest trial V0 already has {nodes[0]} > {n} nodes")
    # the count may jump by more than one between scan points; the
    # multisection that follows settles on the n -> n + 1 edge
    return v0s[j - 1], v0s[j]


def _refine(n, amp, lo, hi, grid, r_max, width=32):
    while True:
        trial = np.linspace(lo, hi, width + 2)[1:-1]
        trial = trial[(trial > lo) & (trial < hi)]
        if trial.size == 0:
            return lo, hi
        nodes = _integrate(trial, amp, r_max, grid.steps)
        below = trial[nodes <= n]
        over = trial[nodes > n]
        new_lo = below.max() if below.size else lo
        new_hi = over[over > new_lo].min() if (over > new_lo).any() else hi
        if new_lo == lo and new_hi == hi:
            return lo, hi
        lo, hi = new_lo, new_hi


def shoot_state(node_count: int, grid: RadialGrid | None = None, amplitude: float = 1.0) -> ChoquardSolution:
    """Bound state with ``node_count`` radial nodes, normalised to N = 1.

    ``amplitude`` is the central value phi(0) used during shooting; the grid
    is rescaled by 1 / sqrt(amplitude) so results do not depend on it beyond
    rounding.
    """
    if node_count < 0:
        raise ValueError("node_count must be >= 0")
    if not amplitude > 0:
        raise ValueError("amplitude must be positive")
    grid = grid or RadialGrid()
    n = int(node_count)
    r_max = grid.r_max / math.sqrt(amplitude)
    lo, hi = _bracket(n, amplitude, grid, r_max)
    lo, hi = _refine(n, amplitude, lo, hi, grid, r_max)

    found, prof = _integrate(np.array([lo]), amplitude, r_max, grid.steps, keep=True)
    if found[0] != n:
        raise ShootingError(f"shooting settled on a {found[0]}-node solution instead of {n}")
    p, dp, V, dV = prof[:, :, 0]
    r = np.linspace(0.0, r_max, grid.steps + 1)
    blow = np.nonzero(np.abs(p) >= _BLOWUP * amplitude)[0]
    stop = blow[0] if blow.size else len(r)
    sgn = np.sign(p[:stop])
    changes = np.nonzero((sgn[1:] != sgn[:-1]) & (sgn[1:] != 0))[0]
    if len(changes) < n:
        raise ShootingError(f"node count {n} unreachable on the grid (found {len(changes)})")
    start = changes[n - 1] + 1 if n > 0 else 1
    end = start + int(np.argmin(np.abs(p[start:stop])))
    # the minimum must be interior: a converged trial turns away from zero before r_max
    if end >= stop - 1 or end - start < 4 or abs(p[end]) > _TAIL_FRACTION * np.max(np.abs(p[:end])):
        raise ShootingError("decaying tail not resolved; increase r_max or steps")
    r, p, dp, V, dV = r[: end + 1], p[: end + 1], dp[: end + 1], V[: end + 1], dV[: end + 1]

    eps = -(V[-1] + r[-1] * dV[-1])
    if not eps > 0:
        raise ShootingError(f"non-positive binding eigenvalue {eps:.3e}; grid too small for {n} nodes")
    phi_grav = -(V + eps)
    norm = FOUR_PI * simpson(p * p * r * r, x=r)
    e_k = 0.5 * FOUR_PI * simpson(dp * dp * r * r, x=r)
    e_p = 0.5 * FOUR_PI * simpson(phi_grav * p * p * r * r, x=r)
    # rescale to unit norm: lam = 1 / N, energies scale as lam^3, eps as lam^2
    lam = 1.0 / norm
    return ChoquardSolution(
        node_count=n,
        eigenvalue=eps / norm**2,
        r=r / lam,
        phi=lam**2 * p,
        E_K=e_k * lam**3,
        E_P=e_p * lam**3,
        N_norm=1.0,
        v0=float(lo),
        amplitude=amplitude,
        grid=grid,
    )


def virial_check(sol: ChoquardSolution) -> tuple[float, float, float]:
    """Residuals of 2 E_K + E_P = 0, E N = 3 E_K and E_total = -E N / 3."""
    eN = sol.eigenvalue * sol.N_norm
    e_tot = sol.E_total
    return (
        (2.0 * sol.E_K + sol.E_P) / sol.E_K,
        (eN - 3.0 * sol.E_K) / eN,
        (e_tot + eN / 3.0) / abs(e_tot),
    )


@dataclass(frozen=True)
class SpectrumFit:
    a: float
    b: float
    c: float
    residual_norm: float

    def predict(self, n):
        return self.a / (np.asarray(n, dtype=float) + self.b) ** self.c


def spectrum_fit(solutions) -> SpectrumFit:
    """Least-squares fit of e_n = a / (n + b)^c in log space."""
    data = sorted((s.node_count, s.eigenvalue) if isinstance(s, ChoquardSolution) else tuple(s) for s in solutions)
    n = np.array([d[0] for d in data], dtype=float)
    e = np.array([d[1] for d in data], dtype=float)
    if len(n) < 4 or n.max() < 3:
        raise ValueError("spectrum fit needs states n = 0..n_max with n_max >= 3")
    if len(set(n.tolist())) != len(n) or np.any(e <= 0):
        raise ValueError("spectrum fit needs distinct node counts and positive eigenvalues")
    loge = np.log(e)

    def resid(p):
        la, b, c = p
        return la - c * np.log(n + b) - loge

    res = least_squares(
        resid,
        x0=[math.log(0.1), 0.75, 2.0],
        bounds=([-np.inf, -n.min() + 1e-9, 0.0], [np.inf, np.inf, np.inf]),
        xtol=1e-15,
        ftol=1e-15,
        gtol=1e-15,
    )
    if not res.success or np.linalg.matrix_rank(res.jac) < 3:
        raise ValueError("degenerate spectrum fit")
    la, b, c = res.x
    return SpectrumFit(math.exp(la), float(b), float(c), float(np.linalg.norm(res.fun)))


def diosi_ground_state(spec: SphereSpec, constants: PhysicalConstants = DEFAULT_CONSTANTS):
    """Harmonic-regime Gaussian ground state: (width A, E_osc, binding eigenvalue E_D).

    A = (hbar^2 / (G M^3))^(1/4) R^(3/4), E_osc = (3/2) hbar sqrt(G M / R^3)
    and E_D = (3/2) E_osc. Meaningful when A < R.
    """
    M = spec.mass()
    G, hbar = constants.G, constants.hbar
    R = spec.radius
    width = (hbar**2 / (G * M**3)) ** 0.25 * R**0.75
    e_osc = 1.5 * hbar * math.sqrt(G * M / R**3)
    return width, e_osc, 1.5 * e_osc
