"""Cubic-lattice spheres and their direct pair-sum self-energy."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import DEFAULT_CONSTANTS, PhysicalConstants

__all__ = [
    "LatticeSphere",
    "SingularPairError",
    "generate_lattice_sphere",
    "lattice_pair_energy",
    "normalized_profile",
    "ProfilePoint",
]

# relative slack on the ball condition so exact boundary shells are kept
_BOUNDARY_SLACK = 1e-12
_CHUNK_PAIRS = 2_000_000


class SingularPairError(ZeroDivisionError):
    """A replica point lands exactly on an original point."""

    def __init__(self, i, j, point_i, point_j):
        self.pair = (int(i), int(j))
        super().__init__(
            f"translation maps replica point #{j} {tuple(int(v) for v in point_j)} onto original point #{i} {tuple(int(v) for v in point_i)}"
        )


@dataclass(frozen=True)
class LatticeSphere:
    """Integer triples (k, l, m) with delta * |(k, l, m)| <= radius."""

    points: np.ndarray
    lattice_constant: float
    radius: float

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.int64).reshape(-1, 3)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return len(self.points)

    @property
    def count(self) -> int:
        return len(self.points)

    def positions(self) -> np.ndarray:
        return self.points.astype(float) * self.lattice_constant


def generate_lattice_sphere(radius: float, delta: float) -> LatticeSphere:
    """All lattice sites delta*(k, l, m) inside the closed ball of the given radius.

    Points are sorted lexicographically.
    """
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    if not radius >= 0:
        raise ValueError(f"radius must be >= 0, got {radius}")
    rr = (radius / delta) ** 2 * (1.0 + _BOUNDARY_SLACK)
    n = int(math.floor(math.sqrt(rr)))
    ax = np.arange(-n, n + 1)
    k, l, m = np.meshgrid(ax, ax, ax, indexing="ij")
    mask = k * k + l * l + m * m <= rr
    # meshgrid with ij indexing already enumerates in lexicographic order
    pts = np.stack([k[mask], l[mask], m[mask]], axis=1)
    return LatticeSphere(pts, float(delta), float(radius))


def _row_block_sum(pos, shifted, start, stop):
    diff = pos[start:stop, None, :] - shifted[None, :, :]
    dist = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    zero = np.argwhere(dist == 0.0)
    if len(zero):
        i, j = zero[0]
        return None, (start + i, j)
    # per-row partial sums, combined later with fsum
    return (1.0 / dist).sum(axis=1), None


def lattice_pair_energy(
    lattice: LatticeSphere,
    translation,
    atom_mass: float,
    constants: PhysicalConstants = DEFAULT_CONSTANTS,
    jobs: int = 1,
) -> float:
    """-G m^2 sum_{i,j} 1 / |x_i - (x_j + t)| over all ordered pairs.

    Rows are summed in blocks (optionally on a thread pool); block results
    are combined in index order with ``math.fsum`` so the result does not
    depend on ``jobs``.
    """
    t = np.asarray(translation, dtype=float).reshape(3)
    pos = lattice.positions()
    shifted = pos + t
    n = len(pos)
    rows = max(1, _CHUNK_PAIRS // max(n, 1))
    blocks = [(s, min(s + rows, n)) for s in range(0, n, rows)]

    def work(block):
        return _row_block_sum(pos, shifted, *block)

    if jobs > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(work, blocks))
    else:
        results = [work(b) for b in blocks]
    partial = []
    for sums, bad in results:
        if bad is not None:
            i, j = bad
            raise SingularPairError(i, j, lattice.points[i], lattice.points[j])
        partial.extend(sums.tolist())
    return -constants.G * atom_mass**2 * math.fsum(partial)


@dataclass(frozen=True)
class ProfilePoint:
    x: float
    v_over_vd: float
    v_schmidt_over_vd: float
    n: int


def normalized_profile(
    lattice: LatticeSphere,
    axis_fractions,
    atom_mass: float,
    constants: PhysicalConstants = DEFAULT_CONSTANTS,
    jobs: int = 1,
) -> list[ProfilePoint]:
    """Pair energy along the x edge, in units of V_D = -6 G (N m)^2 / (5 R).

    Also reports the summed single-site kernel V_S = -G N m^2 / (x delta)
    in the same units.
    """
    n = lattice.count
    M = n * atom_mass
    v_d = -6.0 * constants.G * M * M / (5.0 * lattice.radius)
    out = []
    for x in axis_fractions:
        x = float(x)
        if not 0.0 < x < 1.0:
            raise ValueError(f"axis fraction must lie strictly in (0, 1), got {x}")
        shift = x * lattice.lattice_constant
        v = lattice_pair_energy(lattice, (shift, 0.0, 0.0), atom_mass, constants, jobs=jobs)
        v_s = -constants.G * n * atom_mass**2 / shift
        out.append(ProfilePoint(x, v / v_d, v_s / v_d, n))
    return out
