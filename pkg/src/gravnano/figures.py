"""Figure presets: each returns a :class:`Table` of plot data with its parameters baked in."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import DEFAULT_CONSTANTS, NUCLEUS_RADIUS_CONSERVATIVE, SphereSpec
from .dynamics import GaussianState, bound_state_width, evolve, free_width, separation_time
from .lattice import generate_lattice_sphere, normalized_profile
from .potentials import ModelKind, PotentialModel, nuclear_kernel, overlap_branch, v_eff_sphere
from .regimes import classify, mesoscopic_radius

__all__ = ["Table", "PRESETS", "build_figure"]


@dataclass
class Table:
    columns: list
    rows: list
    meta: dict = field(default_factory=dict)

    def column(self, name):
        i = self.columns.index(name)
        return [row[i] for row in self.rows]


def _fig1(jobs=1):
    spec = SphereSpec(radius=1e-8, density=2650.0, nucleus_radius=NUCLEUS_RADIUS_CONSERVATIVE)
    d = np.geomspace(1e-17, 1e-5, 241)
    total = v_eff_sphere(d, spec) + nuclear_kernel(d, spec)
    rows = [
        [float(x), float(-v), str(overlap_branch(x, spec)), classify(spec, float(x)).regime.value]
        for x, v in zip(d, total)
    ]
    meta = {
        "figure": "Fig. 1",
        "parameters": {"radius_m": 1e-8, "density_kg_m3": 2650.0, "nucleus_radius_m": 1e-15, "material": "SiO2"},
        "note": "minus the effective potential, for log-log plotting",
        "atom_count": spec.atom_count(),
    }
    return Table(["d_m", "minus_v_eff_J", "branch", "regime"], rows, meta)


def _fig2(jobs=1):
    spec = SphereSpec(radius=1.0, density=3.0 / (4.0 * math.pi), lattice_constant=0.1, nucleus_radius=0.01)
    G = DEFAULT_CONSTANTS.G
    x = np.linspace(0.0, 4.0, 161)
    v = v_eff_sphere(x, spec) / (G * spec.mass() ** 2 / spec.radius)
    rows = []
    for xi, vi in zip(x, v):
        label = "P" if xi <= 0.5 else ("I" if xi <= 2.0 else "H")
        rows.append([float(xi), float(vi), str(overlap_branch(xi, spec)), label])
    meta = {"figure": "Fig. 2", "parameters": {"units": "V / (G M^2 / R) against d / R"}}
    return Table(["d_over_R", "v_over_GM2_R", "branch", "zone"], rows, meta)


def _lattice_series(radii, xs, jobs):
    rows = []
    counts = {}
    for rd in radii:
        lat = generate_lattice_sphere(float(rd), 1.0)
        counts[f"R={rd}delta"] = lat.count
        for p in normalized_profile(lat, xs, 1.0, jobs=jobs):
            rows.append([f"N{lat.count}", p.x, p.v_over_vd, p.v_schmidt_over_vd, p.n])
    return rows, counts


def _fig3(jobs=1):
    xs = np.round(np.linspace(0.025, 0.975, 39), 6)
    rows, counts = _lattice_series([5, 10], xs, jobs)
    meta = {"figure": "Fig. 3", "parameters": {"radius_in_delta": [5, 10], "point_counts": counts}}
    return Table(["series", "x", "V_over_VD", "V_schmidt_over_VD", "N"], rows, meta)


def _fig4(jobs=1):
    xs = np.round(np.linspace(0.025, 0.975, 39), 6)
    rows, counts = _lattice_series([5], xs, jobs)
    meta = {"figure": "Fig. 4", "parameters": {"radius_in_delta": 5, "point_counts": counts}}
    return Table(["series", "x", "V_over_VD", "V_schmidt_over_VD", "N"], rows, meta)


def _evolution_table(spec, delta_x0, t_end, samples, model_kind=ModelKind.PIECEWISE_SPRING, alpha=1.0):
    model = PotentialModel(model_kind, spec, alpha=alpha)
    state = GaussianState.from_spread(delta_x0, spec)
    traj = evolve(state, model, t_end, rel_tol=1e-10, samples=samples)
    free = free_width(delta_x0, state.M, traj.t)
    rows = [
        [float(t), float(w), float(f), float(e)]
        for t, w, f, e in zip(traj.t, traj.width, free, traj.energy)
    ]
    return rows, traj, free


def _fig5(jobs=1):
    spec = SphereSpec(radius=1e-7, density=2650.0)
    rows, traj, free = _evolution_table(spec, 1e-7, 1e4, 201)
    meta = {
        "figure": "Fig. 5",
        "parameters": {"radius_m": 1e-7, "density_kg_m3": 2650.0, "initial_spread_m": 1e-7, "t_end_s": 1e4},
        "energy_drift": traj.max_energy_drift(),
    }
    return Table(["t_s", "width_m", "width_free_m", "E_eff_J"], rows, meta)


def _separation_figure(name, radius, density, delta_x0, t_end):
    spec = SphereSpec(radius=radius, density=density)
    rows, traj, free = _evolution_table(spec, delta_x0, t_end, 401)
    for row in rows:
        row.append(abs(row[2] - row[1]))
    t_sep = separation_time(spec, delta_x0, 1e-7)
    meta = {
        "figure": name,
        "parameters": {
            "radius_m": radius,
            "density_kg_m3": density,
            "initial_spread_m": delta_x0,
            "threshold_m": 1e-7,
        },
        "separation_time_s": t_sep,
    }
    return Table(["t_s", "width_m", "width_free_m", "E_eff_J", "separation_m"], rows, meta)


def _fig6(jobs=1):
    return _separation_figure("Fig. 6", 1e-6, 2650.0, 1e-11, 2000.0)


def _fig7(jobs=1):
    return _separation_figure("Fig. 7", 1e-5, 20000.0, 1e-15, 1000.0)


def _fig9(jobs=1):
    density = 2650.0
    radii = np.geomspace(1e-9, 1e-5, 161)
    rows = []
    for R in radii:
        spec = SphereSpec(radius=float(R), density=density, lattice_constant=min(1e-10, R / 10), nucleus_radius=min(5e-12, R / 100))
        rows.append([float(R), bound_state_width(spec)])
    widths = np.array([r[1] for r in rows])
    # first radius where the bound width drops below R, interpolated in log space
    ratio = np.log(widths / radii)
    i = int(np.nonzero(ratio < 0)[0][0])
    t = ratio[i - 1] / (ratio[i - 1] - ratio[i])
    crossing = float(np.exp(np.log(radii[i - 1]) + t * (np.log(radii[i]) - np.log(radii[i - 1]))))
    meta = {
        "figure": "Fig. 9",
        "parameters": {"density_kg_m3": density, "model": "piecewise", "alpha": 1.0},
        "width_equals_radius_at_m": crossing,
        "mesoscopic_radius_m": mesoscopic_radius(density),
    }
    return Table(["R_m", "width_m"], rows, meta)


def _fig10(jobs=1):
    spec = SphereSpec(radius=1e-8, density=2650.0, nucleus_radius=NUCLEUS_RADIUS_CONSERVATIVE)
    d = np.geomspace(1e-17, 1e-5, 241)
    vs = v_eff_sphere(d, spec)
    vn = nuclear_kernel(d, spec)
    rows = [[float(x), float(-a), float(-b), float(-(a + b))] for x, a, b in zip(d, vs, vn)]
    meta = {
        "figure": "Fig. 10",
        "parameters": {"radius_m": 1e-8, "density_kg_m3": 2650.0, "nucleus_radius_m": 1e-15, "material": "SiO2"},
        "note": "minus each contribution, for log-log plotting",
    }
    return Table(["d_m", "minus_v_sphere_J", "minus_v_nuclear_J", "minus_v_total_J"], rows, meta)


PRESETS = {
    "fig1": _fig1,
    "fig2": _fig2,
    "fig3": _fig3,
    "fig4": _fig4,
    "fig5": _fig5,
    "fig6": _fig6,
    "fig7": _fig7,
    "fig9": _fig9,
    "fig10": _fig10,
}


def build_figure(name: str, jobs: int = 1) -> Table:
    try:
        fn = PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown figure preset {name!r}; choose from {', '.join(PRESETS)}") from None
    return fn(jobs=jobs)
