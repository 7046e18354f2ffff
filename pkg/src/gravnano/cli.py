"""Command-line front end emitting CSV/JSON plot data."""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass

import numpy as np

from . import __version__
from .choquard import RadialGrid, shoot_state
from .core import SILICA_UNIT_MASS, SphereSpec
from .dynamics import GaussianState, bound_state_width, evolve, free_width
from .figures import PRESETS, Table, build_figure
from .lattice import generate_lattice_sphere, normalized_profile
from .potentials import ModelKind, PotentialModel, nuclear_kernel, overlap_branch, v_eff_sphere
from .regimes import regime_report

EXIT_MODULE_ERROR = 1
EXIT_CONFIG_ERROR = 2


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Scenario:
    """Inputs of an ``evolve`` run, serialisable to JSON."""

    spec: SphereSpec
    model: str = "piecewise"
    alpha: float = 1.0
    initial_spread: float = 1e-7
    t_end: float = 1e4
    rel_tol: float = 1e-10
    samples: int = 201
    output: str | None = None
    format: str = "csv"

    def __post_init__(self):
        ModelKind(self.model)
        if self.format not in ("csv", "json"):
            raise ValueError(f"format must be csv or json, got {self.format!r}")

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.to_dict(),
            "model": self.model,
            "alpha": self.alpha,
            "initial_spread_m": self.initial_spread,
            "t_end_s": self.t_end,
            "rel_tol": self.rel_tol,
            "samples": self.samples,
            "output": self.output,
            "format": self.format,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Scenario":
        return cls(
            spec=SphereSpec.from_dict(data["spec"]),
            model=str(data.get("model", "piecewise")),
            alpha=float(data.get("alpha", 1.0)),
            initial_spread=float(data.get("initial_spread_m", 1e-7)),
            t_end=float(data.get("t_end_s", 1e4)),
            rel_tol=float(data.get("rel_tol", 1e-10)),
            samples=int(data.get("samples", 201)),
            output=data.get("output"),
            format=str(data.get("format", "csv")),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Scenario":
        return cls.from_dict(json.loads(text))


def scenario_hash(payload: dict) -> str:
    return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()[:16]


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "%.14e" % float(value)
    return str(value)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    return obj


def render(table: Table, fmt: str) -> str:
    meta = _jsonable(table.meta)
    if fmt == "json":
        body = {"meta": meta, "columns": table.columns, "rows": _jsonable(table.rows)}
        return json.dumps(body, sort_keys=True, indent=1) + "\n"
    lines = ["# " + json.dumps(meta, sort_keys=True), ",".join(table.columns)]
    lines += [",".join(_fmt(v) for v in row) for row in table.rows]
    return "\n".join(lines) + "\n"


def _write(text: str, path: str | None):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    # write beside the target and rename, so failures leave no partial file
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".gravnano-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(table: Table, args, scenario: dict):
    table.meta = {
        "version": __version__,
        "scenario_hash": scenario_hash(scenario),
        "command": args.command,
        **table.meta,
    }
    _write(render(table, args.format), args.output)


def _spec_from_args(args) -> SphereSpec:
    return SphereSpec(
        radius=args.radius_m,
        density=args.density,
        lattice_constant=args.lattice_constant_m,
        nucleus_radius=args.nucleus_radius_m,
        atom_mass=args.atom_mass_kg,
    )


def _jobs(args) -> int:
    if getattr(args, "deterministic", False):
        return 1
    if args.jobs is not None:
        return max(1, args.jobs)
    env = os.environ.get("GRAVNANO_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"GRAVNANO_JOBS must be an integer, got {env!r}") from None
    return 1


def cmd_potential(args):
    spec = _spec_from_args(args)
    lo = args.d_min if args.d_min is not None else spec.radius * 1e-3
    hi = args.d_max if args.d_max is not None else spec.radius * 10
    d = np.geomspace(lo, hi, args.samples) if args.log else np.linspace(lo, hi, args.samples)
    v = v_eff_sphere(d, spec)
    columns = ["d_m", "v_eff_J", "branch"]
    if args.include_nuclear:
        vn = nuclear_kernel(d, spec)
        columns += ["v_nuclear_J", "v_total_J"]
        rows = [[x, a, overlap_branch(x, spec), b, a + b] for x, a, b in zip(d, v, vn)]
    else:
        rows = [[x, a, overlap_branch(x, spec)] for x, a in zip(d, v)]
    scen = {"spec": spec.to_dict(), "d_min": lo, "d_max": hi, "samples": args.samples, "log": args.log}
    _emit(Table(columns, rows, {"parameters": scen}), args, scen)


def cmd_lattice(args):
    lat = generate_lattice_sphere(args.radius_in_delta * args.delta_m, args.delta_m)
    xs = np.linspace(0.0, 1.0, args.axis_samples + 2)[1:-1]
    prof = normalized_profile(lat, xs, args.atom_mass_kg, jobs=_jobs(args))
    rows = [[p.x, p.v_over_vd, p.v_schmidt_over_vd, p.n] for p in prof]
    scen = {
        "radius_in_delta": args.radius_in_delta,
        "delta_m": args.delta_m,
        "atom_mass_kg": args.atom_mass_kg,
        "axis_samples": args.axis_samples,
    }
    _emit(Table(["x", "V_over_VD", "V_schmidt_over_VD", "N"], rows, {"parameters": scen}), args, scen)


def _load_scenario(path) -> Scenario:
    try:
        with open(path) as fh:
            return Scenario.from_json(fh.read())
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise ConfigError(f"cannot parse scenario {path}: {exc}") from exc


def cmd_evolve(args):
    if args.scenario:
        sc = _load_scenario(args.scenario)
        if args.output is None:
            args.output = sc.output
        args.format = sc.format
    else:
        sc = Scenario(
            spec=_spec_from_args(args),
            model=args.model,
            alpha=args.alpha,
            initial_spread=args.initial_spread_m,
            t_end=args.t_end_s,
            rel_tol=args.rel_tol,
            samples=args.samples,
            output=args.output,
            format=args.format,
        )
    model = PotentialModel(ModelKind(sc.model), sc.spec, alpha=sc.alpha)
    state = GaussianState.from_spread(sc.initial_spread, sc.spec)
    traj = evolve(state, model, sc.t_end, rel_tol=sc.rel_tol, samples=sc.samples)
    free = free_width(sc.initial_spread, state.M, traj.t)
    rows = [[t, w, f, e] for t, w, f, e in zip(traj.t, traj.width, free, traj.energy)]
    # the destination is not part of the physics, so it stays out of the hash
    params = {k: v for k, v in sc.to_dict().items() if k not in ("output", "format")}
    meta = {"parameters": params, "energy_drift": traj.max_energy_drift()}
    _emit(Table(["t_s", "width_m", "width_free_m", "E_eff_J"], rows, meta), args, params)


def cmd_boundstate(args):
    radii = np.geomspace(args.r_min, args.r_max, args.samples)
    rows = []
    for R in radii:
        spec = SphereSpec(
            radius=float(R),
            density=args.density,
            lattice_constant=min(1e-10, R / 10),
            nucleus_radius=min(5e-12, R / 100),
        )
        model = PotentialModel(ModelKind(args.model), spec, alpha=args.alpha)
        rows.append([float(R), bound_state_width(spec, model)])
    scen = {"density": args.density, "r_min": args.r_min, "r_max": args.r_max, "samples": args.samples,
            "model": args.model, "alpha": args.alpha}
    _emit(Table(["R_m", "width_m"], rows, {"parameters": scen}), args, scen)


def cmd_choquard(args):
    sol = shoot_state(args.nodes, RadialGrid(args.rmax, args.steps))
    out = sol.to_dict()
    scen = {"nodes": args.nodes, "rmax": args.rmax, "steps": args.steps}
    if args.profile:
        table = Table(["r", "phi"], [[r, p] for r, p in zip(sol.r, sol.phi)], {"parameters": scen, "e_n": sol.eigenvalue})
        table.meta = {"version": __version__, "scenario_hash": scenario_hash(scen), "command": "choquard", **table.meta}
        _write(render(table, "csv"), args.profile)
    out = {"version": __version__, "scenario_hash": scenario_hash(scen), **out}
    _write(json.dumps(_jsonable(out), sort_keys=True, indent=1) + "\n", args.output)


def cmd_regime(args):
    spec = _spec_from_args(args)
    rep = regime_report(spec, args.width_m, entanglement_time=args.entanglement_time_s)
    scen = {"spec": spec.to_dict(), "width_m": args.width_m, "entanglement_time_s": args.entanglement_time_s}
    out = {"version": __version__, "scenario_hash": scenario_hash(scen), **rep.to_dict()}
    _write(json.dumps(_jsonable(out), sort_keys=True, indent=1) + "\n", args.output)


def cmd_figure(args):
    table = build_figure(args.name, jobs=_jobs(args))
    _emit(table, args, {"figure": args.name})


def _add_sphere(p, radius=1e-7, density=2650.0):
    p.add_argument("--radius-m", type=float, default=radius)
    p.add_argument("--density", type=float, default=density, help="kg/m^3")
    p.add_argument("--lattice-constant-m", type=float, default=1e-10)
    p.add_argument("--nucleus-radius-m", type=float, default=5e-12)
    p.add_argument("--atom-mass-kg", type=float, default=SILICA_UNIT_MASS)


def _add_output(p, formats=True):
    p.add_argument("-o", "--output", default=None, help="output path (default: stdout)")
    if formats:
        p.add_argument("--format", choices=["csv", "json"], default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gravnano", description=__doc__)
    parser.add_argument("--version", action="version", version=f"gravnano {__version__}")
    parser.add_argument("--jobs", type=int, default=None, help="worker threads (fallback: GRAVNANO_JOBS)")
    parser.add_argument("--deterministic", action="store_true", help="sequential, order-fixed reductions")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("potential", help="homogeneous-sphere effective potential")
    _add_sphere(p)
    p.add_argument("--d-min", type=float, default=None)
    p.add_argument("--d-max", type=float, default=None)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--log", action="store_true", help="log-spaced distances")
    p.add_argument("--include-nuclear", action="store_true", help="add the per-nucleus contribution")
    _add_output(p)
    p.set_defaults(func=cmd_potential)

    p = sub.add_parser("lattice", help="normalised lattice pair energy along a cell edge")
    p.add_argument("--radius-in-delta", type=float, default=5.0)
    p.add_argument("--delta-m", type=float, default=1e-10)
    p.add_argument("--atom-mass-kg", type=float, default=SILICA_UNIT_MASS)
    p.add_argument("--axis-samples", type=int, default=19)
    _add_output(p)
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("evolve", help="Gaussian width dynamics against free spreading")
    _add_sphere(p)
    p.add_argument("--initial-spread-m", type=float, default=1e-7)
    p.add_argument("--model", choices=[k.value for k in ModelKind], default="piecewise")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--t-end-s", type=float, default=1e4)
    p.add_argument("--rel-tol", type=float, default=1e-10)
    p.add_argument("--samples", type=int, default=201)
    p.add_argument("--scenario", default=None, help="JSON scenario file (overrides the flags above)")
    _add_output(p)
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("boundstate", help="bound-state width against sphere radius")
    p.add_argument("--density", type=float, default=2650.0)
    p.add_argument("--r-min", type=float, default=1e-9)
    p.add_argument("--r-max", type=float, default=1e-5)
    p.add_argument("--samples", type=int, default=81)
    p.add_argument("--model", choices=["piecewise", "hyperbolic"], default="piecewise")
    p.add_argument("--alpha", type=float, default=1.0)
    _add_output(p)
    p.set_defaults(func=cmd_boundstate)

    p = sub.add_parser("choquard", help="radial Choquard bound state")
    p.add_argument("--nodes", type=int, default=0)
    p.add_argument("--rmax", type=float, default=40.0)
    p.add_argument("--steps", type=int, default=8000)
    p.add_argument("--profile", default=None, help="also write the radial profile as CSV")
    _add_output(p, formats=False)
    p.set_defaults(func=cmd_choquard)

    p = sub.add_parser("regime", help="regime report as JSON")
    _add_sphere(p)
    p.add_argument("--width-m", type=float, required=True)
    p.add_argument("--entanglement-time-s", type=float, default=1200.0)
    _add_output(p, formats=False)
    p.set_defaults(func=cmd_regime)

    p = sub.add_parser("figure", help="figure presets as data series")
    p.add_argument("name", choices=sorted(PRESETS))
    _add_output(p)
    p.set_defaults(func=cmd_figure)
    return parser


def _error(kind: str, exc: BaseException, code: int) -> int:
    sys.stderr.write(json.dumps({"error": kind, "type": type(exc).__name__, "message": str(exc)}) + "\n")
    return code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args)
    except ConfigError as exc:
        return _error("config", exc, EXIT_CONFIG_ERROR)
    except (ValueError, ArithmeticError, RuntimeError, OSError) as exc:
        return _error("module", exc, EXIT_MODULE_ERROR)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
