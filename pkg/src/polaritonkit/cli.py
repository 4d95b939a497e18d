"""Command-line front end.

Every subcommand resolves its parameters the same way (defaults, then
config file, then explicit flags), computes either a single point or a
sweep, and writes CSV plus a manifest.json recording everything that
went into the run.  Failures exit with a machine-readable JSON line on
stderr: 2 for usage errors, 3 for invalid parameters, 4 for solver or
certification failures.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from . import bfield as bf
from . import fock
from . import meanfield as mf
from . import observables, photons, spectrum
from .errors import (
    DegenerateFitError,
    InvalidParameterError,
    NonConvergenceError,
    OracleError,
    PolaritonkitError,
    UnconvergedStateError,
)
from .model import HBAR, MASS, ModelParams, load_config, parse_value
from .output import parallel_map, write_csv, write_manifest

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_USAGE = 2
EXIT_INVALID = 3
EXIT_NO_CONVERGENCE = 4

_SWEEP_AXES = ("lambda", "gamma2", "omega_b")

_DEFAULTS = {
    "lambda": 1.0,
    "gamma2": 1.0,
    "omega_trap": 1.0,
    "n_particles": 1,
    "include_a2": True,
    "omega_b": 0.0,
    "velocity_factor": 2.0,
}

# Config files may set any of the resolvable keys.
_CONFIG_KEYS = {
    "lambda": "lambda",
    "lam": "lambda",
    "gamma2": "gamma2",
    "omega_trap": "omega_trap",
    "n": "n_particles",
    "n_particles": "n_particles",
    "include_a2": "include_a2",
    "omega_b": "omega_b",
    "velocity_factor": "velocity_factor",
}


def _error_line(exc: BaseException, exit_code: int) -> None:
    line = json.dumps(
        {"error": type(exc).__name__, "exit_code": exit_code, "message": str(exc)},
        sort_keys=True,
    )
    print(line, file=sys.stderr)


class _Parser(argparse.ArgumentParser):
    """argparse that fails with the same machine-readable line as the
    rest of the CLI."""

    def error(self, message):
        self.print_usage(sys.stderr)
        _error_line(argparse.ArgumentTypeError(message), EXIT_USAGE)
        raise SystemExit(EXIT_USAGE)


@dataclass(frozen=True)
class SweepSpec:
    """Parsed --sweep request: axis, range, and spacing."""

    axis: str
    start: float
    stop: float
    count: int
    log: bool

    def values(self) -> np.ndarray:
        if self.log:
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)


def parse_sweep(text: str) -> SweepSpec:
    parts = text.split(":")
    if len(parts) not in (4, 5):
        raise InvalidParameterError(
            f"sweep must look like axis:start:stop:count[:log], got {text!r}"
        )
    axis = parts[0]
    if axis not in _SWEEP_AXES:
        raise InvalidParameterError(f"sweep axis must be one of {_SWEEP_AXES}, got {axis!r}")
    log = False
    if len(parts) == 5:
        if parts[4] != "log":
            raise InvalidParameterError(f"fifth sweep field must be 'log', got {parts[4]!r}")
        log = True
    try:
        start, stop = float(parts[1]), float(parts[2])
        count = int(parts[3])
    except ValueError as exc:
        raise InvalidParameterError(f"malformed sweep {text!r}: {exc}") from exc
    if count < 2:
        raise InvalidParameterError("sweep count must be >= 2")
    if not (start < stop):
        raise InvalidParameterError("sweep start must be < stop")
    if log and start <= 0.0:
        raise InvalidParameterError("log spacing requires start > 0")
    return SweepSpec(axis=axis, start=start, stop=stop, count=count, log=log)


def _resolve(args) -> dict:
    """defaults < config file < explicit flags."""
    settings = dict(_DEFAULTS)
    if getattr(args, "config", None):
        for key, raw in load_config(args.config).items():
            target = _CONFIG_KEYS.get(key)
            if target is None:
                raise InvalidParameterError(f"unknown config key {key!r}")
            if target in ("omega_b", "velocity_factor"):
                try:
                    settings[target] = float(raw)
                except ValueError as exc:
                    raise InvalidParameterError(f"{key}: expected a number, got {raw!r}") from exc
            else:
                settings[target] = parse_value(key, raw)
    if getattr(args, "lam", None) is not None:
        settings["lambda"] = args.lam
    if getattr(args, "gamma2", None) is not None:
        settings["gamma2"] = args.gamma2
    if getattr(args, "omega_trap", None) is not None:
        settings["omega_trap"] = args.omega_trap
    if getattr(args, "n_particles", None) is not None:
        settings["n_particles"] = args.n_particles
    if getattr(args, "no_a2", False):
        settings["include_a2"] = False
    if getattr(args, "omega_b", None) is not None:
        settings["omega_b"] = args.omega_b
    if getattr(args, "velocity_factor", None) is not None:
        settings["velocity_factor"] = args.velocity_factor
    return settings


def _params_of(settings: dict) -> ModelParams:
    return ModelParams(
        lam=settings["lambda"],
        gamma2=settings["gamma2"],
        omega_trap=settings["omega_trap"],
        n_particles=settings["n_particles"],
        include_a2=settings["include_a2"],
    )


def _points(settings: dict, sweep: SweepSpec | None, allowed_axes) -> list[dict]:
    """Expand the sweep (or the single resolved point) into settings."""
    if sweep is None:
        return [settings]
    if sweep.axis not in allowed_axes:
        raise InvalidParameterError(
            f"sweep axis {sweep.axis!r} not supported here; allowed: {sorted(allowed_axes)}"
        )
    points = []
    for value in sweep.values():
        point = dict(settings)
        point[sweep.axis] = float(value)
        points.append(point)
    return points


def _manifest_payload(name: str, settings: dict, sweep: SweepSpec | None, files, extra=None) -> dict:
    payload = {
        "tool": "polaritonkit",
        "version": __version__,
        "subcommand": name,
        "resolved": {k: settings[k] for k in sorted(settings)},
        "sweep": None
        if sweep is None
        else {"axis": sweep.axis, "start": sweep.start, "stop": sweep.stop,
              "count": sweep.count, "log": sweep.log},
        "files": sorted(files),
    }
    if extra:
        payload["extra"] = extra
    return payload


def _emit(outdir: Path, name: str, settings, sweep, header, rows, extra=None) -> list[str]:
    csv_name = f"{name.replace('-', '_')}.csv"
    write_csv(outdir / csv_name, header, rows)
    files = [csv_name, "manifest.json"]
    write_manifest(outdir / "manifest.json", _manifest_payload(name, settings, sweep, files, extra))
    return files


# Subcommand bodies ---------------------------------------------------


def _cmd_branches(settings, sweep, outdir):
    points = _points(settings, sweep, {"lambda", "gamma2"})

    def row(point):
        spec = spectrum.polariton_modes(_params_of(point))
        big = point["omega_trap"]
        return (
            point["lambda"],
            point["gamma2"],
            spec.omega_plus / big,
            (spec.omega_minus / big) if spec.stable else math.nan,
            spec.omega_minus_sq / big**2,
            spec.mixing_lambda,
            spec.alpha,
            spec.stable,
        )

    header = [
        "lambda",
        "gamma2",
        "omega_plus_over_Omega",
        "omega_minus_over_Omega",
        "omega_minus_sq_over_Omega_sq",
        "mixing_lambda",
        "alpha",
        "stable",
    ]
    return _emit(outdir, "branches", settings, sweep, header, parallel_map(row, points))


def _cmd_meff(settings, sweep, outdir):
    points = _points(settings, sweep, {"lambda", "gamma2"})

    def row(point):
        res = observables.effective_mass(_params_of(point))
        return (point["lambda"], point["gamma2"], res.mass_ratio, res.fwhm_ratio)

    header = ["lambda", "gamma2", "mass_ratio", "fwhm_ratio"]
    return _emit(outdir, "meff", settings, sweep, header, parallel_map(row, points))


def _cmd_density(settings, sweep, outdir):
    if sweep is not None:
        raise InvalidParameterError("density renders one profile; drop --sweep")
    params = _params_of(settings)
    profile = observables.cm_density(params)
    sigma0 = math.sqrt(HBAR / (2.0 * MASS * params.omega_trap))
    rows = [
        (float(x), float(x) / sigma0, float(v))
        for x, v in zip(profile.grid, profile.values)
    ]
    header = ["position", "position_over_sigma0", "density_peak_normalized"]
    return _emit(outdir, "density", settings, sweep, header, rows,
                 extra={"mass_ratio": profile.mass_ratio})


def _cmd_photons(settings, sweep, outdir):
    points = _points(settings, sweep, {"lambda", "gamma2"})

    def row(point):
        params = _params_of(point)
        return (
            point["lambda"],
            point["gamma2"],
            photons.photon_occupation(params),
            photons.photon_two_point(params),
            photons.photon_four_point(params),
        )

    header = ["lambda", "gamma2", "occupation", "two_point", "four_point"]
    return _emit(outdir, "photons", settings, sweep, header, parallel_map(row, points))


def _cmd_mandel(settings, sweep, outdir):
    points = _points(settings, sweep, {"lambda", "gamma2"})

    def row(point):
        return (point["lambda"], point["gamma2"], photons.mandel_q(_params_of(point)))

    header = ["lambda", "gamma2", "mandel_q"]
    return _emit(outdir, "mandel", settings, sweep, header, parallel_map(row, points))


def _cmd_noa2(settings, sweep, outdir):
    points = _points(settings, sweep, {"lambda", "gamma2"})

    def row(point):
        params = _params_of(point).replace(include_a2=False)
        spec = spectrum.polariton_modes(params)
        gamma1 = params.lam * math.sqrt(params.gamma2)
        occ = photons.photon_occupation(params) if spec.stable else math.nan
        big = params.omega_trap
        return (
            point["lambda"],
            point["gamma2"],
            gamma1,
            spec.omega_plus / big,
            (spec.omega_minus / big) if spec.stable else math.nan,
            spec.omega_minus_sq / big**2,
            occ,
            spec.stable,
        )

    header = [
        "lambda",
        "gamma2",
        "gamma1",
        "omega_plus_over_Omega",
        "omega_minus_over_Omega",
        "omega_minus_sq_over_Omega_sq",
        "occupation",
        "stable",
    ]
    extra = {"lambda_star": spectrum.instability_onset(settings["gamma2"])}
    return _emit(outdir, "noa2", settings, sweep, header, parallel_map(row, points), extra)


def _cmd_bfield(settings, sweep, outdir):
    points = _points(settings, sweep, {"lambda", "gamma2", "omega_b"})

    def row(point):
        params = _params_of(point)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            res = bf.bfield_spectrum(params, point["omega_b"])
        big = params.omega_trap
        return (
            point["lambda"],
            point["gamma2"],
            point["omega_b"],
            res.delta_plus / big,
            res.delta_minus / big,
            res.omega_plus_b / big,
            res.omega_minus_b / big,
            res.gap_b / big,
        )

    header = [
        "lambda",
        "gamma2",
        "omega_b_ratio",
        "delta_plus_over_Omega",
        "delta_minus_over_Omega",
        "omega_plus_b_over_Omega",
        "omega_minus_b_over_Omega",
        "gap_b_over_Omega",
    ]
    return _emit(outdir, "bfield", settings, sweep, header, parallel_map(row, points))


def _cmd_lz(settings, sweep, outdir):
    points = _points(settings, sweep, {"lambda", "gamma2", "omega_b"})

    def row(point):
        params = _params_of(point)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            res = bf.bfield_spectrum(params, point["omega_b"])
            prob = bf.landau_zener(params, point["omega_b"], point["velocity_factor"])
        return (
            point["lambda"],
            point["gamma2"],
            point["omega_b"],
            point["velocity_factor"],
            res.gap_b / params.omega_trap,
            prob,
        )

    header = [
        "lambda",
        "gamma2",
        "omega_b_ratio",
        "velocity_factor",
        "gap_b_over_Omega",
        "probability",
    ]
    return _emit(outdir, "lz", settings, sweep, header, parallel_map(row, points))


def _cmd_mf_ground(settings, sweep, outdir):
    if sweep is not None:
        raise InvalidParameterError("mf-ground solves one point; drop --sweep")
    params = _params_of(settings)
    grid_spec = mf.GridSpec()
    solver_cfg = mf.SolverConfig()
    dressed_pot = mf.EffectivePotentialSpec.from_params(params)
    dressed = mf.solve_ground_state(dressed_pot, grid_spec, solver_cfg)
    bare = mf.solve_ground_state(
        mf.EffectivePotentialSpec.build(0.0, params.n_particles, params.omega_trap),
        grid_spec,
        solver_cfg,
    )
    sigma0 = math.sqrt(HBAR / (2.0 * MASS * params.omega_trap))
    grid = dressed.density_grid.grid
    rows = [
        (
            float(grid[i]),
            float(grid[i]) / sigma0,
            float(dressed.density_grid.density[i]),
            float(bare.density_grid.density[i]),
            float(dressed.density_grid.density[i] - bare.density_grid.density[i]),
        )
        for i in range(grid.size)
    ]
    header = ["position", "position_over_sigma0", "density_dressed", "density_bare", "delta_density"]
    extra = {
        "delta_m": dressed_pot.delta_m,
        "energy_dressed": dressed.energy,
        "energy_bare": bare.energy,
        "steps_dressed": dressed.steps,
        "solver": {"dtau": solver_cfg.dtau, "energy_tol": solver_cfg.energy_tol,
                   "psi_tol": solver_cfg.psi_tol, "stencil_order": solver_cfg.stencil_order},
        "grid": {"x_max_sigma0": grid_spec.x_max_sigma0, "n_points": grid_spec.n_points},
    }
    return _emit(outdir, "mf-ground", settings, sweep, header, rows, extra)


_SCALING_N_VALUES = (8, 16, 32, 64, 128)


def _cmd_mf_scaling(settings, sweep, outdir):
    if sweep is not None:
        raise InvalidParameterError("mf-scaling runs a fixed N family; drop --sweep")
    family = mf.ParamsFamily(
        coupling_per_sqrt_n=settings["lambda"],
        gamma2=settings["gamma2"],
        omega_trap=settings["omega_trap"],
        include_a2=settings["include_a2"],
    )
    fit = mf.scaling_exponent(family, _SCALING_N_VALUES)
    rows = [
        (n, family.params_at(n).lam, fit.central_totals[i] / n, fit.central_totals[i])
        for i, n in enumerate(fit.n_values)
    ]
    header = ["n_particles", "lambda", "delta_rho0_per_particle", "delta_rho0_total"]
    extra = {
        "coupling_per_sqrt_n": settings["lambda"],
        "exponent_z": fit.exponent_z,
        "r_squared": fit.r_squared,
        "n_values": list(fit.n_values),
    }
    return _emit(outdir, "mf-scaling", settings, sweep, header, rows, extra)


_ORACLE_QUANTITIES = ("energy", "occupation", "two_point", "four_point", "x_variance", "p_variance")


def _cmd_oracle_check(settings, sweep, outdir):
    if sweep is not None:
        raise InvalidParameterError("oracle-check compares one point; drop --sweep")
    params = _params_of(settings)
    spec = spectrum.polariton_modes(params)
    if not spec.stable:
        raise InvalidParameterError("oracle-check needs a stable spectrum")
    x_var, p_var = observables.cm_variances(params)
    analytic = {
        "energy": 0.5 * (spec.omega_plus + spec.omega_minus),
        "occupation": photons.photon_occupation(params),
        "two_point": photons.photon_two_point(params),
        "four_point": photons.photon_four_point(params),
        "x_variance": x_var,
        "p_variance": p_var,
    }
    state = fock.build_and_diagonalize(params)
    oracle = {"energy": state.energy}
    for key in _ORACLE_QUANTITIES[1:]:
        oracle[key] = fock.measure(state, key)
    rows = []
    for key in _ORACLE_QUANTITIES:
        delta = abs(analytic[key] - oracle[key])
        scale = max(abs(analytic[key]), abs(oracle[key]))
        rows.append((key, analytic[key], oracle[key], delta, delta / scale if scale else 0.0))
    header = ["quantity", "analytic", "oracle", "abs_delta", "rel_delta"]
    max_rel = max(r[4] for r in rows)
    print(f"oracle-check: n_cut={state.n_cut} max_rel_delta={max_rel:.3e}")
    extra = {"n_cut": state.n_cut, "max_rel_delta": max_rel}
    return _emit(outdir, "oracle-check", settings, sweep, header, rows, extra)


def _cmd_figure(number: int, outdir: Path):
    from .figures import FIGURES

    result = FIGURES[number](outdir)
    files = sorted(result["files"] + ["manifest.json"])
    payload = {
        "tool": "polaritonkit",
        "version": __version__,
        "subcommand": f"figure {number}",
        "files": files,
        "constants": result.get("constants", {}),
    }
    if "notes" in result:
        payload["notes"] = result["notes"]
    write_manifest(outdir / "manifest.json", payload)
    return files


_COMMANDS = {
    "branches": _cmd_branches,
    "meff": _cmd_meff,
    "density": _cmd_density,
    "photons": _cmd_photons,
    "mandel": _cmd_mandel,
    "noa2": _cmd_noa2,
    "bfield": _cmd_bfield,
    "lz": _cmd_lz,
    "mf-ground": _cmd_mf_ground,
    "mf-scaling": _cmd_mf_scaling,
    "oracle-check": _cmd_oracle_check,
}


def build_parser() -> _Parser:
    parser = _Parser(prog="polaritonkit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--lambda", dest="lam", type=float, default=None,
                        help="collective coupling strength")
    common.add_argument("--gamma2", type=float, default=None,
                        help="cavity frequency over trap frequency")
    common.add_argument("--omega-trap", dest="omega_trap", type=float, default=None,
                        help="trap frequency (sets the overall scale)")
    common.add_argument("--n", dest="n_particles", type=int, default=None,
                        help="particle number")
    common.add_argument("--no-a2", dest="no_a2", action="store_true",
                        help="drop the quadratic field term")
    common.add_argument("--omega-b", dest="omega_b", type=float, default=None,
                        help="magnetic field as omega_B / Omega")
    common.add_argument("--velocity-factor", dest="velocity_factor", type=float, default=None,
                        help="dimensionless inverse sweep rate for transition probabilities")
    common.add_argument("--config", default=None, help="key = value parameter file")
    common.add_argument("--out", default="polaritonkit-out", help="output directory")
    common.add_argument("--sweep", default=None,
                        help="axis:start:stop:count[:log] over lambda, gamma2 or omega_b")

    for name in _COMMANDS:
        sub.add_parser(name, parents=[common], help=f"emit {name} table")

    fig = sub.add_parser("figure", help="reproduce one survey figure (CSV + PNG)")
    fig.add_argument("number", type=int, choices=range(2, 12), help="figure number")
    fig.add_argument("--out", default="polaritonkit-out", help="output directory")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    outdir = Path(args.out)
    try:
        outdir.mkdir(parents=True, exist_ok=True)
        if args.command == "figure":
            files = _cmd_figure(args.number, outdir)
        else:
            settings = _resolve(args)
            sweep = parse_sweep(args.sweep) if getattr(args, "sweep", None) else None
            files = _COMMANDS[args.command](settings, sweep, outdir)
        print(f"wrote {len(files)} files to {outdir}")
        return EXIT_OK
    except (NonConvergenceError, UnconvergedStateError, OracleError, DegenerateFitError) as exc:
        _error_line(exc, EXIT_NO_CONVERGENCE)
        return EXIT_NO_CONVERGENCE
    except (PolaritonkitError, OSError) as exc:
        _error_line(exc, EXIT_INVALID)
        return EXIT_INVALID
    except Exception as exc:  # pragma: no cover - last resort
        _error_line(exc, EXIT_UNEXPECTED)
        return EXIT_UNEXPECTED


if __name__ == "__main__":
    raise SystemExit(main())
