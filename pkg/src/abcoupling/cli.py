"""Command-line front end: solve, density, coupling, sweep, verify.

Every command reads a ``RunConfig`` (``--config`` or $ABCOUPLING_CONFIG) and
writes CSV or JSON to ``--out`` or stdout.  Rows that fail carry the error in
their ``status`` column and make the process exit nonzero.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from functools import lru_cache
from typing import Any, Callable, Iterable, Sequence

from . import verification
from .cavity_modes import CODATA_2018, CavityGeometry, ModeIndex, RadialSolution, solve_mode
from .config import ConfigError, RunConfig, SolenoidSpec, SweepSpec, load_config
from .coupling import omega_we_closed, omega_we_quadrature, omega_wp_quadrature
from .errors import ABCouplingError, ValidationError, exit_code_for
from .fields import CSV_COLUMNS, ModeDensities, SolenoidConfig, fmt, trapezoid_total_charge
from .numerics import Tolerance

CONST = CODATA_2018

SOLVE_COLUMNS = (
    "n", "l", "m", "zeta_R", "xi_R", "kappa", "N2_volume", "energy_eV", "kinetic_ueV", "status",
)
COUPLING_COLUMNS = (
    "n", "l", "m", "R_m", "d_m", "U_J", "a_m", "flux_over_Phi0", "omega_scale_ueV", "C_l", "F_l",
    "omega_WP_ueV", "omega_WE_ueV", "delta_WE_ueV", "freq_GHz", "method", "status",
)
ORACLE_COLUMNS = ("omega_WP_quad_ueV", "omega_WE_quad_ueV", "dev_WP", "dev_WE")
SWEEP_PREFIX = ("sweep_parameter", "sweep_value")
SWEEP_SUFFIX = ("delta_ratio",)

Row = dict[str, Any]


@lru_cache(maxsize=256)
def _solve(geometry: CavityGeometry, mode: ModeIndex) -> RadialSolution:
    return solve_mode(geometry, mode, CONST)


def _ueV(energy: float) -> float:
    return energy / CONST.e * 1e6


def _rel_dev(value: float, reference: float) -> float:
    if math.isnan(value) or math.isnan(reference):
        return math.nan
    if value == reference:
        return 0.0
    return abs(value - reference) / abs(reference)


def _error_status(exc: BaseException) -> str:
    return f"{type(exc).__name__}: {exc}"


def _fail(row: Row, exc: BaseException) -> None:
    # "_exit" is never rendered; it carries the exit code of the first failure
    row["status"] = _error_status(exc)
    row["_exit"] = exit_code_for(exc)


# ---------------------------------------------------------------------------
# row builders (module level so worker processes can pickle them)
# ---------------------------------------------------------------------------

def solve_row(geometry: CavityGeometry, mode: ModeIndex) -> Row:
    row: Row = {"n": mode.n, "l": mode.l, "m": mode.m}
    try:
        sol = _solve(geometry, mode)
    except ABCouplingError as exc:
        row.update({k: math.nan for k in SOLVE_COLUMNS[3:-1]})
        _fail(row, exc)
        return row
    volume = math.pi * geometry.R ** 2 * geometry.d
    row.update(
        zeta_R=sol.zeta_R,
        xi_R=sol.xi_R,
        kappa=sol.kappa,
        N2_volume=sol.n_sq * volume,
        energy_eV=sol.energy / CONST.e,
        kinetic_ueV=_ueV(sol.kinetic_energy),
        status="ok",
    )
    return row


def coupling_row(
    geometry: CavityGeometry,
    mode: ModeIndex,
    spec: SolenoidSpec,
    tol: Tolerance,
    oracle: bool,
) -> Row:
    solenoid = SolenoidConfig(spec.flux_phi0 * CONST.Phi0, spec.a_over_R * geometry.R)
    row: Row = {
        "n": mode.n, "l": mode.l, "m": mode.m,
        "R_m": geometry.R, "d_m": geometry.d, "U_J": geometry.U,
        "a_m": solenoid.core_radius, "flux_over_Phi0": spec.flux_phi0,
    }
    numeric = COUPLING_COLUMNS[8:-2] + (ORACLE_COLUMNS if oracle else ())
    try:
        sol = _solve(geometry, mode)
        b = omega_we_closed(geometry, mode, sol, solenoid, tol, CONST)
        row.update(
            omega_scale_ueV=_ueV(b.omega_scale),
            C_l=b.c_l,
            F_l=b.f_l,
            omega_WP_ueV=_ueV(b.omega_wp),
            omega_WE_ueV=_ueV(b.omega_we),
            delta_WE_ueV=_ueV(b.delta_we),
            freq_GHz=b.to_GHz(b.omega_we),
            method=b.method.value,
        )
        if oracle:
            wp_q = math.nan
            if solenoid.core_radius > 0.0:
                wp_q = omega_wp_quadrature(geometry, mode, sol, solenoid, tol, CONST).omega_wp
            we_q = omega_we_quadrature(geometry, mode, sol, solenoid, tol, CONST).omega_we
            row.update(
                omega_WP_quad_ueV=_ueV(wp_q),
                omega_WE_quad_ueV=_ueV(we_q),
                dev_WP=_rel_dev(wp_q, b.omega_wp),
                dev_WE=_rel_dev(we_q, b.omega_we),
            )
        row["status"] = "ok"
    except ABCouplingError as exc:
        for key in numeric:
            row.setdefault(key, math.nan)
        row.setdefault("method", "")
        _fail(row, exc)
    return row


def _coupling_task(args: tuple) -> Row:
    return coupling_row(*args)


def _sweep_task(args: tuple) -> Row:
    parameter, value, geometry, mode, spec, tol, oracle = args
    row: Row = {"sweep_parameter": parameter, "sweep_value": value}
    row.update(coupling_row(geometry, mode, spec, tol, oracle))
    if row["status"] == "ok" and mode.l > 0 and row["omega_scale_ueV"] != 0.0:
        row["delta_ratio"] = row["delta_WE_ueV"] / (row["omega_scale_ueV"] * (row["C_l"] + row["F_l"]))
    else:
        row["delta_ratio"] = math.nan
    return row


def _run(task: Callable[[tuple], Row], items: Sequence[tuple], jobs: int) -> list[Row]:
    """Map ``task`` over ``items`` preserving input order."""
    if jobs <= 1 or len(items) <= 1:
        return [task(item) for item in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(task, items, chunksize=max(1, len(items) // (4 * jobs))))


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_solve(config: RunConfig) -> list[Row]:
    geometry = config.geometry()
    return [solve_row(geometry, mode) for mode in config.modes]


def cmd_density(config: RunConfig, mode: ModeIndex | None = None) -> tuple[list[Row], float]:
    """Density rows on the configured grid and the trapezoid charge over -e."""
    geometry = config.geometry()
    mode = mode or config.density_mode or config.modes[0]
    sol = _solve(geometry, mode)
    dens = ModeDensities(geometry, mode, sol, CONST)
    raw = dens.profile_rows(config.density_rho.points(), config.density_z.points())
    charge = trapezoid_total_charge(geometry, raw)
    return [dict(zip(CSV_COLUMNS, r)) for r in raw], charge / -CONST.e


def cmd_coupling(config: RunConfig, oracle: bool = False, jobs: int = 1) -> list[Row]:
    geometry = config.geometry()
    items = [
        (geometry, mode, spec, config.tolerance, oracle)
        for mode in config.modes
        for spec in config.solenoids
    ]
    return _run(_coupling_task, items, jobs)


def _dedupe(items: Iterable[Any]) -> list[Any]:
    seen: dict[Any, None] = {}
    for it in items:
        seen.setdefault(it, None)
    return list(seen)


def sweep_items(config: RunConfig, sweep: SweepSpec, oracle: bool) -> list[tuple]:
    items = []
    base = config.geometry()
    for value in sweep.values:
        geometry = base
        modes = list(config.modes)
        specs = list(config.solenoids)
        if sweep.parameter == "l":
            modes = _dedupe(ModeIndex(m.n, int(value), m.m) for m in modes)
        elif sweep.parameter == "a_over_R":
            specs = _dedupe(SolenoidSpec(s.flux_phi0, value) for s in specs)
        elif sweep.parameter == "flux":
            specs = _dedupe(SolenoidSpec(value, s.a_over_R) for s in specs)
        else:
            geometry = replace(config, R_nm=value).geometry()
        for mode in modes:
            for spec in specs:
                items.append((sweep.parameter, value, geometry, mode, spec, config.tolerance, oracle))
    return items


def cmd_sweep(config: RunConfig, sweep: SweepSpec | None = None, oracle: bool = False, jobs: int = 1) -> list[Row]:
    sweep = sweep or config.sweep
    if sweep is None:
        raise ConfigError("no sweep given: add a [sweep] section or pass --parameter and --values")
    return _run(_sweep_task, sweep_items(config, sweep, oracle), jobs)


def _criterion(name: str) -> list[verification.CheckResult]:
    return verification.CRITERIA[name]()


def cmd_verify(config: RunConfig | None = None, jobs: int = 1) -> list[verification.CheckResult]:
    """All acceptance checks.  ``config`` is accepted but its tolerances are deliberately ignored."""
    names = list(verification.CRITERIA)
    if jobs <= 1:
        groups = [_criterion(n) for n in names]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            groups = list(pool.map(_criterion, names))
    return [r for g in groups for r in g]


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _cell(value: Any) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return fmt(value)
    return str(value)


def _json_value(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def render(rows: list[Row], columns: Sequence[str], fmt_name: str, command: str, config: RunConfig) -> str:
    if fmt_name == "json":
        doc = {
            "command": command,
            "config": config.to_dict(),
            "columns": list(columns),
            "rows": [{c: _json_value(r.get(c)) for c in columns} for r in rows],
        }
        return json.dumps(doc, indent=2, allow_nan=False) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for r in rows:
        writer.writerow([_cell(r.get(c, "")) for c in columns])
    return buf.getvalue()


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write output file {path}: {exc.strerror}") from exc


def _parse_mode(text: str) -> ModeIndex:
    try:
        n, l, m = (int(t) for t in text.replace(",", " ").split())
    except ValueError as exc:
        raise ValidationError(f"mode must be three integers 'n,l,m', got {text!r}") from exc
    return ModeIndex(n, l, m)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI or JSON config (default: $ABCOUPLING_CONFIG, else built-in)")
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), help="output format (overrides the config)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for row computation")

    ap = argparse.ArgumentParser(prog="abcoupling", description="Aharonov-Bohm coupling energies of cavity modes.")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("solve", parents=[common], help="solve the configured modes")
    p = sub.add_parser("density", parents=[common], help="export charge/current/magnetization on a grid")
    p.add_argument("--mode", help="mode as 'n,l,m' (default: [density] mode, else the first mode)")
    p = sub.add_parser("coupling", parents=[common], help="closed-form coupling breakdown per mode and solenoid")
    p.add_argument("--oracle", action="store_true", help="add quadrature columns and relative deviations")
    p = sub.add_parser("sweep", parents=[common], help="coupling rows across one parameter")
    p.add_argument("--oracle", action="store_true")
    p.add_argument("--parameter", choices=("l", "a_over_R", "flux", "R"))
    p.add_argument("--values", help="comma-separated sweep values")
    sub.add_parser("verify", parents=[common], help="run the acceptance checks")
    return ap


def _run_command(args: argparse.Namespace) -> int:
    if args.jobs < 1:
        raise ValidationError(f"--jobs must be >= 1, got {args.jobs}")
    config = load_config(args.config)
    fmt_name = args.format or config.output_format
    out = args.out or config.output_path
    status = 0

    if args.command == "verify":
        results = cmd_verify(config, args.jobs)
        if fmt_name == "json":
            doc = {
                "checks": [
                    {"id": r.key, "description": r.description, "measured": r.measured,
                     "threshold": r.threshold, "passed": r.passed, "detail": r.detail}
                    for r in results
                ],
                "passed": all(r.passed for r in results),
            }
            text = json.dumps(doc, indent=2) + "\n"
        else:
            text = verification.format_report(results)
        _emit(text, out)
        return 0 if all(r.passed for r in results) else 1

    if args.command == "density":
        mode = _parse_mode(args.mode) if args.mode else None
        rows, charge_ratio = cmd_density(config, mode)
        _emit(render(rows, CSV_COLUMNS, fmt_name, "density", config), out)
        print(f"trapezoid charge / (-e) = {fmt(charge_ratio)}", file=sys.stderr)
        return 0

    if args.command == "solve":
        rows = cmd_solve(config)
        columns: tuple[str, ...] = SOLVE_COLUMNS
    elif args.command == "coupling":
        rows = cmd_coupling(config, args.oracle, args.jobs)
        columns = COUPLING_COLUMNS + (ORACLE_COLUMNS if args.oracle else ())
    else:
        sweep = config.sweep
        if args.parameter or args.values:
            if not (args.parameter and args.values):
                raise ValidationError("--parameter and --values must be given together")
            try:
                values = tuple(float(v) for v in args.values.split(","))
            except ValueError as exc:
                raise ValidationError(f"--values must be numbers, got {args.values!r}") from exc
            sweep = SweepSpec(args.parameter, values)
        rows = cmd_sweep(config, sweep, args.oracle, args.jobs)
        columns = SWEEP_PREFIX + COUPLING_COLUMNS + (ORACLE_COLUMNS if args.oracle else ()) + SWEEP_SUFFIX
        if sweep is not None:
            config = replace(config, sweep=sweep)

    _emit(render(rows, columns, fmt_name, args.command, config), out)
    for r in rows:
        if r["status"] != "ok":
            print(f"row {r['n']},{r['l']},{r['m']}: {r['status']}", file=sys.stderr)
            status = status or r["_exit"]
    return status


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _run_command(args)
    except (ABCouplingError, OSError) as exc:
        print(f"abcoupling {args.command}: error: {exc}", file=sys.stderr)
        return exit_code_for(exc)


if __name__ == "__main__":
    sys.exit(main())
