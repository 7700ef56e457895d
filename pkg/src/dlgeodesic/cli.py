"""Command-line front end.

Exit codes: 0 success, 1 analytic failure (no convergence, verification
failed), 2 usage or domain error, 3 output could not be written.
"""

from __future__ import annotations

import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import click
import numpy as np

from . import closed_form as cf
from .core import DomainError, PathProfile, TimeGrid
from .full import solve_full
from .metric import verify_geodesic
from .relaxed import SolverOptions

FIGURE_VALUES = (0.02, 0.05, 0.125, 0.2, 0.35, 0.5)
EXIT_FAIL, EXIT_USAGE, EXIT_IO = 1, 2, 3


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    return "%.9g" % x


def _die(msg, code):
    click.echo(f"error: {msg}", err=True)
    sys.exit(code)


def _emit(text: str, out: str | None):
    if out in (None, "-"):
        click.echo(text, nl=False)
        return
    try:
        path = Path(out)
        with open(path, "w", newline="", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        _die(f"cannot write {out}: {exc}", EXIT_IO)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _check_a(a):
    if not 0.0 < a < 1.0:
        _die(f"a must lie in (0, 1), got {a!r}", EXIT_USAGE)


@click.group()
def main():
    """Minimal-rate metrics forcing a directed geodesic through (1, a)."""


@main.command("rate")
@click.option("--a", "a", type=float, required=True, help="Through-time in (0, 1).")
def cmd_rate(a):
    """Print I(a), the breakpoint and the optimal slack as one JSON record."""
    _check_a(a)
    sol = cf.closed_form_solution(a)
    record = {"a": a, "I": sol.I, "r3_coefficient": cf.r3_coefficient(a), "t_B": sol.t_B,
              "x_B": sol.x_B, "b_opt": sol.b_opt, "rho0": sol.rho0}
    click.echo(json.dumps(record))


def _shape_rows(a, samples):
    t = np.linspace(0.0, 1.0, samples)
    return zip(t, cf.shape_exact(a, t), cf.density_exact(a, t))


@main.command("shape")
@click.option("--a", "a", type=float, required=True)
@click.option("--samples", type=int, default=201, show_default=True)
@click.option("--out", type=str, default="-", help="CSV path, '-' for stdout.")
def cmd_shape(a, samples, out):
    """Closed-form shape and density at equispaced times, as CSV t,F,rho."""
    _check_a(a)
    if samples < 2:
        _die("samples must be >= 2", EXIT_USAGE)
    _emit(_csv_text(["t", "F", "rho"], _shape_rows(a, samples)), out)


@main.command("figures")
@click.option("--out", type=click.Path(file_okay=False), required=True, help="Output directory.")
@click.option("--samples", type=int, default=401, show_default=True)
def cmd_figures(out, samples):
    """One shape CSV per a in both regimes (a <= 1/8 and 1/8 < a <= 1/2)."""
    if samples < 2:
        _die("samples must be >= 2", EXIT_USAGE)
    try:
        os.makedirs(out, exist_ok=True)
    except OSError as exc:
        _die(f"cannot create {out}: {exc}", EXIT_IO)
    for a in FIGURE_VALUES:
        _emit(_csv_text(["t", "F", "rho"], _shape_rows(a, samples)), os.path.join(out, f"shape_a{a:g}.csv"))


@main.command("solve")
@click.option("--a", "a", type=float, required=True)
@click.option("--grid", "N", type=int, default=512, show_default=True, help="Number of cells on [0, 1].")
@click.option("--out", type=str, default="-", help="JSON path, '-' for stdout.")
@click.option("--scheme", type=click.Choice(["exact", "midpoint"]), default="exact", show_default=True)
def cmd_solve(a, N, out, scheme):
    """Solve the full problem on an N-cell grid and write the solution as JSON."""
    _check_a(a)
    if N < 16:
        _die("grid must be >= 16", EXIT_USAGE)
    try:
        sol = solve_full(a, SolverOptions(N=N, scheme=scheme))
    except DomainError as exc:
        _die(str(exc), EXIT_USAGE)
    _emit(json.dumps(sol.to_dict()) + "\n", out)
    if not sol.converged:
        _die("solver did not converge", EXIT_FAIL)


def _profile_from_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, ValueError) as exc:
        _die(f"cannot read {path}: {exc}", EXIT_USAGE)
    try:
        grid = data["grid"]
        t = np.asarray(grid["t"], dtype=float)
        profile = PathProfile(TimeGrid(float(t[0]), float(t[-1]), t),
                              np.asarray(grid["F"], dtype=float), np.asarray(grid["rho"], dtype=float))
        return profile, float(data["a"])
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        _die(f"malformed solution file {path}: {exc}", EXIT_USAGE)


@main.command("verify")
@click.argument("input_path", required=False, type=str)
@click.option("--a", "a", type=float, default=None, help="Verify the closed form at this a instead.")
@click.option("--grid", "N", type=int, default=500, show_default=True)
@click.option("--tol", type=float, default=None, help="Margin tolerance (default 10/N).")
def cmd_verify(input_path, a, N, tol):
    """Check the shortcut condition for a solution file or the sampled closed form."""
    if (input_path is None) == (a is None):
        _die("give exactly one of INPUT_PATH or --a", EXIT_USAGE)
    if tol is not None and tol < 0:
        _die("tol must be nonnegative", EXIT_USAGE)
    try:
        if input_path is not None:
            profile, a = _profile_from_json(input_path)
        else:
            _check_a(a)
            profile = cf.assemble_closed_form(a, N, strict=False)
        report = verify_geodesic(profile, a, tol)
    except DomainError as exc:
        _die(str(exc), EXIT_USAGE)
    click.echo(json.dumps(report.to_dict()))
    if not report.passed:
        sys.exit(EXIT_FAIL)


def _sweep_row(args):
    a, N = args
    sol = solve_full(a, SolverOptions(N=N))
    exact = cf.rate_exact(sol.a)
    return (sol.a, exact, sol.I_total, abs(sol.I_total - exact) / exact, sol.b_star,
            sol.t_B_est, sol.x_B_est, sol.converged)


def sweep_values(a_min, a_max, step):
    n = int(np.floor((a_max - a_min) / step + 1e-9))
    return [round(a_min + k * step, 12) for k in range(n + 1)]


@main.command("sweep")
@click.option("--a-min", type=float, required=True)
@click.option("--a-max", type=float, required=True)
@click.option("--step", type=float, required=True)
@click.option("--grid", "N", type=int, default=512, show_default=True)
@click.option("--out", type=str, default="-", help="CSV path, '-' for stdout.")
@click.option("--jobs", type=int, default=None, help="Worker processes (default: CPU count).")
def cmd_sweep(a_min, a_max, step, N, out, jobs):
    """Solver against closed form over a range of a, one CSV row per a."""
    if not (0.0 < a_min <= a_max < 1.0) or not step > 0:
        _die("need 0 < a_min <= a_max < 1 and step > 0", EXIT_USAGE)
    if N < 16:
        _die("grid must be >= 16", EXIT_USAGE)
    if jobs is None:
        jobs = os.cpu_count() or 1
    if jobs < 1:
        _die("jobs must be >= 1", EXIT_USAGE)
    tasks = [(a, N) for a in sweep_values(a_min, a_max, step)]
    if jobs == 1 or len(tasks) == 1:
        rows = [_sweep_row(task) for task in tasks]
    else:
        with ProcessPoolExecutor(max_workers=min(jobs, len(tasks))) as pool:
            rows = list(pool.map(_sweep_row, tasks))
    header = ["a", "I_exact", "I_solver", "rel_err", "b_star", "t_B_est", "x_B_est", "converged"]
    _emit(_csv_text(header, rows), out)
    if not all(row[-1] for row in rows):
        _die("some rows did not converge", EXIT_FAIL)


if __name__ == "__main__":
    main()
