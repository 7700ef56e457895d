"""Discrete solver for the relaxed problem on [t1, t2] with initial slack b.

Minimize (4/3) * sum rho^(3/2) dt over node values of F (endpoints fixed)
and cellwise densities rho >= 0, subject to g >= 0 at every node.

For a fixed curve the best density is available in closed form: it is the
slope of the least concave nondecreasing majorant of the cumulative
requirement sum(q dt) - b, where q is the cell cost of F. What remains is a
smooth convex function of the interior node values of F, minimized here by
L-BFGS in coordinates preconditioned with the H^1 stiffness matrix (its
Cholesky factor U, F = F_ref + U^{-1} z). In those coordinates the gradient
norm is the H^{-1} dual norm of the curve gradient, which is also the
stationarity part of the reported KKT residual.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cholesky_banded, solve_banded
from scipy.optimize import minimize

from . import kernels
from .core import (
    DomainError,
    InfeasibleInstanceError,
    InvalidSizeError,
    PathProfile,
    RelaxedInstance,
    SolutionReport,
    make_uniform_grid,
)
from .metric import SCHEMES
from .transforms import concavify, decreasing_rearrangement  # noqa: F401  (re-exported)

log = logging.getLogger(__name__)

MAX_RESTARTS = 8


@dataclass(frozen=True)
class SolverOptions:
    N: int = 512
    g_tol: float = 1e-9
    kkt_tol: float = 1e-6
    max_iters: int = 200_000
    scheme: str = "exact"

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 2:
            raise InvalidSizeError(f"N must be an integer >= 2, got {self.N!r}")
        if not (self.g_tol > 0 and self.kkt_tol > 0):
            raise DomainError("g_tol and kkt_tol must be positive")
        if self.max_iters < 1:
            raise DomainError("max_iters must be >= 1")
        if self.scheme not in SCHEMES:
            raise DomainError(f"scheme must be one of {SCHEMES}")


def initial_guess(inst: RelaxedInstance, N: int) -> PathProfile:
    """Straight chord with constant density.

    The density is x1^2/t1^2 + x2^2/t2^2, raised if needed to the smallest
    constant that keeps every slack node nonnegative under both schemes
    (the formula alone can fall short when b is small and the chord is steep).
    """
    grid = make_uniform_grid(inst.t1, inst.t2, N)
    t = np.ascontiguousarray(grid.nodes)
    F = np.linspace(inst.x1, inst.x2, N + 1)
    rho0 = inst.x1 ** 2 / inst.t1 ** 2 + inst.x2 ** 2 / inst.t2 ** 2
    zero = np.zeros(N)
    for exact in (True, False):
        g = kernels.slack(t, F, zero, float(inst.b), exact)
        need = float(np.max(-g[1:] / (t[1:] - t[0])))
        rho0 = max(rho0, need * (1.0 + 1e-12))
    return PathProfile(grid, F, np.full(N, rho0))


def _check_slack(inst: RelaxedInstance) -> float:
    b_max = inst.b_max
    if inst.b > b_max + 1e-12 * max(1.0, abs(b_max)):
        raise InfeasibleInstanceError(f"b={inst.b!r} exceeds its upper bound {b_max!r}")
    return b_max


def _t_break(t, g, g_tol):
    hit = np.nonzero(g <= g_tol)[0]
    return float(t[hit[0]]) if hit.size else float(t[-1])


def _stiffness_factor(n, dt):
    ab = np.empty((2, n))
    ab[0, 0] = 0.0
    ab[0, 1:] = -1.0 / dt
    ab[1, :] = 2.0 / dt + dt
    U = cholesky_banded(ab)
    # U^T as a lower-banded matrix for solve_banded
    Ut = np.zeros((2, n))
    Ut[0, :] = U[1, :]
    Ut[1, :-1] = U[0, 1:]
    return U, Ut


def _complementarity(rho, g):
    lam_tail = 2.0 * np.sqrt(rho)
    lam = np.empty_like(lam_tail)
    lam[:-1] = lam_tail[:-1] - lam_tail[1:]
    lam[-1] = lam_tail[-1]
    return float(np.sum(np.abs(lam * g[1:])))


def _report_straight(inst, opts, msg):
    grid = make_uniform_grid(inst.t1, inst.t2, opts.N)
    F = np.linspace(inst.x1, inst.x2, opts.N + 1)
    rho = np.zeros(opts.N)
    g = kernels.slack(grid.nodes, F, rho, float(inst.b), opts.scheme == "exact")
    return SolutionReport(
        profile=PathProfile(grid, F, rho),
        I2=0.0,
        g_trace=g,
        t_B_est=_t_break(grid.nodes, g, opts.g_tol),
        iterations=0,
        kkt_residual=0.0,
        converged=bool(g.min() >= -opts.g_tol),
        message=msg,
    )


def _mirror_report(rep: SolutionReport) -> SolutionReport:
    return SolutionReport(
        profile=rep.profile.with_F(-rep.profile.F),
        I2=rep.I2,
        g_trace=rep.g_trace,
        t_B_est=rep.t_B_est,
        iterations=rep.iterations,
        kkt_residual=rep.kkt_residual,
        converged=rep.converged,
        message=rep.message,
    )


def solve_relaxed(inst: RelaxedInstance, opts: SolverOptions | None = None,
                  warm_start=None) -> SolutionReport:
    """Minimal-rate discrete (F, rho) for the relaxed problem.

    ``warm_start`` may give node values of F on the same grid (or any grid,
    in which case it is interpolated).
    """
    opts = opts or SolverOptions()
    b_max = _check_slack(inst)
    if inst.orientation < 0:
        ws = None if warm_start is None else -np.asarray(warm_start, dtype=float)
        return _mirror_report(solve_relaxed(inst.mirrored(), opts, ws))
    if inst.b >= b_max - 1e-14 * max(1.0, abs(b_max)):
        return _report_straight(inst, opts, "b at its upper bound: chord with no planted density")

    exact = opts.scheme == "exact"
    grid = make_uniform_grid(inst.t1, inst.t2, opts.N)
    t = np.ascontiguousarray(grid.nodes)
    N, dt, b = opts.N, grid.dt, float(inst.b)

    if warm_start is None:
        F_ref = np.linspace(inst.x1, inst.x2, N + 1)
    else:
        ws = np.asarray(warm_start, dtype=float)
        if ws.size != N + 1:
            ws = np.interp(np.linspace(0, 1, N + 1), np.linspace(0, 1, ws.size), ws)
        F_ref = ws.copy()
        F_ref[0], F_ref[-1] = inst.x1, inst.x2

    U, Ut = _stiffness_factor(N - 1, dt)
    F = F_ref.copy()

    def curve(z):
        F[1:-1] = F_ref[1:-1] + solve_banded((0, 1), U, z)
        return F

    def fun(z):
        value, grad, _, _ = kernels.reduced_objective(t, curve(z), b, exact)
        return value, solve_banded((1, 0), Ut, grad[1:-1])

    z = np.zeros(N - 1)
    iterations = 0
    message = ""
    kkt = np.inf
    for _ in range(MAX_RESTARTS):
        budget = opts.max_iters - iterations
        if budget <= 0:
            message = "iteration cap reached"
            break
        res = minimize(fun, z, jac=True, method="L-BFGS-B",
                       options={"maxiter": budget, "maxfun": 4 * budget + 20,
                                "ftol": 1e-16, "gtol": 1e-13, "maxcor": 20})
        z = res.x
        iterations += int(res.nit)
        message = str(res.message)
        value, gz = fun(z)
        _, _, rho, g = kernels.reduced_objective(t, F, b, exact)
        stationarity = float(np.linalg.norm(gz))
        kkt = (stationarity + _complementarity(rho, g)) / max(1.0, value)
        if kkt <= opts.kkt_tol:
            break
        # a restart clears the L-BFGS memory; it is the cheap fix for line-search stalls
        log.debug("restart after %d iterations, kkt=%.3e", iterations, kkt)
        if res.nit == 0:
            break

    value, _, rho, g = kernels.reduced_objective(t, curve(z), b, exact)
    profile = PathProfile(grid, F.copy(), rho)
    converged = bool(kkt <= opts.kkt_tol and g.min() >= -opts.g_tol)
    return SolutionReport(
        profile=profile,
        I2=float(value),
        g_trace=g,
        t_B_est=_t_break(t, g, opts.g_tol),
        iterations=iterations,
        kkt_residual=float(kkt),
        converged=converged,
        message=message,
    )
