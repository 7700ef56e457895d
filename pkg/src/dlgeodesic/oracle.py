"""Brute-force reference solver for tiny relaxed instances.

Works on the joint variables (interior F, rho) with a quadratic exterior
penalty on negative slack, driven to feasibility by a continuation in the
penalty weight and finished by a uniform density shift. It shares nothing
with the main solver except the discrete objective itself, which is
re-derived here, and it is only meant for N <= 12.
"""

from __future__ import annotations

import zlib

import numpy as np
from scipy.optimize import minimize

from .core import DomainError, InfeasibleInstanceError, PathProfile, RelaxedInstance, SolutionReport
from .metric import SCHEMES, g_eval, rate
from .relaxed import initial_guess

MAX_CELLS = 12
PENALTIES = (1e1, 1e2, 1e3, 1e4, 1e5, 1e6, 1e7, 1e8)


def _instance_seed(inst, N, restarts):
    return zlib.crc32(repr((inst.t1, inst.x1, inst.t2, inst.x2, inst.b, N, restarts)).encode())


class _Problem:
    def __init__(self, inst, t, scheme):
        self.t = t
        self.dt = t[1] - t[0]
        self.b = inst.b
        self.x1, self.x2 = inst.x1, inst.x2
        self.exact = scheme == "exact"
        self.N = t.size - 1

    def split(self, v):
        F = np.concatenate(([self.x1], v[: self.N - 1], [self.x2]))
        return F, v[self.N - 1:]

    def cell_cost(self, F):
        """Per-cell cost and its partials with respect to the left and right node values."""
        t0, t1, dt = self.t[:-1], self.t[1:], self.dt
        if self.exact:
            c = (F[:-1] * t1 - F[1:] * t0) / dt
            den = t0 * t1
            return c * c / den, 2 * c * t1 / (dt * den), -2 * c * t0 / (dt * den)
        tau = 0.5 * (t0 + t1)
        r = 0.5 * (F[:-1] + F[1:]) / tau - (F[1:] - F[:-1]) / dt
        return r * r, 2 * r * (0.5 / tau + 1 / dt), 2 * r * (0.5 / tau - 1 / dt)

    def slack(self, F, rho):
        q, _, _ = self.cell_cost(F)
        return self.b + np.concatenate(([0.0], np.cumsum((rho - q) * self.dt)))

    def penalized(self, v, mu):
        F, rho = self.split(v)
        q, dq_left, dq_right = self.cell_cost(F)
        g = self.b + np.concatenate(([0.0], np.cumsum((rho - q) * self.dt)))
        viol = np.minimum(g[1:], 0.0)
        value = 4.0 / 3.0 * np.sum(rho ** 1.5) * self.dt + 0.5 * mu * np.sum(viol ** 2)
        # d(penalty)/d(cell j integrand) = dt * sum over later nodes of mu * viol
        tail = self.dt * mu * np.cumsum(viol[::-1])[::-1]
        d_rho = 2.0 * np.sqrt(rho) * self.dt + tail
        dF = np.zeros(self.N + 1)
        dF[:-1] -= tail * dq_left
        dF[1:] -= tail * dq_right
        return value, np.concatenate((dF[1:-1], d_rho))

    def repair(self, F, rho):
        """Smallest uniform increase of rho that makes every slack node nonnegative."""
        g = self.slack(F, rho)
        elapsed = self.t[1:] - self.t[0]
        shift = max(0.0, float(np.max(-g[1:] / elapsed)))
        return rho + shift * (1.0 + 1e-12) + (1e-15 if shift > 0 else 0.0)


def _local_solve(prob, v0):
    n_f = prob.N - 1
    bounds = [(None, None)] * n_f + [(0.0, None)] * prob.N
    v, iters = v0, 0
    for mu in PENALTIES:
        res = minimize(prob.penalized, v, args=(mu,), jac=True, method="L-BFGS-B", bounds=bounds,
                       options={"maxiter": 5000, "ftol": 1e-15, "gtol": 1e-11})
        v, iters = res.x, iters + int(res.nit)
    F, rho = prob.split(v)
    rho = prob.repair(F, np.maximum(rho, 0.0))
    return F, rho, iters


def brute_solve(inst: RelaxedInstance, N_small: int = 8, restarts: int = 8, seed: int | None = None,
                scheme: str = "exact", return_all: bool = False):
    """Best of ``restarts`` penalty-method descents from perturbed feasible starts.

    With ``return_all`` the rates found by every restart are returned as
    well, as ``(report, rates)``.
    """
    if not 2 <= N_small <= MAX_CELLS:
        raise DomainError(f"N_small must lie in [2, {MAX_CELLS}], got {N_small!r}")
    if restarts < 1:
        raise DomainError("restarts must be >= 1")
    if scheme not in SCHEMES:
        raise DomainError(f"scheme must be one of {SCHEMES}")
    if inst.b > inst.b_max + 1e-12 * max(1.0, abs(inst.b_max)):
        raise InfeasibleInstanceError(f"b={inst.b!r} exceeds its upper bound {inst.b_max!r}")

    start = initial_guess(inst, N_small)
    grid = start.grid
    prob = _Problem(inst, grid.nodes, scheme)
    rng = np.random.default_rng(_instance_seed(inst, N_small, restarts) if seed is None else seed)
    spread = 0.25 * max(abs(inst.x1), abs(inst.x2), 1e-3)

    results = []
    total_iters = 0
    for r in range(restarts):
        F0, rho0 = start.F.copy(), start.rho.copy()
        if r > 0:
            F0[1:-1] += spread * rng.standard_normal(N_small - 1)
            rho0 = rho0 * rng.uniform(0.2, 2.0, N_small)
            rho0 = prob.repair(F0, rho0)
        F, rho, iters = _local_solve(prob, np.concatenate((F0[1:-1], rho0)))
        total_iters += iters
        results.append((rate(PathProfile(grid, F, rho)), F, rho))

    best = min(results, key=lambda item: item[0])
    I2, F, rho = best
    profile = PathProfile(grid, F, rho)
    g = g_eval(profile, inst.b, scheme).g
    hit = np.nonzero(g <= 1e-9)[0]
    report = SolutionReport(
        profile=profile,
        I2=float(I2),
        g_trace=g,
        t_B_est=float(grid.nodes[hit[0]]) if hit.size else float(grid.t_end),
        iterations=total_iters,
        kkt_residual=float("nan"),
        converged=bool(g.min() >= -1e-9),
        message=f"best of {restarts} restarts",
    )
    if return_all:
        return report, [float(item[0]) for item in results]
    return report
