"""Dirichlet metric, planted-path lengths, rate functional and shortcut margins."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import (
    DomainError,
    InvalidOrderError,
    PathProfile,
    TimeGrid,
    VerificationReport,
    cell_slopes,
)

SCHEMES = ("exact", "midpoint")
MAX_LISTED = 50


@dataclass(frozen=True, eq=False)
class GTrace:
    grid: TimeGrid
    g: np.ndarray


def dirichlet(x: float, s: float, y: float, t: float) -> float:
    """Dirichlet metric d(x, s; y, t) = -(y - x)^2 / (t - s)."""
    if not s < t:
        raise InvalidOrderError(f"need s < t, got s={s!r}, t={t!r}")
    return -((y - x) ** 2) / (t - s)


def _check_pair(profile: PathProfile, i: int, j: int):
    if not 0 <= i < j <= profile.grid.N:
        raise InvalidOrderError(f"need 0 <= i < j <= {profile.grid.N}, got i={i}, j={j}")


def path_length(profile: PathProfile, i: int, j: int) -> float:
    """Length of the planted path between nodes i and j: sum (rho - F'^2) dt."""
    _check_pair(profile, i, j)
    s = cell_slopes(profile)[i:j]
    return float(np.sum((profile.rho[i:j] - s * s) * profile.grid.widths[i:j]))


def rate(profile: PathProfile) -> float:
    """Rate (4/3) * integral of rho^(3/2), exact for cellwise-constant rho."""
    rho = profile.rho
    return float(4.0 / 3.0 * np.sum(rho * np.sqrt(rho) * profile.grid.widths))


def g_eval(profile: PathProfile, b: float, scheme: str = "exact") -> GTrace:
    """Slack trace g at every node, g[0] = b.

    g(t) = b + integral from t_start to t of (rho - (F/tau - F')^2).

    With ``scheme="exact"`` the integrand is integrated exactly over each
    linear piece of F, so the trace equals the continuum slack at the nodes.
    ``scheme="midpoint"`` samples F/tau at cell midpoints instead.

    A grid starting at t = 0 is accepted only for curves through the origin;
    the first cell then contributes its exact limit.
    """
    if scheme not in SCHEMES:
        raise ValueError(f"scheme must be one of {SCHEMES}, got {scheme!r}")
    t0 = profile.grid.t_start
    if t0 < 0 or (t0 == 0 and profile.F[0] != 0):
        raise DomainError("g needs t_start > 0, or t_start = 0 with F(0) = 0")
    g = kernels.slack(profile.grid.nodes, profile.F, profile.rho, float(b), scheme == "exact")
    return GTrace(profile.grid, g)


def shortcut_margin(profile: PathProfile, i: int, j: int) -> float:
    """Planted length minus the straight-chord Dirichlet length from node i to j.

    Nonnegative means the chord does not beat the planted path.
    """
    t, F = profile.grid.nodes, profile.F
    return path_length(profile, i, j) - dirichlet(F[i], t[i], F[j], t[j])


def margin_matrix(profile: PathProfile) -> np.ndarray:
    """All shortcut margins at once; entries on and below the diagonal are +inf."""
    return kernels.pair_margins(profile.grid.nodes, profile.F, profile.rho)


def verify_geodesic(profile: PathProfile, a: float, margin_tol: float | None = None) -> VerificationReport:
    """Check that no straight chord between nodes beats the planted path.

    Passes iff the smallest margin over all node pairs is >= -margin_tol.
    Margins within margin_tol of zero are expected only for pairs that
    straddle ``a`` (which need not be a node) or whose span carries at most
    margin_tol of planted mass (short or unplanted chords); any others are
    listed in ``near_zero_unexplained``.
    """
    grid = profile.grid
    if margin_tol is None:
        margin_tol = 10.0 / grid.N
    t = grid.nodes
    M = margin_matrix(profile)

    flat = int(np.argmin(M))
    i, j = divmod(flat, M.shape[1])
    min_margin = float(M[i, j])

    vi, vj = np.nonzero(M < -margin_tol)
    order = np.argsort(M[vi, vj], kind="stable")[:MAX_LISTED]
    violations = [(float(t[vi[k]]), float(t[vj[k]]), float(M[vi[k], vj[k]])) for k in order]

    mass = np.concatenate(([0.0], np.cumsum(profile.rho * grid.widths)))
    eps = 1e-9 * grid.dt
    straddle = (t[:, None] < a - eps) & (t[None, :] > a + eps)
    light = (mass[None, :] - mass[:, None]) <= margin_tol
    near = np.abs(M) <= margin_tol
    ni, nj = np.nonzero(near & ~straddle & ~light)
    unexplained = [(float(t[p]), float(t[q]), float(M[p, q])) for p, q in zip(ni[:MAX_LISTED], nj[:MAX_LISTED])]

    return VerificationReport(
        min_margin=min_margin,
        argmin_pair=(float(t[i]), float(t[j])),
        violations=violations,
        passed=bool(min_margin >= -margin_tol),
        margin_tol=float(margin_tol),
        n_violations=int(vi.size),
        near_zero_unexplained=unexplained,
    )
