"""Closed-form rate, limit shape, planted density, breakpoint and optimal slack.

Every function takes the through-time ``a`` of the conditioning point (1, a).
Formulas are written for a <= 1/2; larger ``a`` is mapped through t -> 1 - t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import DomainError, GridAlignmentError, PathProfile, make_uniform_grid


def _check_a(a, upper=1.0, closed_upper=False):
    ok = 0.0 < a < upper or (closed_upper and a == upper)
    if not ok:
        bracket = "]" if closed_upper else ")"
        raise DomainError(f"a must lie in (0, {upper:g}{bracket}, got {a!r}")


def _denominator(a):
    # 3 - sqrt(8a) lies in [1, 3) for a in (0, 1/2]
    return 3.0 - math.sqrt(8.0 * a)


def rate_exact(a: float) -> float:
    """Minimal rate 8 / (3 a'^2 (3 - sqrt(8 a'))^2) with a' = min(a, 1 - a)."""
    _check_a(a)
    a = min(a, 1.0 - a)
    return 8.0 / (3.0 * a * a * _denominator(a) ** 2)


def r3_coefficient(a: float) -> float:
    """Coefficient of -r^3 in the log tail probability of the geodesic at time a."""
    return rate_exact(a)


def breakpoint(a: float) -> tuple[float, float]:
    """(x_B, t_B) where the straight piece after ``a`` merges into the parabola."""
    _check_a(a, 0.5, closed_upper=True)
    return 4.0 * (1.0 - math.sqrt(2.0 * a)) / _denominator(a), 2.0 * a


def rho0_exact(a: float) -> float:
    """Constant planted density on [0, 2a]."""
    _check_a(a, 0.5, closed_upper=True)
    return 1.0 / (a * a * _denominator(a) ** 2)


def b_opt_exact(a: float) -> float:
    """Optimal slack at the through-point, equal to the planted mass on [0, a]."""
    _check_a(a, 0.5, closed_upper=True)
    return 1.0 / (a * _denominator(a) ** 2)


def _shape_half(a, t):
    t = np.asarray(t, dtype=float)
    s2 = math.sqrt(2.0 * a)
    den = _denominator(a)
    x_b = 4.0 * (1.0 - s2) / den
    line = 1.0 + (t - a) / a * (x_b - 1.0)
    parabola = 4.0 * (np.sqrt(np.maximum(t, 0.0)) - t) / (s2 * den)
    return np.where(t <= a, t / a, np.where(t <= 2.0 * a, line, parabola))


def _density_half(a, t):
    t = np.asarray(t, dtype=float)
    den2 = _denominator(a) ** 2
    flat = 1.0 / (a * a * den2)
    with np.errstate(divide="ignore"):
        tail = 2.0 / (a * t * den2)
    return np.where(t <= 2.0 * a, flat, tail)


def _check_t(t):
    t = np.asarray(t, dtype=float)
    if np.any((t < 0) | (t > 1)) or np.any(~np.isfinite(t)):
        raise DomainError("t must lie in [0, 1]")
    return t


def _scalar_or_array(x, like):
    return float(x) if np.ndim(like) == 0 else x


def shape_exact(a: float, t):
    """Limit shape F_a(t) of the conditioned geodesic, scaled so F_a(a) = 1."""
    _check_a(a)
    tt = _check_t(t)
    out = _shape_half(a, tt) if a <= 0.5 else _shape_half(1.0 - a, 1.0 - tt)
    return _scalar_or_array(out, t)


def density_exact(a: float, t):
    """Planted density of the minimal-rate metric.

    For a > 1/2 the density of 1 - a is reflected in time.
    """
    _check_a(a)
    tt = _check_t(t)
    out = _density_half(a, tt) if a <= 0.5 else _density_half(1.0 - a, 1.0 - tt)
    return _scalar_or_array(out, t)


def shape_derivative_exact(a: float, t):
    """dF_a/dt on the open pieces (one-sided at the junctions); a <= 1/2 only."""
    _check_a(a, 0.5, closed_upper=True)
    t = np.asarray(t, dtype=float)
    x_b, _ = breakpoint(a)
    s2 = math.sqrt(2.0 * a)
    with np.errstate(divide="ignore"):
        par = 4.0 * (0.5 / np.sqrt(t) - 1.0) / (s2 * _denominator(a))
    return np.where(t <= a, 1.0 / a, np.where(t <= 2.0 * a, (x_b - 1.0) / a, par))


@dataclass(frozen=True)
class ClosedFormSolution:
    a: float
    I: float
    t_B: float
    x_B: float
    b_opt: float
    rho0: float


def closed_form_solution(a: float) -> ClosedFormSolution:
    """All closed-form summary numbers for through-time ``a`` in (0, 1).

    For a > 1/2 the breakpoint is reported in the original time direction,
    t_B = 1 - 2(1 - a).
    """
    _check_a(a)
    h = min(a, 1.0 - a)
    x_b, t_b = breakpoint(h)
    if a > 0.5:
        t_b = 1.0 - t_b
    return ClosedFormSolution(a=a, I=rate_exact(a), t_B=t_b, x_B=x_b,
                              b_opt=b_opt_exact(h), rho0=rho0_exact(h))


def assemble_closed_form(a: float, N: int, strict: bool = True) -> PathProfile:
    """Sample the closed-form minimizer on a uniform N-cell grid over [0, 1].

    F is taken at nodes and rho at cell midpoints. Both ``a`` and the
    breakpoint must be grid nodes unless ``strict`` is False, in which case
    the kinks simply fall inside cells.
    """
    _check_a(a)
    grid = make_uniform_grid(0.0, 1.0, N)
    t_b = closed_form_solution(a).t_B
    for label, time in (("a", a), ("breakpoint", t_b)) if strict else ():
        try:
            grid.node_index(time)
        except GridAlignmentError:
            raise GridAlignmentError(f"{label}={time!r} is not a node of the {N}-cell grid") from None
    F = np.asarray(shape_exact(a, grid.nodes))
    rho = np.asarray(density_exact(a, grid.midpoints))
    return PathProfile(grid, F, rho)
