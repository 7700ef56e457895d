"""Feasibility-preserving improvements of a candidate (F, rho) pair.

``concavify`` replaces F by a concave curve whose slope never exceeds F/t,
leaving rho alone; ``decreasing_rearrangement`` sorts rho into nonincreasing
order. Neither changes the rate, and neither lowers the slack trace at any
node (under the exact slack scheme).
"""

from __future__ import annotations

import numpy as np

from . import kernels
from .core import DomainError, NonuniformGridError, PathProfile


def concavify(profile: PathProfile) -> PathProfile:
    """Two-stage transform of F.

    1. G(t)/t is the running minimum of F(tau)/tau, floored at F(t_end)/t_end
       so the right endpoint is kept.
    2. The result is the least concave majorant of G through the nodes.
    """
    grid = profile.grid
    t = grid.nodes
    if grid.t_start <= 0:
        raise DomainError("concavify needs t_start > 0")
    F = profile.F
    # the transform is stated for x1/t1 > x2/t2; the mirrored case is x -> -x
    sign = -1.0 if F[0] / t[0] < F[-1] / t[-1] else 1.0
    F = sign * F
    ratio = np.maximum(np.minimum.accumulate(F / t), F[-1] / t[-1])
    G = ratio * t
    G[0], G[-1] = F[0], F[-1]
    hull = kernels.concave_majorant(t, np.ascontiguousarray(G))
    return profile.with_F(sign * hull)


def decreasing_rearrangement(rho, widths=None) -> np.ndarray:
    """Cell densities sorted into nonincreasing order.

    Sorting is only measure-preserving for equal cell widths; pass
    ``widths`` to have that checked.
    """
    rho = np.asarray(rho, dtype=float)
    if widths is not None:
        w = np.asarray(widths, dtype=float)
        if w.shape != rho.shape:
            raise DomainError("one width per cell is required")
        if np.ptp(w) > 1e-9 * np.max(np.abs(w)):
            raise NonuniformGridError("rearrangement needs equal cell widths")
    return np.sort(rho, kind="stable")[::-1].copy()


def improve(profile: PathProfile) -> PathProfile:
    """concavify followed by rearranging rho."""
    out = concavify(profile)
    return out.with_rho(decreasing_rearrangement(out.rho, out.grid.widths))
