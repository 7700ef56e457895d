"""Pure-numpy kernels. Reference path, and the fallback when numba is off."""

import numpy as np


def cell_costs(t, F, exact):
    """Per-cell value of (F/tau - F')^2 for the piecewise-linear curve F.

    ``exact=True`` returns the cell average of the integrand, which for a
    linear piece is c^2 / (t_k t_{k+1}) with c = F(tau) - tau F'. A cell
    starting at tau = 0 on a curve through the origin costs 0. ``exact=False``
    evaluates F/tau at the cell midpoint.
    """
    t0, t1 = t[:-1], t[1:]
    dt = t1 - t0
    c = (F[:-1] * t1 - F[1:] * t0) / dt
    if exact:
        den = t0 * t1
    else:
        den = 0.25 * (t0 + t1) ** 2
    out = np.empty_like(c)
    zero = den == 0.0
    out[~zero] = c[~zero] ** 2 / den[~zero]
    out[zero] = np.where(c[zero] == 0.0, 0.0, np.inf)
    return out


def slack(t, F, rho, b, exact):
    q = cell_costs(t, F, exact)
    g = np.empty(t.size)
    g[0] = b
    np.cumsum((rho - q) * np.diff(t), out=g[1:])
    g[1:] += b
    return g


def upper_hull(t, y):
    """Indices of the upper convex hull vertices of (t_k, y_k), t increasing."""
    idx = []
    for k in range(t.size):
        while len(idx) >= 2:
            i, j = idx[-2], idx[-1]
            if (y[j] - y[i]) * (t[k] - t[i]) <= (y[k] - y[i]) * (t[j] - t[i]):
                idx.pop()
            else:
                break
        idx.append(k)
    return np.asarray(idx, dtype=np.int64)


def concave_majorant(t, y):
    idx = upper_hull(t, y)
    return np.interp(t, t[idx], y[idx])


def monotone_majorant(t, y):
    """Least concave nondecreasing majorant of (t_k, y_k), anchored at y[0]."""
    return np.maximum.accumulate(concave_majorant(t, y))


def pair_margins(t, F, rho):
    """Matrix M[i, j] = shortcut margin of the chord from node i to node j.

    Entries with j <= i are +inf.
    """
    dt = np.diff(t)
    s = np.diff(F) / dt
    P = np.concatenate(([0.0], np.cumsum((rho - s * s) * dt)))
    span = t[None, :] - t[:, None]
    upper = span > 0
    M = np.full(span.shape, np.inf)
    dF = F[None, :] - F[:, None]
    M[upper] = (P[None, :] - P[:, None])[upper] + dF[upper] ** 2 / span[upper]
    return M


def reduced_objective(t, F, b, exact):
    """Minimal rate over densities for a fixed curve, plus its gradient.

    The optimal density is the slope of the least concave nondecreasing
    majorant of the cumulative requirement sum(q dt) - b. Returns
    (value, grad over all nodes, rho, g).
    """
    dt = np.diff(t)
    t0, t1 = t[:-1], t[1:]
    c = (F[:-1] * t1 - F[1:] * t0) / dt
    den = t0 * t1 if exact else 0.25 * (t0 + t1) ** 2
    q = c * c / den
    C = np.empty(t.size)
    C[0] = 0.0
    np.cumsum(q * dt, out=C[1:])
    C[1:] -= b
    P = monotone_majorant(t, C)
    rho = np.maximum(np.diff(P) / dt, 0.0)
    value = 4.0 / 3.0 * np.sum(rho * np.sqrt(rho) * dt)
    w = 2.0 * np.sqrt(rho) * dt * 2.0 * c / den / dt
    grad = np.zeros(t.size)
    grad[:-1] += w * t1
    grad[1:] -= w * t0
    g = P - C
    g[0] = b
    return value, grad, rho, g
