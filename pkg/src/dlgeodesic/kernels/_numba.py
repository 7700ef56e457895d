"""Loop kernels compiled with numba. Same contracts as ``_numpy``."""

import numpy as np
from numba import njit


@njit(cache=True)
def cell_costs(t, F, exact):
    n = t.size - 1
    out = np.empty(n)
    for k in range(n):
        t0 = t[k]
        t1 = t[k + 1]
        c = (F[k] * t1 - F[k + 1] * t0) / (t1 - t0)
        if exact:
            den = t0 * t1
        else:
            den = 0.25 * (t0 + t1) * (t0 + t1)
        if den == 0.0:
            out[k] = 0.0 if c == 0.0 else np.inf
        else:
            out[k] = c * c / den
    return out


@njit(cache=True)
def slack(t, F, rho, b, exact):
    q = cell_costs(t, F, exact)
    g = np.empty(t.size)
    g[0] = b
    acc = b
    for k in range(t.size - 1):
        acc += (rho[k] - q[k]) * (t[k + 1] - t[k])
        g[k + 1] = acc
    return g


@njit(cache=True)
def upper_hull(t, y):
    idx = np.empty(t.size, dtype=np.int64)
    m = 0
    for k in range(t.size):
        while m >= 2:
            i = idx[m - 2]
            j = idx[m - 1]
            if (y[j] - y[i]) * (t[k] - t[i]) <= (y[k] - y[i]) * (t[j] - t[i]):
                m -= 1
            else:
                break
        idx[m] = k
        m += 1
    return idx[:m].copy()


@njit(cache=True)
def concave_majorant(t, y):
    idx = upper_hull(t, y)
    out = np.empty(t.size)
    for v in range(idx.size - 1):
        i = idx[v]
        j = idx[v + 1]
        slope = (y[j] - y[i]) / (t[j] - t[i])
        for k in range(i, j):
            out[k] = y[i] + slope * (t[k] - t[i])
    out[t.size - 1] = y[t.size - 1]
    return out


@njit(cache=True)
def monotone_majorant(t, y):
    out = concave_majorant(t, y)
    for k in range(1, t.size):
        if out[k] < out[k - 1]:
            out[k] = out[k - 1]
    return out


@njit(cache=True)
def pair_margins(t, F, rho):
    n = t.size
    P = np.empty(n)
    P[0] = 0.0
    for k in range(n - 1):
        dt = t[k + 1] - t[k]
        s = (F[k + 1] - F[k]) / dt
        P[k + 1] = P[k] + (rho[k] - s * s) * dt
    M = np.full((n, n), np.inf)
    for i in range(n):
        for j in range(i + 1, n):
            dF = F[j] - F[i]
            M[i, j] = P[j] - P[i] + dF * dF / (t[j] - t[i])
    return M


@njit(cache=True)
def reduced_objective(t, F, b, exact):
    n = t.size - 1
    c = np.empty(n)
    den = np.empty(n)
    C = np.empty(n + 1)
    C[0] = 0.0
    acc = -b
    for k in range(n):
        t0 = t[k]
        t1 = t[k + 1]
        dt = t1 - t0
        c[k] = (F[k] * t1 - F[k + 1] * t0) / dt
        if exact:
            den[k] = t0 * t1
        else:
            den[k] = 0.25 * (t0 + t1) * (t0 + t1)
        acc += c[k] * c[k] / den[k] * dt
        C[k + 1] = acc
    P = monotone_majorant(t, C)
    rho = np.empty(n)
    grad = np.zeros(n + 1)
    value = 0.0
    for k in range(n):
        dt = t[k + 1] - t[k]
        r = (P[k + 1] - P[k]) / dt
        if r < 0.0:
            r = 0.0
        rho[k] = r
        sr = np.sqrt(r)
        value += r * sr * dt
        w = 4.0 * sr * c[k] / den[k]
        grad[k] += w * t[k + 1]
        grad[k + 1] -= w * t[k]
    g = np.empty(n + 1)
    g[0] = b
    for k in range(1, n + 1):
        g[k] = P[k] - C[k]
    return 4.0 / 3.0 * value, grad, rho, g
