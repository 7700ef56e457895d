"""The numba and numpy backends must agree on every kernel."""

import os
import subprocess
import sys

import numpy as np
import pytest

from dlgeodesic import kernels
from dlgeodesic.kernels import numba_backend, numpy_backend


def _inputs(N, seed):
    rng = np.random.default_rng(seed)
    t = np.linspace(rng.uniform(0.05, 0.5), rng.uniform(0.6, 2.0), N + 1)
    F = np.cumsum(rng.normal(0, 0.2, N + 1))
    rho = rng.exponential(2.0, N)
    return t, F, rho


@pytest.mark.parametrize("N", [2, 3, 17, 200])
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_backends_agree(N, seed):
    t, F, rho = _inputs(N, seed)
    for exact in (True, False):
        assert np.allclose(numba_backend.cell_costs(t, F, exact), numpy_backend.cell_costs(t, F, exact),
                           rtol=1e-12, atol=1e-12)
        assert np.allclose(numba_backend.slack(t, F, rho, 0.7, exact), numpy_backend.slack(t, F, rho, 0.7, exact),
                           rtol=1e-12, atol=1e-12)
        v1, g1, r1, s1 = numba_backend.reduced_objective(t, F, 0.7, exact)
        v2, g2, r2, s2 = numpy_backend.reduced_objective(t, F, 0.7, exact)
        assert v1 == pytest.approx(v2, rel=1e-12)
        for x, y in ((g1, g2), (r1, r2), (s1, s2)):
            assert np.allclose(x, y, rtol=1e-10, atol=1e-10)
    assert np.array_equal(numba_backend.upper_hull(t, F), numpy_backend.upper_hull(t, F))
    assert np.allclose(numba_backend.concave_majorant(t, F), numpy_backend.concave_majorant(t, F), atol=1e-12)
    assert np.allclose(numba_backend.monotone_majorant(t, F), numpy_backend.monotone_majorant(t, F), atol=1e-12)
    M1, M2 = numba_backend.pair_margins(t, F, rho), numpy_backend.pair_margins(t, F, rho)
    fin = np.isfinite(M2)
    assert np.array_equal(fin, np.isfinite(M1))
    assert np.allclose(M1[fin], M2[fin], rtol=1e-10, atol=1e-10)


def test_majorants():
    t = np.linspace(0.0, 1.0, 6)
    y = np.array([0.0, 1.0, 0.2, 0.9, 0.1, 0.5])
    c = kernels.concave_majorant(t, y)
    assert np.all(c >= y - 1e-15)
    assert np.all(np.diff(c, 2) <= 1e-12)
    m = kernels.monotone_majorant(t, y)
    assert np.all(np.diff(m) >= -1e-15) and np.all(m >= c - 1e-15)
    assert m[-1] == pytest.approx(1.0)


def test_reduced_objective_gradient():
    t = np.linspace(0.3, 1.0, 41)
    rng = np.random.default_rng(5)
    F = 1.0 - t + 0.05 * rng.standard_normal(t.size)
    b = 0.4
    v, g, _, _ = kernels.reduced_objective(t, F, b, True)
    h = 1e-6
    for k in (1, 7, 20, 39):
        e = np.zeros_like(F)
        e[k] = h
        fd = (kernels.reduced_objective(t, F + e, b, True)[0] - kernels.reduced_objective(t, F - e, b, True)[0]) / (2 * h)
        assert g[k] == pytest.approx(fd, rel=1e-5, abs=1e-8)


def test_env_flag_selects_backend():
    code = "from dlgeodesic import kernels; print(kernels.BACKEND)"
    for name in ("numpy", "numba"):
        env = dict(os.environ, DLGEODESIC_BACKEND=name)
        out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
        assert out.stdout.strip() == name
    env = dict(os.environ, DLGEODESIC_BACKEND="fortran")
    bad = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert bad.returncode != 0
