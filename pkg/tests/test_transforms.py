import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dlgeodesic import (
    DomainError,
    NonuniformGridError,
    PathProfile,
    concavify,
    decreasing_rearrangement,
    g_eval,
    improve,
    make_uniform_grid,
    rate,
)


def test_rearrangement_examples():
    assert np.array_equal(decreasing_rearrangement([1, 3, 2]), [3, 2, 1])
    assert np.array_equal(decreasing_rearrangement([5, 5, 5]), [5, 5, 5])
    assert np.all(np.cumsum([3, 2, 1]) >= np.cumsum([1, 3, 2]))


def test_rearrangement_width_checks():
    with pytest.raises(NonuniformGridError):
        decreasing_rearrangement([1.0, 2.0], widths=[0.1, 0.2])
    with pytest.raises(DomainError):
        decreasing_rearrangement([1.0, 2.0], widths=[0.1, 0.1, 0.1])


@given(st.lists(st.floats(0, 1e3), min_size=1, max_size=200))
def test_rearrangement_properties(values):
    rho = np.array(values)
    out = decreasing_rearrangement(rho)
    assert np.all(np.diff(out) <= 0)
    assert math.fsum(out ** 1.5) == math.fsum(rho ** 1.5)
    assert np.all(np.cumsum(out) >= np.cumsum(rho) - 1e-9 * (1 + rho.sum()))


def test_concavify_fills_dip():
    g = make_uniform_grid(1.0, 2.0, 2)
    p = PathProfile(g, [1.0, 0.9, 1.1], [0.3, 0.7])
    out = concavify(p)
    assert np.allclose(out.F, [1.0, 1.05, 1.1])
    assert np.array_equal(out.rho, p.rho)


def test_concavify_fixed_points():
    g = make_uniform_grid(0.5, 2.0, 30)
    t = g.nodes
    line = PathProfile(g, -0.8 * t, np.ones(30))
    assert np.allclose(concavify(line).F, line.F, atol=1e-14)
    conc = PathProfile(g, np.sqrt(t) - 0.3 * t, np.ones(30))
    assert np.allclose(concavify(conc).F, conc.F, atol=1e-14)


def test_concavify_needs_positive_start():
    g = make_uniform_grid(0.0, 1.0, 4)
    with pytest.raises(DomainError):
        concavify(PathProfile(g, np.zeros(5), np.zeros(4)))


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**31 - 1), mirror=st.booleans())
def test_improve_keeps_feasibility(seed, mirror):
    rng = np.random.default_rng(seed)
    N = int(rng.integers(3, 40))
    g = make_uniform_grid(rng.uniform(0.1, 0.6), rng.uniform(0.8, 1.5), N)
    F = np.cumsum(rng.normal(0, 0.3, N + 1)) * (-1 if mirror else 1)
    rho = rng.exponential(2.0, N)
    b = rng.uniform(0, 1)
    p = PathProfile(g, F, rho)
    g0 = g_eval(p, b).g
    shift = max(0.0, float(np.max(-g0[1:] / (g.nodes[1:] - g.t_start))))
    p = p.with_rho(rho + shift * (1 + 1e-9))
    g0 = g_eval(p, b).g
    out = improve(p)
    assert rate(out) <= rate(p) * (1 + 1e-12)
    g1 = g_eval(out, b).g
    assert np.all(g1 >= g0 - 1e-10 * (1 + np.max(np.abs(g0))))
    assert np.all(np.diff(out.rho) <= 0)
    assert out.F[0] == p.F[0] and out.F[-1] == p.F[-1]
