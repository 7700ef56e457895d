import numpy as np
import pytest

from dlgeodesic import DomainError, RelaxedInstance, SolverOptions, brute_solve, g_eval, solve_relaxed


def test_half_tail_agreement():
    inst = RelaxedInstance(0.5, 1.0, 1.0, 0.0, 2.0)
    slow = brute_solve(inst, N_small=8, restarts=4)
    fast = solve_relaxed(inst, SolverOptions(N=8))
    assert slow.I2 == pytest.approx(fast.I2, rel=0.05)
    assert slow.converged


def test_zero_cost_at_upper_bound():
    inst = RelaxedInstance(0.4, 1.0, 1.0, 0.2, 0.0)
    inst = inst.with_b(inst.b_max)
    rep = brute_solve(inst, N_small=6, restarts=3)
    assert rep.I2 <= 1e-12
    assert rep.converged


def test_restarts_agree():
    inst = RelaxedInstance(0.25, 1.0, 1.0, 0.0, 1.0)
    rep, rates = brute_solve(inst, N_small=10, restarts=50, return_all=True)
    assert len(rates) == 50
    assert max(rates) <= min(rates) * 1.01
    assert rep.I2 == min(rates)


def test_deterministic():
    inst = RelaxedInstance(0.3, 0.7, 1.0, 0.1, 0.4)
    a = brute_solve(inst, N_small=7, restarts=5)
    b = brute_solve(inst, N_small=7, restarts=5)
    assert a.I2 == b.I2 and np.array_equal(a.profile.F, b.profile.F)
    c = brute_solve(inst, N_small=7, restarts=5, seed=123)
    assert c.I2 == pytest.approx(a.I2, rel=1e-6)


@pytest.mark.parametrize("scheme", ["exact", "midpoint"])
def test_feasible_output(scheme):
    inst = RelaxedInstance(0.2, 0.5, 0.9, -0.1, 0.2)
    rep = brute_solve(inst, N_small=12, restarts=3, scheme=scheme)
    assert g_eval(rep.profile, inst.b, scheme).g.min() >= -1e-9
    fast = solve_relaxed(inst, SolverOptions(N=12, scheme=scheme))
    assert rep.I2 == pytest.approx(fast.I2, rel=1e-4)


def test_limits():
    inst = RelaxedInstance(0.5, 1.0, 1.0, 0.0, 2.0)
    with pytest.raises(DomainError):
        brute_solve(inst, N_small=13)
    with pytest.raises(DomainError):
        brute_solve(inst, N_small=4, restarts=0)
    with pytest.raises(DomainError):
        brute_solve(inst.with_b(5.0), N_small=4)
