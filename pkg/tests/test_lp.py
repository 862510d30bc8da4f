import numpy as np
import pytest

from qcqp.lp import DUAL_FEAS_TOL, LinearProgram, LpStatus, solve_lp


def test_simple_lp():
    # min -x - y s.t. x + y <= 1, x, y >= 0 -> value -1 on the simplex face
    lp = LinearProgram(
        c=[-1.0, -1.0],
        a_ub=[[1.0, 1.0]],
        b_ub=[1.0],
        lb=[0.0, 0.0],
    )
    res = solve_lp(lp)
    assert res.status is LpStatus.OPTIMAL
    assert res.value == pytest.approx(-1.0)
    assert res.y.sum() == pytest.approx(1.0)


def test_equality_constraints():
    lp = LinearProgram(
        c=[1.0, 2.0],
        a_eq=[[1.0, 1.0]],
        b_eq=[3.0],
        lb=[0.0, 0.0],
    )
    res = solve_lp(lp)
    assert res.status is LpStatus.OPTIMAL
    assert np.allclose(res.y, [3.0, 0.0])
    assert res.value == pytest.approx(3.0)


def test_infeasible():
    lp = LinearProgram(c=[1.0], a_ub=[[1.0], [-1.0]], b_ub=[0.0, -1.0])
    res = solve_lp(lp)
    assert res.status is LpStatus.INFEASIBLE


def test_unbounded():
    lp = LinearProgram(c=[-1.0], lb=[0.0])
    res = solve_lp(lp)
    assert res.status is LpStatus.UNBOUNDED


def test_duals_certify_value():
    # strong duality: b'l(ub duals) recovers the optimal value on this instance
    lp = LinearProgram(
        c=[-3.0, -5.0],
        a_ub=[[1.0, 0.0], [0.0, 2.0], [3.0, 2.0]],
        b_ub=[4.0, 12.0, 18.0],
        lb=[0.0, 0.0],
    )
    res = solve_lp(lp, check_duals=True)
    assert res.status is LpStatus.OPTIMAL
    assert res.value == pytest.approx(-36.0)
    assert res.duals_ub is not None
    assert np.min(res.duals_ub) >= -DUAL_FEAS_TOL
    # dual objective -b'lambda matches the primal value at optimality
    assert -res.duals_ub @ lp.b_ub == pytest.approx(res.value, abs=1e-7)


def test_column_count_validation():
    with pytest.raises(ValueError):
        LinearProgram(c=[1.0, 2.0], a_ub=[[1.0]], b_ub=[0.0])
