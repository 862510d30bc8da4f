import math

import numpy as np
import pytest

from qcqp.onevar import (
    IntervalSet,
    OneVarStatus,
    constraint_solution_set,
    feasible_set,
    intersect,
    minimize_over_set,
    solve_onevar,
)

INF = math.inf


def test_interval_set_validation():
    with pytest.raises(ValueError):
        IntervalSet.of((1.0, 0.0))
    with pytest.raises(ValueError):
        IntervalSet.of((0.0, 2.0), (1.0, 3.0))
    s = IntervalSet.of((2.0, 3.0), (0.0, 1.0))
    assert s.intervals == ((0.0, 1.0), (2.0, 3.0))


def test_closest_point():
    s = IntervalSet.of((0.0, 1.0), (4.0, 5.0))
    assert s.closest_point(2.0) == 1.0
    assert s.closest_point(3.5) == 4.0
    assert s.closest_point(0.5) == 0.5
    with pytest.raises(ValueError):
        IntervalSet.empty().closest_point(0.0)


def test_constraint_solution_set_shapes():
    # x^2 - 1 <= 0 -> [-1, 1]
    s = constraint_solution_set(1.0, 0.0, -1.0)
    assert s.intervals == ((-1.0, 1.0),)
    # -x^2 + 1 <= 0 -> complement of (-1, 1)
    s = constraint_solution_set(-1.0, 0.0, 1.0)
    assert s.intervals == ((-INF, -1.0), (1.0, INF))
    # x^2 + 1 <= 0 -> empty
    assert constraint_solution_set(1.0, 0.0, 1.0).is_empty
    # 2x - 4 <= 0 -> (-inf, 2]
    assert constraint_solution_set(0.0, 2.0, -4.0).intervals == ((-INF, 2.0),)
    # constants
    assert constraint_solution_set(0.0, 0.0, -1.0).intervals == ((-INF, INF),)
    assert constraint_solution_set(0.0, 0.0, 1.0).is_empty


def test_intersect_two_pointer():
    a = IntervalSet.of((-2.0, 1.0), (3.0, 6.0))
    b = IntervalSet.of((0.0, 4.0))
    c = intersect(a, b)
    assert c.intervals == ((0.0, 1.0), (3.0, 4.0))


def test_feasible_set_interval_count():
    # m constraints of -x^2 form produce at most m+1 intervals
    cons = [(-1.0, 0.0, 1.0), (-1.0, 8.0, -15.0)]  # |x|>=1 and x<=3 or x>=5
    s = feasible_set(cons)
    assert len(s.intervals) <= 3


def test_solve_onevar_closed_forms():
    # min (x - 3)^2 s.t. x^2 <= 4 -> x = 2, value 1
    res = solve_onevar((1.0, -6.0, 9.0), [(1.0, 0.0, -4.0)])
    assert res.status is OneVarStatus.OPTIMAL
    assert res.x == pytest.approx(2.0)
    assert res.value == pytest.approx(1.0)
    # unconstrained convex minimum inside
    res = solve_onevar((1.0, -6.0, 9.0), [(1.0, 0.0, -100.0)])
    assert res.x == pytest.approx(3.0) and res.value == pytest.approx(0.0)
    # infeasible
    res = solve_onevar((1.0, 0.0, 0.0), [(1.0, 0.0, 1.0)])
    assert res.status is OneVarStatus.INFEASIBLE
    # unbounded concave objective over the full line
    res = solve_onevar((-1.0, 0.0, 0.0))
    assert res.status is OneVarStatus.UNBOUNDED
    # affine decreasing objective over a half line
    res = solve_onevar((0.0, -1.0, 0.0), [(0.0, -1.0, 0.0)])  # x >= 0
    assert res.status is OneVarStatus.UNBOUNDED
    # concave objective trapped in a bounded interval picks an endpoint
    res = solve_onevar((-1.0, 0.0, 0.0), [(1.0, 0.0, -4.0)])
    assert res.status is OneVarStatus.OPTIMAL
    assert abs(res.x) == pytest.approx(2.0) and res.value == pytest.approx(-4.0)


def _oracle(objective, constraints, lo=-50.0, hi=50.0):
    """Independent check: dense grid plus all constraint roots and vertices."""
    p0, q0, r0 = objective
    pts = set(np.linspace(lo, hi, 4001))
    for p, q, r in constraints:
        roots = np.roots([p, q, r]) if (p != 0.0 or q != 0.0) else []
        for z in np.atleast_1d(roots):
            if abs(np.imag(z)) < 1e-12:
                pts.add(float(np.real(z)))
    if p0 > 0.0:
        pts.add(-q0 / (2.0 * p0))
    best = None
    for x in pts:
        if all(
            p * x * x + q * x + r <= 1e-9 * (1.0 + abs(p) + abs(q) + abs(r))
            for p, q, r in constraints
        ):
            v = p0 * x * x + q0 * x + r0
            if best is None or v < best:
                best = v
    return best


def test_random_instances_against_grid_oracle():
    rng = np.random.default_rng(7)
    checked = 0
    for _ in range(200):
        m = int(rng.integers(0, 6))
        objective = (abs(rng.standard_normal()) + 0.1, rng.standard_normal(), rng.standard_normal())
        constraints = [tuple(rng.standard_normal(3)) for _ in range(m)]
        res = solve_onevar(objective, constraints)
        oracle = _oracle(objective, constraints)
        if res.status is OneVarStatus.INFEASIBLE:
            assert oracle is None
            continue
        if res.status is OneVarStatus.OPTIMAL and abs(res.x) <= 50.0:
            assert oracle is not None
            assert res.value <= oracle + 1e-6
            checked += 1
    assert checked > 50


def test_minimize_over_set_constant_objective():
    s = IntervalSet.of((2.0, 5.0))
    res = minimize_over_set(0.0, 0.0, 7.0, s)
    assert res.status is OneVarStatus.OPTIMAL
    assert res.value == pytest.approx(7.0)
    assert 2.0 <= res.x <= 5.0
