import numpy as np
import pytest

from qcqp.core import Sense, assess, evaluate
from qcqp.errors import TooLargeError
from qcqp.generators import (
    brute_force,
    gen_beamforming,
    gen_boolean_ls,
    gen_maxbisection,
    gen_maxclique,
    gen_maxcut,
    gen_partitioning,
    gen_3sat,
    laplacian,
)


def test_boolean_ls_encoding():
    p = gen_boolean_ls(6, 4, seed=0)
    assert p.n == 4 and p.m == 4
    # the objective at any sign vector equals ||Ax - b||^2 >= 0
    rng = np.random.default_rng(1)
    x = np.where(rng.standard_normal(4) > 0, 1.0, -1.0)
    assert evaluate(p.objective, x) >= 0.0
    assert assess(p, x).violation == 0.0
    # same seed, same instance
    q = gen_boolean_ls(6, 4, seed=0)
    assert p.objective.triplets == q.objective.triplets


def test_boolean_ls_validates_dims():
    with pytest.raises(ValueError):
        gen_boolean_ls(0, 4)


def test_laplacian():
    W = np.array([[0.0, 2.0], [2.0, 0.0]])
    L = laplacian(W)
    assert np.allclose(L, [[2.0, -2.0], [-2.0, 2.0]])


def test_partitioning_objective_sign():
    W = np.array([[0.0, 1.0], [1.0, 0.0]])
    p = gen_partitioning(W)
    # maximization of x'Wx encoded as minimization of -x'Wx
    assert evaluate(p.objective, [1.0, 1.0]) == pytest.approx(-2.0)
    assert all(c.sense is Sense.EQ for c in p.constraints)


def test_maxcut_value_identity():
    # triangle graph: any 2-1 split cuts two edges
    W = np.ones((3, 3)) - np.eye(3)
    p = gen_maxcut(W)
    x = np.array([1.0, 1.0, -1.0])
    # objective is -(cut value)
    assert evaluate(p.objective, x) == pytest.approx(-2.0)


def test_maxbisection_adds_balance_row():
    W = np.ones((4, 4)) - np.eye(4)
    p = gen_maxbisection(W)
    assert p.m == 5
    bal = p.constraints[-1]
    assert bal.sense is Sense.EQ and bal.form.is_affine
    assert assess(p, [1.0, 1.0, -1.0, -1.0]).violation == 0.0
    assert assess(p, [1.0, 1.0, 1.0, -1.0]).violation > 0.0


def test_maxclique_encoding_and_brute():
    # path graph 0-1-2: the best clique has two vertices
    A = np.array([[1, 1, 0], [1, 1, 1], [0, 1, 1]])
    p = gen_maxclique(A)
    x, f = brute_force(p)
    assert f == pytest.approx(-2.0)
    assert x[1] == 1.0  # the middle vertex is in every maximum clique
    with pytest.raises(ValueError):
        gen_maxclique(np.zeros((2, 2), dtype=int))


def test_3sat_satisfiable_instance():
    clauses = [(1, 2, 3), (-1, 2, 3), (1, -2, 3), (1, 2, -3)]
    p = gen_3sat(clauses)
    x, f = brute_force(p)
    assert x is not None  # a satisfying assignment exists
    assert assess(p, x).violation <= 1e-9
    # all-true satisfies every clause here
    assert assess(p, np.ones(3)).violation == 0.0


def test_3sat_validates_clauses():
    with pytest.raises(ValueError):
        gen_3sat([(1, 1, 2)])
    with pytest.raises(ValueError):
        gen_3sat([(1, 2)])
    with pytest.raises(ValueError):
        gen_3sat([(1, 2, 5)], n_vars=3)


def test_beamforming_structure():
    p = gen_beamforming(3, 4, 2, tau=20.0, eta=2.0, seed=0)
    assert p.n == 6 and p.m == 6
    # objective is the squared norm
    assert evaluate(p.objective, np.ones(6)) == pytest.approx(6.0)
    # lower-bound rows are concave with r = tau, upper rows convex with r = -eta
    for c in p.constraints[:4]:
        assert c.form.r == pytest.approx(20.0)
        assert np.linalg.eigvalsh(c.form.dense_p)[-1] <= 1e-12
    for c in p.constraints[4:]:
        assert c.form.r == pytest.approx(-2.0)
        assert np.linalg.eigvalsh(c.form.dense_p)[0] >= -1e-12


def test_brute_force_boolean_oracle():
    p = gen_boolean_ls(8, 6, seed=2)
    x, f = brute_force(p)
    assert set(np.unique(x)) <= {-1.0, 1.0}
    # exhaustive cross-check by direct enumeration
    best = min(
        evaluate(p.objective, np.array(bits))
        for bits in __import__("itertools").product([-1.0, 1.0], repeat=6)
    )
    assert f == pytest.approx(best)


def test_brute_force_grid_mode():
    # min (x - 0.3)^2 on a grid over [-1, 1]
    from qcqp.core import QcqpProblem, QuadraticForm

    p = QcqpProblem.create(QuadraticForm.create(1, [(0, 0, 1.0)], [-0.6], 0.09))
    x, f = brute_force(p, mode="grid", steps=21)
    assert x[0] == pytest.approx(0.3, abs=0.06)


def test_brute_force_size_caps():
    p = gen_boolean_ls(2, 25, seed=0)
    with pytest.raises(TooLargeError):
        brute_force(p)
    with pytest.raises(ValueError):
        brute_force(gen_beamforming(2, 1, 1, seed=0), mode="boolean")
