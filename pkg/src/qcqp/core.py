"""Problem representation, evaluation, and equivalent-form transforms.

Quadratic functions f(x) = x'Px + q'x + r are stored as upper-triangle
triplets of the symmetric matrix P plus a dense linear term.  All types
are immutable after construction, so they can be shared freely between
threads and worker processes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import DegenerateHomogeneousError, DimensionMismatchError

Triplet = tuple[int, int, float]


def _normalize_triplets(n: int, triplets: Iterable[Triplet]) -> tuple[Triplet, ...]:
    """Merge duplicates, fold to the upper triangle, sort row-major, drop zeros."""
    acc: dict[tuple[int, int], float] = {}
    for i, j, v in triplets:
        i, j = int(i), int(j)
        if not (0 <= i < n and 0 <= j < n):
            raise DimensionMismatchError(f"triplet index ({i},{j}) out of range for n={n}")
        if i > j:
            i, j = j, i
        acc[(i, j)] = acc.get((i, j), 0.0) + float(v)
    return tuple((i, j, v) for (i, j), v in sorted(acc.items()) if v != 0.0)


@dataclass(frozen=True)
class QuadraticForm:
    """f(x) = x'Px + q'x + r with symmetric P stored as upper-triangle triplets."""

    n: int
    triplets: tuple[Triplet, ...]
    q: tuple[float, ...]
    r: float

    @classmethod
    def create(cls, n, triplets=(), q=None, r=0.0) -> "QuadraticForm":
        n = int(n)
        if n < 0:
            raise DimensionMismatchError("dimension must be nonnegative")
        if q is None:
            q = np.zeros(n)
        q = np.asarray(q, dtype=float)
        if q.shape != (n,):
            raise DimensionMismatchError(f"q has shape {q.shape}, expected ({n},)")
        return cls(n=n, triplets=_normalize_triplets(n, triplets), q=tuple(q), r=float(r))

    @classmethod
    def from_dense(cls, P, q=None, r=0.0) -> "QuadraticForm":
        """Build from a dense matrix; P is symmetrized as (P + P') / 2."""
        P = np.atleast_2d(np.asarray(P, dtype=float))
        n = P.shape[0]
        if P.shape != (n, n):
            raise DimensionMismatchError("P must be square")
        S = 0.5 * (P + P.T)
        iu, ju = np.triu_indices(n)
        trips = [(int(i), int(j), float(S[i, j])) for i, j in zip(iu, ju) if S[i, j] != 0.0]
        return cls.create(n, trips, q, r)

    @cached_property
    def dense_p(self) -> np.ndarray:
        """Densified symmetric matrix P (read-only)."""
        P = np.zeros((self.n, self.n))
        for i, j, v in self.triplets:
            P[i, j] = v
            if i != j:
                P[j, i] = v
        P.setflags(write=False)
        return P

    @cached_property
    def q_vec(self) -> np.ndarray:
        q = np.array(self.q, dtype=float)
        q.setflags(write=False)
        return q

    @property
    def is_affine(self) -> bool:
        return not self.triplets

    def __call__(self, x) -> float:
        return evaluate(self, x)

    def scaled(self, alpha: float) -> "QuadraticForm":
        return QuadraticForm.create(
            self.n,
            [(i, j, alpha * v) for i, j, v in self.triplets],
            alpha * self.q_vec,
            alpha * self.r,
        )

    def negated(self) -> "QuadraticForm":
        return self.scaled(-1.0)

    def gradient(self, x) -> np.ndarray:
        x = _check_vector(x, self.n)
        return 2.0 * (self.dense_p @ x) + self.q_vec


def _check_vector(x, n: int) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (n,):
        raise DimensionMismatchError(f"point has shape {x.shape}, expected ({n},)")
    return x


def evaluate(form: QuadraticForm, x) -> float:
    """Evaluate x'Px + q'x + r with P treated as a full symmetric matrix."""
    x = _check_vector(x, form.n)
    return float(x @ (form.dense_p @ x) + form.q_vec @ x + form.r)


def evaluate_triplets(form: QuadraticForm, x) -> float:
    """Triplet-wise evaluation; cross-checks the densified path in tests."""
    x = _check_vector(x, form.n)
    total = form.r + float(form.q_vec @ x)
    for i, j, v in form.triplets:
        total += (v if i == j else 2.0 * v) * x[i] * x[j]
    return total


class Sense(Enum):
    """Constraint sense: f(x) <= 0 or f(x) = 0."""

    LE = "le"
    EQ = "eq"


@dataclass(frozen=True)
class Constraint:
    form: QuadraticForm
    sense: Sense = Sense.LE

    def violation(self, x) -> float:
        v = evaluate(self.form, x)
        return abs(v) if self.sense is Sense.EQ else max(v, 0.0)


@dataclass(frozen=True)
class Assessment:
    """Pair (max constraint violation, objective value), ordered lexicographically."""

    violation: float
    objective: float

    def as_tuple(self) -> tuple[float, float]:
        return (self.violation, self.objective)

    def better_than(self, other: "Assessment") -> bool:
        return self.as_tuple() < other.as_tuple()

    def __le__(self, other: "Assessment") -> bool:
        return self.as_tuple() <= other.as_tuple()

    def __lt__(self, other: "Assessment") -> bool:
        return self.as_tuple() < other.as_tuple()


@dataclass(frozen=True)
class QcqpProblem:
    """Minimize objective(x) subject to a list of quadratic constraints."""

    n: int
    objective: QuadraticForm
    constraints: tuple[Constraint, ...]

    @classmethod
    def create(cls, objective: QuadraticForm, constraints: Sequence[Constraint] = ()) -> "QcqpProblem":
        n = objective.n
        for k, c in enumerate(constraints):
            if c.form.n != n:
                raise DimensionMismatchError(f"constraint {k} has dimension {c.form.n}, expected {n}")
        return cls(n=n, objective=objective, constraints=tuple(constraints))

    @property
    def m(self) -> int:
        return len(self.constraints)


def assess(problem: QcqpProblem, x) -> Assessment:
    """Maximum constraint violation and objective value at x."""
    x = _check_vector(x, problem.n)
    v = 0.0
    for c in problem.constraints:
        v = max(v, c.violation(x))
    return Assessment(violation=v, objective=evaluate(problem.objective, x))


def _lift_form(form: QuadraticForm, n_new: int, extra_q: Sequence[tuple[int, float]] = ()) -> QuadraticForm:
    """Embed a form into a larger variable space, optionally adding linear terms."""
    q = np.zeros(n_new)
    q[: form.n] = form.q_vec
    for idx, val in extra_q:
        q[idx] += val
    return QuadraticForm.create(n_new, form.triplets, q, form.r)


def to_epigraph(problem: QcqpProblem) -> QcqpProblem:
    """Epigraph form: minimize t subject to f0(x) - t <= 0 and the original constraints."""
    n = problem.n
    t_idx = n
    obj_q = np.zeros(n + 1)
    obj_q[t_idx] = 1.0
    new_obj = QuadraticForm.create(n + 1, (), obj_q, 0.0)
    epi = Constraint(_lift_form(problem.objective, n + 1, [(t_idx, -1.0)]), Sense.LE)
    lifted = [Constraint(_lift_form(c.form, n + 1), c.sense) for c in problem.constraints]
    return QcqpProblem.create(new_obj, [epi] + lifted)


def _homogenize_form(form: QuadraticForm) -> QuadraticForm:
    """Block form [[P, q/2], [q'/2, r]] acting on (x, z_{n+1})."""
    n = form.n
    trips = list(form.triplets)
    for i, qi in enumerate(form.q):
        if qi != 0.0:
            trips.append((i, n, 0.5 * qi))
    if form.r != 0.0:
        trips.append((n, n, form.r))
    return QuadraticForm.create(n + 1, trips)


def to_homogeneous(problem: QcqpProblem) -> QcqpProblem:
    """Homogeneous form in n+1 variables with the added constraint z_{n+1}^2 = 1."""
    n = problem.n
    new_obj = _homogenize_form(problem.objective)
    constraints = [Constraint(_homogenize_form(c.form), c.sense) for c in problem.constraints]
    unit = QuadraticForm.create(n + 1, [(n, n, 1.0)], None, -1.0)
    constraints.append(Constraint(unit, Sense.EQ))
    return QcqpProblem.create(new_obj, constraints)


def dehomogenize(z) -> np.ndarray:
    """Recover x = (z_1/z_{n+1}, ..., z_n/z_{n+1}) from a homogeneous point."""
    z = np.asarray(z, dtype=float)
    if z.ndim != 1 or z.size < 2:
        raise DimensionMismatchError("homogeneous point must be a vector of length >= 2")
    if z[-1] == 0.0:
        raise DegenerateHomogeneousError("homogenizing coordinate is zero")
    return z[:-1] / z[-1]
