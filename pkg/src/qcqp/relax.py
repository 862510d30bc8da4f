"""Lower bounds for nonconvex QCQPs and candidate points extracted from them.

Two relaxations are provided.  The spectral relaxation aggregates all
constraints into one with a nonnegative multiplier vector and solves the
resulting one-constraint problem exactly.  The semidefinite relaxation is
approximated from outside by a cutting-plane LP over the lifted variables
(X, x): linear constraints come from the problem data and violated
positive-semidefiniteness of Z = [[X, x], [x', 1]] is cut away one
eigenvector at a time.  Any iterate of the LP is already a valid bound.

tighten appends redundant pairwise products of affine constraints, which
leaves the feasible set unchanged but can strictly improve the lifted bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import Constraint, QcqpProblem, QuadraticForm, Sense
from .errors import NumericalFailureError
from .linalg import psd_project, sym_eigen
from .lp import LinearProgram, LpStatus, solve_lp
from .oneconstraint import OneConstraintStatus, solve_one_constraint


@dataclass(frozen=True)
class RelaxationResult:
    """A lower bound on the minimum, with the object certifying it.

    certificate is the multiplier vector (spectral) or the lifted pair
    (X, x) (cutting plane).  valid goes false when an artificial safeguard
    (the cutting-plane box) was active at the solution, in which case the
    bound may be wrong.
    """

    bound: float
    candidate: np.ndarray | None = None
    certificate: object = None
    valid: bool = True
    trace: tuple[float, ...] = ()
    converged: bool = True


def aggregate_constraints(problem: QcqpProblem, lam) -> QuadraticForm:
    """Single form sum(lam_i * f_i); lam must be >= 0 on inequality rows."""
    lam = np.asarray(lam, dtype=float)
    if lam.shape != (problem.m,):
        raise ValueError(f"lambda has shape {lam.shape}, expected ({problem.m},)")
    for i, (li, c) in enumerate(zip(lam, problem.constraints)):
        if c.sense is Sense.LE and li < 0.0:
            raise ValueError(f"lambda[{i}] < 0 on an inequality constraint")
    trips = []
    q = np.zeros(problem.n)
    r = 0.0
    for li, c in zip(lam, problem.constraints):
        if li == 0.0:
            continue
        trips.extend((i, j, li * v) for i, j, v in c.form.triplets)
        q += li * c.form.q_vec
        r += li * c.form.r
    return QuadraticForm.create(problem.n, trips, q, r)


def spectral_bound(problem: QcqpProblem, lam=None) -> RelaxationResult:
    """Bound from the aggregated one-constraint relaxation.

    Every feasible point satisfies sum(lam_i * f_i) <= 0, so the minimum of
    the objective under that single constraint bounds the true minimum from
    below.  A dual-unbounded subproblem yields the vacuous bound -inf.
    """
    if lam is None:
        lam = np.ones(problem.m)
    agg = aggregate_constraints(problem, lam)
    res = solve_one_constraint(problem.objective, agg)
    if res.status is OneConstraintStatus.DUAL_UNBOUNDED:
        return RelaxationResult(bound=-math.inf, certificate=np.asarray(lam, dtype=float))
    if res.status is OneConstraintStatus.INFEASIBLE:
        # the aggregated set is empty, so the original problem is infeasible
        return RelaxationResult(bound=math.inf, certificate=np.asarray(lam, dtype=float))
    return RelaxationResult(
        bound=res.value,
        candidate=res.x,
        certificate=np.asarray(lam, dtype=float),
    )


# -- cutting-plane approximation of the SDR --------------------------------


@dataclass
class CutPlaneOptions:
    max_cuts: int | None = None  # default 50 n
    psd_tol: float = 1e-6
    box: float | None = None  # default 10 (1 + ||q0||_inf + max_i ||q_i||_inf)
    cut_rule: str = "all_negative"  # or "min_eigenvector"
    cuts_per_iter: int = 8
    seed_cuts: tuple = ()  # extra a-vectors for upfront a'Za >= 0 cuts
    # drop accumulated cuts that are slack with zero dual (keeping recent
    # ones); the final converged value is unchanged, but intermediate bounds
    # may dip, so the default preserves the nondecreasing trace
    prune_slack: bool = False


def axis_pair_cuts(n: int):
    """Cuts a'Za >= 0 for a = e_i +- e_j over the n+1 lifted coordinates.

    With unit diagonal these imply |X_ij| <= 1 and |x_i| <= 1, which keeps
    the LP bounded long before eigenvector cuts accumulate.
    """
    cuts = []
    for i in range(n + 1):
        for j in range(i + 1, n + 1):
            for s in (1.0, -1.0):
                a = np.zeros(n + 1)
                a[i] = 1.0
                a[j] = s
                cuts.append(a)
    return tuple(cuts)


def _tri_index(n: int):
    """Map (i, j) with i <= j to a flat index into the X block."""
    idx = {}
    k = 0
    for i in range(n):
        for j in range(i, n):
            idx[(i, j)] = k
            k += 1
    return idx, k


def _form_row(form: QuadraticForm, idx, n_x: int, n_y: int) -> np.ndarray:
    """Linear coefficients of Tr(P X) + q'x over the lifted variables."""
    row = np.zeros(n_y)
    for i, j, v in form.triplets:
        row[idx[(i, j)]] += v if i == j else 2.0 * v
    row[n_x : n_x + form.n] = form.q_vec
    return row


def _cut_row(a: np.ndarray, idx, n_x: int, n_y: int) -> tuple[np.ndarray, float]:
    """a' Z(X, x) a >= 0 as (row, rhs) with row . y <= rhs."""
    n = a.size - 1
    ax, at = a[:n], a[n]
    row = np.zeros(n_y)
    for i in range(n):
        row[idx[(i, i)]] -= ax[i] * ax[i]
        for j in range(i + 1, n):
            row[idx[(i, j)]] -= 2.0 * ax[i] * ax[j]
    row[n_x : n_x + n] = -2.0 * at * ax
    return row, at * at


def default_box(problem: QcqpProblem) -> float:
    qmax = float(np.max(np.abs(problem.objective.q_vec), initial=0.0))
    cmax = max(
        (float(np.max(np.abs(c.form.q_vec), initial=0.0)) for c in problem.constraints),
        default=0.0,
    )
    return 10.0 * (1.0 + qmax + cmax)


def lifted_pair(y: np.ndarray, n: int, idx) -> tuple[np.ndarray, np.ndarray]:
    X = np.zeros((n, n))
    for (i, j), k in idx.items():
        X[i, j] = y[k]
        X[j, i] = y[k]
    x = y[len(idx) : len(idx) + n].copy()
    return X, x


def sdr_bound_cutting_plane(problem: QcqpProblem, opts: CutPlaneOptions | None = None) -> RelaxationResult:
    """Outer LP approximation of the semidefinite relaxation.

    Iterates: solve the LP over (X upper triangle, x), eigendecompose
    Z = [[X, x], [x', 1]], stop when its minimum eigenvalue is above
    -psd_tol, otherwise add linear cuts a'Za >= 0 from the negative
    eigenvectors.  Each iterate's value is a valid lower bound, so running
    out of the cut budget degrades accuracy but not correctness (the trace
    is returned for budget-based stopping).  A finite box on the lifted
    variables keeps every LP bounded; the bound is flagged invalid when the
    box is active at the final solution.
    """
    if opts is None:
        opts = CutPlaneOptions()
    n = problem.n
    idx, n_x = _tri_index(n)
    n_y = n_x + n
    max_cuts = opts.max_cuts if opts.max_cuts is not None else 50 * n
    B = opts.box if opts.box is not None else default_box(problem)

    c = _form_row(problem.objective, idx, n_x, n_y)
    offset = problem.objective.r
    a_ub, b_ub, a_eq, b_eq = [], [], [], []
    for con in problem.constraints:
        row = _form_row(con.form, idx, n_x, n_y)
        if con.sense is Sense.EQ:
            a_eq.append(row)
            b_eq.append(-con.form.r)
        else:
            a_ub.append(row)
            b_ub.append(-con.form.r)
    lb = np.empty(n_y)
    ub = np.empty(n_y)
    for (i, j), k in idx.items():
        lb[k], ub[k] = -B * B, B * B
    lb[n_x:], ub[n_x:] = -B, B

    for a in opts.seed_cuts:
        row, rhs = _cut_row(np.asarray(a, dtype=float), idx, n_x, n_y)
        a_ub.append(row)
        b_ub.append(rhs)
    n_base = len(a_ub)
    cuts: list[list] = []  # [row, rhs, age]

    trace: list[float] = []
    n_cuts = 0
    converged = False
    y = None
    while True:
        rows_ub = a_ub + [cu[0] for cu in cuts]
        rhs_ub = b_ub + [cu[1] for cu in cuts]
        lp = LinearProgram(
            c=c,
            a_ub=np.array(rows_ub) if rows_ub else None,
            b_ub=np.array(rhs_ub) if rhs_ub else None,
            a_eq=np.array(a_eq) if a_eq else None,
            b_eq=np.array(b_eq) if b_eq else None,
            lb=lb,
            ub=ub,
        )
        res = solve_lp(lp)
        if res.status is LpStatus.INFEASIBLE:
            # no lifted point inside the box satisfies the constraints; the
            # box is artificial, so this is not a full infeasibility proof
            return RelaxationResult(bound=math.inf, valid=False, trace=tuple(trace), converged=True)
        if res.status is not LpStatus.OPTIMAL:
            raise NumericalFailureError("cutting-plane LP did not solve")
        y = res.y
        trace.append(res.value + offset)
        X, x = lifted_pair(y, n, idx)
        Z = np.empty((n + 1, n + 1))
        Z[:n, :n] = X
        Z[:n, n] = x
        Z[n, :n] = x
        Z[n, n] = 1.0
        eig = sym_eigen(Z)
        if eig.values[0] >= -opts.psd_tol:
            converged = True
            break
        if n_cuts >= max_cuts:
            break
        if opts.prune_slack and res.duals_ub is not None:
            duals = res.duals_ub[n_base:]
            kept = []
            for cu, d in zip(cuts, duals):
                cu[2] += 1
                if d > 1e-9 or cu[2] <= 3:
                    kept.append(cu)
            cuts = kept
        if opts.cut_rule == "min_eigenvector":
            picks = [0]
        else:
            neg = np.nonzero(eig.values < -opts.psd_tol)[0]
            picks = list(neg[: opts.cuts_per_iter])
            if 0 not in picks:
                picks = [0] + picks
        for k in picks:
            row, rhs = _cut_row(eig.vectors[:, k], idx, n_x, n_y)
            cuts.append([row, rhs, 0])
            n_cuts += 1

    X, x = lifted_pair(y, n, idx)
    box_active = bool(
        np.any(np.abs(np.abs(y[n_x:]) - B) <= 1e-6 * (1.0 + B))
        or np.any(np.abs(np.abs(y[:n_x]) - B * B) <= 1e-6 * (1.0 + B * B))
    )
    return RelaxationResult(
        bound=trace[-1],
        candidate=x,
        certificate=(X, x),
        valid=not box_active,
        trace=tuple(trace),
        converged=converged,
    )


@dataclass(frozen=True)
class LiftedSamples:
    points: tuple[np.ndarray, ...]
    sigma_repair: float  # magnitude of the most negative clipped eigenvalue


def sample_from_lifted(result: RelaxationResult, count: int, rng_seed=None) -> LiftedSamples:
    """Gaussian candidates N(x, X - xx') from a lifted certificate.

    The covariance X - xx' may be slightly indefinite at LP accuracy; it is
    projected to PSD and the size of the repair is reported.  A rank-one
    certificate yields count copies of x.
    """
    if not (isinstance(result.certificate, tuple) and len(result.certificate) == 2):
        raise ValueError("result does not carry a lifted (X, x) certificate")
    X, x = result.certificate
    S = X - np.outer(x, x)
    eig = sym_eigen(S)
    repair = float(max(0.0, -np.min(eig.values, initial=0.0)))
    w = np.clip(eig.values, 0.0, None)
    A = eig.vectors * np.sqrt(w)
    rng = np.random.default_rng(rng_seed)
    pts = [x + A @ rng.standard_normal(x.size) for _ in range(count)]
    return LiftedSamples(points=tuple(pts), sigma_repair=repair)


def tighten(problem: QcqpProblem, pair_budget: int = 100, boolean_cuts: bool = False) -> QcqpProblem:
    """Append products of pairs of affine constraints as redundant quadratics.

    Each affine row is read as a'x <= b (equalities contribute both signs);
    the product (b_i - a_i'x)(b_j - a_j'x) >= 0 holds on the feasible set, so
    appending it never changes the feasible set but can raise lifted bounds.
    Boolean structure needs no extra cuts: x_i^2 = 1 is already quadratic.
    """
    halfspaces = []  # (a, b) meaning a'x <= b
    for con in problem.constraints:
        if not con.form.is_affine:
            continue
        a = con.form.q_vec
        b = -con.form.r
        halfspaces.append((a, b))
        if con.sense is Sense.EQ:
            halfspaces.append((-a, -b))
    if not halfspaces:
        return problem
    extra = []
    pairs = [(i, j) for i in range(len(halfspaces)) for j in range(i + 1, len(halfspaces))]
    pairs += [(i, i) for i in range(len(halfspaces))]
    for i, j in pairs[:pair_budget]:
        ai, bi = halfspaces[i]
        aj, bj = halfspaces[j]
        # (b_i - a_i'x)(b_j - a_j'x) >= 0  ->  -x'SyM x + (b_i a_j + b_j a_i)'x - b_i b_j <= 0
        P = -0.5 * (np.outer(ai, aj) + np.outer(aj, ai))
        q = bi * aj + bj * ai
        r = -bi * bj
        extra.append(Constraint(QuadraticForm.from_dense(P, q, r), Sense.LE))
    return QcqpProblem.create(problem.objective, list(problem.constraints) + extra)
