"""Linear programming interface used by the cutting-plane relaxation.

A thin wrapper over scipy's HiGHS backend with an explicit status enum and
an optional certificate check on the returned duals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np
import scipy.optimize

from .errors import NumericalFailureError

DUAL_FEAS_TOL = 1e-7


class LpStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass
class LinearProgram:
    """min c'y  s.t.  A_ub y <= b_ub,  A_eq y = b_eq,  lb <= y <= ub.

    Bounds are per-variable arrays; +-inf entries mean unbounded.
    """

    c: np.ndarray
    a_ub: np.ndarray | None = None
    b_ub: np.ndarray | None = None
    a_eq: np.ndarray | None = None
    b_eq: np.ndarray | None = None
    lb: np.ndarray | None = None
    ub: np.ndarray | None = None

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=float)
        n = self.c.size
        for name in ("a_ub", "a_eq"):
            A = getattr(self, name)
            if A is not None:
                A = np.atleast_2d(np.asarray(A, dtype=float))
                if A.shape[1] != n:
                    raise ValueError(f"{name} has {A.shape[1]} columns, expected {n}")
                setattr(self, name, A)
        for name in ("b_ub", "b_eq"):
            b = getattr(self, name)
            if b is not None:
                setattr(self, name, np.atleast_1d(np.asarray(b, dtype=float)))
        if self.lb is None:
            self.lb = np.full(n, -np.inf)
        if self.ub is None:
            self.ub = np.full(n, np.inf)
        self.lb = np.asarray(self.lb, dtype=float)
        self.ub = np.asarray(self.ub, dtype=float)


@dataclass(frozen=True)
class LpResult:
    status: LpStatus
    y: np.ndarray | None = None
    value: float | None = None
    duals_ub: np.ndarray | None = None
    duals_eq: np.ndarray | None = None


def solve_lp(lp: LinearProgram, check_duals: bool = False) -> LpResult:
    """Solve with HiGHS; optionally verify dual sign feasibility at 1e-7."""
    bounds = list(zip(lp.lb, lp.ub))
    res = scipy.optimize.linprog(
        lp.c,
        A_ub=lp.a_ub,
        b_ub=lp.b_ub,
        A_eq=lp.a_eq,
        b_eq=lp.b_eq,
        bounds=bounds,
        method="highs",
    )
    if res.status == 2:
        return LpResult(LpStatus.INFEASIBLE)
    if res.status == 3:
        return LpResult(LpStatus.UNBOUNDED)
    if res.status != 0:
        raise NumericalFailureError(f"LP solver failed: {res.message}")
    duals_ub = None
    duals_eq = None
    if res.ineqlin is not None and lp.a_ub is not None:
        # scipy reports marginals with sign opposite the textbook multiplier
        duals_ub = -np.asarray(res.ineqlin.marginals, dtype=float)
    if res.eqlin is not None and lp.a_eq is not None:
        duals_eq = -np.asarray(res.eqlin.marginals, dtype=float)
    if check_duals and duals_ub is not None:
        if np.min(duals_ub, initial=0.0) < -DUAL_FEAS_TOL:
            raise NumericalFailureError("inequality duals violate nonnegativity")
    return LpResult(
        status=LpStatus.OPTIMAL,
        y=np.asarray(res.x, dtype=float),
        value=float(res.fun),
        duals_ub=duals_ub,
        duals_eq=duals_eq,
    )
