"""Candidate-point generation.

Candidates need not be feasible; downstream improvement methods only ever
move them lexicographically toward feasibility.  All three generators are
deterministic per seed, and per-candidate sub-seeds are derived as
seed + index so serial and parallel runs see identical candidate sets.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import QcqpProblem
from .errors import NumericalFailureError
from .relax import (
    CutPlaneOptions,
    RelaxationResult,
    sample_from_lifted,
    sdr_bound_cutting_plane,
    spectral_bound,
)


class SuggestMethod(Enum):
    RANDOM = "random"
    SPECTRAL = "spectral"
    SDR = "sdr"


@dataclass(frozen=True)
class SuggestOutcome:
    candidates: tuple[np.ndarray, ...]
    method: SuggestMethod
    bound: RelaxationResult | None = None


def sub_seed(seed, index: int):
    """Per-candidate seed; part of the public determinism contract."""
    if seed is None:
        return None
    return int(seed) + int(index)


def suggest_random(problem: QcqpProblem, count: int = 1, scale: float = 1.0, rng_seed=None) -> SuggestOutcome:
    """count i.i.d. N(0, scale^2 I) candidate points."""
    if count < 1:
        raise ValueError("count must be >= 1")
    pts = []
    for k in range(count):
        rng = np.random.default_rng(sub_seed(rng_seed, k))
        pts.append(scale * rng.standard_normal(problem.n))
    return SuggestOutcome(candidates=tuple(pts), method=SuggestMethod.RANDOM)


def suggest_spectral(problem: QcqpProblem, lam=None) -> SuggestOutcome:
    """The minimizer of the aggregated one-constraint relaxation, with its bound."""
    res = spectral_bound(problem, lam)
    if res.candidate is None:
        raise NumericalFailureError("spectral relaxation produced no candidate (unbounded dual)")
    return SuggestOutcome(candidates=(res.candidate,), method=SuggestMethod.SPECTRAL, bound=res)


def suggest_sdr(
    problem: QcqpProblem,
    count: int = 1,
    rng_seed=None,
    cp_opts: CutPlaneOptions | None = None,
    rank_one_tol: float | None = None,
) -> SuggestOutcome:
    """Gaussian samples around the cutting-plane solution of the lifted LP.

    When the certificate is rank one within tolerance the relaxation is
    tight, and the single point x* is returned count times.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    res = sdr_bound_cutting_plane(problem, cp_opts)
    if res.certificate is None:
        raise NumericalFailureError("cutting plane produced no lifted certificate")
    tol = rank_one_tol if rank_one_tol is not None else (cp_opts.psd_tol if cp_opts else 1e-6)
    X, x = res.certificate
    gap = float(np.max(np.abs(X - np.outer(x, x)), initial=0.0))
    if gap <= tol:
        pts = tuple(x.copy() for _ in range(count))
    else:
        samples = sample_from_lifted(res, count, rng_seed)
        pts = samples.points
    return SuggestOutcome(candidates=pts, method=SuggestMethod.SDR, bound=res)
