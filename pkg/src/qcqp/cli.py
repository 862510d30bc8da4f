"""Problem file I/O, the Suggest-and-Improve pipeline runner, and the
command-line entry point.

Problem files are JSON: {"n": int, "objective": {"P": [[i, j, v], ...],
"q": [...], "r": float}, "constraints": [{"P": ..., "q": ..., "r": ...,
"sense": "le"|"eq"}, ...]} with 0-based upper-triangle triplets.

Reports are serialized canonically (sorted keys, timing excluded), so a
fixed problem, config, and seed produce byte-identical output; wall and CPU
times ride along in a separate non-canonical section.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .core import Constraint, QcqpProblem, QuadraticForm, Sense, assess
from .errors import ParseError, QcqpError
from .generators import (
    brute_force,
    gen_beamforming,
    gen_boolean_ls,
    gen_maxbisection,
    gen_maxclique,
    gen_maxcut,
    gen_partitioning,
    gen_3sat,
)
from .improve import METHODS, improve_sequence
from .relax import sdr_bound_cutting_plane, spectral_bound
from .suggest import sub_seed, suggest_random, suggest_sdr, suggest_spectral


# -- problem files ----------------------------------------------------------


def _form_to_json(form: QuadraticForm) -> dict:
    return {
        "P": [[i, j, v] for i, j, v in form.triplets],
        "q": list(form.q),
        "r": form.r,
    }


def _form_from_json(obj, n: int, where: str) -> QuadraticForm:
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: expected an object")
    try:
        trips = [(int(i), int(j), float(v)) for i, j, v in obj.get("P", [])]
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{where}: malformed P triplets") from exc
    q = obj.get("q")
    r = float(obj.get("r", 0.0))
    try:
        return QuadraticForm.create(n, trips, q, r)
    except QcqpError as exc:
        raise ParseError(f"{where}: {exc}") from exc


def problem_to_json(problem: QcqpProblem) -> dict:
    return {
        "n": problem.n,
        "objective": _form_to_json(problem.objective),
        "constraints": [
            {**_form_to_json(c.form), "sense": c.sense.value} for c in problem.constraints
        ],
    }


def problem_from_json(data) -> QcqpProblem:
    if not isinstance(data, dict) or "n" not in data or "objective" not in data:
        raise ParseError("problem file must contain 'n' and 'objective'")
    n = int(data["n"])
    obj = _form_from_json(data["objective"], n, "objective")
    cons = []
    for k, entry in enumerate(data.get("constraints", [])):
        sense_str = entry.get("sense", "le") if isinstance(entry, dict) else None
        if sense_str not in ("le", "eq"):
            raise ParseError(f"constraint {k}: sense must be 'le' or 'eq'")
        form = _form_from_json(entry, n, f"constraint {k}")
        cons.append(Constraint(form, Sense(sense_str)))
    return QcqpProblem.create(obj, cons)


def load_problem(path) -> QcqpProblem:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON at line {exc.lineno}") from exc
    return problem_from_json(data)


def save_problem(problem: QcqpProblem, path) -> None:
    with open(path, "w") as fh:
        json.dump(problem_to_json(problem), fh, indent=2, sort_keys=True)
        fh.write("\n")


# -- pipeline ---------------------------------------------------------------


@dataclass
class PipelineConfig:
    suggest: str = "random"
    suggest_opts: dict = field(default_factory=dict)
    improve: tuple = ()
    improve_opts: dict = field(default_factory=dict)
    candidates: int = 1
    seed: int | None = None
    parallel: int = 1

    def to_json(self) -> dict:
        return {
            "suggest": self.suggest,
            "suggest_opts": dict(self.suggest_opts),
            "improve": list(self.improve),
            "improve_opts": {k: dict(v) for k, v in self.improve_opts.items()},
            "candidates": self.candidates,
            "seed": self.seed,
            "parallel": self.parallel,
        }


def _suggest(problem: QcqpProblem, config: PipelineConfig):
    if config.suggest == "random":
        return suggest_random(
            problem, config.candidates, rng_seed=config.seed, **config.suggest_opts
        )
    if config.suggest == "spectral":
        out = suggest_spectral(problem, **config.suggest_opts)
        # one deterministic candidate, replicated so each worker improves a copy
        pts = tuple(out.candidates[0].copy() for _ in range(config.candidates))
        return type(out)(candidates=pts, method=out.method, bound=out.bound)
    if config.suggest == "sdr":
        return suggest_sdr(
            problem, config.candidates, rng_seed=config.seed, **config.suggest_opts
        )
    raise ValueError(f"unknown suggest method {config.suggest!r}")


def run_pipeline(problem: QcqpProblem, config: PipelineConfig) -> dict:
    """Suggest candidates, improve each one, and report the best point.

    Per-candidate failures are recorded and skipped; the run fails only when
    every candidate fails.  The report layout is stable and canonically
    serializable; timing lives under the separate "timing" key.
    """
    t_wall = time.perf_counter()
    t_cpu = time.process_time()
    outcome = _suggest(problem, config)

    def _improve(item):
        idx, x0 = item
        try:
            opts = dict(config.improve_opts)
            # deterministic per-candidate sub-seed for any stochastic method
            rep = improve_sequence(problem, x0, list(config.improve), opts)
            return idx, rep, None
        except QcqpError as exc:
            return idx, None, str(exc)

    items = list(enumerate(outcome.candidates))
    if config.parallel > 1:
        with ThreadPoolExecutor(max_workers=config.parallel) as pool:
            results = list(pool.map(_improve, items))
    else:
        results = [_improve(it) for it in items]
    results.sort(key=lambda t: t[0])

    per_candidate = []
    best = None  # (assessment tuple, index, x)
    for idx, rep, err in results:
        if err is not None:
            per_candidate.append({"index": idx, "error": err})
            continue
        a = rep.assessment
        per_candidate.append(
            {
                "index": idx,
                "violation": a.violation,
                "objective": a.objective,
                "iterations": rep.iterations,
                "converged": rep.converged,
                "method": rep.method,
            }
        )
        key = (a.violation, a.objective, idx)
        if best is None or key < best[0]:
            best = (key, idx, rep.x)
    if best is None:
        raise QcqpError("all candidates failed")

    _, best_idx, best_x = best
    best_a = assess(problem, best_x)
    bound_info = None
    if outcome.bound is not None:
        b = outcome.bound
        bound_info = {
            "bound": b.bound,
            "valid": b.valid,
            "converged": b.converged,
        }
        if b.valid and best_a.violation <= 1e-6 and np.isfinite(b.bound):
            bound_info["gap"] = best_a.objective - b.bound
    report = {
        "n": problem.n,
        "m": problem.m,
        "config": config.to_json(),
        "best": {
            "index": best_idx,
            "x": [float(v) for v in best_x],
            "violation": best_a.violation,
            "objective": best_a.objective,
        },
        "bound": bound_info,
        "candidates": per_candidate,
        "timing": {
            "wall_seconds": time.perf_counter() - t_wall,
            "cpu_seconds": time.process_time() - t_cpu,
        },
    }
    return report


def canonical_report_json(report: dict) -> str:
    """Deterministic serialization: sorted keys, timing stripped."""
    clean = {k: v for k, v in report.items() if k != "timing"}
    return json.dumps(clean, sort_keys=True, indent=2)


# -- commands ---------------------------------------------------------------


def _emit(payload: str, out_path):
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(payload)
            if not payload.endswith("\n"):
                fh.write("\n")
    else:
        print(payload)


def cmd_solve(args) -> int:
    problem = load_problem(args.problem)
    improve = [s for s in (args.improve or "").split(",") if s]
    for name in improve:
        if name not in METHODS:
            raise ParseError(f"unknown improve method {name!r}")
    config = PipelineConfig(
        suggest=args.suggest,
        improve=tuple(improve),
        candidates=args.candidates,
        seed=args.seed,
        parallel=args.parallel,
    )
    report = run_pipeline(problem, config)
    _emit(canonical_report_json(report), args.out)
    return 0


def cmd_bound(args) -> int:
    problem = load_problem(args.problem)
    if args.method == "spectral":
        res = spectral_bound(problem)
        payload = {"bound": res.bound, "valid": res.valid, "trace": [res.bound]}
    else:
        res = sdr_bound_cutting_plane(problem)
        payload = {"bound": res.bound, "valid": res.valid, "trace": list(res.trace)}
    _emit(json.dumps(payload, sort_keys=True, indent=2), args.out)
    return 0


def cmd_generate(args) -> int:
    fam = args.family
    if fam == "boolean-ls":
        problem = gen_boolean_ls(args.m, args.n, args.seed)
    elif fam in ("partitioning", "maxcut", "maxbisection"):
        rng = np.random.default_rng(args.seed)
        W = rng.uniform(0.0, 1.0, size=(args.n, args.n))
        W = np.triu(W, 1)
        W = W + W.T
        gen = {"partitioning": gen_partitioning, "maxcut": gen_maxcut, "maxbisection": gen_maxbisection}[fam]
        problem = gen(W)
    elif fam == "maxclique":
        rng = np.random.default_rng(args.seed)
        A = (rng.uniform(size=(args.n, args.n)) < 0.5).astype(int)
        A = np.triu(A, 1)
        A = A + A.T + np.eye(args.n, dtype=int)
        problem = gen_maxclique(A)
    elif fam == "beamforming":
        problem = gen_beamforming(args.n, args.m, args.l, args.tau, args.eta, args.seed)
    else:
        raise ParseError(f"unknown family {fam!r}")
    payload = json.dumps(problem_to_json(problem), sort_keys=True, indent=2)
    _emit(payload, args.out)
    return 0


def cmd_brute(args) -> int:
    problem = load_problem(args.problem)
    x, f = brute_force(problem, mode=args.mode)
    payload = {
        "x": None if x is None else [float(v) for v in x],
        "objective": f,
    }
    _emit(json.dumps(payload, sort_keys=True, indent=2), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qcqp", description="Heuristics and bounds for nonconvex QCQPs")
    sub = p.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("solve", help="run the suggest-and-improve pipeline")
    ps.add_argument("problem")
    ps.add_argument("--suggest", choices=["random", "spectral", "sdr"], default="random")
    ps.add_argument("--improve", default="", help="comma-separated method list, e.g. cd,admm")
    ps.add_argument("--candidates", type=int, default=1)
    ps.add_argument("--seed", type=int, default=None)
    ps.add_argument("--parallel", type=int, default=1)
    ps.add_argument("--out", default=None)
    ps.set_defaults(fn=cmd_solve)

    pb = sub.add_parser("bound", help="compute a lower bound")
    pb.add_argument("problem")
    pb.add_argument("--method", choices=["spectral", "sdr"], default="spectral")
    pb.add_argument("--out", default=None)
    pb.set_defaults(fn=cmd_bound)

    pg = sub.add_parser("generate", help="emit a reference instance")
    pg.add_argument("--family", required=True,
                    choices=["boolean-ls", "partitioning", "maxcut", "maxbisection", "maxclique", "beamforming"])
    pg.add_argument("--n", type=int, default=10)
    pg.add_argument("--m", type=int, default=10)
    pg.add_argument("--l", type=int, default=3)
    pg.add_argument("--tau", type=float, default=20.0)
    pg.add_argument("--eta", type=float, default=2.0)
    pg.add_argument("--seed", type=int, default=None)
    pg.add_argument("--out", default=None)
    pg.set_defaults(fn=cmd_generate)

    pr = sub.add_parser("brute", help="exhaustive oracle for small instances")
    pr.add_argument("problem")
    pr.add_argument("--mode", choices=["boolean", "grid"], default="boolean")
    pr.add_argument("--out", default=None)
    pr.set_defaults(fn=cmd_brute)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except (ParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except QcqpError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
