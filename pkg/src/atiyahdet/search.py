"""Derivative-free minimization of |D| and the conjecture gaps.

Configurations are parametrized gauge-fixed: point 1 at the origin, point
2 on the u-axis, point 3 in the (u, v) plane, remaining points free, and
every candidate is rescaled to unit mean edge before evaluation (the
objectives are scale-invariant or reported per unit scale).  Nelder-Mead
with random restarts seeded from the verification generators; everything
is deterministic in the problem seed.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Sequence

import numpy as np

from . import _backend
from .closedforms import d3
from .errors import ObjectiveUndefined
from .geometry import Configuration
from .verify import GENERATOR_KINDS, GeneratorSpec, generate_configuration

__all__ = [
    "OBJECTIVES",
    "SearchProblem",
    "SearchResult",
    "decode",
    "encode",
    "objective_from_points",
    "nelder_mead",
    "minimize",
    "append_archive",
    "collinearity_measure",
]

OBJECTIVES = ("abs-D", "gap2", "gap3")

_DEGENERACY_CYCLE = (0.2, 0.6, 0.95)


@dataclass(frozen=True)
class SearchProblem:
    n: int
    objective: str
    restarts: int = 8
    max_iters: int = 400
    seed: int = 0
    simplex_scale: float = 0.15
    gauge: bool = True

    def __post_init__(self):
        if self.objective not in OBJECTIVES:
            raise ValueError(f"unknown objective {self.objective!r}")
        if self.n < 3:
            raise ValueError("search needs n >= 3")
        if self.objective in ("gap2", "gap3") and self.n != 4:
            raise ValueError(f"objective {self.objective} is defined for n = 4 only")
        if self.restarts < 1 or self.max_iters < 1:
            raise ValueError("restarts and max_iters must be positive")
        if not self.simplex_scale > 0.0:
            raise ValueError("simplex_scale must be positive")

    @property
    def dim(self) -> int:
        return 3 * self.n - 6


@dataclass
class SearchResult:
    """Best point found; best_value is re-evaluated at best_points on
    output, and trace is the non-increasing sequence of global improvements
    as (restart, iteration, value) triples."""

    best_value: float
    best_points: list
    trace: list = field(default_factory=list)
    restart_index: int = 0
    gauge_deviation: float = 0.0
    objective: str = "abs-D"

    def to_dict(self) -> dict:
        return {
            "best_value": self.best_value,
            "best_points": self.best_points,
            "trace": [[r, i, v] for r, i, v in self.trace],
            "restart_index": self.restart_index,
            "gauge_deviation": self.gauge_deviation,
            "objective": self.objective,
        }


def decode(x: np.ndarray, n: int) -> np.ndarray:
    """Gauge coordinates to an (n, 3) point array, unit mean edge.

    Layout: x[0] = u2; x[1:3] = (u3, v3); then (t, u, v) per later point.
    Returns the rescaled array; raises nothing (degenerate candidates are
    the objective guard's business).
    """
    pts = np.zeros((n, 3))
    pts[1, 1] = x[0]
    pts[2, 1:] = x[1:3]
    if n > 3:
        pts[3:] = x[3:].reshape(n - 3, 3)
    diffs = pts[:, None, :] - pts[None, :, :]
    dist = np.sqrt((diffs**2).sum(axis=2))
    mean = dist[np.triu_indices(n, k=1)].mean()
    if not (mean > 0.0 and math.isfinite(mean)):
        return pts  # hopeless candidate; guard rejects it downstream
    return pts / mean


def encode(points: np.ndarray) -> np.ndarray:
    """Inverse of decode up to rotation/translation/scale: express the
    points in the frame of (p1, p2, p3) and flatten."""
    pts = np.asarray(points, dtype=np.float64)
    n = len(pts)
    rel = pts - pts[0]
    f1 = rel[1] / np.linalg.norm(rel[1])
    w = rel[2] - (rel[2] @ f1) * f1
    norm_w = np.linalg.norm(w)
    if norm_w < 1e-12 * np.abs(rel).max():
        probe = np.array([1.0, 0.0, 0.0])
        if abs(f1 @ probe) > 0.9:
            probe = np.array([0.0, 1.0, 0.0])
        w = probe - (probe @ f1) * f1
        norm_w = np.linalg.norm(w)
    f2 = w / norm_w
    f3 = np.cross(f1, f2)
    u = rel @ f1
    v = rel @ f2
    t = rel @ f3
    x = np.empty(3 * n - 6)
    x[0] = u[1]
    x[1:3] = (u[2], v[2])
    if n > 3:
        x[3:] = np.column_stack([t[3:], u[3:], v[3:]]).ravel()
    return x


def objective_from_points(pts: np.ndarray, objective: str) -> float:
    """Evaluate one candidate; +inf on the coincident-point boundary."""
    if objective not in OBJECTIVES:
        raise ValueError(f"unknown objective {objective!r}")
    pts = np.ascontiguousarray(pts, dtype=np.float64)
    n = len(pts)
    diffs = pts[:, None, :] - pts[None, :, :]
    dist = np.sqrt((diffs**2).sum(axis=2))
    upper = dist[np.triu_indices(n, k=1)]
    mean = upper.mean()
    if not (mean > 0.0 and math.isfinite(mean)):
        return math.inf
    pts = pts / mean
    if upper.min() / mean < 1e-9:
        return math.inf
    if objective == "abs-D":
        det, edge_product = _backend.det_and_edge_product(pts)
        return abs(det) / edge_product
    re, im, prod_r, face_prod, _ = _backend.tetra_scan(pts)
    if objective == "gap2":
        return math.hypot(re, im) - 64.0 * prod_r
    return (re * re + im * im) - face_prod


def nelder_mead(
    f: Callable[[np.ndarray], float],
    x0: np.ndarray,
    simplex_scale: float,
    max_iters: int,
) -> tuple[np.ndarray, float, list[tuple[int, float]]]:
    """Simplex descent with reflection 1, expansion 2, contraction 0.5,
    shrink 0.5.  Returns (best x, best f, improvement trace)."""
    dim = len(x0)
    simplex = [np.array(x0, dtype=np.float64)]
    for i in range(dim):
        step = simplex_scale * (abs(x0[i]) if x0[i] != 0.0 else 0.1)
        v = np.array(x0, dtype=np.float64)
        v[i] += step
        simplex.append(v)
    values = [f(v) for v in simplex]
    # pull unusable vertices toward the (finite) base point
    for i in range(1, dim + 1):
        for _ in range(40):
            if math.isfinite(values[i]):
                break
            simplex[i] = 0.5 * (simplex[i] + simplex[0])
            values[i] = f(simplex[i])

    trace: list[tuple[int, float]] = []
    best_seen = math.inf
    for it in range(max_iters):
        order = sorted(range(dim + 1), key=lambda i: values[i])
        simplex = [simplex[i] for i in order]
        values = [values[i] for i in order]
        if values[0] < best_seen:
            best_seen = values[0]
            trace.append((it, best_seen))
        spread = values[-1] - values[0]
        if spread <= 1e-13 * (abs(values[0]) + 1e-13):
            size = max(np.abs(v - simplex[0]).max() for v in simplex[1:])
            if size <= 1e-10 * (1.0 + np.abs(simplex[0]).max()):
                break
        centroid = np.mean(simplex[:-1], axis=0)
        xr = centroid + (centroid - simplex[-1])
        fr = f(xr)
        if fr < values[0]:
            xe = centroid + 2.0 * (xr - centroid)
            fe = f(xe)
            if fe < fr:
                simplex[-1], values[-1] = xe, fe
            else:
                simplex[-1], values[-1] = xr, fr
        elif fr < values[-2]:
            simplex[-1], values[-1] = xr, fr
        else:
            if fr < values[-1]:
                xc = centroid + 0.5 * (xr - centroid)
            else:
                xc = centroid - 0.5 * (centroid - simplex[-1])
            fc = f(xc)
            if fc < min(fr, values[-1]):
                simplex[-1], values[-1] = xc, fc
            else:
                for i in range(1, dim + 1):
                    simplex[i] = simplex[0] + 0.5 * (simplex[i] - simplex[0])
                    values[i] = f(simplex[i])
    order = sorted(range(dim + 1), key=lambda i: values[i])
    best = order[0]
    return simplex[best], values[best], trace


def _restart_start(problem: SearchProblem, k: int) -> np.ndarray:
    kind = GENERATOR_KINDS[k % len(GENERATOR_KINDS)]
    degeneracy = _DEGENERACY_CYCLE[(k // len(GENERATOR_KINDS)) % len(_DEGENERACY_CYCLE)]
    spec = GeneratorSpec(kind, problem.n, scale=1.0, degeneracy=degeneracy, seed=problem.seed)
    return encode(generate_configuration(spec, k).as_array())


def _run_restart(args: tuple[SearchProblem, int]):
    problem, k = args
    fn = lambda x: objective_from_points(decode(x, problem.n), problem.objective)
    x0 = _restart_start(problem, k)
    best_x, best_f, trace = nelder_mead(fn, x0, problem.simplex_scale, problem.max_iters)
    gauge_dev = 0.0
    if math.isfinite(best_f):
        rng = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence((problem.seed, k, 2)))
        )
        pts = decode(best_x, problem.n)
        q = rng.normal(size=4)
        q /= np.linalg.norm(q)
        w, x_, y_, z_ = q
        rot = np.array(
            [
                [1 - 2 * (y_ * y_ + z_ * z_), 2 * (x_ * y_ - w * z_), 2 * (x_ * z_ + w * y_)],
                [2 * (x_ * y_ + w * z_), 1 - 2 * (x_ * x_ + z_ * z_), 2 * (y_ * z_ - w * x_)],
                [2 * (x_ * z_ - w * y_), 2 * (y_ * z_ + w * x_), 1 - 2 * (x_ * x_ + y_ * y_)],
            ]
        )
        moved = pts @ rot.T * float(rng.uniform(0.3, 3.0)) + rng.uniform(-1.0, 1.0, size=3)
        again = objective_from_points(moved, problem.objective)
        gauge_dev = abs(again - best_f) / max(abs(best_f), 1e-300)
    return k, best_x, best_f, trace, gauge_dev


def minimize(problem: SearchProblem, workers: int = 1) -> SearchResult:
    """Best over restarts; deterministic in the problem (ties to the lower
    restart index).  Raises ObjectiveUndefined if no restart ever found a
    finite value."""
    jobs = [(problem, k) for k in range(problem.restarts)]
    if workers <= 1 or len(jobs) == 1:
        outcomes = [_run_restart(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_run_restart, jobs))

    best = None
    trace: list[tuple[int, int, float]] = []
    global_best = math.inf
    worst_gauge = 0.0
    for k, best_x, best_f, local_trace, gauge_dev in outcomes:
        worst_gauge = max(worst_gauge, gauge_dev)
        for it, value in local_trace:
            if value < global_best:
                global_best = value
                trace.append((k, it, value))
        if math.isfinite(best_f) and (best is None or best_f < best[1]):
            best = (k, best_f, best_x)
    if best is None:
        raise ObjectiveUndefined(
            f"no finite {problem.objective} value in {problem.restarts} restarts"
        )
    k, _, best_x = best
    pts = decode(best_x, problem.n)
    value = objective_from_points(pts, problem.objective)
    return SearchResult(
        best_value=value,
        best_points=[[float(c) for c in row] for row in pts],
        trace=trace,
        restart_index=k,
        gauge_deviation=worst_gauge,
        objective=problem.objective,
    )


def collinearity_measure(points: Sequence) -> float:
    """max over point triples of d3(a, b, c)/(abc): 0 exactly on a line,
    1 at equilateral triples."""
    cfg = points if isinstance(points, Configuration) else Configuration(points)
    n = cfg.n
    worst = 0.0
    for i, j, k in combinations(range(n), 3):
        a = (cfg.points[j] - cfg.points[i]).length()
        b = (cfg.points[k] - cfg.points[i]).length()
        c = (cfg.points[k] - cfg.points[j]).length()
        worst = max(worst, d3(a, b, c) / (a * b * c))
    return worst


def append_archive(path: str, problem: SearchProblem, result: SearchResult) -> None:
    """One JSON line per run: seed, problem, result."""
    record = {
        "seed": problem.seed,
        "problem": {
            "n": problem.n,
            "objective": problem.objective,
            "restarts": problem.restarts,
            "max_iters": problem.max_iters,
            "seed": problem.seed,
            "simplex_scale": problem.simplex_scale,
            "gauge": problem.gauge,
        },
        "result": result.to_dict(),
    }
    with open(path, "a") as fh:
        fh.write(json.dumps(record, sort_keys=True) + "\n")
