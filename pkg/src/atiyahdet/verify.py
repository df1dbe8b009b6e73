"""Seeded randomized verification: generators, identity and invariance
suites, and conjecture scans.

Every trial draws its own generator from (master seed, trial index), so a
report is a pure function of (spec, tolerance, trial count) no matter how
trials are distributed over workers.  All residuals are dimensionless:
each deviation is divided by the configuration scale raised to the
identity's homogeneity degree, or by the closed-form value itself when
that value is bounded away from zero.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import _backend, closedforms
from .determinant import atiyah_det
from .errors import (
    CoincidentPoints,
    DegenerateDenominator,
    NotRealizable,
    NumericalBreakdown,
)
from .geometry import Configuration

__all__ = [
    "GENERATOR_KINDS",
    "GeneratorSpec",
    "Report",
    "generate_configuration",
    "run_identity_suite",
    "run_invariance_suite",
    "run_conjecture_scan",
]

GENERATOR_KINDS = (
    "uniform-ball",
    "near-collinear",
    "planar",
    "near-antipodal-pair",
    "clustered",
)

# Generator contract: pairwise distances never drop below this times scale.
_MIN_SEPARATION = 1e-9


@dataclass(frozen=True)
class GeneratorSpec:
    """What to generate: kind, point count, overall scale, and how hard to
    push toward the kind's degenerate limit (degeneracy in [0, 1])."""

    kind: str
    n: int
    scale: float = 1.0
    degeneracy: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if self.kind not in GENERATOR_KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}")
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if not 0.0 <= self.degeneracy <= 1.0:
            raise ValueError("degeneracy must lie in [0, 1]")
        if not (self.scale > 0.0 and math.isfinite(self.scale)):
            raise ValueError("scale must be positive and finite")


def _trial_rng(spec: GeneratorSpec, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence((spec.seed, trial))))


def _unit(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


def _perp_basis(axis: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    probe = np.array([1.0, 0.0, 0.0]) if abs(axis[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = _unit(np.cross(axis, probe))
    return e1, np.cross(axis, e1)


def _draw_points(rng: np.random.Generator, spec: GeneratorSpec) -> np.ndarray:
    n, s, g = spec.n, spec.scale, spec.degeneracy
    if spec.kind == "uniform-ball":
        v = rng.normal(size=(n, 3))
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        return v * (s * rng.uniform(0.0, 1.0, size=(n, 1)) ** (1.0 / 3.0))
    if spec.kind == "near-collinear":
        axis = _unit(rng.normal(size=3))
        e1, e2 = _perp_basis(axis)
        pos = rng.uniform(-1.0, 1.0, size=n) * s
        off = rng.normal(size=(n, 2)) * (s * 10.0 ** (-1.0 - 7.0 * g))
        return pos[:, None] * axis + off[:, :1] * e1 + off[:, 1:] * e2
    if spec.kind == "planar":
        r = s * np.sqrt(rng.uniform(0.0, 1.0, size=n))
        th = rng.uniform(0.0, 2.0 * math.pi, size=n)
        return np.column_stack([np.zeros(n), r * np.cos(th), r * np.sin(th)])
    if spec.kind == "near-antipodal-pair":
        # one displacement hugs the negative t-axis, the lift's chart seam
        pts = _draw_points(rng, GeneratorSpec("uniform-ball", n, s, g, spec.seed))
        eps = 10.0 ** (-2.0 - 6.0 * g) * rng.normal(size=2)
        sign = 1.0 if rng.uniform() < 0.5 else -1.0
        direction = _unit(np.array([sign, eps[0], eps[1]]))
        pts[1] = pts[0] + rng.uniform(0.3, 1.0) * s * direction
        return pts
    # clustered
    axis = _unit(rng.normal(size=3))
    centers = np.stack([-0.5 * s * axis, 0.5 * s * axis])
    which = np.arange(n) % 2
    spread = s * 10.0 ** (-1.0 - 5.0 * g)
    return centers[which] + rng.normal(size=(n, 3)) * spread


def generate_configuration(spec: GeneratorSpec, trial: int) -> Configuration:
    """The trial-th configuration of the spec's stream; deterministic in
    (spec, trial) and guaranteed pairwise separation >= 1e-9 * scale."""
    rng = _trial_rng(spec, trial)
    floor = _MIN_SEPARATION * spec.scale
    for _ in range(100):
        pts = _draw_points(rng, spec)
        diffs = pts[:, None, :] - pts[None, :, :]
        dist = np.sqrt((diffs**2).sum(axis=2))
        n = spec.n
        if dist[np.triu_indices(n, k=1)].min() >= floor:
            return Configuration.from_array(pts, label=f"{spec.kind}#{trial}")
    raise NumericalBreakdown(f"generator {spec.kind} failed the separation contract")


@dataclass
class Report:
    """Outcome of one suite run.

    worst_residual is the largest dimensionless residual seen anywhere,
    passing trials included; failures has one record per check whose
    residual exceeded the tolerance (or per violated bound in a scan).
    min_gap2, min_gap3 and min_bound_margin are scale-normalized minima
    (gap / scale^degree) and stay None outside conjecture scans.
    """

    suite: str
    seed: int
    trials: int
    tol: float
    generator: dict
    failures: list = field(default_factory=list)
    worst_residual: float = 0.0
    min_gap2: float | None = None
    min_gap3: float | None = None
    min_bound_margin: float | None = None
    elapsed: float = 0.0
    rows: list | None = None  # per-trial scan rows, not serialized to JSON

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self, include_elapsed: bool = False) -> dict:
        out = {
            "suite": self.suite,
            "seed": self.seed,
            "trials": self.trials,
            "tol": self.tol,
            "generator": self.generator,
            "failures": self.failures,
            "worst_residual": self.worst_residual,
            "min_gap2": self.min_gap2,
            "min_gap3": self.min_gap3,
            "min_bound_margin": self.min_bound_margin,
            "passed": self.passed,
        }
        if include_elapsed:
            out["elapsed"] = self.elapsed
        return out

    def to_json(self, include_elapsed: bool = False) -> str:
        return json.dumps(self.to_dict(include_elapsed), indent=2, sort_keys=True) + "\n"

    def write_gaps_csv(self, path: str) -> None:
        """Per-trial scan gaps; only available when the scan kept rows."""
        if self.rows is None:
            raise ValueError("this report carries no per-trial rows")
        with open(path, "w") as fh:
            fh.write("trial,gap2,gap3,bound_margin,mean_edge\n")
            for row in self.rows:
                fh.write("%d,%r,%r,%r,%r\n" % tuple(row))


def _failure(trial: int, check: str, residual: float, cfg: Configuration) -> dict:
    return {
        "trial": trial,
        "check": check,
        "residual": residual,
        "points": [[p.t, p.u, p.v] for p in cfg.points],
    }


# ---------------------------------------------------------------- identity

def _edge_lengths(cfg: Configuration) -> list[float]:
    n = cfg.n
    return [
        (cfg.points[i] - cfg.points[j]).length()
        for i in range(n)
        for j in range(i)
    ]


def _coordinate_volume(cfg: Configuration) -> float:
    a = cfg.as_array()
    return abs(float(np.linalg.det(a[1:] - a[0]))) / 6.0


def _coordinate_area(cfg: Configuration, i: int, j: int, k: int) -> float:
    a = cfg.as_array()
    return float(np.linalg.norm(np.cross(a[j] - a[i], a[k] - a[i]))) / 2.0


def _identity_checks(cfg: Configuration, rng: np.random.Generator):
    """(check id, residual) pairs for one configuration."""
    out: list[tuple[str, float]] = []
    n = cfg.n
    scale = cfg.diameter()

    if n == 3:
        det = atiyah_det(cfg).detM
        a = (cfg.points[1] - cfg.points[0]).length()
        b = (cfg.points[2] - cfg.points[0]).length()
        c = (cfg.points[2] - cfg.points[1]).length()
        closed = closedforms.detM_n3(a, b, c)
        out.append(("n3-real", abs(det.imag) / closed))
        out.append(("n3-closed-form", abs(det.real - closed) / closed))
        out.append(("n3-positivity", max(0.0, 8.0 * a * b * c - det.real) / (8.0 * a * b * c)))
        heron = closedforms.heron_16A2(a, b, c)
        area = _coordinate_area(cfg, 0, 1, 2)
        out.append(("heron-vs-area", abs(16.0 * area * area - heron) / scale**4))

    if n == 4:
        det = atiyah_det(cfg).detM
        e = closedforms.EdgeLengths4.from_configuration(cfg)
        closed = sum(closedforms.re_detM_n4_terms(e))
        out.append(("n4-re-closed-form", abs(det.real - closed) / abs(closed)))
        cm = closedforms.cayley_menger_144V2(e)
        vol = _coordinate_volume(cfg)
        out.append(("cm-vs-volume", abs(cm - 144.0 * vol * vol) / scale**6))
        fa, fb, fc = (e[idx] for idx in closedforms.FACE_EDGES[0])
        heron = closedforms.heron_16A2(fa, fb, fc)
        area = _coordinate_area(cfg, 0, 1, 2)
        out.append(("heron-vs-area", abs(16.0 * area * area - heron) / scale**4))
        try:
            mirrored = closedforms.embed_edge_lengths(e)
            det2 = atiyah_det(mirrored).detM
            out.append(
                ("im2-distance-function", abs(det.imag**2 - det2.imag**2) / scale**12)
            )
        except NotRealizable:
            pass  # borderline flat in float arithmetic; nothing to compare

        out.extend(_planar_derived_checks(cfg, rng, scale))
        out.extend(_offplane_derived_checks(cfg, rng, scale))

    if n >= 5:
        det = atiyah_det(cfg).detM
        out.append(("det-finite", 0.0 if math.isfinite(abs(det)) else math.inf))

    return out


def _project_planar(cfg: Configuration) -> Configuration:
    pts = cfg.as_array().copy()
    pts[:, 0] = 0.0
    return Configuration.from_array(pts)


def _planar_derived_checks(cfg, rng, scale):
    out = []
    try:
        flat = _project_planar(cfg)
    except CoincidentPoints:
        return out
    i, j, k, l = (int(x) for x in rng.permutation(4))
    zij = flat.points[i].zeta - flat.points[j].zeta
    zkj = flat.points[k].zeta - flat.points[j].zeta
    prod = zij * zkj.conjugate()
    sij = abs(zij) ** 2
    skj = abs(zkj) ** 2
    ski = abs(flat.points[k].zeta - flat.points[i].zeta) ** 2
    aijk = closedforms.signed_projected_area(flat, i, j, k)
    out.append(("adef-re", abs(prod.real - 0.5 * (sij + skj - ski)) / scale**2))
    out.append(("adef-im", abs(prod.imag - 2.0 * aijk) / scale**2))
    lhs, rhs = closedforms.area_quadric_check(flat, i, j, k, l)
    out.append(("quadric-planar", abs(lhs - rhs) / scale**4))
    try:
        lhs, rhs = closedforms.area_product_reduction_check(flat, (0, 1, 2), (1, 2, 3))
        out.append(("area-reduction", abs(lhs - rhs) / scale**4))
    except DegenerateDenominator:
        pass
    return out


def _offplane_derived_checks(cfg, rng, scale):
    out = []
    pts = cfg.as_array().copy()
    pts[:, 0] = 0.0
    height = float(rng.uniform(0.2, 1.0)) * scale
    pts[3, 0] = height
    try:
        lifted = Configuration.from_array(pts)
    except CoincidentPoints:
        return out
    i, j, k, l = (int(x) for x in rng.permutation(4))
    lhs, rhs = closedforms.area_quadric_check(lifted, i, j, k, l)
    out.append(("quadric-offplane", abs(lhs - rhs) / scale**4))
    base_area = abs(closedforms.signed_projected_area(lifted, 0, 1, 2))
    vol = _coordinate_volume(lifted)
    out.append(("v-equals-rA3", abs(vol - height * base_area / 3.0) / scale**3))
    return out


# -------------------------------------------------------------- invariance

def _random_rotation(rng: np.random.Generator) -> np.ndarray:
    q = rng.normal(size=4)
    q /= np.linalg.norm(q)
    w, x, y, z = q
    return np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
            [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
            [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
        ]
    )


def _invariance_checks(cfg: Configuration, rng: np.random.Generator):
    out: list[tuple[str, float]] = []
    pts = cfg.as_array()
    base = atiyah_det(pts)
    det, ref = base.detM, abs(base.detM)

    rot = _random_rotation(rng)
    out.append(("rotation", abs(atiyah_det(pts @ rot.T).detM - det) / ref))
    shift = rng.uniform(-2.0, 2.0, size=3) * cfg.diameter()
    out.append(("translation", abs(atiyah_det(pts + shift).detM - det) / ref))

    n = cfg.n
    if n <= 4:
        from itertools import permutations as _perms

        perms = list(_perms(range(n)))
    else:
        perms = [tuple(int(x) for x in rng.permutation(n)) for _ in range(24)]
    worst = 0.0
    for p in perms:
        worst = max(worst, abs(atiyah_det(pts[list(p)]).detM - det) / ref)
    out.append(("permutation", worst))

    mirrored = pts.copy()
    mirrored[:, 0] = -mirrored[:, 0]
    out.append(
        ("reflection-conjugation", abs(atiyah_det(mirrored).detM - det.conjugate()) / ref)
    )

    lam = float(rng.uniform(0.5, 2.0))
    degree = n * (n - 1) // 2
    scaled = atiyah_det(pts * lam)
    out.append(("scaling-degree", abs(scaled.detM - lam**degree * det) / (lam**degree * ref)))
    out.append(("D-scale-invariance", abs(scaled.D - base.D) / abs(base.D)))
    return out


# -------------------------------------------------------------- suite glue

def _check_rng(spec: GeneratorSpec, trial: int) -> np.random.Generator:
    # separate stream from the generator's, so check randomness does not
    # depend on how many rejection draws the generator consumed
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence((spec.seed, trial, 1))))


def _identity_trial(spec: GeneratorSpec, trial: int):
    cfg = generate_configuration(spec, trial)
    return cfg, _identity_checks(cfg, _check_rng(spec, trial))


def _invariance_trial(spec: GeneratorSpec, trial: int):
    cfg = generate_configuration(spec, trial)
    return cfg, _invariance_checks(cfg, _check_rng(spec, trial))


def _run_check_chunk(args):
    which, spec, tol, lo, hi = args
    trial_fn = _identity_trial if which == "identity" else _invariance_trial
    failures = []
    worst = 0.0
    for trial in range(lo, hi):
        cfg, checks = trial_fn(spec, trial)
        for check, residual in checks:
            worst = max(worst, residual)
            if not residual <= tol:
                failures.append(_failure(trial, check, residual, cfg))
    return failures, worst


def _run_scan_chunk(args):
    spec, tol, lo, hi, keep_rows = args
    failures = []
    rows = [] if keep_rows else None
    mins = [math.inf, math.inf, math.inf]  # gap2/s^6, gap3/s^12, margin/s^6
    for trial in range(lo, hi):
        cfg = generate_configuration(spec, trial)
        re, im, prod_r, face_prod, mean_edge = _backend.tetra_scan(cfg.as_array())
        gap2 = math.hypot(re, im) - 64.0 * prod_r
        gap3 = (re * re + im * im) - face_prod
        margin = re - 60.0 * prod_r
        s6 = mean_edge**6
        s12 = mean_edge**12
        mins[0] = min(mins[0], gap2 / s6)
        mins[1] = min(mins[1], gap3 / s12)
        mins[2] = min(mins[2], margin / s6)
        if margin < -tol * s6:
            failures.append(_failure(trial, "proved-bound", margin / s6, cfg))
        if gap2 < -tol * s6:
            failures.append(_failure(trial, "conjecture2", gap2 / s6, cfg))
        if gap3 < -tol * s12:
            failures.append(_failure(trial, "conjecture3", gap3 / s12, cfg))
        if rows is not None:
            rows.append((trial, gap2, gap3, margin, mean_edge))
    return failures, mins, rows


def _chunks(trials: int, workers: int) -> list[tuple[int, int]]:
    workers = max(1, min(workers, trials)) if trials else 1
    step = math.ceil(trials / workers) if trials else 0
    return [(lo, min(lo + step, trials)) for lo in range(0, trials, step)] if trials else []


def _map_chunks(fn, jobs, workers):
    if workers <= 1 or len(jobs) <= 1:
        return [fn(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, jobs))


def _run_residual_suite(which, spec, tol, trials, workers) -> Report:
    start = time.monotonic()
    jobs = [(which, spec, tol, lo, hi) for lo, hi in _chunks(trials, workers)]
    parts = _map_chunks(_run_check_chunk, jobs, workers)
    failures = sorted(
        (f for fs, _ in parts for f in fs), key=lambda f: (f["trial"], f["check"])
    )
    worst = max((w for _, w in parts), default=0.0)
    return Report(
        suite=which,
        seed=spec.seed,
        trials=trials,
        tol=tol,
        generator={"kind": spec.kind, "n": spec.n, "scale": spec.scale,
                   "degeneracy": spec.degeneracy},
        failures=failures,
        worst_residual=worst,
        elapsed=time.monotonic() - start,
    )


def run_identity_suite(
    spec: GeneratorSpec, tol: float = 1e-8, trials: int = 1000, workers: int = 1
) -> Report:
    """Closed forms against coordinate oracles on generated configurations.

    Failures are conditioning reports, not verdicts: configurations with two
    nearly coincident pairs (clustered, degeneracy near 1) shrink Re(det M)
    to O(spread^2) of the individual polynomial terms, so the float64
    closed-form evaluation loses that many digits while the identity itself
    still holds in exact arithmetic.
    """
    return _run_residual_suite("identity", spec, tol, trials, workers)


def run_invariance_suite(
    spec: GeneratorSpec, tol: float = 1e-9, trials: int = 1000, workers: int = 1
) -> Report:
    """Euclidean motions, permutations, reflection, scaling homogeneity."""
    return _run_residual_suite("invariance", spec, tol, trials, workers)


def run_conjecture_scan(
    spec: GeneratorSpec,
    trials: int,
    tol: float = 1e-9,
    workers: int = 1,
    keep_rows: bool = False,
) -> Report:
    """Minima of gap2, gap3 and the proved bound margin over seeded trials.

    A negative proved-bound margin beyond tolerance is a hard failure; so
    is any conjecture gap below -tol (scale-normalized): candidates worth
    loud reporting either way.
    """
    if spec.n != 4:
        raise ValueError("conjecture scan needs n = 4")
    start = time.monotonic()
    jobs = [(spec, tol, lo, hi, keep_rows) for lo, hi in _chunks(trials, workers)]
    parts = _map_chunks(_run_scan_chunk, jobs, workers)
    failures = sorted(
        (f for fs, _, _ in parts for f in fs), key=lambda f: (f["trial"], f["check"])
    )
    mins = [min(vals) for vals in zip(*(m for _, m, _ in parts))] if parts else [None] * 3
    rows = None
    if keep_rows:
        rows = [r for _, _, rs in parts for r in (rs or [])]
        rows.sort(key=lambda r: r[0])
    worst = max((-(m) for m in mins if m is not None), default=0.0)
    return Report(
        suite="conjecture-scan",
        seed=spec.seed,
        trials=trials,
        tol=tol,
        generator={"kind": spec.kind, "n": spec.n, "scale": spec.scale,
                   "degeneracy": spec.degeneracy},
        failures=failures,
        worst_residual=max(0.0, worst),
        min_gap2=mins[0],
        min_gap3=mins[1],
        min_bound_margin=mins[2],
        elapsed=time.monotonic() - start,
        rows=rows,
    )
