"""Acceptance gate: one test per release criterion.

Each criterion is numbered; tolerances and sample counts are part of the
contract and are not tuned here.  Criterion 3 asserts the published term
count for the expanded Re(det M) polynomial; see its message for the
measured count and the decomposition behind the discrepancy.
"""

import math
import time
from fractions import Fraction

import numpy as np
import pytest

from atiyahdet import (
    EdgeLengths4,
    GeneratorSpec,
    SearchProblem,
    atiyah_det,
    d3,
    detM_n3,
    distance_matrix,
    expand_re_detM,
    generate_configuration,
    minimize,
    re_detM_n4,
    run_conjecture_scan,
    run_identity_suite,
    run_invariance_suite,
)
from atiyahdet import highprec
from atiyahdet.search import collinearity_measure
from atiyahdet.sympoly import (
    interpolate_homogeneous,
    recover_abs_detM_sq,
    sample_realizable_edges,
)

SEED = 20240817


# --- shared 10^5-trial conjecture scan (criteria 4 and 7) -------------------

SCAN_PLAN = (
    ("uniform-ball", 40_000, 0.5),
    ("near-collinear", 20_000, 0.7),
    ("planar", 20_000, 0.5),
    ("clustered", 10_000, 0.6),
    ("near-antipodal-pair", 10_000, 0.5),
)


@pytest.fixture(scope="module")
def big_scan():
    reports = []
    for kind, trials, degeneracy in SCAN_PLAN:
        spec = GeneratorSpec(kind=kind, n=4, seed=SEED, degeneracy=degeneracy)
        reports.append(run_conjecture_scan(spec, trials=trials, workers=4))
    assert sum(r.trials for r in reports) == 100_000
    return reports


def test_criterion_1_n3_identity_and_lower_bound():
    """10^4 triangles: det M matches d3 + 8abc and never drops below 8abc."""
    t0 = time.time()
    plans = [("uniform-ball", 9_900, 0.5), ("near-collinear", 100, 0.8)]
    checked = 0
    for kind, trials, degeneracy in plans:
        spec = GeneratorSpec(kind=kind, n=3, seed=SEED, degeneracy=degeneracy)
        for trial in range(trials):
            cfg = generate_configuration(spec, trial)
            d = distance_matrix(cfg)
            a, b, c = d[0][1], d[0][2], d[1][2]
            me = (a + b + c) / 3.0
            det = atiyah_det(cfg).detM
            closed = detM_n3(a, b, c)
            assert abs(det - closed) <= 1e-8 * me**3, (kind, trial)
            assert det.real >= 8.0 * a * b * c - 1e-8 * me**3, (kind, trial)
            checked += 1
    assert checked == 10_000
    assert time.time() - t0 < 60.0  # "runtime <= seconds"


def test_criterion_2_n4_closed_form():
    """Re(det M) equals the edge-length closed form at 1e-8 relative."""
    plans = [
        ("uniform-ball", 1_000, 0.5),
        ("planar", 100, 0.5),
        ("near-collinear", 100, 0.7),
    ]
    for kind, trials, degeneracy in plans:
        spec = GeneratorSpec(kind=kind, n=4, seed=SEED + 1, degeneracy=degeneracy)
        for trial in range(trials):
            cfg = generate_configuration(spec, trial)
            e = EdgeLengths4.from_configuration(cfg)
            re = atiyah_det(cfg).detM.real
            closed = re_detM_n4(e)
            assert abs(re - closed) <= 1e-8 * max(abs(re), abs(closed)), (
                kind,
                trial,
            )


def test_criterion_2_exact_spot_values():
    one = Fraction(1)
    assert re_detM_n4(EdgeLengths4(one, one, one, one, one, one)) == 100
    collinear = EdgeLengths4(*(Fraction(k) for k in (1, 2, 1, 3, 2, 1)))
    assert re_detM_n4(collinear) == 768


def test_criterion_3_expansion_term_count():
    """The expanded Re(det M) polynomial has the published 226 terms."""
    p = expand_re_detM()
    even_block = sum(1 for m, _ in p.items() if all(x % 2 == 0 for x in m))
    assert len(p) == 226, (
        f"expansion has {len(p)} monomials, not 226: the monomials with an "
        f"odd exponent number {len(p) - even_block}, and the all-even block "
        f"({even_block} monomials, equal to twice the squared-volume "
        f"polynomial) is apparently not counted in the published figure. "
        f"The full expansion is confirmed independently by an exact "
        f"least-squares refit from high-precision determinant values "
        f"(criterion 8)."
    )


def test_criterion_4_proved_bound(big_scan):
    """Re(det M) - 60 prod(r) stays nonnegative over 10^5 tetrahedra."""
    for report in big_scan:
        bound_failures = [f for f in report.failures if "bound" in f["check"]]
        assert not bound_failures, bound_failures[:3]
        assert report.min_bound_margin >= -1e-9, report.generator


def test_criterion_5_identity_suites():
    """Distance-geometry identities hold at 1e-8 relative over 10^3 trials."""
    plans = [("uniform-ball", 400, 0.5), ("planar", 300, 0.5),
             ("near-collinear", 300, 0.7)]
    total = 0
    for kind, trials, degeneracy in plans:
        spec = GeneratorSpec(kind=kind, n=4, seed=SEED + 2, degeneracy=degeneracy)
        report = run_identity_suite(spec, tol=1e-8, trials=trials)
        assert report.passed, (kind, report.failures[:3])
        assert report.worst_residual <= 1e-8
        total += report.trials
    assert total == 1_000


def test_criterion_6_invariance_suites():
    """Rigid-motion and relabeling invariances hold at 1e-9 over 10^3 trials."""
    spec = GeneratorSpec(kind="uniform-ball", n=4, seed=SEED + 3)
    report = run_invariance_suite(spec, tol=1e-9, trials=1_000)
    assert report.passed, report.failures[:3]
    assert report.worst_residual <= 1e-9


def test_criterion_6_reports_identical_across_workers():
    spec = GeneratorSpec(kind="uniform-ball", n=4, seed=SEED + 4)
    for runner, kwargs in (
        (run_identity_suite, {"tol": 1e-8, "trials": 60}),
        (run_invariance_suite, {"tol": 1e-9, "trials": 60}),
        (run_conjecture_scan, {"trials": 200}),
    ):
        solo = runner(spec, workers=1, **kwargs)
        parallel = runner(spec, workers=3, **kwargs)
        assert solo.to_json() == parallel.to_json(), runner.__name__


def test_criterion_7_conjecture_gaps(big_scan):
    """gap2 and gap3 never dip below -1e-9 (scale-normalized) in the scan."""
    for report in big_scan:
        assert report.passed, (report.generator, report.failures[:3])
        assert report.min_gap2 >= -1e-9, report.generator
        assert report.min_gap3 >= -1e-9, report.generator


def test_criterion_7_search_floor():
    """50 restarts land |D| in [1 - 1e-6, 1 + 1e-3] at a collinear shape."""
    problem = SearchProblem(n=4, objective="abs-D", restarts=50,
                            max_iters=400, seed=2024)
    result = minimize(problem, workers=4)
    assert 1.0 - 1e-6 <= result.best_value <= 1.0 + 1e-3, result.best_value
    assert collinearity_measure(result.best_points) < 1e-6


def test_criterion_8_degree6_refit_oracle():
    """Blind 462-column refit of Re(det M) reproduces the expansion exactly."""
    gen = np.random.default_rng(17)
    samples = []
    for e in sample_realizable_edges(gen, 500):
        pts = highprec.embed_edge_lengths_mp(e, precision=256)
        det = highprec.atiyah_det_mp(pts, precision=256)
        samples.append((e, det.real))
    res = interpolate_homogeneous(samples, degree=6, precision=256, rtol=1e-20)
    assert res.poly == expand_re_detM()
    assert res.residual <= 1e-20


def test_criterion_8_degree12_recovery():
    """Stretch: |det M|^2 as an exact degree-12 polynomial, 4500 terms."""
    res = recover_abs_detM_sq(seed=0)
    assert res.residual <= 1e-20
    assert len(res.poly) == 4_500
    assert res.poly.degree() == 12
    # |det M|^2 at the regular tetrahedron and the collinear equality case
    assert res.poly.evaluate((1, 1, 1, 1, 1, 1)) == 10_000
    assert res.poly.evaluate((1, 2, 1, 3, 2, 1)) == 768 * 768
    # Re^2 never exceeds |det|^2: their difference is the Im part squared
    im_sq = res.poly - expand_re_detM() * expand_re_detM()
    gen = np.random.default_rng(23)
    for e in sample_realizable_edges(gen, 10):
        assert im_sq.evaluate(e) >= 0
