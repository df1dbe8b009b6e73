"""Command-line interface.

Subcommands: compute, verify, scan, search, expand, interpolate.  Exit
codes: 0 clean, 1 at least one check failed, 2 usage or input error.
Primary output files are deterministic for fixed flags and seed; wall-time
goes to stderr only.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import closedforms, highprec, search, sympoly, verify
from ._backend import backend_name
from .determinant import atiyah_det
from .errors import AtiyahDetError, IllConditioned, ObjectiveUndefined, ResidualTooLarge
from .geometry import Configuration


def load_configuration(path: str) -> Configuration:
    """Points file: {"points": [[t, u, v], ...], "label": optional}."""
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, dict) or "points" not in data:
        raise ValueError("input must be a JSON object with a 'points' array")
    raw = data["points"]
    if not isinstance(raw, list) or len(raw) < 2:
        raise ValueError("'points' must list at least 2 points")
    for i, row in enumerate(raw):
        if not isinstance(row, list) or len(row) != 3:
            raise ValueError(f"point {i} is not a [t, u, v] triple")
        for x in row:
            if isinstance(x, bool) or not isinstance(x, (int, float)):
                raise ValueError(f"point {i} has a non-numeric coordinate {x!r}")
            if not math.isfinite(x):
                raise ValueError(f"point {i} has a non-finite coordinate {x!r}")
    label = data.get("label")
    if label is not None and not isinstance(label, str):
        raise ValueError("'label' must be a string")
    return Configuration([tuple(map(float, row)) for row in raw], label=label)


def _write(path: str | None, text: str) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_compute(args) -> int:
    cfg = load_configuration(args.input)
    res = atiyah_det(cfg)
    det = res.detM
    record = {
        "n": res.n,
        "label": cfg.label,
        "backend": backend_name(),
        "detM_re": det.real,
        "detM_im": det.imag,
        "abs_detM": abs(det),
        "edge_product": res.edge_product,
        "D_re": res.D.real,
        "D_im": res.D.imag,
        "abs_D": res.abs_D,
    }
    print(f"n = {res.n}  backend = {record['backend']}")
    print(f"det M        = {det.real!r} + {det.imag!r} j")
    print(f"|det M|      = {abs(det)!r}")
    print(f"edge product = {res.edge_product!r}")
    print(f"D            = {res.D.real!r} + {res.D.imag!r} j   |D| = {res.abs_D!r}")
    if res.n == 4:
        e = closedforms.EdgeLengths4.from_configuration(cfg)
        closed = closedforms.re_detM_n4(e)
        residual = abs(det.real - closed) / abs(closed)
        record["re_closed_form"] = closed
        record["re_residual"] = residual
        print(f"Re closed    = {closed!r}   residual = {residual:.3e}")
    if args.precision:
        mp_det = highprec.atiyah_det_mp(cfg.as_array().tolist(), args.precision)
        print(f"det M @ {args.precision} bits = {mp_det}")
    if args.out:
        _write(args.out, json.dumps(record, indent=2, sort_keys=True) + "\n")
    return 0


def cmd_verify(args) -> int:
    spec = verify.GeneratorSpec(
        args.kind, args.n, scale=args.scale, degeneracy=args.degeneracy, seed=args.seed
    )
    id_tol = args.tol if args.tol is not None else 1e-8
    rep_id = verify.run_identity_suite(spec, tol=id_tol, trials=args.trials, workers=args.workers)
    inv_tol = args.tol if args.tol is not None else 1e-9
    rep_inv = verify.run_invariance_suite(
        spec, tol=inv_tol, trials=args.trials, workers=args.workers
    )
    for rep in (rep_id, rep_inv):
        status = "ok" if rep.passed else f"{len(rep.failures)} FAILURES"
        print(
            f"{rep.suite}: {status}  worst residual {rep.worst_residual:.3e} "
            f"({rep.trials} trials)"
        )
        print(f"  elapsed {rep.elapsed:.2f}s", file=sys.stderr)
    if args.out:
        payload = {
            "identity": rep_id.to_dict(),
            "invariance": rep_inv.to_dict(),
        }
        _write(args.out, json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return 0 if rep_id.passed and rep_inv.passed else 1


def cmd_scan(args) -> int:
    spec = verify.GeneratorSpec(
        args.kind, args.n, scale=args.scale, degeneracy=args.degeneracy, seed=args.seed
    )
    tol = args.tol if args.tol is not None else 1e-9
    rep = verify.run_conjecture_scan(
        spec,
        trials=args.trials,
        tol=tol,
        workers=args.workers,
        keep_rows=args.format == "csv",
    )
    print(
        f"scan: {rep.trials} trials  min gap2/s^6 = {rep.min_gap2!r}  "
        f"min gap3/s^12 = {rep.min_gap3!r}  min (Re-60prod)/s^6 = {rep.min_bound_margin!r}"
    )
    print(f"  elapsed {rep.elapsed:.2f}s", file=sys.stderr)
    if not rep.passed:
        print(f"scan: {len(rep.failures)} VIOLATIONS", file=sys.stderr)
    if args.out:
        if args.format == "csv":
            rep.write_gaps_csv(args.out)
        else:
            _write(args.out, rep.to_json())
    return 0 if rep.passed else 1


def cmd_search(args) -> int:
    problem = search.SearchProblem(
        n=args.n,
        objective=args.objective,
        restarts=args.trials if args.trials is not None else 8,
        seed=args.seed,
    )
    result = search.minimize(problem, workers=args.workers)
    coll = search.collinearity_measure(result.best_points)
    print(
        f"search {problem.objective} n={problem.n}: best = {result.best_value!r} "
        f"(restart {result.restart_index}, collinearity {coll:.3e}, "
        f"gauge dev {result.gauge_deviation:.3e})"
    )
    if args.out:
        search.append_archive(args.out, problem, result)
    return 0


def cmd_expand(args) -> int:
    poly = sympoly.expand_re_detM()
    text = poly.to_text()
    if args.out:
        _write(args.out, text)
        print(f"terms: {len(poly)}")
    else:
        sys.stdout.write(text)
        print(f"terms: {len(poly)}", file=sys.stderr)
    return 0


def cmd_interpolate(args) -> int:
    result = sympoly.recover_abs_detM_sq(
        seed=args.seed,
        n_samples=args.trials if args.trials is not None else 420,
        precision=args.precision,
        rtol=args.tol if args.tol is not None else 1e-20,
    )
    if args.out:
        _write(args.out, result.poly.to_text())
    print(
        f"terms: {len(result.poly)}  residual: {result.residual:.3e}  "
        f"condition: {result.condition:.3e}"
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="atiyahdet",
        description="Atiyah configuration determinants: compute, verify, scan, search.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, *, seed=True, trials=None, workers=False):
        if seed:
            p.add_argument("--seed", type=int, default=0)
        if trials is not None:
            p.add_argument("--trials", type=int, default=trials)
        if workers:
            p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("compute", help="determinant of a points file")
    p.add_argument("--in", dest="input", required=True, metavar="PATH")
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--precision", type=int, default=0, metavar="BITS")
    p.set_defaults(fn=cmd_compute)

    p = sub.add_parser("verify", help="identity and invariance suites")
    add_common(p, trials=1000, workers=True)
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--kind", choices=verify.GENERATOR_KINDS, default="uniform-ball")
    p.add_argument("--degeneracy", type=float, default=0.5)
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("scan", help="conjecture gap scan over tetrahedra")
    add_common(p, trials=10000, workers=True)
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--kind", choices=verify.GENERATOR_KINDS, default="uniform-ball")
    p.add_argument("--degeneracy", type=float, default=0.5)
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(fn=cmd_scan)

    p = sub.add_parser("search", help="minimize |D| or a conjecture gap")
    add_common(p, trials=None, workers=True)
    p.add_argument("--trials", type=int, default=None, help="number of restarts")
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--objective", choices=search.OBJECTIVES, default="abs-D")
    p.add_argument("--out", metavar="PATH", help="JSONL archive to append to")
    p.set_defaults(fn=cmd_search)

    p = sub.add_parser("expand", help="write the symbolic Re(det M) polynomial")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(fn=cmd_expand)

    p = sub.add_parser("interpolate", help="recover |det M|^2 as a degree-12 polynomial")
    add_common(p, trials=None)
    p.add_argument("--trials", type=int, default=None, help="number of samples")
    p.add_argument("--precision", type=int, default=256, metavar="BITS")
    p.add_argument("--tol", type=float, default=None, help="post-rounding residual bound")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(fn=cmd_interpolate)

    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # argparse exits on --help and usage errors
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except (IllConditioned, ResidualTooLarge, ObjectiveUndefined) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (AtiyahDetError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
