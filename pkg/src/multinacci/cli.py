"""Command-line front end: ``multinacci <command> [options]``.

Every table prints both indexings: ``paper_k`` (published tables) and
``order_m`` (number of summed terms, ``order_m = paper_k + 1``).

Exit status is 0 on success, 2 on invalid input, 1 on numerical
non-convergence.  Defaults come from a ``key=value`` config file when
``--config`` is given; explicit flags override it.
"""

import argparse
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import fractals, sequences, spectra
from ._validation import ConvergenceError, ValidationError

# viewport presets: (mode, center, width, height, columns, rows, highlight)
FIGURES = {
    "1": ("none", -0.5 + 0j, 3.0, 2.6, 600, 520, ()),
    "2": ("mandelbrot", -0.5 + 0j, 3.0, 2.6, 600, 520, ()),
    "3": ("julia:-1", -0.5 + 0j, 3.0, 2.6, 600, 520, ()),
    "4": ("julia:-1", 0.618034 + 0j, 0.24, 0.24, 400, 400, (0.6180339887498949,)),
}


def parse_range(text, field):
    """``"2..20"``, ``"2,3,7"`` or ``"5"`` -> list of ints."""
    text = str(text).strip()
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            lo, hi = int(lo), int(hi)
            if hi < lo:
                raise ValueError
            return list(range(lo, hi + 1))
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise ValidationError(field, f"cannot parse range {text!r}") from None


def load_config(path):
    """Read ``key=value`` lines; ``#`` starts a comment.  Keys use dashes or underscores."""
    cfg = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError("--config", str(exc)) from None
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError("--config", f"line {lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        cfg[key.replace("-", "_")] = value
    return cfg


def _orders_from(args, default=(2, 20)):
    if getattr(args, "orders", None):
        return parse_range(args.orders, "--orders")
    if getattr(args, "paper_ks", None):
        return [k + 1 for k in parse_range(args.paper_ks, "--paper-ks")]
    return list(range(default[0], default[1] + 1))


def _single_order(args):
    if args.order is not None and args.paper_k is not None:
        raise ValidationError("--order", "give either --order or --paper-k, not both")
    if args.order is not None:
        return int(args.order)
    if args.paper_k is not None:
        return int(args.paper_k) + 1
    raise ValidationError("--paper-k", "an order is required (--paper-k or --order)")


def _emit(args, text, summary):
    if args.output:
        try:
            Path(args.output).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise ValidationError("--output", str(exc)) from None
        print(f"{summary} -> {args.output}")
    else:
        sys.stdout.write(text)
        print(summary, file=sys.stderr)


def _check_format(args, allowed):
    if args.format not in allowed:
        raise ValidationError("--format", f"must be one of {', '.join(allowed)} for {args.command}")


def cmd_seq(args):
    _check_format(args, ("csv", "json"))
    m = _single_order(args)
    init = parse_range(args.initial, "--initial") if args.initial else None
    seq = sequences.generate_sequence(sequences.RecurrenceSpec(m, init, int(args.terms)))
    rows = [{"n": i, "term": str(t)} for i, t in enumerate(seq.terms)]
    text = sequences.to_csv(rows, ("n", "term")) if args.format == "csv" else sequences.to_json(rows)
    _emit(args, text, f"seq: paper_k={m - 1} order_m={m} terms={len(seq)}")


def _scan(args):
    if args.max_order is not None:
        top = int(args.max_order)
    else:
        top = int(args.max_paper_k) + 1
    digits, terms = int(args.digits), int(args.terms)
    orders = range(2, top + 1)
    threads = int(args.threads)
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            return list(pool.map(lambda m: sequences.phi(m, terms, digits), orders))
    return sequences.phi_scan(top, terms, digits)


def cmd_phis(args):
    _check_format(args, ("csv", "json"))
    phis = _scan(args)
    rows = sequences.phi_rows(phis)
    if args.format == "csv":
        text = sequences.to_csv(rows, sequences.PHI_COLUMNS)
    else:
        text = sequences.to_json(rows)
    summary = f"phis: {len(phis)} rows (paper_k 1..{phis[-1].paper_k})"
    if args.tolerance is not None:
        res = sequences.convergence_scan(float(args.tolerance), phis[-1].order,
                                         int(args.terms), int(args.digits))
        if res.reached:
            summary += f"; |phi-0.5|<{args.tolerance} first at paper_k={res.paper_k}"
        else:
            summary += f"; |phi-0.5|<{args.tolerance} not reached"
    _emit(args, text, summary)


def cmd_diffs(args):
    _check_format(args, ("csv", "json"))
    phis = _scan(args)
    diffs = sequences.difference_sequence(phis)
    rows = sequences.difference_rows(diffs)
    if args.format == "csv":
        text = sequences.to_csv(rows, sequences.DIFF_COLUMNS)
    else:
        text = sequences.to_json(rows)
    flags = []
    if not diffs.is_positive():
        flags.append("NON-POSITIVE")
    if not diffs.is_strictly_decreasing():
        flags.append("NON-MONOTONE")
    _emit(args, text, f"diffs: {len(diffs)} rows" + (f" [{' '.join(flags)}]" if flags else ""))


def _eigen_sets(orders, args):
    return [
        spectra.eigenvalues(m, float(args.tolerance), int(args.max_solver_iter))
        for m in orders
    ]


def cmd_eigen(args):
    _check_format(args, ("csv", "json"))
    if args.order is not None or args.paper_k is not None:
        orders = [_single_order(args)]
    else:
        orders = _orders_from(args)
    sets = _eigen_sets(orders, args)
    text = spectra.eigen_to_json(sets) if args.format == "json" else spectra.eigen_to_csv(sets)
    worst = max(max(e.residuals) for e in sets)
    _emit(args, text, f"eigen: {len(sets)} orders, {sum(e.order for e in sets)} roots, "
                      f"max residual {worst:.3g}")


def _cloud(args):
    return spectra.phi_points(
        _orders_from(args), float(args.tolerance), max_iterations=int(args.max_solver_iter)
    )


def _cloud_note(points):
    meta = spectra.cloud_metadata(points)
    note = f"{meta['point_count']} points"
    if not meta["count_matches_published"]:
        note += f" (published count {meta['published_point_count']} differs)"
    return note


def cmd_points(args):
    _check_format(args, ("csv", "json"))
    points = _cloud(args)
    text = spectra.points_to_json(points) if args.format == "json" else spectra.points_to_csv(points)
    _emit(args, text, f"points: {_cloud_note(points)}")


def cmd_classify(args):
    _check_format(args, ("csv",))
    if args.points:
        try:
            points = spectra.read_points(Path(args.points).read_text(encoding="utf-8"))
        except OSError as exc:
            raise ValidationError("--points", str(exc)) from None
        except (ValueError, KeyError) as exc:
            raise ValidationError("--points", f"unreadable point file: {exc}") from None
    else:
        points = _cloud(args)
    bailout = float(args.bailout) if args.bailout is not None else None
    sets = [fractals.SetSpec.parse(s, int(args.max_iter), bailout) for s in args.set or ["mandelbrot"]]
    report = fractals.classify_points(points, sets)
    parts = [report.summary(), _cloud_note(points)]
    if any(s.kind == "mandelbrot" for s in sets):
        parts.append(
            f"published: {fractals.PUBLISHED_MANDELBROT_MEMBERS} of {spectra.PUBLISHED_POINT_COUNT} in mandelbrot"
        )
    bad = report.disagreements()
    if bad:
        parts.append(f"{len(bad)} oracle disagreements (boundary-suspect)")
    _emit(args, fractals.report_to_csv(report), "classify: " + "; ".join(parts))


def cmd_render(args):
    _check_format(args, ("pgm", "svg"))
    highlight = ()
    if args.figure:
        # presets fix the viewport; --max-iter and the cloud flags still apply
        mode, center, width, height, cols, rows, highlight = FIGURES[args.figure]
    else:
        mode, center = args.mode, complex(args.center.replace("i", "j"))
        width, height = float(args.width), float(args.height)
        cols, rows = int(args.columns), int(args.rows)
    max_iter = int(args.max_iter)
    draw_backdrop = mode != "none"
    if mode in ("none", "mandelbrot"):
        spec = fractals.GridSpec(center, width, height, cols, rows,
                                 fractals.QuadraticParams(0, max_iterations=max_iter))
    else:
        set_spec = fractals.SetSpec.parse(mode, max_iter)
        spec = fractals.GridSpec(center, width, height, cols, rows,
                                 fractals.QuadraticParams(set_spec.c, 0, max_iter, set_spec.bailout),
                                 mode="julia", julia_c=set_spec.c)
    if draw_backdrop:
        counts = fractals.render_grid(spec)
    else:
        counts = np.zeros((rows, cols), dtype=np.int64)
    if args.format == "pgm":
        if not draw_backdrop:
            raise ValidationError("--format", "figure 1 has no backdrop; use svg")
        _emit(args, fractals.grid_to_pgm(counts), f"render: {mode} {rows}x{cols} pgm")
        return
    points = [] if args.no_points else _cloud(args)
    title = f"{mode} backdrop, {len(points)} inverse-root points"
    svg = fractals.svg_overlay(spec, counts, points, highlight=highlight, title=title)
    _emit(args, svg, f"render: {mode} {rows}x{cols} svg, {_cloud_note(points)}")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value file supplying defaults")
    common.add_argument("-o", "--output", help="write the artifact here (default: stdout)")
    common.add_argument("--threads", default=1, help="worker threads for independent orders")
    common.add_argument("-v", "--verbose", action="store_true")

    order = argparse.ArgumentParser(add_help=False)
    order.add_argument("--paper-k", help="published index k (order_m = k + 1)")
    order.add_argument("--order", help="number of summed terms m")

    cloud = argparse.ArgumentParser(add_help=False)
    cloud.add_argument("--orders", help="order range, e.g. 2..20 (default)")
    cloud.add_argument("--paper-ks", help="paper-k range, e.g. 1..19")
    cloud.add_argument("--tolerance", default=spectra.DEFAULT_TOLERANCE, help="root residual bound")
    cloud.add_argument("--max-solver-iter", default=spectra.MAX_ITERATIONS)

    scan = argparse.ArgumentParser(add_help=False)
    scan.add_argument("--max-paper-k", default=30, help="last paper-k row (default 30)")
    scan.add_argument("--max-order", help="last order m (overrides --max-paper-k)")
    scan.add_argument("--terms", default=sequences.DEFAULT_TERMS)
    scan.add_argument("--digits", default=sequences.DEFAULT_DIGITS, help="decimal places kept")

    parser = argparse.ArgumentParser(prog="multinacci", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("seq", parents=[common, order], help="k-step sequence terms")
    p.add_argument("--terms", default=sequences.DEFAULT_TERMS)
    p.add_argument("--initial", help="comma-separated initial values (default all ones)")
    p.add_argument("--format", default="csv")
    p.set_defaults(func=cmd_seq)

    p = sub.add_parser("phis", parents=[common, scan], help="inverse ratio table")
    p.add_argument("--tolerance", help="also report first order with |phi - 0.5| < tolerance")
    p.add_argument("--format", default="csv")
    p.set_defaults(func=cmd_phis)

    p = sub.add_parser("diffs", parents=[common, scan], help="consecutive ratio differences")
    p.add_argument("--format", default="csv")
    p.set_defaults(func=cmd_diffs)

    p = sub.add_parser("eigen", parents=[common, order, cloud], help="companion-matrix roots")
    p.add_argument("--format", default="json")
    p.set_defaults(func=cmd_eigen)

    p = sub.add_parser("points", parents=[common, cloud], help="inverse-root point cloud")
    p.add_argument("--format", default="json")
    p.set_defaults(func=cmd_points)

    p = sub.add_parser("classify", parents=[common, cloud], help="escape-time membership")
    p.add_argument("--set", action="append",
                   help="mandelbrot or julia:C (repeatable; default mandelbrot)")
    p.add_argument("--points", help="point file from `points` instead of recomputing")
    p.add_argument("--max-iter", default=fractals.DEFAULT_MAX_ITERATIONS)
    p.add_argument("--bailout", help="escape radius (default 2 mandelbrot, 4 julia)")
    p.add_argument("--format", default="csv")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("render", parents=[common, cloud], help="iteration grid / SVG overlay")
    p.add_argument("--figure", choices=sorted(FIGURES), help="viewport preset")
    p.add_argument("--mode", default="mandelbrot", help="mandelbrot or julia:C")
    p.add_argument("--center", default="-0.5")
    p.add_argument("--width", default=3.0)
    p.add_argument("--height", default=2.6)
    p.add_argument("--columns", default=600)
    p.add_argument("--rows", default=520)
    p.add_argument("--max-iter", default=fractals.DEFAULT_MAX_ITERATIONS)
    p.add_argument("--no-points", action="store_true", help="omit the point markers")
    p.add_argument("--format", default="svg")
    p.set_defaults(func=cmd_render)
    return parser


def _parse(argv):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        cfg = load_config(args.config)
        sub = parser._subparsers._group_actions[0].choices[args.command]
        known = {a.dest for a in sub._actions}
        unknown = set(cfg) - known
        if unknown:
            raise ValidationError("--config", f"unknown keys: {', '.join(sorted(unknown))}")
        sub.set_defaults(**cfg)
        args = parser.parse_args(argv)
    return args


def main(argv=None):
    try:
        args = _parse(argv)
        logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
        args.func(args)
    except ValidationError as exc:
        print(f"multinacci: error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"multinacci: non-convergence: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"multinacci: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
