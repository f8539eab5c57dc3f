"""Command line interface: ``rauzy <command> SURFACE.json [options]``.

Exit status is 0 on success (a stopping orbit is a result, not a failure),
2 for unreadable or invalid input and 4 when interval evaluation runs out
of precision.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from . import kernel
from .errors import NonPositiveHeight, NonSimplePolygon, ParseError, PrecisionExhausted, ValidationError
from .geometry import ORIGIN, enumerate_saddle_connections, minimality_probe, trace_horizontal
from .induction import backward_orbit, completeness_report, forward_orbit
from .iet import displacement_vector, translation_matrix
from .io import dump_connections, load_surface
from .numeric import parse_rational
from .render import TARGETS, RenderSpec, render_svg
from .suspension import height_vector, is_simple, singularity_classes

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_PRECISION = 4


def _rational(text):
    try:
        return parse_rational(text)
    except ParseError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _positive_int(text):
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return n


def cmd_inspect(args, out):
    s = load_surface(args.surface)
    print("valid surface", file=out)
    print(f"d = {s.d}", file=out)
    print(f"top    = {' '.join(s.pair.top)}", file=out)
    print(f"bottom = {' '.join(s.pair.bottom)}", file=out)
    print(f"simple polygon: {'yes' if is_simple(s) else 'no'}", file=out)
    print("Omega:", file=out)
    for a, row in zip(s.alphabet, translation_matrix(s.pair).rows()):
        print(f"  {a}: " + " ".join(f"{v:2d}" for v in row), file=out)
    print("delta:", file=out)
    for a, v in displacement_vector(s.pair, s.lengths).items():
        print(f"  {a}: {v}", file=out)
    print("h:", file=out)
    h = height_vector(s.pair, s.tau)
    for a in s.alphabet:
        print(f"  {a}: {h[a]}", file=out)
    classes = singularity_classes(s)
    print(f"singularities (genus {classes.genus(s.d)}):", file=out)
    for members, angle in zip(classes.classes, classes.angles):
        print(f"  angle {angle}pi: {' '.join(members)}", file=out)
    return EXIT_OK


def _print_report(log, out):
    if log.stopped_at is not None:
        print(f"orbit stops at step {log.stopped_at}", file=out)
    else:
        print(f"ran {len(log.steps)} steps", file=out)
    print("win counts: " + ", ".join(f"{a}={log.win_counts[a]}" for a in log.alphabet), file=out)
    rep = completeness_report(log)
    print(f"completeness ({rep.label}):", file=out)
    for sw in rep.symbols:
        print(f"  {sw.symbol}: wins={sw.wins} first={sw.first_win} last={sw.last_win}", file=out)
    print(f"  threshold {rep.threshold} reached at step {rep.threshold_step}", file=out)
    if rep.positivity_checkpoint is not None:
        print(f"  matrix positive at checkpoint {rep.positivity_checkpoint}: "
              f"{rep.positive_after_threshold}", file=out)
    if rep.complete_path_step is not None:
        print(f"  {2 * len(log.alphabet) - 3} complete paths end at step {rep.complete_path_step}, "
              f"matrix positive there: {rep.positive_after_complete_paths}", file=out)
    print("  frozen: " + (" ".join(rep.frozen) if rep.frozen else "none"), file=out)
    lam = log.final.total_length()
    print(f"|lambda| at the end: {lam}", file=out)


def _run_orbit(job):
    # returns text only: logs hold basis closures that do not pickle
    path, direction, steps, every = job
    s = load_surface(path)
    if direction == "backward":
        log = backward_orbit(s, steps, every)
    else:
        log = forward_orbit(s, steps, every)
    buf = io.StringIO()
    _print_report(log, buf)
    return buf.getvalue(), log.to_jsonl()


def _orbit_command(args, out, direction):
    jobs = [(p, direction, args.steps, args.checkpoint_every) for p in args.surface]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            logs = list(pool.map(_run_orbit, jobs))
    else:
        logs = [_run_orbit(j) for j in jobs]
    for path, (report, _) in zip(args.surface, logs):
        if len(logs) > 1:
            print(f"== {path}", file=out)
        out.write(report)
    if args.log:
        with open(args.log, "w", encoding="utf-8") as fh:
            for _, text in logs:
                fh.write(text)
    return EXIT_OK


def cmd_backward(args, out):
    return _orbit_command(args, out, "backward")


def cmd_forward(args, out):
    return _orbit_command(args, out, "forward")


def cmd_saddles(args, out):
    s = load_surface(args.surface)
    conns = enumerate_saddle_connections(s, args.max_length)
    text = dump_connections(conns, args.max_length)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    print(f"{len(conns)} horizontal saddle connection(s) of length <= {args.max_length}", file=out)
    for c in conns:
        via = f" along side {c.along_side}" if c.along_side else ""
        word = " ".join(c.word) if c.word else "-"
        print(f"  {c.start} -> {c.end}  length {c.length}  crossings {word}{via}", file=out)
    return EXIT_OK


def cmd_minimality(args, out):
    s = load_surface(args.surface)
    v = minimality_probe(s, args.steps, args.max_length)
    print(v.verdict, file=out)
    print(f"  bounds: {args.steps} steps, connections up to length {args.max_length}", file=out)
    print(f"  connections found: {len(v.connections)}", file=out)
    if v.step is not None:
        print(f"  all connections are sides at step {v.step}", file=out)
    for c, n in zip(v.connections, v.first_seen):
        print(f"  {c.start} -> {c.end} length {c.length}: first a side at {n}", file=out)
    if v.stopped_at is not None:
        print(f"  orbit stops at step {v.stopped_at}", file=out)
    if v.frozen:
        print("  frozen: " + " ".join(v.frozen), file=out)
    if args.json:
        print(json.dumps(v.to_json(), indent=2), file=out)
    return EXIT_OK


def cmd_render(args, out):
    s = load_surface(args.surface)
    conns = ()
    trace = None
    if args.connections:
        conns = tuple(enumerate_saddle_connections(s, args.max_length))
    if args.target == "trace":
        trace = trace_horizontal(s, args.start, args.max_length)
    spec = RenderSpec(args.target, args.scale, connections=conns)
    svg = render_svg(s, spec, trace)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(svg)
    print(f"wrote {args.out}", file=out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rauzy", description="Exact Rauzy-Veech induction on suspension data.")
    p.add_argument("--backend", action="store_true", help="print the kernel in use and exit")
    sub = p.add_subparsers(dest="command")

    q = sub.add_parser("inspect", help="validate a surface and print its invariants")
    q.add_argument("surface")
    q.set_defaults(func=cmd_inspect)

    for name, func in (("backward", cmd_backward), ("forward", cmd_forward)):
        q = sub.add_parser(name, help=f"run {name} induction")
        q.add_argument("surface", nargs="+")
        q.add_argument("--steps", type=_positive_int, default=100)
        q.add_argument("--log", help="write the orbit log (JSON lines) here")
        q.add_argument("--checkpoint-every", type=int, default=1)
        q.add_argument("--jobs", type=int, default=1, help="run several surfaces in parallel")
        q.set_defaults(func=func)

    q = sub.add_parser("saddles", help="enumerate horizontal saddle connections")
    q.add_argument("surface")
    q.add_argument("--max-length", type=_rational, required=True)
    q.add_argument("--out", help="write the connections as JSON here")
    q.set_defaults(func=cmd_saddles)

    q = sub.add_parser("minimality", help="run the minimality probe")
    q.add_argument("surface")
    q.add_argument("--steps", type=_positive_int, default=500)
    q.add_argument("--max-length", type=_rational, required=True)
    q.add_argument("--json", action="store_true")
    q.set_defaults(func=cmd_minimality)

    q = sub.add_parser("render", help="draw the surface as SVG")
    q.add_argument("surface")
    q.add_argument("--out", required=True)
    q.add_argument("--target", choices=TARGETS, default="polygon")
    q.add_argument("--scale", type=_rational, default=100)
    q.add_argument("--start", default=ORIGIN, help="start corner for the trace target")
    q.add_argument("--max-length", type=_rational, default=10)
    q.add_argument("--connections", action="store_true", help="draw saddle connections dotted")
    q.set_defaults(func=cmd_render)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.backend:
        print(kernel.BACKEND, file=out)
        return EXIT_OK
    if args.command is None:
        parser.print_help(file=out)
        return EXIT_INPUT
    try:
        return args.func(args, out)
    except PrecisionExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except (ParseError, ValidationError, OSError, NonSimplePolygon, NonPositiveHeight, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
