"""``splitrank`` command line: hull, closure, certify, check.

Exit codes: 0 on success, 1 on any error, 2 when the iteration cap is hit.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys

from . import __version__
from .certify import DEFAULT_CAP, certify, check_certificate
from .closure import (
    bounded_directions,
    chvatal_closure,
    d_set_closure,
)
from .errors import CapExceeded, SplitRankError
from .hull import integer_hull
from .io import (
    certificate_to_json,
    load_certificate,
    load_directions,
    load_polyhedron,
    polyhedron_to_json,
    polyhedron_to_text,
    unlimited_digits,
)

EXIT_OK, EXIT_ERROR, EXIT_CAP = 0, 1, 2

log = logging.getLogger("splitrank")


def _emit(P, name, fmt_kind, out=None):
    if fmt_kind == "text":
        text = polyhedron_to_text(P, name)
    else:
        text = json.dumps(polyhedron_to_json(P, name), indent=2) + "\n"
    (out or sys.stdout).write(text)


def cmd_hull(args) -> int:
    Q, name = load_polyhedron(args.input)
    _emit(integer_hull(Q), name, args.format)
    return EXIT_OK


def _usable(S, D, kind):
    """Directions whose range is finite on ``S`` (both sides for splits)."""
    keep, skipped = [], []
    for d in D:
        lo, hi = S.bounds(d)
        if hi is None or (kind == "split" and lo is None):
            skipped.append(d)
        else:
            keep.append(d)
    return keep, skipped


def cmd_closure(args) -> int:
    Q, name = load_polyhedron(args.input)
    bounded = args.norm_bound is not None
    D = bounded_directions(Q.dim, args.norm_bound) if bounded else load_directions(args.directions, Q.dim)
    step = d_set_closure if args.kind == "split" else chvatal_closure
    S = Q
    for t in range(args.iters):
        if S.is_empty():
            break
        use = D
        if bounded:
            use, skipped = _usable(S, D, args.kind)
            for d in skipped:
                print(f"round {t}: skipped unbounded direction {list(d)}", file=sys.stderr)
        S = step(S, use)
    _emit(S, name, args.format)
    return EXIT_OK


def cmd_certify(args) -> int:
    Q, name = load_polyhedron(args.input)
    try:
        cert = certify(Q, cap=args.max_iters, name=name)
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    text = json.dumps(certificate_to_json(cert, __version__), indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_check(args) -> int:
    Q, _ = load_polyhedron(args.input)
    cert = load_certificate(args.certificate)
    failure = check_certificate(Q, cert)
    if failure:
        print(failure, file=sys.stderr)
        return EXIT_ERROR
    print("certificate verified")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="splitrank", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hull", help="integer hull of a polyhedron file")
    p.add_argument("input")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=cmd_hull)

    p = sub.add_parser("closure", help="iterate a split or Chvátal closure")
    p.add_argument("input")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--directions", help="JSON list of integer direction vectors")
    src.add_argument("--norm-bound", type=int, help="use all primitive directions with max-norm <= L")
    p.add_argument("--kind", choices=("split", "chvatal"), default="split")
    p.add_argument("--iters", type=int, default=1)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("certify", help="write a finite split rank certificate")
    p.add_argument("input")
    p.add_argument("--max-iters", type=int, default=DEFAULT_CAP)
    p.add_argument("--out", help="certificate path (stdout if omitted)")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("check", help="re-verify a certificate from scratch")
    p.add_argument("input")
    p.add_argument("certificate")
    p.set_defaults(func=cmd_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    if getattr(args, "iters", 0) < 0:
        parser.error("--iters must be nonnegative")
    if getattr(args, "norm_bound", None) is not None and args.norm_bound < 1:
        parser.error("--norm-bound must be at least 1")
    try:
        with unlimited_digits():
            return args.func(args)
    except (SplitRankError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
