"""Command-line entry point ``contracta``.

Exit codes: 0 on success, 2 for bad input, 3 when an internal invariant fails.
"""
from __future__ import annotations

import argparse
import logging
import math
import sys
import time
from pathlib import Path

from . import io
from .errors import InputError, InvariantViolation
from .generators import generate_terrain
from .pairing2m import compute_pairing
from .persistence import bottleneck, diagram, reduce
from .stability import simplify

EXIT_OK, EXIT_INPUT, EXIT_INVARIANT = 0, 2, 3


def _add_input(sp):
    sp.add_argument("--input", required=True, help="OFF or OBJ triangle mesh")
    sp.add_argument("--height", default="z",
                    help="z, curvature, or a file of 'index value' lines (default z)")


def _cmd_diagram(args) -> int:
    K = io.load_mesh(args.input, args.height)
    D = diagram(reduce(K), K, args.dim)
    io.save_diagram(D, args.out)
    if args.svg:
        io.emit_diagram_svg(D, args.svg, title=f"Dgm{args.dim}")
    print(f"{len(D)} points written to {args.out}")
    return EXIT_OK


def _cmd_pair(args) -> int:
    K = io.load_mesh(args.input, args.height)
    P = compute_pairing(K)
    if args.oracle and P != reduce(K):
        raise InvariantViolation("spanning-tree pairing disagrees with matrix reduction")
    if args.out:
        lines = [f"{' '.join(map(str, K.simplices[a]))} : {' '.join(map(str, K.simplices[b]))}"
                 for a, b in P.pairs]
        lines += [f"{' '.join(map(str, K.simplices[a]))} : inf" for a in P.essential]
        Path(args.out).write_text("\n".join(lines) + ("\n" if lines else ""))
    msg = f"{len(P.pairs)} pairs, {len(P.essential)} essential"
    if args.oracle:
        msg += "; oracle agrees"
    print(msg)
    return EXIT_OK


def _cmd_simplify(args) -> int:
    if args.epsilon < 0 or math.isnan(args.epsilon):
        raise InputError("--epsilon must be non-negative")
    if args.max_stages < 0:
        raise InputError("--max-stages must be non-negative")
    K = io.load_mesh(args.input, args.height)
    if not 0 <= args.dim <= K.dim:
        raise InputError(f"--dim must lie in 0..{K.dim}")
    t0 = time.perf_counter()
    K2, slog = simplify(K, args.dim, args.epsilon, max_stages=args.max_stages)
    elapsed = time.perf_counter() - t0
    D1 = diagram(reduce(K), K, args.dim)
    D2 = diagram(reduce(K2), K2, args.dim)
    io.save_mesh(K2, args.out)
    if args.diagrams_out:
        out = Path(args.diagrams_out)
        out.mkdir(parents=True, exist_ok=True)
        io.save_diagram(D1, out / "before.dgm")
        io.save_diagram(D2, out / "after.dgm")
        io.emit_diagram_svg(D1, out / "before.svg", title=f"Dgm{args.dim} before")
        io.emit_diagram_svg(D2, out / "after.svg", title=f"Dgm{args.dim} after")
        # measure on what was written so the report matches a later recomputation
        D1, D2 = io.load_diagram(out / "before.dgm"), io.load_diagram(out / "after.dgm")
    d_b = bottleneck(D1, D2)
    if d_b > slog.m * args.epsilon + 1e-9:
        raise InvariantViolation(f"d_b {d_b} exceeds the staged bound {slog.m * args.epsilon}")
    source = args.height if args.height in ("z", "curvature") else "file"
    report = io.RunReport.from_run(
        Path(args.input).stem, len(K), len(K2), slog, d_b,
        height_source=source, comparable_to_published=(source != "curvature"))
    if args.report:
        report.save(args.report)
    print(f"{report.init_simplices} -> {report.remaining_simplices} simplices, "
          f"{report.contractions} contractions in {report.iterations} stages, "
          f"d_b = {d_b:.6g} (bound {slog.m * args.epsilon:.6g}), {elapsed:.1f}s")
    return EXIT_OK


def _cmd_bottleneck(args) -> int:
    D1, D2 = io.load_diagram(args.d1), io.load_diagram(args.d2)
    print(repr(bottleneck(D1, D2, dim=args.dim)))
    return EXIT_OK


def _cmd_verify(args) -> int:
    from .verify import run_all

    if args.cases < 1:
        raise InputError("--cases must be positive")
    failed = 0
    for name, checks, failures in run_all(args.seed, args.cases):
        status = "PASS" if not failures else "FAIL"
        print(f"{status} {name}: {checks} checks on {args.cases} cases")
        for f in failures:
            print(f"  {f}")
        failed += len(failures)
    return EXIT_INVARIANT if failed else EXIT_OK


def _cmd_terrain(args) -> int:
    K = generate_terrain(args.n, args.seed, args.roughness)
    io.save_mesh(K, args.out)
    print(f"{args.n}x{args.n} terrain with {len(K)} simplices written to {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="contracta",
                                 description="Persistence-aware edge contraction.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("diagram", help="persistence diagram of a mesh")
    _add_input(sp)
    sp.add_argument("--dim", type=int, required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--svg", help="also write an SVG plot")
    sp.set_defaults(func=_cmd_diagram)

    sp = sub.add_parser("pair", help="persistence pairing of a closed surface")
    _add_input(sp)
    sp.add_argument("--oracle", action="store_true", help="cross-check against reduction")
    sp.add_argument("--out", help="write pairs as vertex tuples")
    sp.set_defaults(func=_cmd_pair)

    sp = sub.add_parser("simplify", help="staged (p, eps)-compatible contraction")
    _add_input(sp)
    sp.add_argument("--dim", type=int, required=True)
    sp.add_argument("--epsilon", type=float, required=True)
    sp.add_argument("--max-stages", type=int, default=10**9)
    sp.add_argument("--out", required=True)
    sp.add_argument("--report")
    sp.add_argument("--diagrams-out")
    sp.set_defaults(func=_cmd_simplify)

    sp = sub.add_parser("bottleneck", help="bottleneck distance of two diagram files")
    sp.add_argument("d1")
    sp.add_argument("d2")
    sp.add_argument("--dim", type=int)
    sp.set_defaults(func=_cmd_bottleneck)

    sp = sub.add_parser("verify", help="randomized property suites")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--cases", type=int, default=20)
    sp.set_defaults(func=_cmd_verify)

    sp = sub.add_parser("terrain", help="write a generated terrain mesh")
    sp.add_argument("--n", type=int, default=50)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--roughness", type=float, default=1.0)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=_cmd_terrain)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (InputError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
