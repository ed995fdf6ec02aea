"""Command-line front end: ``localduality <command> FILE [options]``.

Exit codes: 0 when every check passes, 1 when a check fails, 2 for bad
input (unreadable or invalid module files, bad flags) and 3 when a
computation aborts (Čech caps that never stabilize, slice cutoffs,
truncated resolutions).
"""
from __future__ import annotations

import argparse
import sys
import time
from typing import List, Optional

from .cech import NonStabilizedError
from .fileio import ModuleFileError, load_module
from .homology import ResolutionTooShortError
from .modules import SliceCutoffError
from .report import VerificationReport
from .verify import (
    Window,
    cmd_cm_check,
    cmd_ext,
    cmd_hilbert,
    cmd_localcoh,
    cmd_resolve,
    cmd_selfdual_scan,
    cmd_verify_derham,
    cmd_verify_duality,
    default_window,
)

EXIT_PASS, EXIT_FAIL, EXIT_INPUT, EXIT_ABORT = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse exits with 2 already; keep the message short
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _range(text: str) -> range:
    try:
        lo, hi = (int(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected w0:w1, got {text!r}") from None
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return range(lo, hi + 1)


def _window(text: str) -> Window:
    try:
        return Window.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("file", help="module file (JSON)")
    common.add_argument("--window", type=_window, help="a0:a1,b0:b1 (x range, t range)")
    common.add_argument("--json", action="store_true", help="print the JSON report instead of a summary")
    common.add_argument("--timing", action="store_true", help="record wall time in the report")
    common.add_argument("--seed", type=int, default=None, help="seed for randomized runs; every command here is deterministic")

    caps = argparse.ArgumentParser(add_help=False)
    caps.add_argument("--cap", type=int, default=None, help="starting denominator cap")
    caps.add_argument("--max-cap", type=int, default=None, help="largest cap tried before aborting")

    p = _Parser(prog="localduality", description="Exact checks for bigraded modules over Q[x, t].")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("hilbert", parents=[common], help="dimension table")
    r = sub.add_parser("resolve", parents=[common], help="free resolution and Betti table")
    r.add_argument("--schreyer", action="store_true", help="keep the non-minimal Schreyer resolution")
    r.add_argument("--length", type=int, default=None)
    e = sub.add_parser("ext", parents=[common], help="Ext^q_S(G, omega_S)")
    e.add_argument("-q", type=int, required=True)
    sub.add_parser("cm-check", parents=[common], help="Cohen-Macaulay test")
    lc = sub.add_parser("localcoh", parents=[common, caps], help="local cohomology along t = 0")
    lc.add_argument("-i", type=int, default=None, help="only this cohomological degree")
    vd = sub.add_parser("verify-duality", parents=[common, caps], help="duality checks per bidegree")
    vd.add_argument("--weight-range", type=_range, default=range(-3, 6))
    vr = sub.add_parser("verify-derham", parents=[common], help="de Rham complex checks")
    vr.add_argument("--weight", type=int, default=None)
    ss = sub.add_parser("selfdual-scan", parents=[common], help="search for self-duality weights")
    ss.add_argument("--weight-range", type=_range, default=range(-3, 6))
    return p


def run(args: argparse.Namespace) -> VerificationReport:
    mf = load_module(args.file)
    G = mf.presentation
    window = args.window or default_window(G)
    dg = mf.digest
    c = args.command
    if c == "hilbert":
        return cmd_hilbert(G, window, dg)
    if c == "resolve":
        return cmd_resolve(G, not args.schreyer, args.length, dg)
    if c == "ext":
        return cmd_ext(G, args.q, window, dg)
    if c == "cm-check":
        return cmd_cm_check(G, dg)
    if c == "localcoh":
        return cmd_localcoh(G, args.i, window, args.cap, args.max_cap, dg)
    if c == "verify-duality":
        return cmd_verify_duality(G, window, args.cap, args.max_cap, args.weight_range, dg)
    if c == "verify-derham":
        return cmd_verify_derham(G, window, args.weight, mf.weight_hint, dg)
    if c == "selfdual-scan":
        return cmd_selfdual_scan(G, window, args.weight_range, dg)
    raise ValueError(f"unknown command {c}")


def _glue_ranges(argv: List[str]) -> List[str]:
    """``--window -3:2,...`` would read as an option to argparse; glue such values with ``=``."""
    out: List[str] = []
    it = iter(argv)
    for a in it:
        if a in ("--window", "--weight-range"):
            v = next(it, None)
            out.append(a if v is None else f"{a}={v}")
        else:
            out.append(a)
    return out


def main(argv: Optional[List[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_glue_ranges(argv))
    start = time.perf_counter()
    try:
        rep = run(args)
    except (NonStabilizedError, SliceCutoffError, ResolutionTooShortError) as exc:
        print(f"aborted: {exc}", file=sys.stderr)
        return EXIT_ABORT
    except (ModuleFileError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.timing:
        rep.wall_time = round(time.perf_counter() - start, 3)
    print(rep.to_json() if args.json else rep.summary())
    return EXIT_PASS if rep.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
