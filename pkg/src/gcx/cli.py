"""Command-line front end: ``gcx <command> [options]``.

Every command writes deterministic JSON (or Matrix Market for ``boundary``)
to stdout or ``--output``.  Exit codes: 0 success, 1 a property or check
failed, 2 bad input.  Errors are reported on stderr as a JSON object.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Callable

from . import __version__
from .canon import EVEN, ODD, PARITIES
from .complex import (
    SignedGraphSum,
    boundary_matrix,
    check_closed,
    enumerate_basis,
    gamma_pairing,
    homology,
    loop_order_bidegrees,
)
from .errors import CheckFailed, GcxError, InputError
from .graph import DirectedOrderedGraph, aut_group, psi_gamma, signed_aut_count, signs
from .intlinalg import matrix_market_string
from .signed_perm import LITERAL, SGN_PRIME_MODES
from .strata import cancellation_audit, dimension_report

EXIT_OK = 0
EXIT_CHECK = 1
EXIT_INPUT = 2


def worker_count() -> int:
    raw = os.environ.get("GCX_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise InputError(f"GCX_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise InputError(f"GCX_THREADS must be a positive integer, got {raw!r}")
    return n


def _conventions(args: argparse.Namespace) -> dict:
    out = {"allow_loops": not getattr(args, "no_loops", False), "self_loops_in_differential": False}
    if hasattr(args, "parity"):
        out["parity"] = args.parity
    if hasattr(args, "sgn_prime_mode"):
        out["sgn_prime_mode"] = args.sgn_prime_mode
    if hasattr(args, "d"):
        out["d"] = args.d
    return out


def _dump(data: dict) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def _emit(text: str, output: str | None) -> None:
    if output:
        try:
            Path(output).write_text(text)
        except OSError as exc:
            raise InputError(f"cannot write {output}: {exc}") from None
    else:
        sys.stdout.write(text)


def _load_json(path: str) -> dict:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None


def _load_graph(path: str) -> DirectedOrderedGraph:
    data = _load_json(path)
    if "terms" in data:
        terms = SignedGraphSum.from_json(data).terms
        if len(terms) != 1 or terms[0][0] != 1:
            raise InputError("this command takes a single graph")
        return terms[0][1]
    if "graph" in data:
        data = data["graph"]
    try:
        return DirectedOrderedGraph.from_json(data)
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed graph JSON: {exc}") from None


def _load_sum(path: str) -> SignedGraphSum:
    try:
        return SignedGraphSum.from_json(_load_json(path))
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed graph JSON: {exc}") from None


def _bases(bidegrees: list[tuple[int, int]], parity: str, allow_loops: bool) -> dict:
    jobs = [(v, e, parity, allow_loops) for v, e in bidegrees]
    workers = worker_count()
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(enumerate_basis, *zip(*jobs)))
    else:
        results = [enumerate_basis(*job) for job in jobs]
    return dict(zip(bidegrees, results))


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_basis(args: argparse.Namespace) -> int:
    basis = enumerate_basis(args.vertices, args.edges, args.parity, not args.no_loops)
    _emit(
        _dump(
            {
                "conventions": _conventions(args),
                "vertices": args.vertices,
                "edges": args.edges,
                "basis": [c.to_json() for c in basis],
            }
        ),
        args.output,
    )
    return EXIT_OK


def cmd_boundary(args: argparse.Namespace) -> int:
    v, e = args.vertices, args.edges
    bases = _bases([(v, e), (v - 1, e - 1)], args.parity, not args.no_loops)
    m = boundary_matrix(bases[(v, e)], bases[(v - 1, e - 1)], args.parity)
    comments = [
        f"differential {args.parity} ({v},{e}) -> ({v - 1},{e - 1})",
        "rows: target basis, columns: source basis, in enumeration order",
        f"allow_loops={not args.no_loops} self_loops_in_differential=False",
    ]
    _emit(matrix_market_string(m, comments), args.output)
    return EXIT_OK


def cmd_homology(args: argparse.Namespace) -> int:
    bidegrees = loop_order_bidegrees(args.loop_order)
    bases = _bases(bidegrees, args.parity, not args.no_loops)
    table = homology(bases, args.parity, args.ring)
    data = table.to_json()
    data["conventions"] = _conventions(args)
    data["loop_order"] = args.loop_order
    chains, hom = table.euler_characteristics()
    data["euler_characteristic"] = {"chains": chains, "homology": hom}
    _emit(_dump(data), args.output)
    return EXIT_OK


def cmd_check_closed(args: argparse.Namespace) -> int:
    s = _load_sum(args.graph)
    report = check_closed(s, args.parity)
    data = report.to_json()
    data["conventions"] = _conventions(args)
    data["input"] = s.to_json()
    _emit(_dump(data), args.output)
    return EXIT_OK if report.closed else EXIT_CHECK


def cmd_pairing(args: argparse.Namespace) -> int:
    s = _load_sum(args.graph)
    pairing = gamma_pairing(s, args.parity, args.d)
    data = pairing.to_json()
    data["conventions"] = _conventions(args)
    _emit(_dump(data), args.output)
    return EXIT_OK


def cmd_strata(args: argparse.Namespace) -> int:
    g = _load_graph(args.graph)
    if args.parity is None:
        args.parity = ODD if args.d % 2 else EVEN
    report = cancellation_audit(g, args.parity, args.d, args.sgn_prime_mode, raise_on_failure=False)
    data = report.to_json()
    data["conventions"].update(_conventions(args))
    data["dimensions"] = dimension_report(g, args.d).to_json()
    _emit(_dump(data), args.output)
    return EXIT_OK if report.passed else EXIT_CHECK


def cmd_aut(args: argparse.Namespace) -> int:
    g = _load_graph(args.graph)
    auts = []
    for a in aut_group(g):
        s = signs(a, args.d)
        auts.append(
            {
                "iso": a.to_json(),
                "psi": psi_gamma(g, a).to_json(),
                "signs": {"vertex": s.vertex, "edge": s.edge, "arrow": s.arrow, "d": s.d},
            }
        )
    data = {
        "conventions": _conventions(args),
        "graph": g.to_json(),
        "order": len(auts),
        "signed_count": signed_aut_count(g, args.d),
        "automorphisms": auts,
    }
    _emit(_dump(data), args.output)
    return EXIT_OK


def _selftest_checks() -> list[tuple[str, Callable[[], bool]]]:
    from .graph import complete_graph, edge_tuple_action_check, theta
    from .intlinalg import multiply
    from .signed_perm import all_signed_permutations

    def d_squared() -> bool:
        for parity in PARITIES:
            for g in (2, 3, 4):
                bases = {k: enumerate_basis(*k, parity) for k in loop_order_bidegrees(g)}
                for (v, e) in bases:
                    if (v - 2, e - 2) in bases and bases[(v, e)]:
                        a = boundary_matrix(bases[(v, e)], bases[(v - 1, e - 1)], parity)
                        b = boundary_matrix(bases[(v - 1, e - 1)], bases[(v - 2, e - 2)], parity)
                        if not multiply(b, a).is_zero():
                            return False
        return True

    def theta_certificate() -> bool:
        t = theta()
        return (
            [c.representative for c in enumerate_basis(2, 3, ODD)] == [t]
            and enumerate_basis(2, 3, EVEN) == []
            and check_closed(SignedGraphSum.single(t), ODD).closed
            and dimension_report(t, 3).degree == 0
            and dimension_report(t, 4).degree == 1
        )

    def signed_group_orders() -> bool:
        from math import factorial

        return all(sum(1 for _ in all_signed_permutations(n)) == 2**n * factorial(n) for n in range(5))

    def signed_aut_theta() -> bool:
        return signed_aut_count(theta(), 3) == 12 and signed_aut_count(theta(), 4) == 0

    def commuting_identity() -> bool:
        return all(edge_tuple_action_check(g, a) for g in (theta(), complete_graph(4)) for a in aut_group(g))

    def audits() -> bool:
        return all(
            cancellation_audit(g, p, d).passed
            for g, p in ((theta(), ODD), (complete_graph(4), EVEN))
            for d in (3, 4, 5)
        )

    return [
        ("d_squared_zero", d_squared),
        ("theta_certificate", theta_certificate),
        ("signed_group_orders", signed_group_orders),
        ("signed_aut_theta", signed_aut_theta),
        ("commuting_identity", commuting_identity),
        ("strata_audits", audits),
    ]


def cmd_selftest(args: argparse.Namespace) -> int:
    results = {}
    for name, check in _selftest_checks():
        try:
            results[name] = bool(check())
        except GcxError as exc:
            results[name] = False
            results[name + "_error"] = str(exc)
    ok = all(v for k, v in results.items() if not k.endswith("_error"))
    _emit(_dump({"version": __version__, "passed": ok, "checks": results}), args.output)
    return EXIT_OK if ok else EXIT_CHECK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _d_value(text: str) -> int:
    try:
        d = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer {text!r}") from None
    if d < 3:
        raise argparse.ArgumentTypeError("d must be >= 3")
    return d


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gcx", description="Graph complex calculus with odd/even orientations.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, parity: bool = True) -> None:
        if parity:
            p.add_argument("--parity", choices=PARITIES, default=ODD)
        p.add_argument("--output", "-o", help="write here instead of stdout")

    p = sub.add_parser("basis", help="enumerate a graph-complex basis")
    p.add_argument("--vertices", type=int, required=True)
    p.add_argument("--edges", type=int, required=True)
    p.add_argument("--no-loops", action="store_true", help="exclude graphs with self-loops")
    common(p)
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("boundary", help="boundary matrix out of (v, e) in Matrix Market")
    p.add_argument("--vertices", type=int, required=True)
    p.add_argument("--edges", type=int, required=True)
    p.add_argument("--no-loops", action="store_true")
    common(p)
    p.set_defaults(func=cmd_boundary)

    p = sub.add_parser("homology", help="homology table of one loop order")
    p.add_argument("--loop-order", type=int, required=True)
    p.add_argument("--ring", choices=("rationals", "integers"), default="rationals")
    p.add_argument("--no-loops", action="store_true")
    common(p)
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("check-closed", help="closedness certificate or residual")
    p.add_argument("--graph", required=True, help="graph or signed-sum JSON ('-' for stdin)")
    common(p)
    p.set_defaults(func=cmd_check_closed)

    p = sub.add_parser("pairing", help="pairing certificate for a closed element")
    p.add_argument("--graph", required=True)
    p.add_argument("--d", type=_d_value, default=None, help="ambient dimension (parity must agree)")
    common(p)
    p.set_defaults(func=cmd_pairing)

    p = sub.add_parser("strata", help="stratum audit of a closed trivalent graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--d", type=_d_value, default=3)
    p.add_argument("--sgn-prime-mode", choices=SGN_PRIME_MODES, default=LITERAL)
    p.add_argument("--parity", choices=PARITIES, default=None, help="default: odd for odd d, even for even d")
    common(p, parity=False)
    p.set_defaults(func=cmd_strata)

    p = sub.add_parser("aut", help="automorphisms and signed count")
    p.add_argument("--graph", required=True)
    p.add_argument("--d", type=_d_value, default=3)
    common(p, parity=False)
    p.set_defaults(func=cmd_aut)

    p = sub.add_parser("selftest", help="run the built-in invariant suite")
    common(p, parity=False)
    p.set_defaults(func=cmd_selftest)
    return parser


def _error(kind: str, message: str) -> None:
    sys.stderr.write(json.dumps({"error": kind, "message": message}, sort_keys=True) + "\n")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse already printed usage; keep its code for --help/--version
        if exc.code not in (0, None):
            _error("UsageError", "invalid command-line arguments")
            return EXIT_INPUT
        return EXIT_OK
    try:
        worker_count()
        return args.func(args)
    except InputError as exc:
        _error(type(exc).__name__, str(exc))
        return EXIT_INPUT
    except CheckFailed as exc:
        _error(type(exc).__name__, str(exc))
        return EXIT_CHECK


if __name__ == "__main__":
    sys.exit(main())
