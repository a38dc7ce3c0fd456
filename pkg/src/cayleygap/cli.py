"""Command-line front end.

    cayleygap gap --process rw|krw|ip|gep|bs --graph FILE [...]
    cayleygap verify aldous|gep|diagram|bs-probe --graph FILE [...]

Reports go to standard output, diagnostics to standard error.  Exit codes:
0 success, 1 verification failure, 2 usage or input error, 3 cap
exceeded, 4 non-irreducible input.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time

from .errors import CapExceededError, CayleyGapError, InvalidInputError, NotIrreducibleError, NotReversibleError
from .graph import is_irreducible, reversible_measure, spectral_gap
from .io import dumps_document, dumps_report, read_alpha_file, read_graph_file, report_to_dict
from .perm import cayley_graph
from .processes import GEPConfig, block_shuffle_group, gep_graph, interchange_group, random_walk
from .verify import (
    DEFAULT_TOL,
    VerificationReport,
    aldous_sweep,
    describe,
    flag_check,
    probe_block_shuffle_conjecture,
    verify_aldous,
    verify_commutative_diagram,
    verify_gep_equals_k_rw,
)

log = logging.getLogger("cayleygap")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP, EXIT_IRREDUCIBLE = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


def _parse_k(args, X):
    if args.k is not None and args.k_list is not None:
        raise UsageError("give either --k or --k-list, not both")
    if args.k is not None:
        return (args.k,) * X.n
    if args.k_list is None:
        raise UsageError("this process needs --k or --k-list")
    values = {}
    for item in args.k_list.split(","):
        name, _, val = item.partition("=")
        name = name.strip()
        if name not in X.vertices or not val.strip().lstrip("-").isdigit():
            raise UsageError(f"bad --k-list entry {item!r}")
        values[name] = int(val)
    missing = [v for v in X.vertices if v not in values]
    if missing:
        raise UsageError(f"--k-list misses vertices {missing}")
    return tuple(values[v] for v in X.vertices)


def _need_l(args):
    if args.l is None:
        raise UsageError("this command needs --l")
    return args.l


def _emit(rep: VerificationReport, args) -> None:
    sys.stdout.write(dumps_report(rep, full_spectrum=args.full_spectrum, timing=args.timing))


def cmd_gap(args) -> int:
    t0 = time.perf_counter()
    X = read_graph_file(args.graph)
    proc = args.process
    if proc == "rw":
        g = random_walk(X)
    elif proc == "krw":
        g = random_walk(X, args.scale)
    elif proc == "ip":
        g = cayley_graph(interchange_group(X))
    elif proc == "gep":
        g = gep_graph(GEPConfig(X, _parse_k(args, X), _need_l(args)))
    else:
        if args.alpha is None:
            raise UsageError("--process bs needs --alpha FILE")
        g = cayley_graph(block_shuffle_group(read_alpha_file(args.alpha, X)))
    if not is_irreducible(g):
        raise NotIrreducibleError(f"the {proc} chain is not irreducible")
    rep = spectral_gap(g)
    report = VerificationReport(
        instance=describe(X), process=proc, state_count=g.n, gap=rep.gap, spectrum=rep.spectrum,
        checks=[flag_check("irreducible", True),
                flag_check("reversible", reversible_measure(g) is not None)],
        seed=args.seed, elapsed_ms=1000 * (time.perf_counter() - t0))
    _emit(report, args)
    return EXIT_OK


def cmd_verify(args) -> int:
    which = args.check
    if which == "aldous":
        if args.sweep:
            reports = aldous_sweep(args.sweep, (3, 4, 5), seed=args.seed or 0, tol=args.tol, jobs=args.jobs)
            doc = {"format": 1, "process": "ip", "seed": args.seed or 0,
                   "reports": [report_to_dict(r, timing=args.timing) for r in reports],
                   "overall_pass": all(r.overall_pass for r in reports)}
            sys.stdout.write(dumps_document(doc))
            return EXIT_OK if doc["overall_pass"] else EXIT_FAIL
        rep = verify_aldous(read_graph_file(_need_graph(args)), tol=args.tol, seed=args.seed)
    elif which == "gep":
        X = read_graph_file(_need_graph(args))
        k = _parse_k(args, X)
        l = 1 if args.sweep_l and args.l is None else _need_l(args)
        rep = verify_gep_equals_k_rw(GEPConfig(X, k, l), sweep=args.sweep_l, tol=args.tol, seed=args.seed)
    elif which == "diagram":
        X = read_graph_file(_need_graph(args))
        rep = verify_commutative_diagram(GEPConfig(X, _parse_k(args, X), _need_l(args)),
                                         tol=args.tol, seed=args.seed)
    else:
        X = read_graph_file(_need_graph(args))
        Ms = args.M or [1.0, 10.0]
        rep = probe_block_shuffle_conjecture(X, _parse_k(args, X), _need_l(args), Ms,
                                             tol=args.tol, seed=args.seed)
        _emit(rep, args)
        return EXIT_OK
    _emit(rep, args)
    for c in rep.failed():
        log.warning("check failed: %s (lhs=%s, rhs=%s)", c.name, c.lhs, c.rhs)
    return EXIT_OK if rep.overall_pass else EXIT_FAIL


def _need_graph(args):
    if args.graph is None:
        raise UsageError("this command needs --graph FILE")
    return args.graph


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--graph", metavar="FILE", help="base graph file")
    p.add_argument("--k", type=int, help="uniform maximal occupancy")
    p.add_argument("--k-list", metavar="v=INT,...", help="per-vertex maximal occupancies")
    p.add_argument("--l", type=int, help="number of particles")
    p.add_argument("--seed", type=int, default=None, help="seed recorded in (and used by) the report")
    p.add_argument("--full-spectrum", action="store_true", help="emit the whole spectrum")
    p.add_argument("--timing", action="store_true", help="record wall time (reports stop being byte-stable)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cayleygap", description=__doc__.split("\n\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    gap = sub.add_parser("gap", help="spectral gap of one process")
    gap.add_argument("--process", required=True, choices=["rw", "krw", "ip", "gep", "bs"])
    gap.add_argument("--scale", type=float, default=1.0, help="rate multiplier for krw")
    gap.add_argument("--alpha", metavar="FILE", help="block weights for bs")
    _common(gap)
    gap.set_defaults(func=cmd_gap)

    ver = sub.add_parser("verify", help="run a verification suite")
    ver.add_argument("check", choices=["aldous", "gep", "diagram", "bs-probe"])
    ver.add_argument("--tol", type=float, default=DEFAULT_TOL)
    ver.add_argument("--sweep-l", action="store_true", help="gep: check every admissible l")
    ver.add_argument("--sweep", type=int, metavar="COUNT", help="aldous: seeded random graphs instead of --graph")
    ver.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")
    ver.add_argument("--M", type=float, action="append", help="bs-probe: full-block weight (repeatable)")
    _common(ver)
    ver.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        log.error("%s", exc)
        return EXIT_USAGE
    except InvalidInputError as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    except CapExceededError as exc:
        log.error("%s", exc)
        return EXIT_CAP
    except (NotIrreducibleError, NotReversibleError) as exc:
        log.error("%s", exc)
        return EXIT_IRREDUCIBLE
    except CayleyGapError as exc:
        log.error("%s", exc)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
