"""
rtw.cli
=======

Command-line driver: exact solvers, constructions, family verification,
table sweeps and property suites. Results go to stdout as JSON or CSV,
logs go to stderr.

Exit codes:
    0  optimal result / rainbow-free / suite passed
    1  usage error or invalid input
    2  budget exhausted (lower_bound_only)
    3  rainbow copy found
    4  property suite failed
"""

from __future__ import annotations

import argparse
import logging
import multiprocessing
import sys
from pathlib import Path
from typing import Any, Dict, List, Sequence

import pandas as pd
from tqdm import tqdm

from rtw import checks, constructions, io, metadata, utils
from rtw.enumeration import RedBlueGraph, count_colored, enumerate_copies
from rtw.extremal import (
    Budget,
    SearchOutcome,
    ex_colored,
    ex_edges,
    ex_generalized,
    rb_exact,
)
from rtw.graphcore import SmallGraph, graph_from_spec, make_named
from rtw.rainbow import find_rainbow, find_t_rainbow

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARTIAL = 2
EXIT_RAINBOW = 3
EXIT_CHECK_FAILED = 4

KINDS = ("ex", "exh", "excol", "rb")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit code 1."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _graph(text: str | None, flag: str) -> SmallGraph:
    if text is None:
        raise UsageError(f"{flag} is required")
    try:
        return graph_from_spec(text)
    except ValueError as exc:
        raise UsageError(f"Cannot parse {flag} {text!r}: {exc}") from exc


def _budget(args: argparse.Namespace, config: Dict[str, Any]) -> Budget:
    base = Budget.from_config(config)
    try:
        return Budget(
            max_nodes=args.max_nodes if args.max_nodes is not None else base.max_nodes,
            max_seconds=args.max_seconds if args.max_seconds is not None else base.max_seconds,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def solve(
    kind: str,
    n: int,
    h: SmallGraph | None,
    f: SmallGraph,
    budget: Budget,
    use_root_symmetry: bool = True,
) -> SearchOutcome:
    """Dispatch one solver call by table/compute kind."""
    if kind == "ex":
        return ex_edges(n, f, budget)
    if h is None:
        raise UsageError(f"{kind} needs --h")
    if kind == "exh":
        return ex_generalized(n, h, f, budget)
    if kind == "excol":
        return ex_colored(n, h, f, budget)
    if kind == "rb":
        return rb_exact(n, h, f, budget, use_root_symmetry=use_root_symmetry)
    raise UsageError(f"Unknown kind {kind!r}; choose from {KINDS}")


def _write(payload: Any) -> None:
    sys.stdout.write(io.dumps(payload))


# ========================================
# Commands
# ========================================


def cmd_compute(args: argparse.Namespace, config: Dict[str, Any]) -> int:
    h = _graph(args.h, "--h") if args.h is not None else None
    f = _graph(args.f, "--f")
    symmetry = bool((config.get("search") or {}).get("use_root_symmetry", True))
    outcome = solve(args.kind, args.n, h, f, _budget(args, config), symmetry)
    payload = io.outcome_to_dict(outcome)
    payload.update({"kind": args.kind, "n": args.n, "h": args.h, "f": args.f})
    _write(payload)
    return EXIT_OK if outcome.optimal else EXIT_PARTIAL


def cmd_construct(args: argparse.Namespace, config: Dict[str, Any]) -> int:
    try:
        built = constructions.build_construction(args.spec)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc

    if isinstance(built, RedBlueGraph):
        document = built
        summary = {"construction": args.spec.partition(":")[0], "n": built.graph.n,
                   "red": len(built.red), "blue": len(built.blue)}
    else:
        document = built.family
        summary = built.summary()

    if args.output:
        io.save_document(document, args.output, overwrite=True)
    else:
        sys.stdout.write(io.document_text(document))
    sys.stderr.write(io.dumps(summary))
    return EXIT_OK


def _witness_payload(witness) -> Dict[str, Any]:
    assignment = witness.assignment
    return {
        "f_copy": [list(e) for e in witness.f_copy.edges],
        "assignment": [
            [u, v, list(m) if isinstance(m, tuple) else m]
            for (u, v), m in sorted(assignment.items())
        ],
    }


def _verify_colored(g: RedBlueGraph, f: SmallGraph, h: SmallGraph | None) -> int:
    copies = enumerate_copies(g.graph, f)
    witness = copies[0] if copies else None
    payload: Dict[str, Any] = {
        "schema": io.SCHEMA,
        "n": g.graph.n,
        "red": len(g.red),
        "blue": len(g.blue),
        "f_free": witness is None,
    }
    if h is not None:
        payload["colored_count"] = count_colored(g, h, make_named("K2"))
    if witness is not None:
        payload["f_copy"] = [list(e) for e in witness.edges]
    _write(payload)
    return EXIT_OK if witness is None else EXIT_RAINBOW


def cmd_verify(args: argparse.Namespace, config: Dict[str, Any]) -> int:
    f = _graph(args.f, "--f")
    h = _graph(args.h, "--h") if args.h is not None else None
    try:
        if args.document == "-":
            document = io.parse_any(sys.stdin.read())
        else:
            document = io.load_document(args.document)
    except (FileNotFoundError, io.DocumentError) as exc:
        raise UsageError(str(exc)) from exc

    if args.t is not None and args.t < 1:
        raise UsageError(f"--t must be positive, got {args.t}")
    if isinstance(document, RedBlueGraph):
        if args.t not in (None, 1):
            raise UsageError("--t applies to family documents only")
        return _verify_colored(document, f, h)

    family = document
    if args.t is None or args.t == 1:
        witness = find_rainbow(family, f)
    else:
        witness = find_t_rainbow(family, f, args.t)

    payload: Dict[str, Any] = {
        "schema": io.SCHEMA,
        "copies": len(family),
        "n_host": family.n_host,
        "t": args.t or 1,
        "rainbow_free": witness is None,
    }
    if witness is not None:
        payload["witness"] = _witness_payload(witness)
    _write(payload)
    return EXIT_OK if witness is None else EXIT_RAINBOW


def _table_row(task: tuple) -> Dict[str, Any]:
    kind, n, h_text, f_text, budget, symmetry, cert_dir = task
    h = graph_from_spec(h_text) if h_text is not None else None
    f = graph_from_spec(f_text)
    outcome = solve(kind, n, h, f, budget, symmetry)
    digest = metadata.certificate_digest(outcome.certificate)
    if cert_dir is not None:
        path = Path(cert_dir) / f"{digest}.json"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(io.dumps(io.certificate_to_dict(outcome.certificate)), encoding="utf-8")
    return {
        "n": n,
        "h": h_text if h_text is not None else "K2",
        "f": f_text,
        "value": outcome.value,
        "status": outcome.status.value,
        "certificate": digest,
        "nodes": outcome.stats.nodes,
        "seconds": round(outcome.stats.seconds, 3),
    }


def cmd_table(args: argparse.Namespace, config: Dict[str, Any]) -> int:
    if args.kind != "ex":
        _graph(args.h, "--h")
    _graph(args.f, "--f")
    try:
        ns = utils.parse_range(args.n)
    except ValueError as exc:
        raise UsageError(f"Bad --n range {args.n!r}: {exc}") from exc
    budget = _budget(args, config)
    symmetry = bool((config.get("search") or {}).get("use_root_symmetry", True))
    tasks = [(args.kind, n, args.h, args.f, budget, symmetry, args.certificates_dir) for n in ns]

    workers = min(utils.worker_count(config, args.workers), len(tasks))
    logger.info(f"Table {args.kind} h={args.h} f={args.f} n={ns} workers={workers}")
    if workers > 1:
        with multiprocessing.Pool(workers) as pool:
            rows: List[Dict[str, Any]] = pool.map(_table_row, tasks)
    else:
        rows = [_table_row(task) for task in tqdm(tasks, desc="table", disable=None)]

    fmt = args.format or (config.get("table") or {}).get("format", "csv")
    if fmt == "json":
        _write({"schema": io.SCHEMA, "kind": args.kind, "rows": rows})
    else:
        pd.DataFrame(rows).to_csv(sys.stdout, index=False, lineterminator="\n")
    if args.meta:
        meta = metadata.create_metadata(
            f"table {args.kind}",
            config,
            {"h": args.h, "f": args.f, "n": ns, "workers": workers, "rows": len(rows)},
        )
        metadata.save_metadata(meta, args.meta)
    partial = any(row["status"] != "optimal" for row in rows)
    return EXIT_PARTIAL if partial else EXIT_OK


def cmd_check(args: argparse.Namespace, config: Dict[str, Any]) -> int:
    result = checks.run_suite(args.suite, config, seed=args.seed, trials=args.trials)
    _write(result.to_dict())
    return EXIT_OK if result.passed else EXIT_CHECK_FAILED


# ========================================
# Parser
# ========================================


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", default=None, help="Config YAML file (default: packaged)")
    common.add_argument(
        "--log-level",
        default=None,
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Logging level (default: output.log_level from config)",
    )
    common.add_argument("--workers", type=int, default=None,
                        help="Worker processes, capped by RTW_WORKERS")

    budget = _Parser(add_help=False)
    budget.add_argument("--max-nodes", type=int, default=None,
                        help="Search-node budget per solver call (default 1e8)")
    budget.add_argument("--max-seconds", type=float, default=None,
                        help="Wall-clock budget per solver call (default 900)")

    parser = _Parser(
        prog="rtw",
        description="Rainbow Turán workbench",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  rtw compute rb --n 5 --h P4 --f P4
  rtw construct book:n=12,t=2,r=2 > book.json
  rtw verify book.json --f B2
  rtw table ex --h K2 --f K3 --n 3..7
  rtw check --suite decomposition --seed 7

Exit codes: 0 ok, 1 usage error, 2 budget exhausted, 3 rainbow found,
4 property suite failed.
        """,
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("compute", parents=[common, budget], help="Run one exact solver")
    p.add_argument("kind", choices=KINDS)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--h", default=None, help="Pattern: catalog name or graph6")
    p.add_argument("--f", required=True, help="Forbidden/target: catalog name or graph6")
    p.set_defaults(handler=cmd_compute)

    p = sub.add_parser("construct", parents=[common], help="Emit a construction")
    p.add_argument("spec", help='e.g. "p4:n=10", "oddcycle:n=32,k=1", "blowup:f=C4,host=Dhc"')
    p.add_argument("--output", default=None, help="Write the document here instead of stdout")
    p.set_defaults(handler=cmd_construct)

    p = sub.add_parser(
        "verify", parents=[common], help="Check a family for rainbow F, or a red-blue graph for F"
    )
    p.add_argument("document", help="Family or red-blue graph JSON path, or - for stdin")
    p.add_argument("--f", required=True)
    p.add_argument("--t", type=int, default=None, help="Members per edge (t-wise variant)")
    p.add_argument("--h", default=None, help="Red pattern for the coloured count")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("table", parents=[common, budget], help="Sweep a solver over n")
    p.add_argument("kind", choices=KINDS)
    p.add_argument("--h", default=None)
    p.add_argument("--f", required=True)
    p.add_argument("--n", required=True, help="Inclusive range, e.g. 4..6")
    p.add_argument("--format", choices=["csv", "json"], default=None)
    p.add_argument("--certificates-dir", default=None,
                   help="Write each certificate as <digest>.json here")
    p.add_argument("--meta", default=None, help="Write run metadata JSON here")
    p.set_defaults(handler=cmd_table)

    p = sub.add_parser("check", parents=[common], help="Run a property suite")
    p.add_argument("--suite", required=True, choices=checks.SUITES)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--trials", type=int, default=None)
    p.set_defaults(handler=cmd_check)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """CLI entry point; returns the process exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        config = utils.load_config(args.config)
    except FileNotFoundError as exc:
        sys.stderr.write(f"rtw: {exc}\n")
        return EXIT_USAGE
    output = config.get("output") or {}
    utils.setup_logging(
        log_level=args.log_level or output.get("log_level", "WARNING"),
        log_format=output.get("log_format", utils.LOG_FORMAT),
    )

    try:
        return args.handler(args, config)
    except UsageError as exc:
        sys.stderr.write(f"rtw {args.command}: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
