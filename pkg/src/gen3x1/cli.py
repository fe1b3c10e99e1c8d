"""Command-line front end: node walks, cycle searches, oracles, and reports.

Subcommands: nodes, cycles, verify (periodicity|distribution), trajectories,
gap. Shared flags pick the mapping (--problem preset, carnielli-t:D /
carnielli-l:D, or --mapping FILE), precision, repartition mode, and output
format. Exit codes: 0 ok, 2 configuration error, 3 precision cap reached.
"""
from __future__ import annotations

import argparse
import re
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from .combinatorics import R_MODES
from .cycles import CycleError, SearchBudget, find_cycles
from .mappings import PRESETS, MappingError, MappingSpec, carnielli_l, carnielli_t, mapping_from_json
from .nodes import (
    PrecisionCapError,
    PrecisionConfig,
    UnsupportedMappingError,
    factor_system_for,
    gap_analysis,
    run_nodes,
)
from .reports import (
    FORMATS,
    render_cycles,
    render_distribution,
    render_gap,
    render_nodes,
    render_periodicity,
    render_trajectories,
)
from .verify import ENUMERATION_LIMIT, enumerate_class, verify_distribution, verify_periodicity

_RANGE_RE = re.compile(r"^(-?\d+)\.\.(-?\d+)$")
_NODE_RE = re.compile(r"^(\d+)\.(\d+)$")
_CARNIELLI_RE = re.compile(r"^carnielli-([tl]):(\d+)$")


def _shared_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--problem", metavar="NAME",
                        help="preset: collatz, 3x1, carnielli-t:D, carnielli-l:D (default collatz)")
    common.add_argument("--mapping", metavar="FILE",
                        help="custom mapping JSON {d, branches:[{residue,multiplier,offset}]}")
    common.add_argument("--precision", type=int, default=50, metavar="DIGITS",
                        help="working decimal digits (default 50)")
    common.add_argument("--r-mode", dest="r_mode", choices=R_MODES,
                        help="repartition mode (default: per-problem table matching)")
    common.add_argument("--format", dest="fmt", choices=FORMATS, default="md",
                        help="output format (default md)")
    common.add_argument("--out", metavar="FILE", help="write the report to FILE instead of stdout")
    common.add_argument("--par", metavar="P/Q",
                        help="condition constant override as a fraction, e.g. 7/24")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _shared_flags()
    parser = argparse.ArgumentParser(prog="gen3x1",
                                     description="Cycle-existence analysis for generalized 3x+1 mappings.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_nodes = sub.add_parser("nodes", parents=[common],
                             help="walk the PP*PG record products and report node metrics")
    p_nodes.add_argument("--max-node", type=int, default=14, metavar="N",
                         help="stop after main node N (default 14)")
    p_nodes.add_argument("--max-k", type=int, default=10**7, metavar="K",
                         help="stop once k reaches K (default 1e7)")
    group = p_nodes.add_mutually_exclusive_group()
    group.add_argument("--table2", action="store_true", help="base-3 published layout (values, 2-decimal logs)")
    group.add_argument("--table3", action="store_true", help="base-3 published layout (28-decimal deltas)")
    group.add_argument("--table5", action="store_true", help="base-2 published layout (values, 2-decimal logs)")

    p_cycles = sub.add_parser("cycles", parents=[common],
                              help="search starts for cycles and certify the least-term bound")
    p_cycles.add_argument("--range", dest="start_range", required=True, metavar="A..B",
                          help="inclusive start range, e.g. -200..200")
    p_cycles.add_argument("--max-steps", type=int, default=10_000, metavar="N",
                          help="map applications per start (default 10000)")
    p_cycles.add_argument("--max-magnitude", type=int, default=10**18, metavar="M",
                          help="give up past |value| > M (default 1e18)")

    p_verify = sub.add_parser("verify", parents=[common],
                              help="run the exhaustive window oracles")
    p_verify.add_argument("check", choices=("periodicity", "distribution"))
    p_verify.add_argument("--k", type=int, required=True, help="sequence length")
    p_verify.add_argument("--window-start", type=int, default=1, metavar="N",
                          help="first start of the d^k window (default 1)")
    p_verify.add_argument("--samples", type=int, default=32, metavar="N",
                          help="periodicity spot checks (default 32)")
    p_verify.add_argument("--seed", type=int, default=0, help="RNG seed for the spot checks")
    p_verify.add_argument("--limit", type=int, default=ENUMERATION_LIMIT, metavar="N",
                          help="enumeration size cap (default 1e7)")

    p_traj = sub.add_parser("trajectories", parents=[common],
                            help="list one (k1, k2) class over a d^k window")
    p_traj.add_argument("--k", type=int, required=True)
    p_traj.add_argument("--k1", type=int, required=True)
    p_traj.add_argument("--k2", type=int, required=True)
    p_traj.add_argument("--window-start", type=int, default=1, metavar="N")
    p_traj.add_argument("--head", type=int, metavar="N", help="only the first N rows")
    p_traj.add_argument("--tail", type=int, metavar="N", help="only the last N rows")
    p_traj.add_argument("--limit", type=int, default=ENUMERATION_LIMIT, metavar="N")

    p_gap = sub.add_parser("gap", parents=[common],
                           help="forced members between the C and R lines at one node")
    p_gap.add_argument("--node", required=True, metavar="MAIN.SECONDARY",
                       help="node reference, e.g. 9.23")
    p_gap.add_argument("--max-k", type=int, default=10**7, metavar="K",
                       help="node walk budget while resolving the reference")
    return parser


def _repack_option_values(argv: list[str]) -> list[str]:
    """Join values that start with '-' onto their flag so argparse accepts them."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in ("--range",) and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def _resolve_spec(args) -> MappingSpec:
    if args.mapping and args.problem:
        raise ValueError("give either --problem or --mapping, not both")
    if args.mapping:
        return mapping_from_json(Path(args.mapping).read_text())
    name = args.problem or "collatz"
    if name in PRESETS:
        return PRESETS[name]
    match = _CARNIELLI_RE.match(name)
    if match:
        build = carnielli_t if match.group(1) == "t" else carnielli_l
        return build(int(match.group(2)))
    raise ValueError(
        f"unknown problem {name!r}; expected collatz, 3x1, carnielli-t:D, or carnielli-l:D"
    )


def _parse_par(args) -> Optional[Fraction]:
    if args.par is None:
        return None
    try:
        value = Fraction(args.par)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"cannot parse --par {args.par!r} as a fraction: {exc}")
    if value <= 0:
        raise ValueError(f"--par must be positive, got {value}")
    return value


def _parse_start_range(text: str) -> tuple[int, int]:
    match = _RANGE_RE.match(text)
    if not match:
        raise ValueError(f"cannot parse range {text!r}; expected A..B")
    lo, hi = int(match.group(1)), int(match.group(2))
    if lo > hi:
        raise ValueError(f"empty range {text!r}: {lo} > {hi}")
    return lo, hi


def _parse_node(text: str) -> tuple[int, int]:
    match = _NODE_RE.match(text)
    if not match:
        raise ValueError(f"cannot parse node reference {text!r}; expected MAIN.SECONDARY")
    return int(match.group(1)), int(match.group(2))


def _node_layout(args) -> str:
    if args.table2:
        return "table2"
    if args.table3:
        return "table3"
    if args.table5:
        return "table5"
    return "default"


def _cmd_nodes(args) -> str:
    spec = _resolve_spec(args)
    factors = factor_system_for(spec, par=_parse_par(args))
    run = run_nodes(
        factors,
        precision=PrecisionConfig(decimal_digits=args.precision),
        r_mode=args.r_mode,
        max_main=args.max_node,
        max_k=args.max_k,
    )
    return render_nodes(run, layout=_node_layout(args), fmt=args.fmt)


def _cmd_cycles(args) -> str:
    spec = _resolve_spec(args)
    budget = SearchBudget(max_steps=args.max_steps, max_magnitude=args.max_magnitude)
    result = find_cycles(
        spec,
        _parse_start_range(args.start_range),
        budget=budget,
        constant=_parse_par(args),
        dps=args.precision,
    )
    return render_cycles(result, fmt=args.fmt)


def _cmd_verify(args) -> str:
    spec = _resolve_spec(args)
    if args.check == "periodicity":
        report = verify_periodicity(
            spec, args.k,
            window_start=args.window_start,
            samples=args.samples,
            limit=args.limit,
            seed=args.seed,
        )
        return render_periodicity(report, fmt=args.fmt)
    report = verify_distribution(spec, args.k, window_start=args.window_start, limit=args.limit)
    return render_distribution(report, fmt=args.fmt)


def _cmd_trajectories(args) -> str:
    spec = _resolve_spec(args)
    rows = enumerate_class(
        spec, args.k, args.k1, args.k2,
        window_start=args.window_start,
        limit=args.limit,
    )
    return render_trajectories(rows, fmt=args.fmt, head=args.head, tail=args.tail)


def _cmd_gap(args) -> str:
    spec = _resolve_spec(args)
    factors = factor_system_for(spec, par=_parse_par(args))
    main_idx, secondary_idx = _parse_node(args.node)
    run = run_nodes(
        factors,
        precision=PrecisionConfig(decimal_digits=args.precision),
        r_mode=args.r_mode,
        max_main=main_idx,
        max_k=args.max_k,
    )
    record = next(
        (r for r in run.records if r.main == main_idx and r.secondary == secondary_idx and not r.is_seed),
        None,
    )
    if record is None or record.ln_C is None:
        raise ValueError(f"node {args.node} was not reached by the walk (budget or seed row)")
    analysis = gap_analysis(record.ln_C, record.ln_R, factors, dps=args.precision)
    return render_gap((main_idx, secondary_idx), record.ln_C, record.ln_R, analysis, fmt=args.fmt)


_COMMANDS = {
    "nodes": _cmd_nodes,
    "cycles": _cmd_cycles,
    "verify": _cmd_verify,
    "trajectories": _cmd_trajectories,
    "gap": _cmd_gap,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_repack_option_values(argv))
    except SystemExit as exc:  # argparse prints its own message; normalize the code
        return 0 if exc.code in (0, None) else 2
    try:
        text = _COMMANDS[args.command](args)
    except PrecisionCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (MappingError, CycleError, UnsupportedMappingError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
