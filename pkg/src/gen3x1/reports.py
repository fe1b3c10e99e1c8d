"""Rendering of node tables, cycle listings, and oracle reports.

All rounding is half-up at the printed decimal count, done in exact decimal
arithmetic on the binary values (never through repr or float). Markdown gets
thousands separators; CSV and JSON stay separator-free so they parse.
"""
from __future__ import annotations

import csv
import io
import json
from decimal import ROUND_HALF_UP, Decimal, localcontext
from typing import Optional, Sequence

import mpmath
from mpmath import mp

from .cycles import CycleSearchResult
from .mappings import SymbolSequence, Trajectory
from .nodes import FactorSystem, GapAnalysis, NodeRecord, NodesRun
from .verify import DistributionReport, PeriodicityReport

FORMATS = ("md", "csv", "json")
NODE_CSV_COLUMNS = ("main", "secondary", "side", "delta", "k1", "k2", "k", "lnC", "lnR", "lnP", "rs")


def to_exact_decimal(x) -> Decimal:
    """The exact decimal expansion of an int or binary float (always finite)."""
    if isinstance(x, int):
        return Decimal(x)
    if isinstance(x, Decimal):
        return x
    # read the mantissa/exponent pair directly: reconstructing via mpf(x) would
    # re-round the value to the ambient working precision
    sign, man, exp, _ = x._mpf_ if hasattr(x, "_mpf_") else mpmath.mpf(x)._mpf_
    man, exp = int(man), int(exp)  # the mantissa is a gmpy2.mpz under the gmp backend
    if man == 0:
        return Decimal(0)
    if sign:
        man = -man  # fold the sign in: Decimal arithmetic would round at context precision
    if exp >= 0:
        return Decimal(man << exp)
    # man * 2^exp = (man * 5^-exp) * 10^exp; string form bypasses context rounding
    return Decimal(f"{man * 5 ** -exp}E{exp}")


def format_fixed(x, places: int, sep: bool = False, strip: bool = False) -> str:
    """Half-up fixed-point rendering; `strip` drops trailing fraction zeros."""
    d = to_exact_decimal(x)
    with localcontext() as ctx:
        ctx.prec = max(80, places + 30)
        q = d.quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_UP)
    if q == 0:
        q = abs(q)  # never print -0.00
    s = f"{q:,f}" if sep else f"{q:f}"
    if strip and "." in s:
        s = s.rstrip("0").rstrip(".")
    return s


def format_sig(x, digits: int) -> str:
    """Half-up rendering at `digits` significant figures, trailing zeros dropped."""
    d = to_exact_decimal(x)
    if d == 0:
        return "0"
    with localcontext() as ctx:
        ctx.prec = digits
        ctx.rounding = ROUND_HALF_UP
        r = +d
    s = format(r, "f")
    if "." in s:
        s = s.rstrip("0").rstrip(".")
    return s


def _format_value(delta, side: str, places: int) -> str:
    # reconstruct the product value 1 -/+ delta exactly before rounding
    d = to_exact_decimal(delta)
    with localcontext() as ctx:
        ctx.prec = 200
        v = Decimal(1) - d if side == "PP" else Decimal(1) + d
    return format_fixed(v, places)


def _md_table(header: Sequence[str], aligns: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    marks = {"l": ":---", "r": "---:", "c": ":---:"}
    lines = ["| " + " | ".join(header) + " |",
             "| " + " | ".join(marks[a] for a in aligns) + " |"]
    for row in rows:
        lines.append("| " + " | ".join(row) + " |")
    return "\n".join(lines)


def _csv_table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue().rstrip("\n")


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2)


def _check_format(fmt: str) -> None:
    if fmt not in FORMATS:
        raise ValueError(f"unknown output format {fmt!r}; expected one of {FORMATS}")


# ---------------------------------------------------------------------------
# node tables

class NodeLayout:
    """Column set and printed rounding for one node-table style."""

    def __init__(self, name, value_places, delta_places, ln_c, ln_r, ln_p, rs_style, rs_base):
        self.name = name
        self.value_places = value_places
        self.delta_places = delta_places
        self.ln_c = ln_c
        self.ln_r = ln_r
        self.ln_p = ln_p
        self.rs_style = rs_style  # ("fixed", places) or ("sig", digits)
        self.rs_base = rs_base  # None = the run's own base


NODE_LAYOUTS = {
    # generic listing: every column, base of the system itself for r/s
    "default": NodeLayout("default", 14, 28, 2, 2, 2, ("fixed", 3), None),
    # the published layouts print r/s as base-3 exponents
    "table2": NodeLayout("table2", 14, 28, 2, 2, 2, ("fixed", 3), 3),
    "table3": NodeLayout("table3", 14, 28, 4, 3, 1, ("sig", 10), 3),
    "table5": NodeLayout("table5", 14, 28, 2, 2, 2, ("fixed", 3), 3),
}


def _format_rs(record: NodeRecord, layout: NodeLayout, factors: FactorSystem) -> str:
    if record.rs is None:
        return ""
    rs = record.rs
    if layout.rs_base is not None and layout.rs_base != factors.base:
        with mp.workdps(40):
            rs = rs * mp.log(factors.base) / mp.log(layout.rs_base)
    kind, amount = layout.rs_style
    if kind == "sig":
        return format_sig(rs, amount)
    s = format_fixed(rs, amount)
    # an exactly integral exponent (delta a pure power of the base) prints bare
    if s.endswith("." + "0" * amount):
        s = s[: -(amount + 1)]
    return s


def _node_cells(record: NodeRecord, layout: NodeLayout, factors: FactorSystem, sep: bool):
    blank = record.ln_C is None
    return {
        "main": f"{record.main:,}" if sep else str(record.main),
        "secondary": str(record.secondary),
        "side": record.side,
        "value": _format_value(record.delta, record.side, layout.value_places),
        "delta": format_fixed(record.delta, layout.delta_places),
        "k1": f"{record.k1:,}" if sep else str(record.k1),
        "k2": f"{record.k2:,}" if sep else str(record.k2),
        "k": f"{record.k:,}" if sep else str(record.k),
        "lnC": "" if blank else format_fixed(record.ln_C, layout.ln_c, sep=sep),
        "lnR": "" if blank else format_fixed(record.ln_R, layout.ln_r, sep=sep),
        "lnP": "" if blank else format_fixed(record.ln_P, layout.ln_p, sep=sep),
        "rs": _format_rs(record, layout, factors),
    }


def _node_notes(run: NodesRun, layout: NodeLayout) -> list[str]:
    notes = []
    if layout.rs_base is not None and layout.rs_base != run.factors.base:
        notes.append(
            f"note: the r/s column is printed in base {layout.rs_base} "
            f"(this layout's convention); the run's native base is {run.factors.base}."
        )
    if any(r.main == 26 for r in run.records):
        notes.append(
            "note: k is derived as k1 + k2 throughout; the reference table prints "
            "k = 6,612,414,764,360 for node 26/1, which contradicts its own ln P column."
        )
    return notes


def render_nodes(run: NodesRun, layout: str = "default", fmt: str = "md") -> str:
    """Render a node run in one of the table layouts as md, csv, or json."""
    _check_format(fmt)
    try:
        lay = NODE_LAYOUTS[layout]
    except KeyError:
        raise ValueError(f"unknown node layout {layout!r}; expected one of {tuple(NODE_LAYOUTS)}")

    if fmt == "csv":
        rows = []
        for rec in run.records:
            cells = _node_cells(rec, lay, run.factors, sep=False)
            rows.append([cells[c] for c in NODE_CSV_COLUMNS])
        return _csv_table(NODE_CSV_COLUMNS, rows)

    if fmt == "json":
        records = []
        for rec in run.records:
            records.append({
                "main": rec.main,
                "secondary": rec.secondary,
                "side": rec.side,
                "delta": str(to_exact_decimal(rec.delta)),
                "k1": rec.k1,
                "k2": rec.k2,
                "k": rec.k,
                "lnC": None if rec.ln_C is None else str(to_exact_decimal(rec.ln_C)),
                "lnR": None if rec.ln_R is None else str(to_exact_decimal(rec.ln_R)),
                "lnP": None if rec.ln_P is None else str(to_exact_decimal(rec.ln_P)),
                "rs": None if rec.rs is None else str(to_exact_decimal(rec.rs)),
            })
        return _json_text({
            "kind": "nodes",
            "layout": lay.name,
            "system": run.factors.name or "custom",
            "base": run.factors.base,
            "r_mode": run.r_mode,
            "precision": run.digits_used,
            "records": records,
        })

    # markdown
    if lay.name in ("table2", "table5"):
        header = ["main", "secondary", "PP", "PG", "k1", "k2", "k", "ln(C)", "ln(R)", "ln(P)", "r or s"]
        value_key = "value"
    elif lay.name == "table3":
        header = ["main", "secondary", "dPP", "dPG", "k1", "k2", "k", "ln(C)", "ln(R)", "ln(P)", "r or s"]
        value_key = "delta"
    else:
        header = ["main", "secondary", "side", "value", "delta", "k1", "k2", "k", "ln(C)", "ln(R)", "ln(P)", "r or s"]
        value_key = None
    rows = []
    for rec in run.records:
        cells = _node_cells(rec, lay, run.factors, sep=True)
        if value_key is None:
            rows.append([cells["main"], cells["secondary"], cells["side"], cells["value"],
                         cells["delta"], cells["k1"], cells["k2"], cells["k"],
                         cells["lnC"], cells["lnR"], cells["lnP"], cells["rs"]])
        else:
            in_pp = cells[value_key] if rec.side == "PP" else ""
            in_pg = cells[value_key] if rec.side == "PG" else ""
            rows.append([cells["main"], cells["secondary"], in_pp, in_pg,
                         cells["k1"], cells["k2"], cells["k"],
                         cells["lnC"], cells["lnR"], cells["lnP"], cells["rs"]])
    aligns = ["r", "r"] + (["l"] if value_key is None else []) + ["l", "l"] + ["r"] * (len(header) - (5 if value_key is None else 4))
    text = _md_table(header, aligns, rows)
    notes = _node_notes(run, lay)
    if notes:
        text += "\n\n" + "\n".join(notes)
    return text


def node_records_from_json(text: str):
    """Parse render_nodes(..., fmt="json") back into (metadata, NodeRecord list).

    The stored decimal expansions are exact, so records round-trip unchanged
    when re-read at the recorded precision.
    """
    doc = json.loads(text)
    if doc.get("kind") != "nodes":
        raise ValueError("not a node report document")
    digits = int(doc["precision"])
    records = []
    with mp.workdps(digits):
        for rec in doc["records"]:
            records.append(NodeRecord(
                main=rec["main"],
                secondary=rec["secondary"],
                side=rec["side"],
                delta=mp.mpf(rec["delta"]),
                k1=rec["k1"],
                k2=rec["k2"],
                k=rec["k"],
                ln_C=None if rec["lnC"] is None else mp.mpf(rec["lnC"]),
                ln_R=None if rec["lnR"] is None else mp.mpf(rec["lnR"]),
                ln_P=None if rec["lnP"] is None else mp.mpf(rec["lnP"]),
                rs=None if rec["rs"] is None else mp.mpf(rec["rs"]),
            ))
    meta = {key: doc[key] for key in ("layout", "system", "base", "r_mode", "precision")}
    return meta, records


# ---------------------------------------------------------------------------
# cycle reports

def _cycle_rows(result: CycleSearchResult):
    rows = []
    for rec in result.cycles:
        cert = rec.certificate
        rows.append({
            "members": list(rec.members),
            "k": rec.k,
            "k1": rec.k1,
            "k2": rec.k2,
            "m": cert.m if cert else min(rec.members, key=abs),
            "C": None if cert is None else format_sig(cert.C, 10),
            "holds": None if cert is None else cert.holds,
        })
    return rows


def render_cycles(result: CycleSearchResult, fmt: str = "md") -> str:
    """Cycle listing with certificates plus the undetermined starts."""
    _check_format(fmt)
    rows = _cycle_rows(result)
    if fmt == "json":
        return _json_text({
            "kind": "cycles",
            "budget": {"max_steps": result.budget.max_steps,
                       "max_magnitude": result.budget.max_magnitude},
            "cycles": rows,
            "undetermined": list(result.undetermined),
        })
    table_rows = [[
        "(" + ", ".join(str(v) for v in row["members"]) + ")" if fmt == "md"
        else ";".join(str(v) for v in row["members"]),
        str(row["k"]), str(row["k1"]), str(row["k2"]), str(row["m"]),
        "" if row["C"] is None else row["C"],
        "" if row["holds"] is None else ("true" if row["holds"] else "false"),
    ] for row in rows]
    header = ["members", "k", "k1", "k2", "m", "C", "holds"]
    if fmt == "csv":
        return _csv_table(header, table_rows)
    text = _md_table(header, ["l", "r", "r", "r", "r", "r", "l"], table_rows)
    if result.undetermined:
        text += "\n\nundetermined starts: " + ", ".join(str(v) for v in result.undetermined)
    else:
        text += "\n\nundetermined starts: none"
    return text


# ---------------------------------------------------------------------------
# oracle reports

def render_periodicity(report: PeriodicityReport, fmt: str = "md") -> str:
    _check_format(fmt)
    if fmt == "json":
        return _json_text({
            "kind": "periodicity",
            "d": report.d, "k": report.k, "window_start": report.window_start,
            "distinct_count": report.distinct_count, "expected": report.expected,
            "periodic_samples_checked": report.periodic_samples_checked,
            "all_distinct": report.all_distinct, "all_periodic": report.all_periodic,
        })
    header = ["d", "k", "window_start", "distinct", "expected", "samples", "all_distinct", "all_periodic"]
    row = [str(report.d), str(report.k), str(report.window_start),
           str(report.distinct_count), str(report.expected),
           str(report.periodic_samples_checked),
           "true" if report.all_distinct else "false",
           "true" if report.all_periodic else "false"]
    if fmt == "csv":
        return _csv_table(header, [row])
    return _md_table(header, ["r"] * 6 + ["l", "l"], [row])


def render_distribution(report: DistributionReport, fmt: str = "md") -> str:
    _check_format(fmt)
    expected = dict(report.expected)
    classes = [{"k1": k1, "k2": k2, "observed": n, "expected": expected[(k1, k2)]}
               for (k1, k2), n in report.observed]
    if fmt == "json":
        return _json_text({
            "kind": "distribution",
            "d": report.d, "k": report.k, "window_start": report.window_start,
            "classes": classes,
            "total": sum(c["observed"] for c in classes),
            "match": report.match,
        })
    rows = [[str(c["k1"]), str(c["k2"]), str(c["observed"]), str(c["expected"]),
             "true" if c["observed"] == c["expected"] else "false"] for c in classes]
    header = ["k1", "k2", "observed", "expected", "ok"]
    if fmt == "csv":
        return _csv_table(header, rows)
    text = _md_table(header, ["r", "r", "r", "r", "l"], rows)
    total = sum(c["observed"] for c in classes)
    text += f"\n\nwindow total: {total:,}"
    text += "\nmatch: " + ("true" if report.match else "false")
    return text


# ---------------------------------------------------------------------------
# trajectory listings (two-column layout: trajectory, sequence)

def _select_rows(count: int, head: Optional[int], tail: Optional[int]):
    """Index ranges for head/tail truncation; None means everything."""
    if head is None and tail is None:
        return list(range(count)), False
    head_n = head or 0
    tail_n = tail or 0
    if head_n + tail_n >= count:
        return list(range(count)), False
    picked = list(range(head_n)) + list(range(count - tail_n, count))
    return picked, True


def render_trajectories(
    rows: Sequence[tuple[Trajectory, SymbolSequence]],
    fmt: str = "md",
    head: Optional[int] = None,
    tail: Optional[int] = None,
) -> str:
    """Class listing: the first k values of each member beside its symbol word."""
    _check_format(fmt)
    picked, truncated = _select_rows(len(rows), head, tail)
    cells = []
    for i in picked:
        traj, seq = rows[i]
        k = seq.k
        cells.append((
            "(" + ",".join(str(v) for v in traj.values[:k]) + ")",
            "(" + ",".join(str(t) for t in seq.entries) + ")",
        ))
    if fmt == "json":
        return _json_text({
            "kind": "trajectories",
            "rows": [{"start": rows[i][0].start,
                      "trajectory": list(rows[i][0].values[:rows[i][1].k]),
                      "sequence": list(rows[i][1].entries)} for i in picked],
            "total": len(rows),
        })
    header = ["trajectory", "sequence"]
    if fmt == "csv":
        return _csv_table(header, [list(c) for c in cells])
    md_rows = [list(c) for c in cells]
    if truncated:
        split = len([i for i in picked if i < (head or 0)])
        md_rows.insert(split, ["...", "..."])
    text = _md_table(header, ["l", "l"], md_rows)
    return text + f"\n\nrows: {len(rows):,}"


# ---------------------------------------------------------------------------
# gap report

def render_gap(node: tuple[int, int], ln_C, ln_R, analysis: GapAnalysis, fmt: str = "md") -> str:
    """Forced-member counts between the C and R growth lines at one node."""
    _check_format(fmt)
    label = f"{node[0]}/{node[1]}"
    if fmt == "json":
        return _json_text({
            "kind": "gap",
            "node": label,
            "lnC": format_fixed(ln_C, 6),
            "lnR": format_fixed(ln_R, 6),
            "gap": format_fixed(analysis.gap, 6),
            "n_k1": analysis.n_k1,
            "n_k2": analysis.n_k2,
            "total": analysis.total,
        })
    header = ["node", "ln(C)", "ln(R)", "gap", "n_k1", "n_k2", "total"]
    if fmt == "csv":
        row = [label, format_fixed(ln_C, 4), format_fixed(ln_R, 4), format_fixed(analysis.gap, 4),
               str(analysis.n_k1), str(analysis.n_k2), str(analysis.total)]
        return _csv_table(header, [row])
    row = [label, format_fixed(ln_C, 4, sep=True), format_fixed(ln_R, 4, sep=True),
           format_fixed(analysis.gap, 4, sep=True),
           f"{analysis.n_k1:,}", f"{analysis.n_k2:,}", f"{analysis.total:,}"]
    return _md_table(header, ["l", "r", "r", "r", "r", "r", "r"], [row])
