"""Report emission as table, csv or json."""

from __future__ import annotations

import csv
import io
import json

CSV_COLUMNS = ["r", "basis", "genus", "points", "weil_ok"]


def _basis_text(basis):
    return ", ".join(basis) if isinstance(basis, list) else str(basis)


def _table(report):
    out = []
    cmd = report.get("command", "")
    out.append(f"# {cmd} {report.get('name', '')}".rstrip())
    for key in ("curve", "divisor", "base_genus", "base_points", "delta"):
        if key in report:
            out.append(f"# {key}: {report[key]}")
    if cmd == "solve":
        for k, v in report["dims"].items():
            out.append(f"# dim {k}: {v}")
        out.append("W~ basis:")
        out.extend(f"  {e}" for e in report["wtilde"])
        out.append("solution space basis:")
        out.extend(f"  {e}" for e in report["fsol"])
    elif cmd == "lspace":
        out.append(f"# l(D) = {report['ell']}  dim_Fp = {report['dim_fp']}  dim V = {report['V_dim']}")
        out.extend(f"  {e}" for e in report["basis"])
    elif cmd == "verify":
        out.append(f"# census {report['census']} (expected {report['expected_census']}), "
                   f"boundary {sum(report['boundary'].values())}, total {report['total']}")
    elif cmd == "zeta":
        for z in report["components"]:
            out.append(f"# {z['component']}: counts {z['counts']} numerator {z['numerator']}")
    elif cmd == "search":
        out.append("# pareto: " + ", ".join(f"({p['genus']},{p['points']})"
                                            for p in report["pareto"]))
    rows = report.get("rows", [])
    if rows:
        out.append("basis | g | N | annotation")
        for row in rows:
            note = row.get("annotation", "")
            if not note and not row.get("weil_ok", True):
                note = "exceeds Weil bound"
            cells = [_basis_text(row["basis"]), str(row["genus"]), str(row["points"])]
            out.append(" | ".join(cells + [note] if note else cells))
    return "\n".join(out) + "\n"


def _csv(report):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for row in report.get("rows", []):
        w.writerow([row["r"], _basis_text(row["basis"]), row["genus"], row["points"],
                    str(bool(row["weil_ok"])).lower()])
    return buf.getvalue()


def _json(report):
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def emit(report, fmt="table"):
    if fmt == "table":
        return _table(report)
    if fmt == "csv":
        return _csv(report)
    if fmt == "json":
        return _json(report)
    raise ValueError(f"unknown format {fmt!r}")
