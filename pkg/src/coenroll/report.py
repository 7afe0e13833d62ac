"""Rendering results as delimited tables or JSON documents.

Both renderings of a result go through :func:`fmt`, so a table and its
structured twin carry the same digits.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from pathlib import Path

import numpy as np

FORMATS = ("table", "structured")


def fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return "nan" if math.isnan(v) else repr(v)
    return str(v)


def _json_value(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return None if math.isnan(v) or math.isinf(v) else v
    if isinstance(v, dict):
        return {k: _json_value(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_value(x) for x in v]
    return v


def dumps(doc) -> str:
    return json.dumps(_json_value(doc), indent=2) + "\n"


def tsv(header, rows) -> str:
    lines = ["\t".join(header)]
    lines.extend("\t".join(fmt(c) for c in row) for row in rows)
    return "\n".join(lines) + "\n"


def csv_text(header, rows) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(fmt(c) for c in row) for row in rows)
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# per-result renderers


def render_metrics(report, fmt_name: str, scope: str = "all") -> str:
    if fmt_name == "structured":
        return dumps({"scope": scope, "metrics": report.as_dict()})
    return tsv(["metric", scope], [(label, value) for label, _, value in report.rows()])


def render_component_reports(reports, fmt_name: str, scope: str = "all") -> str:
    if fmt_name == "structured":
        return dumps({"scope": scope, "components": [r.as_dict() for r in reports]})
    labels = [label for label, _, _ in reports[0].rows()] if reports else []
    header = ["metric"] + [f"component_{i + 1}" for i in range(len(reports))]
    rows = [[label] + [r.rows()[j][2] for r in reports] for j, label in enumerate(labels)]
    return tsv(header, rows)


def render_curve(curve, fmt_name: str, scope: str = "all") -> str:
    if fmt_name == "structured":
        return dumps({"scope": scope, "k": list(curve.k), "rho": list(curve.rho), "limit": curve.limit})
    return csv_text(["k", "rho"], zip(curve.k, curve.rho))


def render_centrality(result, fmt_name: str) -> str:
    records = list(result.records())
    if fmt_name == "structured":
        return dumps(
            {
                "mode": result.mode.value,
                "records": [
                    {"student_id": s, "b_raw": raw, "b_norm": norm, "rank": rank} for s, raw, norm, rank in records
                ],
            }
        )
    return csv_text(["student_id", "b_raw", "b_norm", "rank"], records)


def render_tally(tally, fmt_name: str, pivotal=None) -> str:
    if fmt_name == "structured":
        doc = {"records": [{"course_code": c, "count": n} for c, n in tally]}
        if pivotal is not None:
            doc = {"mode": pivotal.mode.value, "k": pivotal.k, "pivotal_students": list(pivotal.student_ids), **doc}
        return dumps(doc)
    return csv_text(["course_code", "count"], tally)


def render_plan(plan, fmt_name: str) -> str:
    doc = plan.as_dict()
    if fmt_name == "structured":
        return dumps(doc)
    rows = []
    for key, value in doc.items():
        if isinstance(value, dict):
            value = ";".join(f"{k}={fmt(v)}" for k, v in value.items())
        elif isinstance(value, list):
            value = ";".join(fmt(v) for v in value)
        rows.append((key, value))
    return tsv(["field", "value"], rows)


def render_comparison(cmp, fmt_name: str) -> str:
    rows = cmp.rows()
    if fmt_name == "structured":
        return dumps(
            {
                "pairs_scope": cmp.pairs_scope,
                "sections_before": cmp.sections_before,
                "sections_after": cmp.sections_after,
                "rows": {key: {"before": b, "after": a, "delta": dl} for _, key, b, a, dl in rows},
            }
        )
    body = [(label, b, a, dl) for label, _, b, a, dl in rows]
    body.append(("Sections", cmp.sections_before, cmp.sections_after, cmp.sections_after - cmp.sections_before))
    body.append(("Pairs scope", cmp.pairs_scope, cmp.pairs_scope, ""))
    return tsv(["metric", "before", "after", "delta"], body)


def render_layout(layout) -> str:
    return csv_text(["node_id", "x", "y", "school", "b_norm"], layout.records())


# --------------------------------------------------------------------------
# output


def atomic_write(path: str | Path, text: str) -> None:
    """Write via a temporary file in the same directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.chmod(tmp, 0o644)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise
