"""Deterministic report serialization and projections.

JSON is the lossless format: floats are printed with 17 significant digits
(which round-trips float64 exactly), infinities as the string "inf", keys in
insertion order, so identical runs produce byte-identical files. CSV and
markdown are lossy projections of the verdict or distance tables.
"""

from __future__ import annotations

import csv
import io
import json
import math

import numpy as np

__all__ = [
    "dumps_report",
    "loads_report",
    "load_report",
    "emit_report",
]


def _float_token(x: float) -> str:
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    if math.isnan(x):
        raise ValueError("reports must not contain NaN")
    return format(x, ".17g")


def _write(obj, buf: list[str], level: int) -> None:
    pad = "  " * level
    if isinstance(obj, dict):
        if not obj:
            buf.append("{}")
            return
        buf.append("{\n")
        items = list(obj.items())
        for idx, (key, value) in enumerate(items):
            if not isinstance(key, str):
                raise TypeError(f"report keys must be strings, got {type(key).__name__}")
            buf.append("  " * (level + 1) + json.dumps(key) + ": ")
            _write(value, buf, level + 1)
            buf.append(",\n" if idx < len(items) - 1 else "\n")
        buf.append(pad + "}")
    elif isinstance(obj, (list, tuple)):
        seq = list(obj)
        if not seq:
            buf.append("[]")
            return
        buf.append("[\n")
        for idx, value in enumerate(seq):
            buf.append("  " * (level + 1))
            _write(value, buf, level + 1)
            buf.append(",\n" if idx < len(seq) - 1 else "\n")
        buf.append(pad + "]")
    elif isinstance(obj, (bool, np.bool_)):
        buf.append("true" if obj else "false")
    elif isinstance(obj, (float, np.floating)):
        buf.append(_float_token(float(obj)))
    elif isinstance(obj, (int, np.integer)):
        buf.append(str(int(obj)))
    elif isinstance(obj, str):
        buf.append(json.dumps(obj))
    elif obj is None:
        buf.append("null")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__} into a report")


def dumps_report(report) -> str:
    buf: list[str] = []
    _write(report, buf, 0)
    buf.append("\n")
    return "".join(buf)


def _revive(obj):
    if isinstance(obj, dict):
        return {k: _revive(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_revive(v) for v in obj]
    if obj == "inf":
        return math.inf
    if obj == "-inf":
        return -math.inf
    return obj


def loads_report(text: str):
    """Parse report JSON, mapping "inf"/"-inf" strings back to floats."""
    return _revive(json.loads(text))


def load_report(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return loads_report(fh.read())
    except OSError as exc:
        raise OSError(f"failed to read report from {path}: {exc}") from exc


def _cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (float, np.floating)):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return format(float(x), ".17g")
    return str(x)


def _collect_verdicts(report: dict) -> list[dict]:
    kind = report.get("kind")
    if kind == "audit":
        rows: list[dict] = []
        for scenario in report.get("scenarios", []):
            rows.extend(scenario.get("verdicts", []))
        return rows
    return list(report.get("verdicts", []))


def _verdict_csv(report: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["claim_id", "hom_dim", "bound", "measured", "margin", "verdict"])
    for v in _collect_verdicts(report):
        writer.writerow(
            [
                v["claim_id"],
                v["hom_dim"],
                _cell(v["bound_value"]),
                _cell(v["measured_value"]),
                _cell(v["margin"]),
                v["verdict"],
            ]
        )
    return buf.getvalue()


def _compare_csv(report: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["hom_dim", "bottleneck", "wasserstein_p1", "wasserstein_p2"])
    for row in report.get("distances", []):
        writer.writerow(
            [
                row["hom_dim"],
                _cell(row["bottleneck"]),
                _cell(row["wasserstein_p1"]),
                _cell(row["wasserstein_p2"]),
            ]
        )
    return buf.getvalue()


def _dim_label(hom_dim: int) -> str:
    return "max" if hom_dim == -1 else str(hom_dim)


def _verdict_markdown(report: dict) -> str:
    lines = [f"# {report.get('kind', 'report')}: {report.get('name', '')}".rstrip(": ")]
    if report.get("kind") == "montecarlo":
        lines.append("")
        lines.append(f"- trials: {report['trials']}")
        lines.append(f"- mean bottleneck distance: {_cell(report['mean_db'])}")
        lines.append(f"- standard error: {_cell(report['stderr'])}")
    lines.append("")
    lines.append("| claim_id | hom_dim | bound | measured | margin | verdict |")
    lines.append("| --- | --- | --- | --- | --- | --- |")
    for v in _collect_verdicts(report):
        lines.append(
            "| {} | {} | {} | {} | {} | {} |".format(
                v["claim_id"],
                _dim_label(v["hom_dim"]),
                _cell(v["bound_value"]),
                _cell(v["measured_value"]),
                _cell(v["margin"]),
                v["verdict"],
            )
        )
    if report.get("kind") == "audit":
        lines.append("")
        lines.append("| claim_id | pass | fail | vacuous | max_violation_margin |")
        lines.append("| --- | --- | --- | --- | --- |")
        for row in report.get("summary", []):
            lines.append(
                "| {} | {} | {} | {} | {} |".format(
                    row["claim_id"],
                    row["pass"],
                    row["fail"],
                    row["vacuous"],
                    _cell(row["max_violation_margin"]),
                )
            )
    return "\n".join(lines) + "\n"


def _compare_markdown(report: dict) -> str:
    lines = ["# diagram comparison", ""]
    lines.append("| hom_dim | bottleneck | wasserstein_p1 | wasserstein_p2 |")
    lines.append("| --- | --- | --- | --- |")
    for row in report.get("distances", []):
        lines.append(
            "| {} | {} | {} | {} |".format(
                row["hom_dim"],
                _cell(row["bottleneck"]),
                _cell(row["wasserstein_p1"]),
                _cell(row["wasserstein_p2"]),
            )
        )
    return "\n".join(lines) + "\n"


def emit_report(report: dict, fmt: str = "json", path: str | None = None) -> str:
    """Render a report and optionally write it to ``path``.

    Formats: "json" (lossless), "csv" and "markdown" (projections of the
    verdict table, or of the distance table for compare reports).
    """
    if fmt == "json":
        text = dumps_report(report)
    elif fmt == "csv":
        text = _compare_csv(report) if report.get("kind") == "compare" else _verdict_csv(report)
    elif fmt == "markdown":
        text = (
            _compare_markdown(report)
            if report.get("kind") == "compare"
            else _verdict_markdown(report)
        )
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    if path is not None:
        try:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise OSError(f"failed to write report to {path}: {exc}") from exc
    return text
