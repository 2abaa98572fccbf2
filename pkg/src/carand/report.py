"""Render battery reports as a text matrix, CSV rows or JSON."""
from __future__ import annotations

import csv
import io
import json

from .battery import BatteryReport, Reproduction
from .sts import TEST_IDS, TEST_NAMES

FORMATS = ("text", "csv", "json")
CSV_HEADER = ("test", "rule", "proportion", "uniformity_p", "verdict")
INAPPLICABLE = "—"


def _cell(verdict) -> str:
    return INAPPLICABLE if verdict is None else verdict


def render_matrix(matrix: dict[str, dict[str, str | None]], title: str | None = None) -> str:
    """Tests as rows, rules as columns, one A/R/dash cell each."""
    labels = list(matrix)
    name_w = max(len(n) for n in TEST_NAMES.values())
    col_w = [max(len(f"Rule {lab}"), 3) for lab in labels]
    lines = []
    if title:
        lines.append(title)
    header = "Test".ljust(name_w) + "".join("  " + f"Rule {lab}".center(w)
                                            for lab, w in zip(labels, col_w))
    lines.append(header.rstrip())
    lines.append("-" * len(header))
    if labels:
        for t in TEST_IDS:
            row = TEST_NAMES[t].ljust(name_w)
            row += "".join("  " + _cell(matrix[lab].get(t)).center(w) for lab, w in zip(labels, col_w))
            lines.append(row.rstrip())
        lines.append("")
        counts = "  ".join(f"rule {lab}: {sum(v == 'A' for v in matrix[lab].values())} A"
                           for lab in labels)
        lines.append(f"Approved tests ({counts})")
    lines.append(f"A = approved, R = rejected, {INAPPLICABLE} = not applicable at this stream length")
    return "\n".join(lines) + "\n"


def _text(report: BatteryReport) -> str:
    cfg = report.config
    title = None
    if cfg:
        title = (f"{cfg.get('streams')} streams x {cfg.get('stream_length')} bits, "
                 f"alpha = {cfg.get('alpha')}, uniformity threshold = {cfg.get('uniformity_threshold')}")
    return render_matrix(report.matrix(), title)


def _fmt(x) -> str:
    return "" if x is None else f"{x:.6g}"


def _csv(report: BatteryReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in report.rules:
        for t in TEST_IDS:
            s = r.tests[t]
            w.writerow([t, r.label, _fmt(s.proportion), _fmt(s.uniformity_p), s.verdict or ""])
    return buf.getvalue()


def render_report(report: BatteryReport, fmt: str = "text") -> str:
    if fmt == "text":
        return _text(report)
    if fmt == "csv":
        return _csv(report)
    if fmt == "json":
        return json.dumps(report.to_dict(), indent=1) + "\n"
    raise ValueError(f"format must be one of {FORMATS}")


def parse_report(document: str) -> BatteryReport:
    return BatteryReport.from_dict(json.loads(document))


def render_reproduction(bundle: Reproduction, fmt: str = "text") -> str:
    """Modal matrix plus every repeat; CSV rows carry a leading repeat column."""
    if fmt == "json":
        return json.dumps(bundle.to_dict(), indent=1) + "\n"
    if fmt == "csv":
        out = ["repeat," + ",".join(CSV_HEADER)]
        for i, rep in enumerate(bundle.repeats):
            out += [f"{i},{line}" for line in _csv(rep).splitlines()[1:]]
        for lab, row in bundle.modal.items():
            out += [f"modal,{t},{lab},,,{row[t] or ''}" for t in TEST_IDS]
        return "\n".join(out) + "\n"
    if fmt != "text":
        raise ValueError(f"format must be one of {FORMATS}")
    n = len(bundle.repeats)
    parts = [render_matrix(bundle.modal, f"Modal verdicts over {n} repeat{'s' * (n > 1)}")]
    for i, (rep, seeds) in enumerate(zip(bundle.repeats, bundle.seeds)):
        seed_txt = ", ".join(f"rule {k}: {v}" for k, v in seeds.items())
        parts.append(f"Repeat {i + 1} (master seeds {seed_txt})\n" + _text(rep))
    return "\n".join(parts)


def parse_reproduction(document: str) -> Reproduction:
    return Reproduction.from_dict(json.loads(document))
