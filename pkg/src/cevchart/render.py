"""Deterministic SVG/CSV/JSON rendering of chart reports."""

from __future__ import annotations

import csv
import io
import json
from xml.sax.saxutils import escape

from cevchart.chart import ChartKind, ChartReport
from cevchart.errors import ConfigurationError

WIDTH, HEIGHT = 720, 360
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70, 20, 40, 50

_TITLES = {
    ChartKind.CEV_XBAR: ("CEV X-bar chart", "subgroup mean"),
    ChartKind.CEV_S: ("CEV S chart", "subgroup std. dev."),
}


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _svg(report: ChartReport, units: str) -> str:
    title, ylabel = _TITLES[report.chart_kind]
    values = [v for _, v in report.points]
    lo = min(values + [report.ucl])
    hi = max(values + [report.ucl])
    pad = (hi - lo) * 0.08 or 1.0
    lo, hi = lo - pad, hi + pad
    plot_w = WIDTH - MARGIN_L - MARGIN_R
    plot_h = HEIGHT - MARGIN_T - MARGIN_B
    count = len(report.points)

    def px(pos: int) -> float:
        return MARGIN_L + (plot_w * (pos + 0.5) / count if count else plot_w / 2)

    def py(v: float) -> float:
        return MARGIN_T + plot_h * (hi - v) / (hi - lo)

    signals = set(report.signals)
    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<title>{escape(title)}</title>',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.2f}" y="24" text-anchor="middle" font-family="sans-serif" '
        f'font-size="16">{escape(title)}</text>',
        f'<line class="axis" x1="{MARGIN_L}" y1="{MARGIN_T}" x2="{MARGIN_L}" '
        f'y2="{MARGIN_T + plot_h}" stroke="black"/>',
        f'<line class="axis" x1="{MARGIN_L}" y1="{MARGIN_T + plot_h}" '
        f'x2="{MARGIN_L + plot_w}" y2="{MARGIN_T + plot_h}" stroke="black"/>',
        f'<text class="xlabel" x="{MARGIN_L + plot_w / 2:.2f}" y="{HEIGHT - 12}" '
        'text-anchor="middle" font-family="sans-serif" font-size="12">subgroup</text>',
        f'<text class="ylabel" x="16" y="{MARGIN_T + plot_h / 2:.2f}" text-anchor="middle" '
        'font-family="sans-serif" font-size="12" '
        f'transform="rotate(-90 16 {MARGIN_T + plot_h / 2:.2f})">'
        f'{escape(ylabel)} ({escape(units)})</text>',
    ]
    for v in (lo + pad, hi - pad):
        out.append(
            f'<text class="tick" x="{MARGIN_L - 6}" y="{py(v) + 4:.2f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="10">{v:.4g}</text>'
        )
    y_ucl = py(report.ucl)
    out.append(
        f'<line class="ucl" x1="{MARGIN_L}" y1="{y_ucl:.2f}" x2="{MARGIN_L + plot_w}" '
        f'y2="{y_ucl:.2f}" stroke="red" stroke-dasharray="6,4"/>'
    )
    out.append(
        f'<text class="ucl-label" x="{MARGIN_L + plot_w - 4}" y="{y_ucl - 5:.2f}" '
        f'text-anchor="end" font-family="sans-serif" font-size="11" fill="red">'
        f'UCL = {report.ucl:.4f}</text>'
    )
    if count > 1:
        path = " ".join(f"{px(j):.2f},{py(v):.2f}" for j, (_, v) in enumerate(report.points))
        out.append(f'<polyline class="trace" points="{path}" fill="none" stroke="#4a6fa5"/>')
    for j, (idx, v) in enumerate(report.points):
        if idx in signals:
            out.append(
                f'<circle class="marker signal" data-subgroup="{idx}" cx="{px(j):.2f}" '
                f'cy="{py(v):.2f}" r="4.5" fill="red" stroke="black"/>'
            )
        else:
            out.append(
                f'<circle class="marker" data-subgroup="{idx}" cx="{px(j):.2f}" '
                f'cy="{py(v):.2f}" r="3" fill="#4a6fa5"/>'
            )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _rows(report: ChartReport):
    signals = set(report.signals)
    for idx, v in report.points:
        yield idx, v, report.ucl, idx in signals


def render_chart(report: ChartReport, format: str = "svg", units: str = "measurement units") -> str:
    """Render a report as ``svg``, ``csv`` or ``json`` text."""
    fmt = str(format).lower()
    if fmt == "svg":
        return _svg(report, units)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["subgroup", "statistic", "ucl", "signal"])
        for idx, v, ucl, sig in _rows(report):
            w.writerow([idx, repr(v), repr(ucl), int(sig)])
        return buf.getvalue()
    if fmt == "json":
        rows = [
            {"subgroup": idx, "statistic": v, "ucl": ucl, "signal": sig}
            for idx, v, ucl, sig in _rows(report)
        ]
        doc = {"chart_kind": report.chart_kind.value, "ucl": report.ucl, "rows": rows}
        return json.dumps(doc, indent=2) + "\n"
    raise ConfigurationError(f"unsupported chart format {format!r}")
