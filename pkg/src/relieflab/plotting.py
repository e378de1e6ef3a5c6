"""Separability plots as SVG files with plain-text data alongside.

Each plot is produced in two steps: records are reduced to a data file
(``<problem>-<mode>.dat``), and the SVG is rendered from that file's contents
alone, so an image can always be regenerated from its data file.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Iterable, Sequence
from xml.sax.saxutils import escape

from .experiment import DESIGN_ALGORITHMS, ExperimentRecord, accumulate_separability, average_by_x, separability_points

MODES = ("separability", "accumulated")
COLORS = {"relieff": "#1f77b4", "drelieff": "#d62728", "pdrelieff": "#2ca02c"}
LABELS = {"relieff": "ReliefF", "drelieff": "dReliefF", "pdrelieff": "pdReliefF"}

Curves = dict[str, list[tuple[float, float]]]


def curves_for(records: Sequence[ExperimentRecord], problem: str, mode: str) -> Curves:
    if mode not in MODES:
        raise ValueError(f"unknown plot mode {mode!r}; expected one of {MODES}")
    curves: Curves = {}
    for algorithm in DESIGN_ALGORITHMS:
        points = separability_points(records, problem, algorithm)
        if not points:
            continue
        curves[algorithm] = accumulate_separability(points) if mode == "accumulated" else average_by_x(points)
    return curves


def format_data(problem: str, mode: str, curves: Curves) -> str:
    lines = [f"# problem: {problem}", f"# mode: {mode}", "# algorithm total_attributes value"]
    for algorithm, points in curves.items():
        for x, y in points:
            lines.append(f"{algorithm} {x:g} {y!r}")
    return "\n".join(lines) + "\n"


def parse_data(text: str) -> tuple[str, str, Curves]:
    problem = mode = ""
    curves: Curves = {}
    for line in text.splitlines():
        if line.startswith("# problem:"):
            problem = line.split(":", 1)[1].strip()
        elif line.startswith("# mode:"):
            mode = line.split(":", 1)[1].strip()
        elif line.strip() and not line.startswith("#"):
            algorithm, x, y = line.split()
            curves.setdefault(algorithm, []).append((float(x), float(y)))
    return problem, mode, curves


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / count
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=raw)
    start = math.ceil(lo / step) * step
    ticks, v = [], start
    while v <= hi + step * 1e-9:
        ticks.append(round(v, 12))
        v += step
    return ticks


def render_svg(data_text: str, width: int = 640, height: int = 420) -> str:
    """SVG line chart of a data file produced by :func:`format_data`."""
    problem, mode, curves = parse_data(data_text)
    finite = [(x, y) for pts in curves.values() for x, y in pts if math.isfinite(y)]
    if not finite:
        raise ValueError("no finite points to plot")
    xs, ys = [p[0] for p in finite], [p[1] for p in finite]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(min(ys), 0.0), max(max(ys), 0.0)
    if x_hi == x_lo:
        x_lo, x_hi = x_lo - 1, x_hi + 1
    if y_hi == y_lo:
        y_lo, y_hi = y_lo - 1, y_hi + 1
    pad = 0.05 * (y_hi - y_lo)
    y_lo, y_hi = y_lo - pad, y_hi + pad

    left, right, top, bottom = 64, 130, 36, 48
    pw, ph = width - left - right, height - top - bottom

    def sx(x):
        return left + (x - x_lo) / (x_hi - x_lo) * pw

    def sy(y):
        return top + (y_hi - y) / (y_hi - y_lo) * ph

    ylabel = "accumulated separability" if mode == "accumulated" else "separability"
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<text x="{left + pw / 2:.1f}" y="20" text-anchor="middle" font-size="14">{escape(problem)}</text>',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="#333"/>',
    ]
    for t in _ticks(x_lo, x_hi):
        out.append(f'<line x1="{sx(t):.2f}" y1="{top + ph}" x2="{sx(t):.2f}" y2="{top + ph + 4}" stroke="#333"/>')
        out.append(f'<text x="{sx(t):.2f}" y="{top + ph + 16}" text-anchor="middle">{t:g}</text>')
    for t in _ticks(y_lo, y_hi):
        out.append(f'<line x1="{left - 4}" y1="{sy(t):.2f}" x2="{left}" y2="{sy(t):.2f}" stroke="#333"/>')
        out.append(f'<text x="{left - 6}" y="{sy(t) + 4:.2f}" text-anchor="end">{t:g}</text>')
    if y_lo < 0 < y_hi:
        out.append(
            f'<line x1="{left}" y1="{sy(0):.2f}" x2="{left + pw}" y2="{sy(0):.2f}" '
            'stroke="#999" stroke-dasharray="4 3"/>'
        )
    out.append(
        f'<text x="{left + pw / 2:.1f}" y="{height - 10}" text-anchor="middle">total attributes</text>'
    )
    out.append(
        f'<text transform="translate(16 {top + ph / 2:.1f}) rotate(-90)" text-anchor="middle">{ylabel}</text>'
    )
    for i, (algorithm, points) in enumerate(curves.items()):
        color = COLORS.get(algorithm, "#555")
        pts = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in points if math.isfinite(y))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        ly = top + 14 + 18 * i
        out.append(f'<line x1="{left + pw + 12}" y1="{ly}" x2="{left + pw + 36}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{left + pw + 42}" y="{ly + 4}">{escape(LABELS.get(algorithm, algorithm))}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def plot_records(
    records: Sequence[ExperimentRecord],
    out_dir: str | Path,
    mode: str = "separability",
    problems: Iterable[str] | None = None,
    width: int = 640,
    height: int = 420,
) -> list[Path]:
    """Write one ``.dat`` and one ``.svg`` per problem; returns the SVG paths.

    Raises:
        ValueError: if there are no records or no record matches the filter.
    """
    if not records:
        raise ValueError("no records to plot")
    available = sorted({r.problem for r in records})
    wanted = available if problems is None else [p for p in problems]
    missing = [p for p in wanted if p not in available]
    if missing:
        raise ValueError(f"no records for problem(s) {missing}; available: {available}")
    rendered = []
    for problem in wanted:
        text = format_data(problem, mode, curves_for(records, problem, mode))
        rendered.append((problem, text, render_svg(text, width, height)))
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for problem, text, svg in rendered:
        (out_dir / f"{problem}-{mode}.dat").write_text(text)
        svg_path = out_dir / f"{problem}-{mode}.svg"
        svg_path.write_text(svg)
        written.append(svg_path)
    return written
