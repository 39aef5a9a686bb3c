"""Deterministic SVG charts for campaign results.

Hand-rolled rather than pulling in a plotting stack: the output must be a pure
function of the campaign contents (byte-stable across hosts), and the four
chart kinds only need polylines, bars, ticks, and a legend.
"""

from __future__ import annotations

import math

from .errors import ConfigError
from .harness import SCHEMES, CampaignMetrics

PLOT_KINDS = ("sumrate", "success", "runtime", "sensitivity")

_SCHEME_COLOR = {"proposed": "#1f77b4", "oracle": "#2ca02c", "baseline": "#d62728"}
_SLICE_DASH = {"urllc": "", "embb": "6 4"}
_W, _H = 800, 500
_ML, _MR, _MT, _MB = 82, 24, 46, 64


def _fmt(v: float) -> str:
    if v == int(v) and abs(v) < 1e7:
        return str(int(v))
    return f"{v:.6g}"


def _px(v: float) -> str:
    return f"{v:.2f}"


def _nice_ticks(lo: float, hi: float, target: int = 5) -> list[float]:
    if not hi > lo:
        pad = 1.0 if lo == 0 else abs(lo) * 0.5
        lo, hi = lo - pad, hi + pad
    raw = (hi - lo) / target
    mag = 10.0 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1.0, 2.0, 2.5, 5.0, 10.0)
                if raw <= m * mag + 1e-12 * mag)
    first = math.ceil(lo / step - 1e-9)
    last = math.floor(hi / step + 1e-9)
    return [i * step for i in range(first, last + 1)]


class _Axes:
    """Linear data-to-pixel mapping inside the fixed margins."""

    def __init__(self, xlo, xhi, ylo, yhi):
        self.xlo, self.xhi = float(xlo), float(xhi)
        self.ylo, self.yhi = float(ylo), float(yhi)

    def x(self, v: float) -> float:
        return _ML + (v - self.xlo) / (self.xhi - self.xlo) * (_W - _ML - _MR)

    def y(self, v: float) -> float:
        return _H - _MB - (v - self.ylo) / (self.yhi - self.ylo) * (_H - _MT - _MB)


def _open_svg(title: str) -> list[str]:
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}" font-family="Helvetica, Arial, sans-serif">',
        f'<rect width="{_W}" height="{_H}" fill="#ffffff"/>',
        f'<text x="{_W // 2}" y="26" text-anchor="middle" font-size="16" '
        f'fill="#202020">{title}</text>',
    ]


def _frame(parts: list[str], ax: _Axes, xticks, yticks, xlabel: str,
           ylabel: str, x_tick_labels=None) -> None:
    x0, x1 = _ML, _W - _MR
    y0, y1 = _H - _MB, _MT
    for i, t in enumerate(yticks):
        y = _px(ax.y(t))
        parts.append(f'<line x1="{x0}" y1="{y}" x2="{x1}" y2="{y}" '
                     f'stroke="#dddddd" stroke-width="1"/>')
        parts.append(f'<text x="{x0 - 8}" y="{y}" text-anchor="end" '
                     f'dominant-baseline="middle" font-size="11" '
                     f'fill="#404040">{_fmt(t)}</text>')
    labels = x_tick_labels if x_tick_labels is not None else [_fmt(t) for t in xticks]
    for t, label in zip(xticks, labels):
        x = _px(ax.x(t))
        parts.append(f'<line x1="{x}" y1="{y0}" x2="{x}" y2="{y0 + 5}" '
                     f'stroke="#404040" stroke-width="1"/>')
        parts.append(f'<text x="{x}" y="{y0 + 20}" text-anchor="middle" '
                     f'font-size="11" fill="#404040">{label}</text>')
    parts.append(f'<rect x="{x0}" y="{y1}" width="{x1 - x0}" height="{y0 - y1}" '
                 f'fill="none" stroke="#404040" stroke-width="1"/>')
    parts.append(f'<text x="{(x0 + x1) // 2}" y="{_H - 16}" text-anchor="middle" '
                 f'font-size="13" fill="#202020">{xlabel}</text>')
    parts.append(f'<text x="20" y="{(y0 + y1) // 2}" text-anchor="middle" '
                 f'font-size="13" fill="#202020" '
                 f'transform="rotate(-90 20 {(y0 + y1) // 2})">{ylabel}</text>')


def _polyline(parts: list[str], ax: _Axes, xs, ys, color: str, dash: str = "") -> None:
    coords = " ".join(f"{_px(ax.x(x))},{_px(ax.y(y))}" for x, y in zip(xs, ys))
    extra = f' stroke-dasharray="{dash}"' if dash else ""
    parts.append(f'<polyline points="{coords}" fill="none" stroke="{color}" '
                 f'stroke-width="2"{extra}/>')
    for x, y in zip(xs, ys):
        parts.append(f'<circle cx="{_px(ax.x(x))}" cy="{_px(ax.y(y))}" r="3" '
                     f'fill="{color}"/>')


def _whisker(parts: list[str], ax: _Axes, x: float, mean: float, err: float,
             color: str) -> None:
    if err <= 0.0:
        return
    cx = _px(ax.x(x))
    y_lo, y_hi = _px(ax.y(mean - err)), _px(ax.y(mean + err))
    parts.append(f'<line x1="{cx}" y1="{y_lo}" x2="{cx}" y2="{y_hi}" '
                 f'stroke="{color}" stroke-width="1"/>')
    for y in (y_lo, y_hi):
        parts.append(f'<line x1="{_px(ax.x(x) - 3)}" y1="{y}" '
                     f'x2="{_px(ax.x(x) + 3)}" y2="{y}" '
                     f'stroke="{color}" stroke-width="1"/>')


def _legend(parts: list[str], entries, corner: str) -> None:
    row_h, pad, sample = 18, 8, 22
    width = sample + 10 + max(len(label) for label, _, _ in entries) * 7 + 2 * pad
    height = len(entries) * row_h + pad
    if corner == "top-left":
        bx, by = _ML + 12, _MT + 10
    else:  # bottom-right
        bx, by = _W - _MR - 12 - width, _H - _MB - 10 - height
    parts.append(f'<rect x="{bx}" y="{by}" width="{width}" height="{height}" '
                 f'fill="#ffffff" fill-opacity="0.85" stroke="#bbbbbb"/>')
    for i, (label, color, dash) in enumerate(entries):
        y = by + pad + i * row_h + row_h // 2 - 4
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        parts.append(f'<line x1="{bx + pad}" y1="{y}" x2="{bx + pad + sample}" '
                     f'y2="{y}" stroke="{color}" stroke-width="2"{extra}/>')
        parts.append(f'<text x="{bx + pad + sample + 6}" y="{y + 4}" '
                     f'font-size="11" fill="#202020">{label}</text>')


def _sweep_axis(campaign: CampaignMetrics) -> tuple[list[float], str]:
    if campaign.sweep == "k":
        return [float(p.num_ues) for p in campaign.points], "number of UEs"
    return [float(p.urllc_fraction) for p in campaign.points], "URLLC fraction of UEs"


def _stat(campaign: CampaignMetrics, scheme: str, field: str):
    means = [p.stats[scheme][field].mean for p in campaign.points]
    errs = [p.stats[scheme][field].stderr for p in campaign.points]
    return means, errs


def _line_chart(campaign: CampaignMetrics, field: str, title: str,
                ylabel: str, scale: float = 1.0) -> str:
    xs, xlabel = _sweep_axis(campaign)
    series = {s: _stat(campaign, s, field) for s in SCHEMES}
    y_top = max(max((m + e) * scale for m, e in zip(*series[s])) for s in SCHEMES)
    if y_top <= 0:
        y_top = 1.0
    ax = _Axes(min(xs), max(xs), 0.0, y_top * 1.05)
    parts = _open_svg(title)
    _frame(parts, ax, _nice_ticks(ax.xlo, ax.xhi), _nice_ticks(0.0, ax.yhi),
           xlabel, ylabel)
    for scheme in SCHEMES:
        means, errs = series[scheme]
        means = [m * scale for m in means]
        errs = [e * scale for e in errs]
        color = _SCHEME_COLOR[scheme]
        _polyline(parts, ax, xs, means, color)
        for x, m, e in zip(xs, means, errs):
            _whisker(parts, ax, x, m, e, color)
    _legend(parts, [(s, _SCHEME_COLOR[s], "") for s in SCHEMES], "top-left")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _success_chart(campaign: CampaignMetrics) -> str:
    xs, xlabel = _sweep_axis(campaign)
    ax = _Axes(min(xs), max(xs), 0.0, 1.05)
    parts = _open_svg("QoS success rate by scheme and slice")
    _frame(parts, ax, _nice_ticks(ax.xlo, ax.xhi),
           [0.0, 0.2, 0.4, 0.6, 0.8, 1.0], xlabel, "success rate")
    entries = []
    for scheme in SCHEMES:
        for slice_name, field in (("URLLC", "urllc_success"), ("eMBB", "embb_success")):
            means, _ = _stat(campaign, scheme, field)
            dash = _SLICE_DASH[slice_name.lower()]
            _polyline(parts, ax, xs, means, _SCHEME_COLOR[scheme], dash)
            entries.append((f"{scheme} {slice_name}", _SCHEME_COLOR[scheme], dash))
    _legend(parts, entries, "bottom-right")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _bar_chart(campaign: CampaignMetrics) -> str:
    xs, xlabel = _sweep_axis(campaign)
    n = len(xs)
    series = {s: _stat(campaign, s, "weighted_sum_rate") for s in SCHEMES}
    y_top = max(max(m + e for m, e in zip(*series[s])) for s in SCHEMES)
    if y_top <= 0:
        y_top = 1.0
    ax = _Axes(0.0, float(n), 0.0, y_top * 1.05)
    parts = _open_svg("Weighted sum rate sensitivity")
    centers = [i + 0.5 for i in range(n)]
    _frame(parts, ax, centers, _nice_ticks(0.0, ax.yhi), xlabel,
           "weighted sum rate (bit/s)", [_fmt(x) for x in xs])
    bar_w = 0.8 / len(SCHEMES)
    floor_y = ax.y(0.0)
    for j, scheme in enumerate(SCHEMES):
        means, errs = series[scheme]
        color = _SCHEME_COLOR[scheme]
        for i, (m, e) in enumerate(zip(means, errs)):
            left = i + 0.1 + j * bar_w
            x_px = ax.x(left)
            w_px = ax.x(left + bar_w) - x_px
            top = ax.y(m)
            parts.append(f'<rect x="{_px(x_px)}" y="{_px(top)}" '
                         f'width="{_px(w_px)}" height="{_px(floor_y - top)}" '
                         f'fill="{color}" fill-opacity="0.85"/>')
            _whisker(parts, ax, left + bar_w / 2, m, e, "#202020")
    _legend(parts, [(s, _SCHEME_COLOR[s], "") for s in SCHEMES], "top-left")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def render_plot(campaign: CampaignMetrics, kind: str) -> str:
    """Render one chart kind to an SVG string."""
    if kind not in PLOT_KINDS:
        raise ConfigError(f"unknown plot kind {kind!r}; expected one of {PLOT_KINDS}")
    if kind != "sensitivity" and len(campaign.points) < 2:
        raise ConfigError(f"{kind} plot needs at least two sweep points")
    if not campaign.points:
        raise ConfigError("campaign has no sweep points")
    if kind == "sumrate":
        return _line_chart(campaign, "weighted_sum_rate",
                           "Weighted sum rate vs load", "weighted sum rate (bit/s)")
    if kind == "success":
        return _success_chart(campaign)
    if kind == "runtime":
        return _line_chart(campaign, "runtime_ns", "Scheme runtime vs load",
                           "runtime (ms)", scale=1e-6)
    return _bar_chart(campaign)


def plot_campaign(campaign: CampaignMetrics, kind: str, path) -> str:
    """Write the requested chart as an SVG file and return its path."""
    svg = render_plot(campaign, kind)
    with open(str(path), "w", encoding="utf-8", newline="\n") as fh:
        fh.write(svg)
    return str(path)
