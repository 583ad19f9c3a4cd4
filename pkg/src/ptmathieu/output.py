"""Deterministic CSV/JSON/SVG writers.

Numbers are printed with 12 significant digits; files end lines with ``\\n``
and are written through a temporary file renamed into place.
"""

from __future__ import annotations

import io
import json
import math
import os
import sys
import tempfile
from html import escape

SIG_DIGITS = 12


def fmt(x) -> str:
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        return f"{x:.{SIG_DIGITS}g}"
    return str(x)


def json_number(x):
    """Round-trip a float through the fixed text format; NaN/inf become null."""
    if isinstance(x, float):
        if not math.isfinite(x):
            return None
        return float(f"{x:.{SIG_DIGITS}g}")
    return x


def csv_text(header_comment: str, columns, rows, footer=()) -> str:
    buf = io.StringIO()
    buf.write(f"# {header_comment}\n")
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(fmt(v) for v in row) + "\n")
    for line in footer:
        buf.write(f"# {line}\n")
    return buf.getvalue()


def json_text(payload) -> str:
    def clean(obj):
        if isinstance(obj, dict):
            return {k: clean(v) for k, v in obj.items()}
        if isinstance(obj, (list, tuple)):
            return [clean(v) for v in obj]
        return json_number(obj)

    return json.dumps(clean(payload), indent=2, sort_keys=False, allow_nan=False) + "\n"


def write_text(text: str, path: str | None) -> None:
    """Write ``text`` atomically to ``path``; ``None`` or ``-`` means stdout."""
    if path is None or path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        umask = os.umask(0)
        os.umask(umask)
        os.chmod(tmp, 0o666 & ~umask)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ---------------------------------------------------------------------------
# SVG

_PALETTE = ["#000000", "#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"]
_W, _H, _PAD = 640, 480, 56


class _Frame:
    def __init__(self, xlim, ylim):
        self.x0, self.x1 = xlim
        self.y0, self.y1 = ylim
        if self.x1 == self.x0:
            self.x1 = self.x0 + 1.0
        if self.y1 == self.y0:
            self.y1 = self.y0 + 1.0

    def px(self, x):
        return _PAD + (x - self.x0) / (self.x1 - self.x0) * (_W - 2 * _PAD)

    def py(self, y):
        return _H - _PAD - (y - self.y0) / (self.y1 - self.y0) * (_H - 2 * _PAD)


def _axes(frame, xlabel, ylabel, title):
    parts = [
        f'<rect x="{_PAD}" y="{_PAD}" width="{_W - 2 * _PAD}" height="{_H - 2 * _PAD}" fill="none" stroke="#333"/>',
        f'<text x="{_W / 2:.1f}" y="{_H - 12}" text-anchor="middle" font-size="14">{escape(xlabel)}</text>',
        f'<text x="16" y="{_H / 2:.1f}" text-anchor="middle" font-size="14" '
        f'transform="rotate(-90 16 {_H / 2:.1f})">{escape(ylabel)}</text>',
        f'<text x="{_W / 2:.1f}" y="24" text-anchor="middle" font-size="15">{escape(title)}</text>',
    ]
    for i in range(5):
        xv = frame.x0 + i * (frame.x1 - frame.x0) / 4
        yv = frame.y0 + i * (frame.y1 - frame.y0) / 4
        parts.append(
            f'<text x="{frame.px(xv):.1f}" y="{_H - _PAD + 16}" text-anchor="middle" font-size="11">{xv:.3g}</text>'
        )
        parts.append(
            f'<text x="{_PAD - 6}" y="{frame.py(yv) + 4:.1f}" text-anchor="end" font-size="11">{yv:.3g}</text>'
        )
    return parts


def _polyline(frame, xs, ys, color, dashed=False):
    pts = " ".join(f"{frame.px(x):.2f},{frame.py(y):.2f}" for x, y in zip(xs, ys) if math.isfinite(x + y))
    dash = ' stroke-dasharray="6,4"' if dashed else ""
    return f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.6"{dash}/>'


def _document(body):
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" viewBox="0 0 {_W} {_H}">\n'
        + "\n".join(body)
        + "\n</svg>\n"
    )


def svg_curves(series, xlabel, ylabel, title, comment=""):
    """``series``: iterable of dicts with keys xs, ys, label, color_index, dashed."""
    series = list(series)
    xs_all = [x for s in series for x in s["xs"] if math.isfinite(x)]
    ys_all = [y for s in series for y in s["ys"] if math.isfinite(y)]
    frame = _Frame((min(xs_all), max(xs_all)), (min(ys_all), max(ys_all)))
    body = [f"<desc>{escape(comment)}</desc>"] if comment else []
    body += _axes(frame, xlabel, ylabel, title)
    for k, s in enumerate(series):
        color = _PALETTE[s.get("color_index", k) % len(_PALETTE)]
        body.append(_polyline(frame, s["xs"], s["ys"], color, s.get("dashed", False)))
        body.append(
            f'<text x="{_W - _PAD + 4}" y="{_PAD + 14 * k + 10}" font-size="10" fill="{color}">{escape(s["label"])}</text>'
        )
    return _document(body)


def svg_heatmap(xs, ys, values, classes, overlay, xlabel, ylabel, title, comment=""):
    """Growth-rate raster; unstable cells shaded by log growth, overlay curves on top."""
    dx = (xs[-1] - xs[0]) / max(len(xs) - 1, 1) if len(xs) > 1 else 1.0
    dy = (ys[-1] - ys[0]) / max(len(ys) - 1, 1) if len(ys) > 1 else 1.0
    frame = _Frame((xs[0] - dx / 2, xs[-1] + dx / 2), (ys[0] - dy / 2, ys[-1] + dy / 2))
    finite = [v for v in values if math.isfinite(v) and v > 0]
    vmax = max(finite) if finite else 1.0
    body = [f"<desc>{escape(comment)}</desc>"] if comment else []
    cw = abs(frame.px(xs[0] + dx) - frame.px(xs[0]))
    ch = abs(frame.py(ys[0] + dy) - frame.py(ys[0]))
    k = 0
    for y in ys:
        for x in xs:
            v, c = values[k], classes[k]
            k += 1
            if c == "overflow":
                color = "#000000"
            elif c == "stable":
                color = "#ffffff"
            elif c == "boundary":
                color = "#999999"
            else:
                t = max(0.0, min(1.0, 0.25 + 0.75 * math.log1p(v) / math.log1p(vmax)))
                color = f"#{255:02x}{int(255 * (1 - t)):02x}{int(255 * (1 - t)):02x}"
            body.append(
                f'<rect x="{frame.px(x) - cw / 2:.2f}" y="{frame.py(y) - ch / 2:.2f}" '
                f'width="{cw + 0.05:.2f}" height="{ch + 0.05:.2f}" fill="{color}"/>'
            )
    body += _axes(frame, xlabel, ylabel, title)
    for s in overlay:
        body.append(_polyline(frame, s["xs"], s["ys"], _PALETTE[2], s.get("dashed", False)))
    return _document(body)
