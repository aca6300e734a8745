"""Deterministic artifact writers: CSV, JSON, SVG plots, 16-bit PGM.

Everything here is byte-deterministic for identical inputs: numeric CSV
fields are printed with 17 significant digits, JSON keys are sorted, and the
SVG plots are assembled from explicit element strings (no plotting library,
no timestamps, no generated ids).
"""

from __future__ import annotations

import json
import struct
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np


def fmt(x) -> str:
    """17-significant-digit rendering of numbers; strings pass through."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.17g}"
    return str(x)


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, int, float, str)) or obj is None:
        return obj
    return str(obj)


def write_json(path, obj) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(_jsonable(obj), sort_keys=True, indent=1) + "\n")


# ---------------------------------------------------------------------------
# SVG plots
# ---------------------------------------------------------------------------

_W, _H, _PAD = 640, 400, 45


def _svg_frame(body: str, title: str) -> str:
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">\n'
        f'<rect width="{_W}" height="{_H}" fill="white"/>\n'
        f'<text x="{_W // 2}" y="20" text-anchor="middle" font-size="14" '
        f'font-family="monospace">{title}</text>\n'
        f"{body}\n</svg>\n"
    )


def _scale(xs, lo, hi, out_lo, out_hi):
    xs = np.asarray(xs, dtype=float)
    if hi == lo:
        hi = lo + 1.0
    return out_lo + (xs - lo) / (hi - lo) * (out_hi - out_lo)


def svg_histogram(path, values: Sequence[float], bins: int = 80, title: str = "") -> None:
    values = np.asarray(values, dtype=float)
    counts, edges = np.histogram(values, bins=bins)
    top = max(int(counts.max()), 1)
    xs0 = _scale(edges[:-1], edges[0], edges[-1], _PAD, _W - _PAD)
    xs1 = _scale(edges[1:], edges[0], edges[-1], _PAD, _W - _PAD)
    parts = []
    for x0, x1, c in zip(xs0, xs1, counts):
        h = (_H - 2 * _PAD) * (int(c) / top)
        y = _H - _PAD - h
        parts.append(
            f'<rect x="{x0:.2f}" y="{y:.2f}" width="{max(x1 - x0, 0.5):.2f}" '
            f'height="{h:.2f}" fill="steelblue"/>'
        )
    parts.append(_axes(edges[0], edges[-1], 0, top))
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(_svg_frame("\n".join(parts), title))


def svg_cdf(path, points: Sequence[float], weights: Sequence[float], title: str = "",
            reference=None) -> None:
    pts = np.asarray(points, dtype=float)
    cum = np.cumsum(weights)
    lo, hi = float(pts.min()), float(pts.max())
    span = (hi - lo) or 1.0
    lo, hi = lo - 0.05 * span, hi + 0.05 * span
    xs = _scale(pts, lo, hi, _PAD, _W - _PAD)
    ys = _H - _PAD - (cum / cum[-1]) * (_H - 2 * _PAD)
    steps = [f"{_PAD:.2f},{_H - _PAD:.2f}"]
    prev_y = _H - _PAD
    for x, y in zip(xs, ys):
        steps.append(f"{x:.2f},{prev_y:.2f}")
        steps.append(f"{x:.2f},{y:.2f}")
        prev_y = y
    steps.append(f"{_W - _PAD:.2f},{prev_y:.2f}")
    parts = [f'<polyline points="{" ".join(steps)}" fill="none" stroke="steelblue" stroke-width="1.2"/>']
    if reference is not None:
        grid = np.linspace(lo, hi, 256)
        ref_y = _H - _PAD - np.array([reference(g) for g in grid]) * (_H - 2 * _PAD)
        ref_x = _scale(grid, lo, hi, _PAD, _W - _PAD)
        ref_pts = " ".join(f"{x:.2f},{y:.2f}" for x, y in zip(ref_x, ref_y))
        parts.append(f'<polyline points="{ref_pts}" fill="none" stroke="firebrick" stroke-width="1" stroke-dasharray="4 3"/>')
    parts.append(_axes(lo, hi, 0, 1))
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(_svg_frame("\n".join(parts), title))


def svg_series(path, xs: Sequence[float], ys: Sequence[float], title: str = "",
               logy: bool = False) -> None:
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    plot_y = np.log10(np.maximum(ys, 1e-300)) if logy else ys
    ylo, yhi = float(plot_y.min()), float(plot_y.max())
    sx = _scale(xs, xs.min(), xs.max(), _PAD, _W - _PAD)
    sy = _H - _PAD - _scale(plot_y, ylo, yhi, 0, _H - 2 * _PAD)
    pts = " ".join(f"{x:.2f},{y:.2f}" for x, y in zip(sx, sy))
    parts = [
        f'<polyline points="{pts}" fill="none" stroke="steelblue" stroke-width="1.5"/>',
        "".join(
            f'<circle cx="{x:.2f}" cy="{y:.2f}" r="3" fill="steelblue"/>'
            for x, y in zip(sx, sy)
        ),
        _axes(xs.min(), xs.max(), ylo, yhi),
    ]
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(_svg_frame("\n".join(parts), title))


def svg_scatter(path, xs: Sequence[float], ys: Sequence[float], title: str = "") -> None:
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    sx = _scale(xs, xs.min(), xs.max(), _PAD, _W - _PAD)
    sy = _H - _PAD - _scale(ys, ys.min(), ys.max(), 0, _H - 2 * _PAD)
    dots = "".join(
        f'<circle cx="{x:.2f}" cy="{y:.2f}" r="1.5" fill="steelblue" fill-opacity="0.6"/>'
        for x, y in zip(sx, sy)
    )
    body = dots + _axes(xs.min(), xs.max(), ys.min(), ys.max())
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(_svg_frame(body, title))


def _axes(xlo, xhi, ylo, yhi) -> str:
    return (
        f'<line x1="{_PAD}" y1="{_H - _PAD}" x2="{_W - _PAD}" y2="{_H - _PAD}" stroke="black"/>'
        f'<line x1="{_PAD}" y1="{_PAD}" x2="{_PAD}" y2="{_H - _PAD}" stroke="black"/>'
        f'<text x="{_PAD}" y="{_H - _PAD + 16}" font-size="11" font-family="monospace">{fmt(float(xlo))[:10]}</text>'
        f'<text x="{_W - _PAD}" y="{_H - _PAD + 16}" text-anchor="end" font-size="11" font-family="monospace">{fmt(float(xhi))[:10]}</text>'
        f'<text x="{_PAD - 4}" y="{_H - _PAD}" text-anchor="end" font-size="11" font-family="monospace">{fmt(float(ylo))[:8]}</text>'
        f'<text x="{_PAD - 4}" y="{_PAD + 4}" text-anchor="end" font-size="11" font-family="monospace">{fmt(float(yhi))[:8]}</text>'
    )


def write_pgm16(path, values: np.ndarray) -> None:
    """16-bit grayscale PGM of a real matrix; NaN and -inf map to 0."""
    arr = np.asarray(values, dtype=float)
    finite = arr[np.isfinite(arr)]
    if finite.size == 0:
        lo, hi = 0.0, 1.0
    else:
        lo, hi = float(finite.min()), float(finite.max())
        if hi == lo:
            hi = lo + 1.0
    scaled = np.zeros(arr.shape, dtype=np.uint16)
    mask = np.isfinite(arr)
    scaled[mask] = (1 + (arr[mask] - lo) / (hi - lo) * 65534).astype(np.uint16)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as fh:
        fh.write(f"P5\n{arr.shape[1]} {arr.shape[0]}\n65535\n".encode())
        fh.write(struct.pack(f">{arr.size}H", *scaled.ravel().tolist()))
