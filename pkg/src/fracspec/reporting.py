"""Deterministic report emission: JSON, RFC-4180-style CSV, optional SVG.

Files are written atomically (temp file + rename in the same directory) and
are byte-identical across repeated runs with the same configuration: floats
render through repr (JSON) or %.17g (CSV/SVG), keys are sorted, and nothing
time- or path-dependent enters the payload.
"""

from __future__ import annotations

import csv
import io
import json
import os

import numpy as np

__all__ = ["fmt_float", "json_ready", "write_json", "write_csv", "write_svg"]


def fmt_float(x) -> str:
    return "%.17g" % float(x)


def json_ready(obj):
    """Recursively convert numpy scalars/arrays and complex values for JSON."""
    if isinstance(obj, dict):
        return {str(k): json_ready(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [json_ready(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [json_ready(v) for v in obj.tolist()]
    if isinstance(obj, (complex, np.complexfloating)):
        z = complex(obj)
        return {"re": z.real, "im": z.imag}
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def _atomic_write(path: str, data: str):
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8", newline="") as fh:
        fh.write(data)
    os.replace(tmp, path)


def write_json(path: str, payload: dict):
    text = json.dumps(json_ready(payload), sort_keys=True, indent=2)
    _atomic_write(path, text + "\n")


def write_csv(path: str, header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([
            fmt_float(v) if isinstance(v, (float, np.floating)) else v for v in row
        ])
    _atomic_write(path, buf.getvalue())


def write_svg(path: str, points, title: str = "numerical range"):
    """Scatter plot of complex samples as pure SVG path/circle elements."""
    pts = np.asarray(points, dtype=complex)
    re = pts.real
    im = pts.imag
    lo_x, hi_x = float(re.min()), float(re.max())
    lo_y, hi_y = float(im.min()), float(im.max())
    span_x = max(hi_x - lo_x, 1e-30)
    span_y = max(hi_y - lo_y, 1e-30)
    width, height, pad = 640.0, 480.0, 40.0

    def sx(x):
        return pad + (x - lo_x) / span_x * (width - 2 * pad)

    def sy(y):
        return height - pad - (y - lo_y) / span_y * (height - 2 * pad)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{int(width)}" '
        f'height="{int(height)}" viewBox="0 0 {int(width)} {int(height)}">',
        f'<title>{title}</title>',
        f'<path d="M {pad:.1f} {height - pad:.1f} H {width - pad:.1f} '
        f'M {pad:.1f} {pad:.1f} V {height - pad:.1f}" '
        'stroke="black" fill="none" stroke-width="1"/>',
    ]
    for z in pts:
        parts.append(
            f'<circle cx="{sx(z.real):.3f}" cy="{sy(z.imag):.3f}" r="2.5" '
            'fill="steelblue" fill-opacity="0.7"/>'
        )
    parts.append("</svg>")
    _atomic_write(path, "\n".join(parts) + "\n")
