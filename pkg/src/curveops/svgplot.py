"""Minimal SVG polyline plots; no rendering dependencies, diffable output."""

import numpy as np

_SVG_HEADER = ('<?xml version="1.0" encoding="UTF-8"?>\n'
               '<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
               'viewBox="0 0 {w} {h}">\n')


def render_polylines(layers, width: int = 640, height: int = 480,
                     flip_y: bool = True) -> str:
    """Draw (points, color, label) layers as stroked polylines.

    Points are (m, 2) arrays in data coordinates; the viewport is fitted to the
    union of all layers with a 5% margin.  ``flip_y`` keeps mathematical
    orientation (y grows upwards).
    """
    if not layers:
        raise ValueError("need at least one layer")
    pts_all = np.vstack([np.asarray(p, dtype=np.float64) for p, _, _ in layers])
    lo = pts_all.min(axis=0)
    hi = pts_all.max(axis=0)
    span = np.maximum(hi - lo, 1e-12)
    margin = 0.05 * span
    lo, hi = lo - margin, hi + margin
    span = hi - lo

    def to_view(p):
        x = (p[:, 0] - lo[0]) / span[0] * width
        y = (p[:, 1] - lo[1]) / span[1] * height
        if flip_y:
            y = height - y
        return x, y

    parts = [_SVG_HEADER.format(w=width, h=height)]
    for pts, color, label in layers:
        pts = np.asarray(pts, dtype=np.float64)
        x, y = to_view(pts)
        coords = " ".join(f"{a:.3f},{b:.3f}" for a, b in zip(x, y))
        parts.append(f'  <polyline fill="none" stroke="{color}" stroke-width="1.5" '
                     f'points="{coords}"><title>{label}</title></polyline>\n')
    parts.append("</svg>\n")
    return "".join(parts)
