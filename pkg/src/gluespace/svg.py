"""SVG 1.1 emission for scenes, geodesic paths and violation witnesses.

Pieces are drawn side by side in development (their own planar
coordinates, offset horizontally); overlays reference pieces through the
same offsets.  Pure text generation, no graphics dependency.
"""

from __future__ import annotations

import numpy as np

PALETTE = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
    "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f",
]


class SvgCanvas:
    def __init__(self):
        self.elements = []
        self.min_x = self.min_y = None
        self.max_x = self.max_y = None

    def _require(self, x, y):
        if self.min_x is None:
            self.min_x = self.max_x = x
            self.min_y = self.max_y = y
        else:
            self.min_x, self.max_x = min(self.min_x, x), max(self.max_x, x)
            self.min_y, self.max_y = min(self.min_y, y), max(self.max_y, y)

    def polyline(self, pts, stroke="#000", width=0.01, dashed=False, fill="none"):
        for x, y in pts:
            self._require(x, y)
        coords = " ".join(f"{x:.6f},{-y:.6f}" for x, y in pts)
        dash = ' stroke-dasharray="0.03,0.02"' if dashed else ""
        self.elements.append(
            f'<polyline points="{coords}" fill="{fill}" stroke="{stroke}" stroke-width="{width}"{dash}/>'
        )

    def polygon(self, pts, stroke="#333", width=0.012, fill="#f7f7f7"):
        for x, y in pts:
            self._require(x, y)
        coords = " ".join(f"{x:.6f},{-y:.6f}" for x, y in pts)
        self.elements.append(
            f'<polygon points="{coords}" fill="{fill}" stroke="{stroke}" stroke-width="{width}"/>'
        )

    def circle(self, x, y, r=0.02, fill="#d62728", stroke="none"):
        self._require(x - r, y - r)
        self._require(x + r, y + r)
        self.elements.append(
            f'<circle cx="{x:.6f}" cy="{-y:.6f}" r="{r:.6f}" fill="{fill}" stroke="{stroke}"/>'
        )

    def text(self, x, y, content, size=0.08, fill="#000"):
        self._require(x, y)
        self.elements.append(
            f'<text x="{x:.6f}" y="{-y:.6f}" font-size="{size:.4f}" fill="{fill}" font-family="monospace">{content}</text>'
        )

    def render(self) -> str:
        if self.min_x is None:
            self.min_x = self.min_y = 0.0
            self.max_x = self.max_y = 1.0
        pad = 0.08 * max(self.max_x - self.min_x, self.max_y - self.min_y, 1e-6)
        x0, y0 = self.min_x - pad, -(self.max_y + pad)
        w = self.max_x - self.min_x + 2 * pad
        h = self.max_y - self.min_y + 2 * pad
        head = (
            '<?xml version="1.0" standalone="no"?>\n'
            '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'viewBox="{x0:.6f} {y0:.6f} {w:.6f} {h:.6f}" width="720" height="{720 * h / w:.0f}">\n'
        )
        return head + "\n".join(self.elements) + "\n</svg>\n"


def piece_offsets(spec):
    """Horizontal development offsets placing pieces side by side."""
    offsets = {}
    cursor = 0.0
    gap = 0.25 * max(p.diameter() for p in spec.pieces)
    for i, piece in enumerate(spec.pieces):
        xs = piece.vertices[:, 0]
        offsets[i] = np.array([cursor - float(xs.min()), 0.0])
        cursor += float(xs.max() - xs.min()) + gap
    return offsets


def draw_scene(spec, canvas=None):
    canvas = canvas or SvgCanvas()
    off = piece_offsets(spec)
    for i, piece in enumerate(spec.pieces):
        pts = [tuple(v + off[i]) for v in piece.vertices]
        if piece.kind == "polygon2d":
            canvas.polygon(pts)
        else:
            canvas.polyline(pts, stroke="#333", width=0.015)
        canvas.text(pts[0][0], pts[0][1] - 0.12, piece.pid, size=0.07, fill="#555")
    color_of = {}
    for k, g in enumerate(spec.gluings):
        color_of[g.cid] = PALETTE[k % len(PALETTE)]
    for arc in spec.arcs:
        ch = spec.chart(arc.aid)
        cls = spec.class_of_arc(arc.aid)
        color = color_of[cls[0].cid] if cls else "#999999"
        pts = [tuple(p + off[ch.piece_idx]) for p in ch.points]
        if len(pts) == 1:
            canvas.circle(pts[0][0], pts[0][1], r=0.03, fill=color)
        else:
            canvas.polyline(pts, stroke=color, width=0.03)
    return canvas, off


def draw_path(spec, path, canvas=None):
    canvas, off = draw_scene(spec, canvas)
    for leg in path.legs:
        a = leg.a + off[leg.piece]
        b = leg.b + off[leg.piece]
        canvas.polyline([tuple(a), tuple(b)], stroke="#d62728", width=0.02)
    for i, node in enumerate(path.crossings):
        for rep in node.reps:
            p = rep.xy + off[rep.piece]
            canvas.circle(p[0], p[1], r=0.025, fill="#d62728")
    return canvas


def draw_quadruple(spec, points, canvas=None):
    """points: four (pid, (x, y)) with the apex first."""
    canvas, off = draw_scene(spec, canvas)
    labels = ["a", "b", "c", "d"]
    for label, (pid, xy) in zip(labels, points):
        i = spec.piece_index(pid)
        p = np.asarray(xy) + off[i]
        canvas.circle(p[0], p[1], r=0.025, fill="#d62728" if label == "a" else "#1f77b4")
        canvas.text(p[0] + 0.03, p[1] + 0.03, label, size=0.09)
    return canvas


def draw_diameter(spec, witness, canvas=None):
    canvas, off = draw_scene(spec, canvas)
    for pid, xy in witness:
        i = spec.piece_index(pid)
        p = np.asarray(xy) + off[i]
        canvas.circle(p[0], p[1], r=0.03, fill="#d62728")
    return canvas
