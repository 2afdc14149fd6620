"""Independent brute-force reference for glued distances.

Minimizes path length over explicit crossing sequences of bounded length
drawn from a dense boundary grid.  Deliberately shares no code with the
package's shortest-path machinery: it enumerates layer by layer with plain
per-piece numpy arithmetic.
"""

import math

import numpy as np


def _orbit_samples(spec, grid_h):
    """Dense boundary samples as orbits: lists of (piece, xy) per sample."""
    orbits = []
    claimed = set()
    units = []
    for g in spec.gluings:
        units.append((tuple(g.members), g.self_fold))
        claimed.update(aid for aid, _ in g.members)
    for arc in spec.arcs:
        if arc.aid not in claimed:
            units.append((((arc.aid, 1),), False))
    for members, fold in units:
        length = spec.chart(members[0][0]).length
        n = max(1, int(math.ceil(length / grid_h))) if length > 0 else 1
        for t in np.linspace(0.0, length, n + 1) if length > 0 else [0.0]:
            orbit = []
            for aid, orient in members:
                ch = spec.chart(aid)
                s = t if orient > 0 else length - t
                orbit.append((ch.piece_idx, ch.point_at(s)))
                if fold:
                    orbit.append((ch.piece_idx, ch.point_at(length - t)))
            orbits.append(orbit)
    return orbits


class BruteForceOracle:
    def __init__(self, spec, grid_h):
        self.spec = spec
        orbits = _orbit_samples(spec, grid_h)
        self.n = len(orbits)
        piece, xy, sample = [], [], []
        for i, orbit in enumerate(orbits):
            for p, q in orbit:
                piece.append(p)
                xy.append(q)
                sample.append(i)
        self.rep_piece = np.asarray(piece)
        self.rep_xy = np.asarray(xy, dtype=float)
        self.rep_sample = np.asarray(sample)
        self.by_piece = {
            p: np.flatnonzero(self.rep_piece == p)
            for p in range(len(spec.pieces))
        }

    def _legs_from_point(self, piece_idx, xy):
        out = np.full(self.n, np.inf)
        idx = self.by_piece.get(piece_idx, np.empty(0, int))
        if len(idx):
            d = np.hypot(*(self.rep_xy[idx] - np.asarray(xy, float)).T)
            np.minimum.at(out, self.rep_sample[idx], d)
        return out

    def _relax(self, b):
        out = b.copy()
        for p, idx in self.by_piece.items():
            if len(idx) == 0:
                continue
            src = b[self.rep_sample[idx]]
            xs = self.rep_xy[idx]
            block = max(1, int(4e6) // max(len(idx), 1))
            for lo in range(0, len(idx), block):
                hi = min(lo + block, len(idx))
                d = np.hypot(
                    xs[lo:hi, 0][:, None] - xs[:, 0][None, :],
                    xs[lo:hi, 1][:, None] - xs[:, 1][None, :],
                )
                cand = (src[None, :] + d).min(axis=1)
                np.minimum.at(out, self.rep_sample[idx[lo:hi]], cand)
        return out

    def distance(self, x, y, max_crossings=3):
        """min over paths with at most max_crossings boundary grid points."""
        px = self.spec.piece_index(x[0])
        py = self.spec.piece_index(y[0])
        xq = np.asarray(x[1], dtype=float)
        yq = np.asarray(y[1], dtype=float)
        best = float(np.hypot(*(xq - yq))) if px == py else math.inf
        if max_crossings == 0 or self.n == 0:
            return best
        b = self._legs_from_point(px, xq)
        ly = self._legs_from_point(py, yq)
        best = min(best, float(np.min(b + ly)))
        for _ in range(max_crossings - 1):
            b = self._relax(b)
            best = min(best, float(np.min(b + ly)))
        return best
