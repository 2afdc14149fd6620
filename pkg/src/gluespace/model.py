"""Input data model: pieces, boundary arcs, gluing classes, and validation.

A scene is a disjoint union of flat convex pieces (2D convex polygons or
1D segments).  Boundary arcs carry arclength charts; gluing classes
identify arcs of equal length by chart parameter (orientation-aware) or
fold a single arc onto itself by t -> L - t.  Validation checks the
structural hypotheses under which the glued space is expected to keep a
lower curvature bound, and flags the known failure patterns instead of
rejecting them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .comparison import Curvature
from .errors import DomainError

SNAP = 1e-9

POLYGON = "polygon2d"
SEGMENT = "segment1d"


def snap_key(piece_idx: int, xy) -> tuple:
    """Hashable key identifying a geometric point of a piece up to 1e-9."""
    return (piece_idx, round(float(xy[0]) / SNAP), round(float(xy[1]) / SNAP))


@dataclass(eq=False)
class Side:
    index: int
    p0: np.ndarray
    p1: np.ndarray
    length: float
    unit: np.ndarray


@dataclass(eq=False)
class Piece:
    """A flat convex piece: counterclockwise convex polygon or a segment."""

    pid: str
    kind: str
    vertices: np.ndarray
    sides: list[Side] = field(init=False)

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, dtype=float)
        self.sides = []
        n = len(self.vertices)
        closed = self.kind == POLYGON
        count = n if closed else n - 1
        for i in range(count):
            p0 = self.vertices[i]
            p1 = self.vertices[(i + 1) % n]
            v = p1 - p0
            length = float(np.hypot(v[0], v[1]))
            unit = v / length if length > 0 else v
            self.sides.append(Side(i, p0, p1, length, unit))

    @property
    def dim(self) -> int:
        return 2 if self.kind == POLYGON else 1

    def contains(self, xy, tol=1e-9) -> bool:
        xy = np.asarray(xy, dtype=float)
        if self.kind == POLYGON:
            for s in self.sides:
                d = s.p1 - s.p0
                cross = d[0] * (xy[1] - s.p0[1]) - d[1] * (xy[0] - s.p0[0])
                if cross < -tol:
                    return False
            return True
        s = self.sides[0]
        t = float(np.dot(xy - s.p0, s.unit))
        if t < -tol or t > s.length + tol:
            return False
        off = xy - (s.p0 + np.clip(t, 0.0, s.length) * s.unit)
        return float(np.hypot(off[0], off[1])) <= tol

    def diameter(self) -> float:
        d = 0.0
        v = self.vertices
        for i in range(len(v)):
            for j in range(i + 1, len(v)):
                d = max(d, float(np.hypot(*(v[i] - v[j]))))
        return d

    def area(self) -> float:
        if self.kind != POLYGON:
            return 0.0
        v = self.vertices
        x, y = v[:, 0], v[:, 1]
        return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))

    def corner_angle(self, i: int) -> float:
        """Interior angle at vertex i (polygons only)."""
        n = len(self.vertices)
        prev = self.sides[(i - 1) % n]
        nxt = self.sides[i]
        u = -prev.unit
        w = nxt.unit
        return float(np.arccos(np.clip(np.dot(u, w), -1.0, 1.0)))


@dataclass(eq=False)
class BoundaryArc:
    """A boundary arc: a chain of full sides, or a sub-interval of one side."""

    aid: str
    piece: str
    support: tuple  # ("sides", (i, ...)) | ("subside", side_index, t0, t1)


@dataclass(eq=False)
class GluingClass:
    """Arcs identified by common arclength parameter; a fold maps t -> L - t."""

    cid: str
    members: tuple  # ((arc_id, +1 | -1), ...)
    self_fold: bool = False


class ArcChart:
    """Arclength parametrization [0, L] of a boundary arc, piecewise linear."""

    def __init__(self, aid, piece_idx, segs):
        # segs: list of (P0, P1) with P1 of one equal to P0 of the next
        self.aid = aid
        self.piece_idx = piece_idx
        pts = [segs[0][0]]
        breaks = [0.0]
        units = []
        for p0, p1 in segs:
            v = np.asarray(p1, dtype=float) - np.asarray(p0, dtype=float)
            ln = float(np.hypot(v[0], v[1]))
            units.append(v / ln if ln > 0 else v)
            breaks.append(breaks[-1] + ln)
            pts.append(np.asarray(p1, dtype=float))
        self.points = [np.asarray(p, dtype=float) for p in pts]
        self.breaks = np.asarray(breaks, dtype=float)
        self.units = units
        self.length = float(self.breaks[-1])

    def _seg_index(self, s: float) -> int:
        i = int(np.searchsorted(self.breaks, s, side="right")) - 1
        return min(max(i, 0), len(self.units) - 1)

    def point_at(self, s: float) -> np.ndarray:
        s = float(s)
        i = self._seg_index(s)
        if s == self.breaks[i]:
            return self.points[i].copy()
        if s == self.breaks[i + 1]:
            return self.points[i + 1].copy()
        return self.points[i] + (s - self.breaks[i]) * self.units[i]

    def germ(self, s: float, sign: int):
        """Unit direction of the arc at parameter s, forward (+1) or backward (-1).

        Returns None past the corresponding end of the arc.
        """
        s = float(s)
        if sign > 0:
            if s >= self.length:
                return None
            i = self._seg_index(s)
            return self.units[i].copy()
        if s <= 0.0:
            return None
        i = int(np.searchsorted(self.breaks, s, side="left")) - 1
        i = min(max(i, 0), len(self.units) - 1)
        return -self.units[i]

    def locate(self, xy, tol=1e-7):
        """Parameter of a point lying on the arc, or None."""
        xy = np.asarray(xy, dtype=float)
        for i, p in enumerate(self.points):
            if np.hypot(*(xy - p)) <= tol:
                return float(self.breaks[i])
        for i, u in enumerate(self.units):
            p0 = self.points[i]
            seg_len = self.breaks[i + 1] - self.breaks[i]
            t = float(np.dot(xy - p0, u))
            if -tol <= t <= seg_len + tol:
                off = xy - (p0 + t * u)
                if np.hypot(off[0], off[1]) <= tol:
                    return float(self.breaks[i] + min(max(t, 0.0), seg_len))
        return None


@dataclass(eq=False)
class ComplexSpec:
    """A full scene: pieces, arcs, gluing classes and the curvature parameter."""

    pieces: list
    arcs: list
    gluings: list
    kappa: Curvature

    def __post_init__(self):
        self._piece_idx = {p.pid: i for i, p in enumerate(self.pieces)}
        self._arc_idx = {a.aid: i for i, a in enumerate(self.arcs)}
        self._charts = {}
        self._class_of_arc = {}
        for g in self.gluings:
            for m, (aid, _) in enumerate(g.members):
                self._class_of_arc.setdefault(aid, (g, m))
        self._ecplx = None

    def piece_index(self, pid: str) -> int:
        if pid not in self._piece_idx:
            raise DomainError(f"unknown piece id {pid!r}")
        return self._piece_idx[pid]

    def piece(self, pid: str) -> Piece:
        return self.pieces[self.piece_index(pid)]

    def arc(self, aid: str) -> BoundaryArc:
        if aid not in self._arc_idx:
            raise DomainError(f"unknown arc id {aid!r}")
        return self.arcs[self._arc_idx[aid]]

    def class_of_arc(self, aid: str):
        """(GluingClass, member index) containing the arc, or None."""
        return self._class_of_arc.get(aid)

    def chart(self, aid: str) -> ArcChart:
        if aid not in self._charts:
            arc = self.arc(aid)
            piece_idx = self.piece_index(arc.piece)
            piece = self.pieces[piece_idx]
            kind, *rest = arc.support
            if kind == "sides":
                segs = [(piece.sides[i].p0, piece.sides[i].p1) for i in rest[0]]
            else:
                side_index, t0, t1 = rest
                side = piece.sides[side_index]
                segs = [(side.p0 + t0 * side.unit, side.p0 + t1 * side.unit)]
            self._charts[aid] = ArcChart(aid, piece_idx, segs)
        return self._charts[aid]

    def scene_dim(self):
        dims = {p.dim for p in self.pieces}
        return dims.pop() if len(dims) == 1 else None

    def arcs_of_piece(self, piece_idx: int):
        return [a for a in self.arcs if self.piece_index(a.piece) == piece_idx]


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Finding:
    severity: str  # "error" | "warning" | "info"
    code: str
    message: str
    location: str


@dataclass
class ValidationReport:
    findings: list

    @property
    def status(self) -> str:
        if any(f.severity == "error" for f in self.findings):
            return "invalid"
        if any(f.severity == "warning" for f in self.findings):
            return "valid-with-warnings"
        return "valid"

    def codes(self, severity=None):
        return [f.code for f in self.findings if severity in (None, f.severity)]


def _check_piece(piece: Piece, out: list):
    v = piece.vertices
    loc = f"piece {piece.pid}"
    if piece.kind == SEGMENT:
        if len(v) != 2:
            out.append(Finding("error", "BAD_PIECE", "segment needs 2 endpoints", loc))
        elif np.hypot(*(v[1] - v[0])) <= SNAP:
            out.append(Finding("error", "BAD_PIECE", "segment has zero length", loc))
        return
    if len(v) < 3:
        out.append(Finding("error", "BAD_PIECE", "polygon needs >= 3 vertices", loc))
        return
    for i in range(len(v)):
        for j in range(i + 1, len(v)):
            if np.hypot(*(v[i] - v[j])) <= SNAP:
                out.append(
                    Finding("error", "BAD_PIECE", f"repeated vertices {i} and {j}", loc)
                )
                return
    n = len(v)
    for i in range(n):
        a = v[(i + 1) % n] - v[i]
        b = v[(i + 2) % n] - v[(i + 1) % n]
        cross = a[0] * b[1] - a[1] * b[0]
        if cross <= SNAP:
            out.append(
                Finding(
                    "error",
                    "BAD_PIECE",
                    f"polygon not strictly convex counterclockwise at vertex {(i + 1) % n}",
                    loc,
                )
            )
            return


def _arc_side_intervals(spec: ComplexSpec, arc: BoundaryArc):
    """Covered intervals per side, as {side_index: (t0, t1)} entries."""
    piece = spec.piece(arc.piece)
    kind, *rest = arc.support
    if kind == "sides":
        return [(i, 0.0, piece.sides[i].length) for i in rest[0]]
    side_index, t0, t1 = rest
    return [(side_index, t0, t1)]


def _check_arc(spec: ComplexSpec, arc: BoundaryArc, out: list) -> bool:
    loc = f"arc {arc.aid}"
    if arc.piece not in spec._piece_idx:
        out.append(Finding("error", "UNRESOLVED_ID", f"unknown piece {arc.piece!r}", loc))
        return False
    piece = spec.piece(arc.piece)
    kind, *rest = arc.support
    nsides = len(piece.sides)
    if kind == "sides":
        idxs = rest[0]
        if not idxs:
            out.append(Finding("error", "BAD_ARC", "empty side list", loc))
            return False
        for i in idxs:
            if not (0 <= i < nsides):
                out.append(Finding("error", "BAD_ARC", f"side index {i} out of range", loc))
                return False
        for a, b in zip(idxs, idxs[1:]):
            if piece.kind == POLYGON and b != (a + 1) % nsides:
                out.append(
                    Finding("error", "BAD_ARC", f"sides {a},{b} not consecutive", loc)
                )
                return False
        if len(idxs) > nsides:
            out.append(Finding("error", "BAD_ARC", "arc wraps past full boundary", loc))
            return False
        return True
    side_index, t0, t1 = rest
    if not (0 <= side_index < nsides):
        out.append(Finding("error", "BAD_ARC", f"side index {side_index} out of range", loc))
        return False
    side = piece.sides[side_index]
    if not (-SNAP <= t0 <= t1 <= side.length + SNAP):
        out.append(
            Finding("error", "BAD_ARC", f"interval [{t0}, {t1}] outside side", loc)
        )
        return False
    return True


def validate(spec: ComplexSpec) -> ValidationReport:
    """Structural validation of a scene and of the gluing-theorem hypotheses."""
    out: list = []
    kappa = spec.kappa.kappa

    seen = set()
    for coll, label in ((spec.pieces, "piece"), (spec.arcs, "arc"), (spec.gluings, "gluing")):
        for obj in coll:
            oid = getattr(obj, "pid", None) or getattr(obj, "aid", None) or getattr(obj, "cid")
            if (label, oid) in seen:
                out.append(Finding("error", "DUPLICATE_ID", f"duplicate {label} id {oid!r}", f"{label} {oid}"))
            seen.add((label, oid))

    if not spec.pieces:
        out.append(Finding("error", "BAD_PIECE", "scene has no pieces", "scene"))
        return ValidationReport(out)

    for piece in spec.pieces:
        _check_piece(piece, out)
    if any(f.severity == "error" for f in out):
        return ValidationReport(out)

    if spec.scene_dim() is None:
        out.append(
            Finding("error", "MIXED_DIMENSION", "scene mixes 1D and 2D pieces", "scene")
        )

    arcs_ok = {}
    for arc in spec.arcs:
        arcs_ok[arc.aid] = _check_arc(spec, arc, out)

    # pairwise overlap beyond shared endpoints, per piece and side
    by_side = {}
    for arc in spec.arcs:
        if not arcs_ok[arc.aid]:
            continue
        for side_index, t0, t1 in _arc_side_intervals(spec, arc):
            by_side.setdefault((arc.piece, side_index), []).append((arc.aid, t0, t1))
    for (pid, side_index), items in sorted(by_side.items()):
        for i in range(len(items)):
            for j in range(i + 1, len(items)):
                a0, s0, e0 = items[i]
                a1, s1, e1 = items[j]
                if min(e0, e1) - max(s0, s1) > SNAP:
                    out.append(
                        Finding(
                            "error",
                            "ARC_OVERLAP",
                            f"arcs {a0} and {a1} overlap on side {side_index} of {pid}",
                            f"piece {pid}",
                        )
                    )

    # gluing classes
    in_class = {}
    for g in spec.gluings:
        loc = f"gluing {g.cid}"
        resolved = True
        for aid, orient in g.members:
            if aid not in spec._arc_idx:
                out.append(Finding("error", "UNRESOLVED_ID", f"unknown arc {aid!r}", loc))
                resolved = False
                continue
            if aid in in_class:
                out.append(
                    Finding("error", "ARC_REUSED", f"arc {aid} already in gluing {in_class[aid]}", loc)
                )
            in_class[aid] = g.cid
            if orient not in (1, -1):
                out.append(Finding("error", "INVALID_CLASS", f"bad orientation for {aid}", loc))
        if not resolved:
            continue
        if g.self_fold and len(g.members) != 1:
            out.append(Finding("error", "INVALID_CLASS", "fold class must have one member", loc))
        if not g.self_fold and len(g.members) < 2:
            out.append(Finding("error", "INVALID_CLASS", "class needs >= 2 members or a fold", loc))
        if any(not arcs_ok.get(aid, False) for aid, _ in g.members):
            continue
        # (a) equal lengths
        lengths = [spec.chart(aid).length for aid, _ in g.members]
        if max(lengths) - min(lengths) > SNAP:
            out.append(
                Finding(
                    "error",
                    "ARC_LENGTH_MISMATCH",
                    f"member lengths differ: {lengths}",
                    loc,
                )
            )
        # (b) involution structure
        if len(g.members) >= 3:
            out.append(
                Finding(
                    "warning",
                    "THEOREM_HYPOTHESIS_VIOLATED",
                    f"class of size {len(g.members)} is not an involution",
                    loc,
                )
            )

    if any(f.severity == "error" for f in out):
        return ValidationReport(out)

    # (c) structural extremality of each arc
    for arc in spec.arcs:
        piece = spec.piece(arc.piece)
        kind, *rest = arc.support
        loc = f"arc {arc.aid}"
        if kind == "sides":
            continue
        side_index, t0, t1 = rest
        side = piece.sides[side_index]
        full = t0 <= SNAP and t1 >= side.length - SNAP
        endpoint_point = t0 == t1 and (t0 <= SNAP or t0 >= side.length - SNAP)
        if full:
            continue
        if piece.kind == SEGMENT and endpoint_point:
            continue
        out.append(
            Finding(
                "warning",
                "NOT_STRUCTURALLY_EXTREMAL",
                "arc is a proper sub-interval of a side; not a union of full sides",
                loc,
            )
        )

    # (d) kappa-extremality of E per piece, for kappa > 0
    if kappa > 0.0:
        half = spec.kappa.d_kappa / 2.0
        for pi, piece in enumerate(spec.pieces):
            arcs_here = spec.arcs_of_piece(pi)
            loc = f"piece {piece.pid}"
            if not arcs_here:
                if piece.diameter() > half + SNAP:
                    out.append(
                        Finding(
                            "warning",
                            "KAPPA_EXTREMALITY",
                            f"piece without glued boundary has diameter {piece.diameter():.6g} > D_kappa/2",
                            loc,
                        )
                    )
                continue
            pts = set()
            single_point = True
            probe = None
            for arc in arcs_here:
                ch = spec.chart(arc.aid)
                if ch.length > SNAP:
                    single_point = False
                    break
                probe = ch.point_at(0.0)
                pts.add(snap_key(pi, probe))
            if single_point and len(pts) == 1:
                far = max(
                    float(np.hypot(*(v - probe))) for v in piece.vertices
                )
                if far > half + SNAP:
                    out.append(
                        Finding(
                            "warning",
                            "KAPPA_EXTREMALITY",
                            "one-point glued set does not cover the piece within D_kappa/2",
                            loc,
                        )
                    )

    # (e) condition on induced vs ambient metric, structural for convex pieces
    if any(p.kind == POLYGON for p in spec.pieces) and spec.arcs:
        out.append(
            Finding(
                "info",
                "SPADE_STRUCTURAL",
                "induced length metric on boundary arcs of convex pieces is the boundary path metric (locally bi-Lipschitz to the ambient one)",
                "scene",
            )
        )

    # (f) dimension-one component count under positive curvature
    if kappa > 0.0 and all(p.kind == SEGMENT for p in spec.pieces) and len(spec.pieces) > 2:
        out.append(
            Finding(
                "warning",
                "THEOREM_HYPOTHESIS_VIOLATED",
                f"{len(spec.pieces)} one-dimensional components; gluing theorem needs at most two",
                "scene",
            )
        )

    return ValidationReport(out)


# ---------------------------------------------------------------------------
# Induced length metric on the glued-set 1-complex (before gluing)
# ---------------------------------------------------------------------------

class EComplex:
    """The 1-complex of declared arcs inside the disjoint pieces.

    Paths must stay on the arcs; arcs in one piece connect where they share
    a point, arcs in different pieces never connect.
    """

    def __init__(self, spec: ComplexSpec):
        self.spec = spec
        self.coords = []
        self.piece_of = []
        self._key_to_vid = {}
        self.adj = []
        self.arc_nodes = {}
        for arc in spec.arcs:
            ch = spec.chart(arc.aid)
            piece_idx = ch.piece_idx
            vids = []
            for i, s in enumerate(ch.breaks):
                vid = self._vertex(piece_idx, ch.points[i])
                vids.append(vid)
            for i in range(len(ch.breaks) - 1):
                w = float(ch.breaks[i + 1] - ch.breaks[i])
                self._edge(vids[i], vids[i + 1], w)
            self.arc_nodes[arc.aid] = (np.asarray(ch.breaks, dtype=float), vids)

    def _vertex(self, piece_idx, xy):
        key = snap_key(piece_idx, xy)
        if key not in self._key_to_vid:
            self._key_to_vid[key] = len(self.coords)
            self.coords.append(np.asarray(xy, dtype=float))
            self.piece_of.append(piece_idx)
            self.adj.append([])
        return self._key_to_vid[key]

    def _edge(self, u, v, w):
        if u == v:
            return
        self.adj[u].append((v, w))
        self.adj[v].append((u, w))

    def locate(self, pid, xy):
        """(arc id, parameter) of a point on the declared arcs; DomainError if absent."""
        piece_idx = self.spec.piece_index(pid)
        for arc in self.spec.arcs:
            ch = self.spec.chart(arc.aid)
            if ch.piece_idx != piece_idx:
                continue
            s = ch.locate(xy)
            if s is not None:
                return arc.aid, s
        raise DomainError(f"point {tuple(xy)} of piece {pid} is not on the glued set")

    def _attach(self, aid, s, extra):
        """Transient vertex for (arc, param); returns vid and extra adjacency."""
        params, vids = self.arc_nodes[aid]
        i = int(np.searchsorted(params, s))
        if i < len(params) and abs(params[i] - s) <= SNAP:
            return vids[i]
        if i > 0 and abs(params[i - 1] - s) <= SNAP:
            return vids[i - 1]
        ch = self.spec.chart(aid)
        vid = -(len(extra) + 1)
        left, right = vids[i - 1], vids[i]
        extra[vid] = [
            (left, float(s - params[i - 1])),
            (right, float(params[i] - s)),
        ]
        extra.setdefault(left, []).append((vid, float(s - params[i - 1])))
        extra.setdefault(right, []).append((vid, float(params[i] - s)))
        return vid

    def distance(self, a, b, with_path=False):
        """Shortest-path length between (aid, s) addresses; inf if disconnected."""
        import heapq

        extra = {}
        va = self._attach(*a, extra)
        vb = self._attach(*b, extra)
        if a[0] == b[0] and va != vb:
            # same arc: the along-arc chord is a valid path in the complex
            w = abs(a[1] - b[1])
            extra.setdefault(va, []).append((vb, w))
            extra.setdefault(vb, []).append((va, w))
        if va == vb:
            if not with_path:
                return 0.0
            return 0.0, [self._vertex_coords(va, a)]
        dist = {va: 0.0}
        pred = {}
        pq = [(0.0, va)]
        while pq:
            d, u = heapq.heappop(pq)
            if d > dist.get(u, math.inf):
                continue
            if u == vb:
                break
            neigh = list(self.adj[u]) if u >= 0 else []
            neigh += extra.get(u, [])
            for v, w in neigh:
                nd = d + w
                if nd < dist.get(v, math.inf) - 0.0:
                    dist[v] = nd
                    pred[v] = u
                    heapq.heappush(pq, (nd, v))
        d = dist.get(vb, math.inf)
        if not with_path:
            return d
        if not math.isfinite(d):
            return d, []
        chain = [vb]
        while chain[-1] != va:
            chain.append(pred[chain[-1]])
        chain.reverse()
        pts = [self._vertex_coords(v, a if v == va else b if v == vb else None) for v in chain]
        return d, pts

    def _vertex_coords(self, vid, addr):
        if vid >= 0:
            return self.coords[vid].copy()
        aid, s = addr
        return self.spec.chart(aid).point_at(s)


def ecomplex(spec: ComplexSpec) -> EComplex:
    if spec._ecplx is None:
        spec._ecplx = EComplex(spec)
    return spec._ecplx


def induced_arc_distance(spec: ComplexSpec, p, q) -> float:
    """Length metric of the arc 1-complex between two points on it.

    Points are (piece id, (x, y)); inf when the points lie in different
    components of the complex.
    """
    ec = ecomplex(spec)
    return ec.distance(ec.locate(p[0], p[1]), ec.locate(q[0], q[1]))


# ---------------------------------------------------------------------------
# Sampling helpers shared with the verifier
# ---------------------------------------------------------------------------

def sample_point_in_piece(piece: Piece, rng) -> np.ndarray:
    if piece.kind == SEGMENT:
        s = piece.sides[0]
        return s.p0 + rng.uniform(0.0, s.length) * s.unit
    v = piece.vertices
    n = len(v)
    areas = []
    for i in range(1, n - 1):
        a = v[i] - v[0]
        b = v[i + 1] - v[0]
        areas.append(0.5 * abs(a[0] * b[1] - a[1] * b[0]))
    areas = np.asarray(areas)
    i = int(rng.choice(len(areas), p=areas / areas.sum())) + 1
    u, w = rng.uniform(), rng.uniform()
    if u + w > 1.0:
        u, w = 1.0 - u, 1.0 - w
    return v[0] + u * (v[i] - v[0]) + w * (v[i + 1] - v[0])


# ---------------------------------------------------------------------------
# Gluing isometry check
# ---------------------------------------------------------------------------

def _member_param(orient, length, t):
    return t if orient > 0 else length - t


def gluing_isometry_check(spec: ComplexSpec, samples: int = 200, seed: int = 0) -> ValidationReport:
    """Sample point pairs on the glued set and compare induced distances with
    their images under the identification maps.

    Members of unequal length are compared through constant-speed
    reparametrization, so length mismatches surface as metric distortion.
    """
    rng = np.random.default_rng(seed)
    ec = ecomplex(spec)
    out = []
    glued = [g for g in spec.gluings]
    if not glued:
        out.append(Finding("info", "ISOMETRY_OK", "no gluing classes to check", "scene"))
        return ValidationReport(out)

    def address(g, m, u):
        aid, orient = g.members[m]
        length = spec.chart(aid).length
        return aid, _member_param(orient, length, u * length)

    def image(g, m, u, r):
        if g.self_fold:
            aid, orient = g.members[0]
            length = spec.chart(aid).length
            t = u if orient > 0 else 1.0 - u
            t2 = 1.0 - t
            s = t2 if orient > 0 else 1.0 - t2
            return aid, s * length
        k = len(g.members)
        aid, orient = g.members[m]
        t = u if orient > 0 else 1.0 - u
        aid2, orient2 = g.members[(m + r) % k]
        length2 = spec.chart(aid2).length
        s = t if orient2 > 0 else 1.0 - t
        return aid2, s * length2

    max_shift = max(len(g.members) for g in glued)
    worst = 0.0
    worst_where = ""
    dists = []
    checked = 0
    for _ in range(samples):
        gi = int(rng.integers(len(glued)))
        gj = int(rng.integers(len(glued)))
        ga, gb = glued[gi], glued[gj]
        ma = int(rng.integers(len(ga.members)))
        mb = int(rng.integers(len(gb.members)))
        ua, ub = float(rng.uniform()), float(rng.uniform())
        base = ec.distance(address(ga, ma, ua), address(gb, mb, ub))
        if math.isfinite(base):
            dists.append(base)
        shifts = range(1, max(2, max_shift))
        for r in shifts:
            da = ec.distance(image(ga, ma, ua, r), image(gb, mb, ub, r))
            if math.isinf(base) and math.isinf(da):
                continue
            dev = abs(da - base) if math.isfinite(base) and math.isfinite(da) else math.inf
            checked += 1
            if dev > worst:
                worst = dev
                worst_where = (
                    f"classes {ga.cid},{gb.cid} members {ma},{mb} shift {r}"
                )
    scale = max(dists) if dists else max(spec.chart(a.aid).length for a in spec.arcs)
    scale = max(scale, SNAP)
    if worst > 1e-6 * scale:
        out.append(
            Finding(
                "error",
                "ISOMETRY_VIOLATION",
                f"induced distances deviate by {worst:.6g} (> 1e-6 * {scale:.6g}) at {worst_where}",
                "scene",
            )
        )
    else:
        out.append(
            Finding(
                "info",
                "ISOMETRY_OK",
                f"{checked} image comparisons within 1e-6 * diameter ({worst:.3g} worst)",
                "scene",
            )
        )
    return ValidationReport(out)
