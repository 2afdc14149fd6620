"""Exact spaces of directions at glued boundary points of 2D scenes.

The link of a point class is built from one planar sector per pre-image
(interior angle pi on a side, the corner angle at a vertex) whose endpoint
directions are identified exactly when the corresponding boundary germs
are equated by a gluing chart.  Everything here is closed form; nothing
depends on the sampling spacing h.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, UnsupportedSceneError
from .metric import NodeClass, _canon
from .model import SNAP, ComplexSpec, snap_key

TWO_PI = 2.0 * math.pi
LENGTH_TOL = 1e-9


@dataclass(eq=False)
class Sector:
    """The space of directions of one pre-image point inside its piece."""

    piece: int
    point: np.ndarray
    angle: float
    end_dirs: tuple  # (unit vector at offset 0, unit vector at offset angle)


@dataclass(eq=False)
class LinkSpace:
    sectors: list
    endpoint_classes: list  # lists of (sector index, end index 0|1)
    kind: str  # "circle" | "interval" | "graph"
    length: float
    description: str

    def sector_index(self, piece, point):
        key = snap_key(piece, point)
        for i, s in enumerate(self.sectors):
            if snap_key(s.piece, s.point) == key:
                return i
        raise DomainError("no sector at the given pre-image point")


@dataclass(frozen=True)
class DirectionPoint:
    sector: int
    offset: float


@dataclass(frozen=True)
class LinkVerdict:
    ok: bool
    reason: str
    limit: float


def _sector_at(spec: ComplexSpec, piece_idx: int, xy) -> Sector:
    piece = spec.pieces[piece_idx]
    if piece.kind != "polygon2d":
        raise UnsupportedSceneError("links are defined for 2D scenes only")
    xy = np.asarray(xy, dtype=float)
    for i, v in enumerate(piece.vertices):
        if np.hypot(*(xy - v)) <= LENGTH_TOL:
            n = len(piece.vertices)
            d0 = -piece.sides[(i - 1) % n].unit
            d1 = piece.sides[i].unit
            return Sector(piece_idx, xy, piece.corner_angle(i), (d0, d1))
    for s in piece.sides:
        t = float(np.dot(xy - s.p0, s.unit))
        if -LENGTH_TOL <= t <= s.length + LENGTH_TOL:
            off = xy - (s.p0 + t * s.unit)
            if np.hypot(off[0], off[1]) <= LENGTH_TOL:
                return Sector(piece_idx, xy, math.pi, (-s.unit, s.unit))
    return Sector(piece_idx, xy, TWO_PI, (np.array([1.0, 0.0]), np.array([1.0, 0.0])))


def _slot_of(sectors, rep_index_by_key, piece, xy, vec):
    idx = rep_index_by_key.get(snap_key(piece, xy))
    if idx is None:
        # snap keys can straddle a rounding boundary; fall back to search
        for i, s in enumerate(sectors):
            if s.piece == piece and np.hypot(*(s.point - xy)) <= 1e-7:
                idx = i
                break
    if idx is None:
        raise DomainError("germ point is not a representative of the node")
    sec = sectors[idx]
    best, best_dot = None, -2.0
    for e in (0, 1):
        d = float(np.dot(sec.end_dirs[e], vec))
        if d > best_dot:
            best, best_dot = e, d
    if best_dot < 1.0 - 1e-7:
        raise DomainError("boundary germ does not match a sector endpoint")
    return 2 * idx + best


def build_link(spec: ComplexSpec, node: NodeClass) -> LinkSpace:
    """Glued space of directions at a node class of a 2D scene."""
    if not node.reps:
        raise DomainError("empty node class")
    sectors = []
    rep_index_by_key = {}
    for i, rep in enumerate(node.reps):
        sectors.append(_sector_at(spec, rep.piece, rep.xy))
        rep_index_by_key[snap_key(rep.piece, rep.xy)] = i

    parent = list(range(2 * len(sectors)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    # interior point: the two nominal endpoints of the full 2*pi sector meet
    if len(node.reps) == 1 and sectors[0].angle == TWO_PI:
        union(0, 1)

    # collect class parameters present at this node, per gluing class
    incidences = {}
    for rep in node.reps:
        for aid, s in rep.arc_params:
            cls = spec.class_of_arc(aid)
            if cls is None:
                continue
            g, m = cls
            length = spec.chart(aid).length
            _, orient = g.members[m]
            t = s if orient > 0 else length - s
            incidences.setdefault(g.cid, set()).add(round(t / SNAP))
    class_by_id = {g.cid: g for g in spec.gluings}

    def germ_slot(g, member, t, sign):
        """Slot of the class-forward (+1) or class-backward (-1) germ of a member."""
        aid, orient = member
        ch = spec.chart(aid)
        length = ch.length
        s = _canon(ch.breaks, t if orient > 0 else length - t)
        vec = ch.germ(s, sign * orient)
        if vec is None:
            return None
        return _slot_of(sectors, rep_index_by_key, ch.piece_idx, ch.point_at(s), vec)

    for cid in sorted(incidences):
        g = class_by_id[cid]
        length = spec.chart(g.members[0][0]).length
        for tkey in sorted(incidences[cid]):
            t = tkey * SNAP
            if g.self_fold:
                member = g.members[0]
                for sign in (1, -1):
                    a = germ_slot(g, member, t, sign)
                    b = germ_slot(g, member, length - t, -sign)
                    if a is not None and b is not None:
                        union(a, b)
            else:
                for sign in (1, -1):
                    slots = [germ_slot(g, mem, t, sign) for mem in g.members]
                    slots = [x for x in slots if x is not None]
                    for other in slots[1:]:
                        union(slots[0], other)

    groups = {}
    for slot in range(2 * len(sectors)):
        groups.setdefault(find(slot), []).append(slot)
    classes = [
        [(slot // 2, slot % 2) for slot in groups[r]] for r in sorted(groups)
    ]
    kind, desc = _classify(sectors, classes)
    length = float(sum(s.angle for s in sectors))
    return LinkSpace(sectors, classes, kind, length, desc)


def _classify(sectors, classes):
    degs = [len(c) for c in classes]
    slot_class = {}
    for ci, c in enumerate(classes):
        for slot in c:
            slot_class[slot] = ci
    # connectivity over endpoint classes through sectors
    adj = {ci: set() for ci in range(len(classes))}
    for si in range(len(sectors)):
        a, b = slot_class[(si, 0)], slot_class[(si, 1)]
        adj[a].add(b)
        adj[b].add(a)
    seen = set()
    stack = [0]
    while stack:
        u = stack.pop()
        if u in seen:
            continue
        seen.add(u)
        stack.extend(adj[u] - seen)
    connected = len(seen) == len(classes)
    if connected and all(d == 2 for d in degs) and len(classes) == len(sectors):
        return "circle", f"circle of {len(sectors)} sectors"
    if connected and sorted(degs) == [1, 1] + [2] * (len(classes) - 2):
        return "interval", f"interval of {len(sectors)} sectors"
    desc = f"{len(classes)} nodes, {len(sectors)} edges"
    if not connected:
        desc += ", disconnected"
    return "graph", desc


def classify_and_judge(link: LinkSpace) -> LinkVerdict:
    """Local curvature verdict: a 1D space of directions with curvature >= 1
    must be a circle of length <= 2*pi or an interval of length <= pi."""
    if link.kind == "circle":
        ok = link.length <= TWO_PI + LENGTH_TOL
        return LinkVerdict(ok, f"circle({link.length:.10g})", TWO_PI)
    if link.kind == "interval":
        ok = link.length <= math.pi + LENGTH_TOL
        return LinkVerdict(ok, f"interval({link.length:.10g})", math.pi)
    return LinkVerdict(False, f"graph({link.description})", math.nan)


def locate_direction(link: LinkSpace, piece, point, vec) -> DirectionPoint:
    """Position of a unit direction inside the sector of (piece, point)."""
    si = link.sector_index(piece, point)
    sec = link.sectors[si]
    vec = np.asarray(vec, dtype=float)
    vec = vec / np.hypot(vec[0], vec[1])
    if sec.angle > math.pi:
        d0 = sec.end_dirs[0]
        ang = math.atan2(
            d0[0] * vec[1] - d0[1] * vec[0], float(np.dot(d0, vec))
        )
        return DirectionPoint(si, ang % TWO_PI)
    a0 = math.acos(float(np.clip(np.dot(sec.end_dirs[0], vec), -1, 1)))
    a1 = math.acos(float(np.clip(np.dot(sec.end_dirs[1], vec), -1, 1)))
    if abs(a0 + a1 - sec.angle) > 1e-6:
        raise DomainError("direction outside its sector")
    return DirectionPoint(si, a0)


def link_distance(link: LinkSpace, u: DirectionPoint, v: DirectionPoint) -> float:
    """Exact shortest arc length between two directions in the glued link."""
    slot_class = {}
    for ci, c in enumerate(link.endpoint_classes):
        for slot in c:
            slot_class[slot] = ci
    n = len(link.endpoint_classes)
    uid, vid = n, n + 1
    adj = {i: [] for i in range(n + 2)}

    def edge(a, b, w):
        adj[a].append((b, w))
        adj[b].append((a, w))

    for si, sec in enumerate(link.sectors):
        edge(slot_class[(si, 0)], slot_class[(si, 1)], sec.angle)
    for pid, dp in ((uid, u), (vid, v)):
        sec = link.sectors[dp.sector]
        edge(pid, slot_class[(dp.sector, 0)], dp.offset)
        edge(pid, slot_class[(dp.sector, 1)], sec.angle - dp.offset)
    if u.sector == v.sector:
        edge(uid, vid, abs(u.offset - v.offset))
    dist = {uid: 0.0}
    pq = [(0.0, uid)]
    while pq:
        d, x = heapq.heappop(pq)
        if d > dist.get(x, math.inf):
            continue
        if x == vid:
            return d
        for y, w in adj[x]:
            nd = d + w
            if nd < dist.get(y, math.inf):
                dist[y] = nd
                heapq.heappush(pq, (nd, y))
    return math.inf


def sample_directions(link: LinkSpace, step=0.05):
    """Grid of directions covering every sector, endpoints included."""
    out = []
    for si, sec in enumerate(link.sectors):
        k = max(2, int(math.ceil(sec.angle / step)) + 1)
        for off in np.linspace(0.0, sec.angle, k):
            out.append(DirectionPoint(si, float(off)))
    return out


def catalog_links(spec: ComplexSpec):
    """Links at every structurally distinct boundary class: arc endpoints,
    corners, fold fixed points, and one generic interior parameter between
    consecutive critical ones.  Returns (label, node, link, verdict) tuples."""
    if spec.scene_dim() != 2:
        raise UnsupportedSceneError("link catalog needs a 2D scene")
    from .metric import node_at

    units = []
    claimed = set()
    for g in spec.gluings:
        units.append((g.cid, tuple(g.members), g.self_fold))
        claimed.update(aid for aid, _ in g.members)
    for arc in spec.arcs:
        if arc.aid not in claimed:
            units.append((arc.aid, ((arc.aid, 1),), False))

    out = []
    seen_nodes = set()
    for label, members, fold in units:
        ch0 = spec.chart(members[0][0])
        length = ch0.length
        criticals = set()
        for aid, orient in members:
            for b in spec.chart(aid).breaks:
                t = b if orient > 0 else length - b
                criticals.add(round(t / SNAP))
                if fold:
                    criticals.add(round((length - t) / SNAP))
        if fold:
            criticals.add(round((length / 2.0) / SNAP))
        crit = sorted(k * SNAP for k in criticals)
        probes = list(crit)
        for a, b in zip(crit, crit[1:]):
            if b - a > 10 * SNAP:
                probes.append(0.5 * (a + b))
        probes.sort()
        aid0, orient0 = members[0]
        for t in probes:
            s = _canon(ch0.breaks, t if orient0 > 0 else length - t)
            pt = ch0.point_at(s)
            pid = spec.pieces[ch0.piece_idx].pid
            node = node_at(spec, (pid, pt))
            key = tuple(snap_key(r.piece, r.xy) for r in node.reps)
            if key in seen_nodes:
                continue
            seen_nodes.add(key)
            link = build_link(spec, node)
            verdict = classify_and_judge(link)
            out.append((f"{label}@{t:.9g}", node, link, verdict))
    return out
