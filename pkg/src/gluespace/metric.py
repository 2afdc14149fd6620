"""The computational glued metric.

The glued set is sampled at spacing h; sample classes become graph nodes
whose edges are straight chords inside shared pieces (chords are interior
because pieces are convex).  Glued distances and hop-bounded predistances
are shortest paths over that graph, evaluated with the min-plus kernels;
every returned value overestimates the true glued distance by at most
(k+1)*h, where k is the number of crossings of the returned path.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DomainError
from .model import SNAP, ComplexSpec, snap_key, validate

HOP_INF = kernels.HOP_INF


@dataclass(eq=False)
class Rep:
    """One pre-image of a node class: a point of one piece."""

    piece: int
    xy: np.ndarray
    arc_params: tuple  # ((arc id, arclength param), ...)


@dataclass(eq=False)
class NodeClass:
    nid: int
    reps: tuple
    on_e: bool


@dataclass(eq=False)
class Loc:
    """A located query point: piece index plus planar coordinates."""

    piece: int
    xy: np.ndarray

    def key(self):
        return (self.piece, float(self.xy[0]), float(self.xy[1]))


@dataclass(eq=False)
class Leg:
    piece: int
    a: np.ndarray
    b: np.ndarray
    length: float


@dataclass(eq=False)
class GeodesicPath:
    """A polyline realizing a graph shortest path: legs inside pieces,
    consecutive legs joined at crossing node classes on the glued set."""

    total_length: float
    legs: list
    crossings: list  # NodeClass per interior crossing
    err_bound: float

    def point_at(self, t):
        """(piece index, xy) at arclength t along the path."""
        t = min(max(t, 0.0), self.total_length)
        acc = 0.0
        for leg in self.legs:
            if t <= acc + leg.length or leg is self.legs[-1]:
                u = 0.0 if leg.length == 0 else (t - acc) / leg.length
                u = min(max(u, 0.0), 1.0)
                return leg.piece, leg.a + u * (leg.b - leg.a)
            acc += leg.length
        leg = self.legs[-1]
        return leg.piece, leg.b.copy()

    def crossing_params(self):
        acc = 0.0
        out = []
        for leg in self.legs[:-1]:
            acc += leg.length
            out.append(acc)
        return out


def _cluster(values, tol=SNAP):
    """Sorted representatives of values, merging groups within tol."""
    vals = np.sort(np.asarray(values, dtype=float))
    reps = []
    for v in vals:
        if not reps or v - reps[-1] > tol:
            reps.append(float(v))
    return reps


def _canon(sorted_vals, v, tol=SNAP):
    """Nearest element of sorted_vals within tol, else v itself."""
    i = int(np.searchsorted(sorted_vals, v))
    best = v
    err = tol
    for j in (i - 1, i):
        if 0 <= j < len(sorted_vals):
            d = abs(sorted_vals[j] - v)
            if d <= err:
                best = float(sorted_vals[j])
                err = d
    return best


class _UnionFind:
    def __init__(self):
        self.parent = []

    def add(self):
        self.parent.append(len(self.parent))
        return len(self.parent) - 1

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


class DiscretizedComplex:
    """Immutable sampled model of the glued space at spacing h."""

    def __init__(self, spec: ComplexSpec, h: float, nodes):
        self.spec = spec
        self.h = float(h)
        self.nodes = nodes
        n = len(nodes)
        rep_piece = []
        rep_xy = []
        rep_node = []
        for node in nodes:
            for rep in node.reps:
                rep_piece.append(rep.piece)
                rep_xy.append(rep.xy)
                rep_node.append(node.nid)
        self.rep_piece = np.asarray(rep_piece, dtype=np.int64)
        self.rep_xy = np.asarray(rep_xy, dtype=float).reshape(-1, 2)
        self.rep_node = np.asarray(rep_node, dtype=np.int64)
        self._piece_reps = {
            p: np.flatnonzero(self.rep_piece == p) for p in range(len(spec.pieces))
        }
        self.W = np.full((n, n), np.inf, dtype=np.float64)
        np.fill_diagonal(self.W, 0.0)
        for p, idx in self._piece_reps.items():
            if len(idx) == 0:
                continue
            xy = self.rep_xy[idx]
            nids = self.rep_node[idx]
            diff = xy[:, None, :] - xy[None, :, :]
            dist = np.hypot(diff[..., 0], diff[..., 1])
            np.minimum.at(self.W, (nids[:, None], nids[None, :]), dist)
        self.WH = np.where(np.isfinite(self.W), np.int64(1), HOP_INF)
        np.fill_diagonal(self.WH, 0)
        self._fw = None
        self._key_to_node = {}
        for node in nodes:
            for rep in node.reps:
                self._key_to_node[snap_key(rep.piece, rep.xy)] = node.nid

    # -- basic queries -----------------------------------------------------

    @property
    def n_nodes(self):
        return len(self.nodes)

    def locate(self, point) -> Loc:
        """Resolve (piece id, (x, y)) to a located point inside that piece."""
        if isinstance(point, Loc):
            return point
        pid, xy = point
        piece_idx = self.spec.piece_index(pid)
        xy = np.asarray(xy, dtype=float)
        if not self.spec.pieces[piece_idx].contains(xy, tol=1e-7):
            raise DomainError(f"point {tuple(xy)} outside piece {pid}")
        return Loc(piece_idx, xy)

    def node_of_point(self, loc: Loc):
        """Node id whose class contains this exact sampled point, if any."""
        return self._key_to_node.get(snap_key(loc.piece, loc.xy))

    def chords(self, loc: Loc):
        """Chord distances from a point to every node class (inf if no shared piece)."""
        dx = np.full(self.n_nodes, np.inf, dtype=np.float64)
        idx = self._piece_reps.get(loc.piece)
        if idx is not None and len(idx):
            d = np.hypot(*(self.rep_xy[idx] - loc.xy).T)
            np.minimum.at(dx, self.rep_node[idx], d)
        return dx

    def d0(self, a: Loc, b: Loc) -> float:
        if a.piece != b.piece:
            return math.inf
        return float(np.hypot(*(a.xy - b.xy)))

    def fw(self):
        """All-pairs shortest paths over node classes (cached)."""
        if self._fw is None:
            d = self.W.copy()
            h = self.WH.copy().astype(np.int64)
            kernels.floyd_warshall(d, h)
            self._fw = (d, h)
        return self._fw

    # -- distances ---------------------------------------------------------

    def _ordered(self, x, y):
        a, b = self.locate(x), self.locate(y)
        if b.key() < a.key():
            a, b = b, a
        return a, b

    def predistance(self, x, y, m: int) -> float:
        """Glued distance through at most m crossing points of the sampled set."""
        if m < 0:
            raise DomainError("m must be >= 0")
        a, b = self._ordered(x, y)
        d0 = self.d0(a, b)
        if m == 0 or self.n_nodes == 0:
            return d0
        bval = self.chords(a)[None, :]
        bhop = np.where(np.isfinite(bval), np.int64(1), HOP_INF)
        for _ in range(m - 1):
            bval, bhop = kernels.minplus_product(bval, bhop, self.W, self.WH)
        dy = self.chords(b)[None, :]
        zero = np.zeros_like(bhop)
        vals, _ = kernels.combine_pairs(bval, bhop, dy, zero, np.zeros(1, np.int64), np.zeros(1, np.int64))
        return float(min(d0, vals[0]))

    def predistance_profile(self, x, y, m_max: int):
        """predistance for every m in 0..m_max, reusing the relaxation layers."""
        a, b = self._ordered(x, y)
        d0 = self.d0(a, b)
        out = [d0]
        if self.n_nodes == 0:
            return [d0] * (m_max + 1)
        bval = self.chords(a)[None, :]
        bhop = np.where(np.isfinite(bval), np.int64(1), HOP_INF)
        dy = self.chords(b)[None, :]
        zero = np.zeros_like(bhop)
        z = np.zeros(1, np.int64)
        for m in range(1, m_max + 1):
            if m > 1:
                bval, bhop = kernels.minplus_product(bval, bhop, self.W, self.WH)
            vals, _ = kernels.combine_pairs(bval, bhop, dy, zero, z, z)
            out.append(float(min(d0, vals[0])))
        return out

    def _stabilized(self, a: Loc):
        bval = self.chords(a)[None, :]
        bhop = np.where(np.isfinite(bval), np.int64(1), HOP_INF)
        for _ in range(self.n_nodes + 2):
            nval, nhop = kernels.minplus_product(bval, bhop, self.W, self.WH)
            if np.array_equal(nval, bval) and np.array_equal(nhop, bhop):
                break
            bval, bhop = nval, nhop
        return bval, bhop

    def distance(self, x, y):
        """(value, error bound): value is within [true, true + (k+1)h]."""
        a, b = self._ordered(x, y)
        if a.piece == b.piece and a.xy[0] == b.xy[0] and a.xy[1] == b.xy[1]:
            return 0.0, 0.0
        d0 = self.d0(a, b)
        if self.n_nodes == 0:
            return d0, 0.0
        bval, bhop = self._stabilized(a)
        dy = self.chords(b)[None, :]
        zero = np.zeros_like(bhop)
        z = np.zeros(1, np.int64)
        vals, hops = kernels.combine_pairs(bval, bhop, dy, zero, z, z)
        gval, ghop = float(vals[0]), int(hops[0])
        if d0 <= gval:
            return d0, self.h
        return gval, (ghop + 1) * self.h

    def distances_batch(self, locs, pairs):
        """Batched glued distances via cached all-pairs data.

        locs: list of Loc; pairs: (m, 2) int array of indices into locs.
        Returns (values, error bounds).  Pair order is canonicalized
        internally so results are symmetric and deterministic.
        """
        pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
        keys = [loc.key() for loc in locs]
        ia = pairs[:, 0].copy()
        ib = pairs[:, 1].copy()
        for r in range(len(pairs)):
            if keys[ib[r]] < keys[ia[r]]:
                ia[r], ib[r] = ib[r], ia[r]
        k = len(locs)
        dx = np.empty((k, self.n_nodes), dtype=np.float64)
        for i, loc in enumerate(locs):
            dx[i] = self.chords(loc)
        hx = np.where(np.isfinite(dx), np.int64(1), HOP_INF)
        d, hd = self.fw()
        tval, thop = kernels.minplus_product(dx, hx, d, hd)
        zeros = np.zeros_like(hx)
        gvals, ghops = kernels.combine_pairs(tval, thop, dx, zeros, ia, ib)
        vals = np.empty(len(pairs), dtype=np.float64)
        errs = np.empty(len(pairs), dtype=np.float64)
        for r in range(len(pairs)):
            a, b = locs[ia[r]], locs[ib[r]]
            if a.piece == b.piece and a.xy[0] == b.xy[0] and a.xy[1] == b.xy[1]:
                vals[r], errs[r] = 0.0, 0.0
                continue
            d0 = self.d0(a, b)
            if d0 <= gvals[r]:
                vals[r], errs[r] = d0, self.h
            else:
                vals[r], errs[r] = gvals[r], (ghops[r] + 1) * self.h
        return vals, errs

    # -- explicit paths ----------------------------------------------------

    def shortest_path(self, x, y) -> GeodesicPath:
        """A geodesic polyline realizing the graph distance.

        Ties are broken by fewest crossings, then by smaller node ids along
        the path.
        """
        a, b = self.locate(x), self.locate(y)
        n = self.n_nodes
        src, dst = n, n + 1
        dx, dy = self.chords(a), self.chords(b)
        d0 = self.d0(a, b)
        big = (math.inf, HOP_INF, -1)
        best = [big] * (n + 2)
        best[src] = (0.0, 0, -1)
        pq = [(0.0, 0, src)]
        seen = [False] * (n + 2)
        while pq:
            dist_u, hops_u, u = heapq.heappop(pq)
            if seen[u] or (dist_u, hops_u) > best[u][:2]:
                continue
            seen[u] = True
            if u == dst:
                break
            if u == src:
                cand = [(j, dx[j], 1) for j in range(n) if np.isfinite(dx[j])]
                if np.isfinite(d0):
                    cand.append((dst, d0, 0))
            else:
                row = self.W[u]
                cand = [(j, row[j], 1) for j in range(n) if j != u and np.isfinite(row[j])]
                if np.isfinite(dy[u]):
                    cand.append((dst, dy[u], 0))
            for v, w, dh in cand:
                nd, nh = dist_u + w, hops_u + dh
                cur = best[v]
                if (nd, nh, u) < cur:
                    best[v] = (nd, nh, u)
                    heapq.heappush(pq, (nd, nh, v))
        if not math.isfinite(best[dst][0]):
            raise DomainError("points are not connected in the glued space")
        chain = [dst]
        while chain[-1] != src:
            chain.append(best[chain[-1]][2])
        chain.reverse()
        node_seq = chain[1:-1]
        legs = []
        crossings = [self.nodes[u] for u in node_seq]
        if not node_seq:
            legs.append(Leg(a.piece, a.xy.copy(), b.xy.copy(), d0))
        else:
            first = crossings[0]
            end = self._best_rep(first, a.piece, a.xy)
            legs.append(Leg(a.piece, a.xy.copy(), end, float(np.hypot(*(end - a.xy)))))
            for u, v in zip(crossings, crossings[1:]):
                piece, pu, pv, d = self._leg_pair(u, v)
                legs.append(Leg(piece, pu, pv, d))
            last = crossings[-1]
            start = self._best_rep(last, b.piece, b.xy)
            legs.append(Leg(b.piece, start, b.xy.copy(), float(np.hypot(*(b.xy - start)))))
        total = sum(leg.length for leg in legs)
        k = len(crossings)
        return GeodesicPath(total, legs, crossings, (k + 1) * self.h)

    def _best_rep(self, node: NodeClass, piece: int, from_xy):
        best = None
        best_d = math.inf
        for rep in node.reps:
            if rep.piece != piece:
                continue
            d = float(np.hypot(*(rep.xy - from_xy)))
            if d < best_d:
                best, best_d = rep.xy, d
        if best is None:
            raise DomainError("crossing node has no representative in the leg piece")
        return best.copy()

    def _leg_pair(self, u: NodeClass, v: NodeClass):
        """Representative pair realizing the chord edge between two classes."""
        best = None
        for ru in u.reps:
            for rv in v.reps:
                if ru.piece != rv.piece:
                    continue
                d = float(np.hypot(*(ru.xy - rv.xy)))
                if best is None or d < best[3]:
                    best = (ru.piece, ru.xy.copy(), rv.xy.copy(), d)
        if best is None:
            raise DomainError("consecutive crossings share no piece")
        return best

    def nodes_within(self, nid: int, radius: float):
        d, _ = self.fw()
        return np.flatnonzero(d[nid] <= radius)


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------

def _sampling_units(spec: ComplexSpec):
    units = []
    claimed = set()
    for g in spec.gluings:
        units.append((tuple(g.members), g.self_fold))
        claimed.update(aid for aid, _ in g.members)
    for arc in spec.arcs:
        if arc.aid not in claimed:
            units.append((((arc.aid, 1),), False))
    return units


def discretize(spec: ComplexSpec, h: float) -> DiscretizedComplex:
    """Sample the glued set at spacing h and build the chord graph.

    Corners, arc endpoints and fold fixed points are always samples; every
    gluing-class parameter is pushed through all member charts so each node
    class carries its full pre-image set.
    """
    if h <= 0:
        raise DomainError("h must be positive")
    report = validate(spec)
    if report.status == "invalid":
        msgs = "; ".join(f.message for f in report.findings if f.severity == "error")
        raise DomainError(f"invalid spec: {msgs}")
    positive = [spec.chart(a.aid).length for a in spec.arcs if spec.chart(a.aid).length > SNAP]
    if positive and h > min(positive) + SNAP:
        raise DomainError(f"h={h} exceeds the shortest arc length {min(positive):.6g}")

    uf = _UnionFind()
    recs = []  # (piece, xy, (aid, s))
    key_first = {}

    def add_rep(piece_idx, xy, aid, s):
        idx = uf.add()
        recs.append((piece_idx, xy, aid, s))
        key = snap_key(piece_idx, xy)
        if key in key_first:
            uf.union(idx, key_first[key])
        else:
            key_first[key] = idx
        return idx

    for members, fold in _sampling_units(spec):
        charts = {aid: spec.chart(aid) for aid, _ in members}
        length = charts[members[0][0]].length
        raw = []
        if length > SNAP:
            steps = max(1, int(math.ceil(length / h - 1e-12)))
            raw.extend(np.linspace(0.0, length, steps + 1))
        else:
            raw.append(0.0)
        for aid, orient in members:
            for b in charts[aid].breaks:
                t = b if orient > 0 else length - b
                raw.append(t)
                if fold:
                    raw.append(length - t)
        params = _cluster(raw)
        if fold:
            extra = []
            for t in params:
                m = _canon(params, length - t)
                if m == length - t and not any(abs(m - q) <= SNAP for q in params):
                    extra.append(m)
            if extra:
                params = _cluster(params + extra)
        sorted_params = np.asarray(params)
        for t in params:
            entry = []
            for aid, orient in members:
                ch = charts[aid]
                s = _canon(ch.breaks, t if orient > 0 else length - t)
                entry.append((ch.piece_idx, ch.point_at(s), aid, s))
            if fold:
                aid, orient = members[0]
                ch = charts[aid]
                tm = _canon(sorted_params, length - t)
                sm = _canon(ch.breaks, tm)
                entry.append((ch.piece_idx, ch.point_at(sm), aid, sm))
            idxs = [add_rep(*e) for e in entry]
            for other in idxs[1:]:
                uf.union(idxs[0], other)

    groups = {}
    for i in range(len(recs)):
        groups.setdefault(uf.find(i), []).append(i)

    proto = []
    for root, members_idx in groups.items():
        reps = {}
        for i in members_idx:
            piece_idx, xy, aid, s = recs[i]
            key = snap_key(piece_idx, xy)
            if key not in reps:
                reps[key] = (piece_idx, xy, {})
            reps[key][2][(aid, round(s / SNAP))] = (aid, s)
        rep_objs = []
        for key in sorted(reps):
            piece_idx, xy, aps = reps[key]
            arc_params = tuple(aps[k] for k in sorted(aps))
            rep_objs.append(Rep(piece_idx, np.asarray(xy, dtype=float), arc_params))
        proto.append((min(snap_key(r.piece, r.xy) for r in rep_objs), rep_objs))
    proto.sort(key=lambda item: item[0])
    nodes = [
        NodeClass(nid, tuple(reps), True) for nid, (_, reps) in enumerate(proto)
    ]
    return DiscretizedComplex(spec, h, nodes)


def node_at(spec: ComplexSpec, point) -> NodeClass:
    """Exact equivalence class of a point under the gluing (no sampling).

    The orbit is closed under every gluing class whose arcs pass through
    the accumulated points; arc incidences are recorded per representative.
    """
    pid, xy = point
    piece_idx = spec.piece_index(pid)
    xy = np.asarray(xy, dtype=float)
    todo = [(piece_idx, xy)]
    seen = {}
    while todo:
        p, q = todo.pop()
        key = snap_key(p, q)
        if key in seen:
            continue
        incidences = []
        for arc in spec.arcs:
            ch = spec.chart(arc.aid)
            if ch.piece_idx != p:
                continue
            s = ch.locate(q, tol=1e-9)
            if s is None:
                continue
            incidences.append((arc.aid, s))
            cls = spec.class_of_arc(arc.aid)
            if cls is None:
                continue
            g, m = cls
            length = ch.length
            aid, orient = g.members[m]
            t = s if orient > 0 else length - s
            images = []
            if g.self_fold:
                images.append((aid, orient, length - t))
            else:
                for aid2, orient2 in g.members:
                    images.append((aid2, orient2, t))
            for aid2, orient2, t2 in images:
                ch2 = spec.chart(aid2)
                s2 = _canon(ch2.breaks, t2 if orient2 > 0 else length - t2)
                todo.append((ch2.piece_idx, ch2.point_at(s2)))
        seen[key] = (p, q, tuple(incidences))
    reps = []
    for key in sorted(seen):
        p, q, inc = seen[key]
        reps.append(Rep(p, np.asarray(q, dtype=float), inc))
    on_e = any(r.arc_params for r in reps)
    return NodeClass(-1, tuple(reps), on_e)
