"""Numerical curvature-bound verification on the glued space.

The verifier is a refuter: it samples quadruples (biased toward the glued
set, where gluing can break the bound), tests the comparison-angle sum,
re-tests raw failures down a refinement schedule of sample spacings, and
certifies only failures that persist at every spacing.  Quasigeodesic
checks (comparison-angle monotonicity, the four-point comparison for
boundary geodesics, antipodality of crossing directions) propagate the
one-sided distance error bounds into interval bounds on angles, so a
failure verdict is sound with respect to the reported bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .comparison import comparison_angle_batch, d_kappa, model_side
from .errors import DomainError
from .links import build_link, classify_and_judge, link_distance, locate_direction, sample_directions
from .metric import DiscretizedComplex, GeodesicPath, Loc, discretize
from .model import sample_point_in_piece

TWO_PI = 2.0 * math.pi

# distance values carry one-sided error: value in [true, true + err]
APEX_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (2, 3), (3, 1))


@dataclass
class VerifierConfig:
    sample_count: int = 2000
    seed: int = 0
    h_schedule: tuple = (0.02, 0.01, 0.005)
    angle_tolerance_factor: float = 4.0
    bias_fraction: float = 0.7
    focus_radius: float | None = None  # apex offset from the glued set; default 5h
    companion_spread: float | None = None  # quadruple extent; default 0.35 * max piece diameter

    def __post_init__(self):
        hs = tuple(self.h_schedule)
        if not hs or any(b >= a for a, b in zip(hs, hs[1:])) or min(hs) <= 0:
            raise DomainError("h_schedule must be strictly decreasing and positive")
        self.h_schedule = hs


@dataclass
class Quadruple:
    """Four points, apex first, with their six glued distances and bounds."""

    points: tuple  # four (pid, (x, y))
    values: np.ndarray  # six, ordered like APEX_PAIRS
    errors: np.ndarray


@dataclass
class ViolationCertificate:
    kind: str  # quadruple | monotonicity | liberman | diameter | link
    data: dict
    tolerance: float
    margin: float
    refinement: list = field(default_factory=list)  # [(h, margin), ...]


@dataclass
class VerifyReport:
    kappa: float
    config: VerifierConfig
    counts: dict
    certificates: list


@dataclass
class CheckResult:
    status: str  # pass | fail | skipped
    margin: float = 0.0
    detail: dict = field(default_factory=dict)


def make_quadruple(dc: DiscretizedComplex, points) -> Quadruple:
    locs = [dc.locate(p) for p in points]
    vals, errs = dc.distances_batch(locs, np.asarray(APEX_PAIRS))
    return Quadruple(tuple(points), vals, errs)


def _quad_angles(kappa, values, clamp=True):
    a_bc, a_cd, a_db = values[3], values[4], values[5]
    ab, ac, ad = values[0], values[1], values[2]
    opp = np.asarray([a_bc, a_cd, a_db])
    left = np.asarray([ab, ac, ad])
    right = np.asarray([ac, ad, ab])
    return comparison_angle_batch(kappa, opp, left, right, clamp=clamp)


def _eval_quadruple(kappa, values, errors, h, factor):
    """(status, margin, tol, angle sum) under the propagated tolerance."""
    if not np.all(np.isfinite(values)):
        return "skipped", 0.0, 0.0, 0.0
    mind = float(np.min(values))
    if mind < 10.0 * h:
        return "discarded", 0.0, 0.0, 0.0
    if kappa > 0.0 and float(np.max(values)) >= d_kappa(kappa) - 10.0 * h:
        return "skipped", 0.0, 0.0, 0.0
    angles = _quad_angles(kappa, values)
    total = float(np.sum(angles))
    margin = total - TWO_PI
    tol = factor * float(np.sum(errors)) / mind
    status = "fail" if margin > tol else "pass"
    return status, margin, tol, total


def quadruple_test(dc: DiscretizedComplex, kappa, quad: Quadruple, tol=None) -> CheckResult:
    """Comparison-angle sum test at the apex of one quadruple."""
    status, margin, formula_tol, total = _eval_quadruple(
        kappa, quad.values, quad.errors, dc.h, 4.0
    )
    if status in ("skipped", "discarded"):
        return CheckResult("skipped", detail={"reason": status})
    use_tol = formula_tol if tol is None else float(tol)
    status = "fail" if margin > use_tol else "pass"
    return CheckResult(status, margin, {"tol": use_tol, "angle_sum": total})


# ---------------------------------------------------------------------------
# Quadruple sampling
# ---------------------------------------------------------------------------

def _offset_into_piece(piece, origin, rng, radius, r_min=0.0):
    r = rng.uniform(r_min, max(radius, r_min))
    for _ in range(8):
        theta = rng.uniform(0.0, TWO_PI)
        xy = origin + r * np.array([math.cos(theta), math.sin(theta)])
        if piece.kind == "segment1d":
            s = piece.sides[0]
            t = float(np.dot(xy - s.p0, s.unit))
            xy = s.p0 + min(max(t, 0.0), s.length) * s.unit
            return xy
        if piece.contains(xy):
            return xy
        r = r_min + 0.5 * (r - r_min)
    return np.asarray(origin, dtype=float).copy()


def _too_close(loc: Loc, others, sep):
    for o in others:
        if o.piece == loc.piece and np.hypot(*(o.xy - loc.xy)) < sep:
            return True
    return False


def _sample_quadruple(dc: DiscretizedComplex, rng, config, spread, focus):
    spec = dc.spec
    sep = 12.0 * dc.h  # keep clear of the 10h degenerate guard
    biased = rng.random() < config.bias_fraction and dc.n_nodes > 0
    pts = []
    if biased:
        nid = int(rng.integers(dc.n_nodes))
        node = dc.nodes[nid]
        rep = node.reps[int(rng.integers(len(node.reps)))]
        apex = _offset_into_piece(spec.pieces[rep.piece], rep.xy, rng, focus)
        pts.append(Loc(rep.piece, apex))
        near = dc.nodes_within(nid, spread)
        if len(near) == 0:
            near = np.asarray([nid])
        for _ in range(3):
            loc = None
            for _ in range(6):
                nj = int(near[int(rng.integers(len(near)))])
                nrep = dc.nodes[nj].reps[int(rng.integers(len(dc.nodes[nj].reps)))]
                xy = _offset_into_piece(
                    spec.pieces[nrep.piece], nrep.xy, rng, 0.6 * spread, r_min=sep
                )
                loc = Loc(nrep.piece, xy)
                if not _too_close(loc, pts, sep):
                    break
            pts.append(loc)
    else:
        areas = np.asarray([max(p.area(), 1e-12) for p in spec.pieces])
        pi = int(rng.choice(len(spec.pieces), p=areas / areas.sum()))
        piece = spec.pieces[pi]
        apex = sample_point_in_piece(piece, rng)
        pts.append(Loc(pi, apex))
        for _ in range(3):
            loc = None
            for _ in range(16):
                xy = sample_point_in_piece(piece, rng)
                loc = Loc(pi, xy)
                if np.hypot(*(xy - apex)) <= spread and not _too_close(loc, pts, sep):
                    break
            pts.append(loc)
    return pts, biased


def verify(dc: DiscretizedComplex, kappa, config: VerifierConfig, dc_cache=None) -> VerifyReport:
    """Sample quadruples, test the comparison condition, refine raw failures.

    A certificate is emitted only for quadruples that fail at every spacing
    of the schedule; everything else is a discretization artifact.  With a
    fixed seed the sample set and the report are identical across runs.
    """
    spec = dc.spec
    if abs(dc.h - config.h_schedule[0]) > 1e-12:
        raise DomainError("dc spacing must match the head of h_schedule")
    if dc_cache is None:
        dc_cache = {}
    dc_cache[dc.h] = dc
    rng = np.random.default_rng(config.seed)
    spread = config.companion_spread or 0.35 * max(p.diameter() for p in spec.pieces)
    focus = config.focus_radius or 5.0 * dc.h

    locs = []
    for _ in range(config.sample_count):
        pts, _ = _sample_quadruple(dc, rng, config, spread, focus)
        locs.extend(pts)

    pairs = []
    for q in range(config.sample_count):
        base = 4 * q
        pairs.extend((base + i, base + j) for i, j in APEX_PAIRS)
    vals, errs = dc.distances_batch(locs, np.asarray(pairs, dtype=np.int64))

    counts = {"sampled": config.sample_count, "passed": 0, "skipped": 0, "discarded": 0, "failed_raw": 0}
    factor = config.angle_tolerance_factor
    failures = []
    for q in range(config.sample_count):
        v = vals[6 * q : 6 * q + 6]
        e = errs[6 * q : 6 * q + 6]
        status, margin, tol, total = _eval_quadruple(kappa, v, e, dc.h, factor)
        if status == "fail":
            counts["failed_raw"] += 1
            failures.append((q, [(dc.h, margin)], tol, total))
        else:
            counts[{"pass": "passed", "skipped": "skipped", "discarded": "discarded"}[status]] += 1

    certificates = []
    survivors = failures
    for h in config.h_schedule[1:]:
        if not survivors:
            break
        if h not in dc_cache:
            dc_cache[h] = discretize(spec, h)
        dcf = dc_cache[h]
        sub_locs = []
        sub_pairs = []
        for row, (q, _, _, _) in enumerate(survivors):
            sub_locs.extend(locs[4 * q : 4 * q + 4])
            base = 4 * row
            sub_pairs.extend((base + i, base + j) for i, j in APEX_PAIRS)
        v2, e2 = dcf.distances_batch(sub_locs, np.asarray(sub_pairs, dtype=np.int64))
        nxt = []
        for row, (q, hist, _, _) in enumerate(survivors):
            v = v2[6 * row : 6 * row + 6]
            e = e2[6 * row : 6 * row + 6]
            status, margin, tol, total = _eval_quadruple(kappa, v, e, h, factor)
            if status == "fail":
                nxt.append((q, hist + [(h, margin)], tol, total))
        survivors = nxt

    h_fin = config.h_schedule[-1]
    dcf = dc_cache.get(h_fin, dc)
    for q, hist, tol, total in survivors:
        quad_pts = locs[4 * q : 4 * q + 4]
        pts_out = [
            (spec.pieces[p.piece].pid, (float(p.xy[0]), float(p.xy[1]))) for p in quad_pts
        ]
        v, e = dcf.distances_batch(quad_pts, np.asarray(APEX_PAIRS, dtype=np.int64))
        certificates.append(
            ViolationCertificate(
                kind="quadruple",
                data={
                    "sample_index": q,
                    "points": pts_out,
                    "distances": [float(x) for x in v],
                    "distance_errors": [float(x) for x in e],
                    "angles": [float(x) for x in _quad_angles(kappa, v)],
                    "angle_sum": float(np.sum(_quad_angles(kappa, v))),
                },
                tolerance=tol,
                margin=hist[-1][1],
                refinement=hist,
            )
        )
    counts["certificates"] = len(certificates)
    return VerifyReport(kappa, config, counts, certificates)


# ---------------------------------------------------------------------------
# Interval bounds on comparison angles (one-sided distance errors)
# ---------------------------------------------------------------------------

def _angle_interval(kappa, a, ea, b, c, ec):
    """Bounds on the comparison angle when the opposite side lies in
    [a - ea, a] and the second adjacent side in [c - ec, c] (b exact)."""
    lo, hi = math.inf, -math.inf
    for av in (max(a - ea, 0.0), a):
        for cv in (max(c - ec, 0.0), c):
            t = float(comparison_angle_batch(kappa, av, b, cv, clamp=True))
            lo, hi = min(lo, t), max(hi, t)
    return lo, hi


def monotonicity_check(
    dc: DiscretizedComplex,
    kappa,
    path: GeodesicPath,
    p,
    tol: float = 0.0,
    t0: float = 0.0,
    steps: int = 16,
) -> CheckResult:
    """Non-increasing comparison angle along the path seen from p.

    Fails only when the angle provably increases beyond the propagated
    distance-error intervals plus tol; a true geodesic never fails.
    """
    ploc = dc.locate(p)
    dk = d_kappa(kappa)
    span = path.total_length - t0
    if span <= 0:
        return CheckResult("skipped", detail={"reason": "empty window"})
    if math.isfinite(dk):
        span = min(span, 0.99 * dk)
    taus = np.linspace(span / steps, span, steps)
    pts = [dc.locate((dc.spec.pieces[pc].pid, xy)) for pc, xy in (path.point_at(t0 + t) for t in taus)]
    base = dc.locate((dc.spec.pieces[path.point_at(t0)[0]].pid, path.point_at(t0)[1]))
    locs = [ploc, base] + pts
    pairs = [(0, 1)] + [(0, 2 + i) for i in range(len(pts))]
    vals, errs = dc.distances_batch(locs, np.asarray(pairs, dtype=np.int64))
    d_base, e_base = vals[0], errs[0]
    if not math.isfinite(d_base) or d_base >= dk:
        return CheckResult("skipped", detail={"reason": "base distance beyond model diameter"})
    bounds = []
    for i, tau in enumerate(taus):
        if math.isfinite(dk) and (vals[1 + i] >= dk or tau >= dk):
            break
        lo, hi = _angle_interval(kappa, vals[1 + i], errs[1 + i], float(tau), d_base, e_base)
        bounds.append((lo, hi))
    if len(bounds) < 2:
        return CheckResult("skipped", detail={"reason": "window too short"})
    margin = -math.inf
    for j in range(len(bounds)):
        for k in range(j + 1, len(bounds)):
            margin = max(margin, bounds[k][0] - bounds[j][1])
    status = "fail" if margin > tol + 1e-9 else "pass"
    return CheckResult(status, margin, {"bounds": bounds, "taus": taus.tolist()})


# ---------------------------------------------------------------------------
# Liberman check for geodesics of the glued-set 1-complex
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class EPath:
    """Arclength-parametrized polyline along boundary arcs of one piece."""

    piece: int
    pts: list

    def __post_init__(self):
        self.cum = [0.0]
        for a, b in zip(self.pts, self.pts[1:]):
            self.cum.append(self.cum[-1] + float(np.hypot(*(b - a))))
        self.total = self.cum[-1]

    def point_at(self, t):
        t = min(max(t, 0.0), self.total)
        i = int(np.searchsorted(self.cum, t, side="right")) - 1
        i = min(max(i, 0), len(self.pts) - 2)
        seg = self.cum[i + 1] - self.cum[i]
        u = 0.0 if seg == 0 else (t - self.cum[i]) / seg
        return self.pts[i] + u * (self.pts[i + 1] - self.pts[i])


def e_geodesic(spec, p, q) -> EPath:
    """Shortest path inside the declared-arc 1-complex from p to q."""
    from .model import ecomplex

    ec = ecomplex(spec)
    ap = ec.locate(p[0], p[1])
    aq = ec.locate(q[0], q[1])
    d, pts = ec.distance(ap, aq, with_path=True)
    if not math.isfinite(d):
        raise DomainError("points are in different components of the glued set")
    return EPath(spec.piece_index(p[0]), [np.asarray(x, dtype=float) for x in pts])


def liberman_check(
    dc: DiscretizedComplex,
    kappa,
    epath: EPath,
    p_points,
    windows: int = 4,
    tol: float = 0.0,
) -> CheckResult:
    """Four-point comparison for a boundary geodesic tested against sample
    points: the glued distance to the midpoint of a straightened window must
    not fall below its model value.  Interval bounds keep failures sound."""
    spec = dc.spec
    pid = spec.pieces[epath.piece].pid
    total = epath.total
    if total <= 0:
        return CheckResult("skipped", detail={"reason": "trivial path"})
    dk = d_kappa(kappa)
    grids = []
    for w in range(windows):
        span = total / (w + 1)
        for s in range(w + 1):
            t1 = s * span
            t3 = t1 + span
            t2 = t1 + span / 2.0
            grids.append((t1, t2, t3))
    worst = -math.inf
    tested = 0
    detail = {}
    for p in p_points:
        ploc = dc.locate(p)
        locs = [ploc]
        idx = {}
        for t1, t2, t3 in grids:
            for t in (t1, t2, t3):
                if t not in idx:
                    idx[t] = len(locs)
                    locs.append(dc.locate((pid, epath.point_at(t))))
        pairs = [(0, i) for i in range(1, len(locs))]
        vals, errs = dc.distances_batch(locs, np.asarray(pairs, dtype=np.int64))
        dist = {t: (vals[idx[t] - 1], errs[idx[t] - 1]) for t in idx}
        for t1, t2, t3 in grids:
            (d1, e1), (d2, e2), (d3, e3) = dist[t1], dist[t2], dist[t3]
            span = t3 - t1
            if not all(map(math.isfinite, (d1, d2, d3))):
                continue
            if not (span <= d1 + d3 < 2 * dk - span):
                continue
            if kappa > 0 and span >= dk:
                continue
            model_lo = math.inf
            for b1 in (max(d1 - e1, 0.0), d1):
                for b3 in (max(d3 - e3, 0.0), d3):
                    beta = float(comparison_angle_batch(kappa, b3, span, b1, clamp=True))
                    model_lo = min(model_lo, model_side(kappa, b1, t2 - t1, beta))
            tested += 1
            gap = model_lo - d2  # positive gap means a provable deficit
            if gap > worst:
                worst = gap
                detail = {"window": (t1, t2, t3), "p": p, "model_lo": model_lo, "d2": d2}
    if tested == 0:
        return CheckResult("skipped", detail={"reason": "no admissible window"})
    status = "fail" if worst > tol + 1e-9 else "pass"
    return CheckResult(status, worst, detail)


# ---------------------------------------------------------------------------
# Antipodality of crossing directions
# ---------------------------------------------------------------------------

def antipodal_check(dc: DiscretizedComplex, path: GeodesicPath, link, tol=None, crossing: int = 0) -> CheckResult:
    """At an interior crossing, the incoming and outgoing directions must be
    antipodal in the glued link: |xi z| + |eta z| = pi for every direction z."""
    if not path.crossings:
        raise DomainError("path has no interior crossing")
    leg_in = path.legs[crossing]
    leg_out = path.legs[crossing + 1]
    if leg_in.length <= 0 or leg_out.length <= 0:
        return CheckResult("skipped", detail={"reason": "degenerate leg"})
    if tol is None:
        tol = 4.0 * dc.h * (1.0 / leg_in.length + 1.0 / leg_out.length) + 1e-9
    xi = locate_direction(link, leg_in.piece, leg_in.b, (leg_in.a - leg_in.b) / leg_in.length)
    eta = locate_direction(link, leg_out.piece, leg_out.a, (leg_out.b - leg_out.a) / leg_out.length)
    worst = 0.0
    for z in sample_directions(link):
        s = link_distance(link, xi, z) + link_distance(link, eta, z)
        worst = max(worst, abs(s - math.pi))
    status = "fail" if worst > tol else "pass"
    return CheckResult(status, worst, {"tol": tol})


# ---------------------------------------------------------------------------
# Diameter check (Bonnet-Myers style) and certificate assembly
# ---------------------------------------------------------------------------

def diameter_check(dc: DiscretizedComplex, kappa) -> CheckResult:
    """For kappa > 0 every component must have diameter at most D_kappa.

    Candidates: all sample classes, piece vertices, and interior samples of
    1D pieces.  The estimate is a lower bound for the true diameter, so a
    certificate (estimate - error > D_kappa) is sound.
    """
    if kappa <= 0.0:
        return CheckResult("pass", detail={"reason": "vacuous for kappa <= 0"})
    dk = d_kappa(kappa)
    spec = dc.spec
    locs = []
    seen = set()
    for node in dc.nodes:
        rep = node.reps[0]
        key = (rep.piece, round(rep.xy[0] / 1e-9), round(rep.xy[1] / 1e-9))
        if key not in seen:
            seen.add(key)
            locs.append(Loc(rep.piece, rep.xy.copy()))
    for pi, piece in enumerate(spec.pieces):
        for v in piece.vertices:
            key = (pi, round(v[0] / 1e-9), round(v[1] / 1e-9))
            if key not in seen:
                seen.add(key)
                locs.append(Loc(pi, np.asarray(v, dtype=float)))
        if piece.kind == "segment1d":
            s = piece.sides[0]
            n = max(2, int(math.ceil(s.length / dc.h)))
            for t in np.linspace(0.0, s.length, n + 1)[1:-1]:
                locs.append(Loc(pi, s.p0 + t * s.unit))
    pairs = [(i, j) for i in range(len(locs)) for j in range(i + 1, len(locs))]
    vals, errs = dc.distances_batch(locs, np.asarray(pairs, dtype=np.int64))
    finite = np.isfinite(vals)
    if not np.any(finite):
        return CheckResult("pass", detail={"reason": "no connected pairs"})
    best = int(np.flatnonzero(finite)[np.argmax(vals[finite])])
    est, err = float(vals[best]), float(errs[best])
    i, j = pairs[best]
    witness = [
        (spec.pieces[locs[k].piece].pid, (float(locs[k].xy[0]), float(locs[k].xy[1])))
        for k in (i, j)
    ]
    detail = {"diameter": est, "error": err, "d_kappa": dk, "witness": witness}
    if est - err > dk:
        return CheckResult("fail", est - err - dk, detail)
    return CheckResult("pass", est - err - dk, detail)


def diameter_certificate(result: CheckResult) -> ViolationCertificate:
    return ViolationCertificate(
        kind="diameter",
        data=result.detail,
        tolerance=result.detail["error"],
        margin=result.margin,
    )


def link_certificate(label: str, link, verdict) -> ViolationCertificate:
    return ViolationCertificate(
        kind="link",
        data={
            "class": label,
            "kind": link.kind,
            "length": link.length,
            "description": link.description,
            "sector_angles": [float(s.angle) for s in link.sectors],
            "limit": verdict.limit,
        },
        tolerance=1e-9,
        margin=(link.length - verdict.limit) if math.isfinite(verdict.limit) else math.inf,
    )


def refined_monotonicity(spec, build_path, p, kappa, config: VerifierConfig, dc_cache=None):
    """Run monotonicity down the schedule; certificate if it fails at every h.

    build_path(dc) must return the GeodesicPath under test at that spacing.
    """
    if dc_cache is None:
        dc_cache = {}
    history = []
    last = None
    for h in config.h_schedule:
        if h not in dc_cache:
            dc_cache[h] = discretize(spec, h)
        dcf = dc_cache[h]
        res = monotonicity_check(dcf, kappa, build_path(dcf), p)
        history.append((h, res.margin))
        last = res
        if res.status != "fail":
            return None
    return ViolationCertificate(
        kind="monotonicity",
        data={"p": p, "taus": last.detail.get("taus", [])},
        tolerance=1e-9,
        margin=history[-1][1],
        refinement=history,
    )
