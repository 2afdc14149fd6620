"""Scene file grammar: one statement per line, '#' comments.

    kappa <real>
    piece <id> polygon x1 y1 x2 y2 ...
    piece <id> segment x1 y1 x2 y2
    arc <id> <piece> sides i j k
    arc <id> <piece> side i from <t0> to <t1>
    glue <class-id> <arc> <+|-> <arc> <+|-> ...
    glue <class-id> fold <arc>
    verify samples=<n> seed=<n> h=<v1,v2,...> tolfactor=<r> bias=<r>

Parsing is purely syntactic; semantic problems (unknown ids, length
mismatches, non-convex polygons) are reported by validate().
"""

from __future__ import annotations

from .comparison import Curvature
from .errors import SceneParseError
from .model import BoundaryArc, ComplexSpec, GluingClass, Piece
from .verifier import VerifierConfig


def _real(tok, lineno):
    try:
        return float(tok)
    except ValueError:
        raise SceneParseError(f"malformed number {tok!r}", lineno) from None


def _int(tok, lineno):
    try:
        return int(tok)
    except ValueError:
        raise SceneParseError(f"malformed integer {tok!r}", lineno) from None


def _ident(tok, lineno):
    if not tok or not all(c.isalnum() or c == "_" for c in tok) or tok[0].isdigit():
        raise SceneParseError(f"bad identifier {tok!r}", lineno)
    return tok


def _parse_piece(toks, lineno):
    if len(toks) < 3:
        raise SceneParseError("piece needs: piece <id> polygon|segment coords...", lineno)
    pid = _ident(toks[0], lineno)
    kind = toks[1]
    coords = [_real(t, lineno) for t in toks[2:]]
    if len(coords) % 2 != 0:
        raise SceneParseError("odd number of coordinates", lineno)
    pts = [(coords[i], coords[i + 1]) for i in range(0, len(coords), 2)]
    if kind == "polygon":
        if len(pts) < 3:
            raise SceneParseError("polygon needs at least 3 vertices", lineno)
        return Piece(pid, "polygon2d", pts)
    if kind == "segment":
        if len(pts) != 2:
            raise SceneParseError("segment needs exactly 2 endpoints", lineno)
        return Piece(pid, "segment1d", pts)
    raise SceneParseError(f"unknown piece kind {kind!r}", lineno)


def _parse_arc(toks, lineno):
    if len(toks) < 3:
        raise SceneParseError("arc needs: arc <id> <piece> sides...|side...", lineno)
    aid = _ident(toks[0], lineno)
    piece = _ident(toks[1], lineno)
    if toks[2] == "sides":
        idxs = tuple(_int(t, lineno) for t in toks[3:])
        if not idxs:
            raise SceneParseError("arc sides list is empty", lineno)
        return BoundaryArc(aid, piece, ("sides", idxs))
    if toks[2] == "side":
        if len(toks) != 8 or toks[4] != "from" or toks[6] != "to":
            raise SceneParseError("expected: arc <id> <piece> side i from <t0> to <t1>", lineno)
        return BoundaryArc(
            aid, piece, ("subside", _int(toks[3], lineno), _real(toks[5], lineno), _real(toks[7], lineno))
        )
    raise SceneParseError(f"expected 'sides' or 'side', got {toks[2]!r}", lineno)


def _parse_glue(toks, lineno):
    if len(toks) < 2:
        raise SceneParseError("glue needs: glue <id> <arc> <+|-> ... | glue <id> fold <arc>", lineno)
    cid = _ident(toks[0], lineno)
    if toks[1] == "fold":
        if len(toks) != 3:
            raise SceneParseError("fold takes exactly one arc", lineno)
        return GluingClass(cid, ((_ident(toks[2], lineno), 1),), self_fold=True)
    rest = toks[1:]
    if len(rest) % 2 != 0:
        raise SceneParseError("glue members must come as <arc> <+|-> pairs", lineno)
    members = []
    for i in range(0, len(rest), 2):
        aid = _ident(rest[i], lineno)
        sign = rest[i + 1]
        if sign not in ("+", "-"):
            raise SceneParseError(f"orientation must be + or -, got {sign!r}", lineno)
        members.append((aid, 1 if sign == "+" else -1))
    return GluingClass(cid, tuple(members), self_fold=False)


def _parse_verify(toks, lineno):
    kw = {}
    for tok in toks:
        if "=" not in tok:
            raise SceneParseError(f"verify options are key=value, got {tok!r}", lineno)
        key, val = tok.split("=", 1)
        if key == "samples":
            kw["sample_count"] = _int(val, lineno)
        elif key == "seed":
            kw["seed"] = _int(val, lineno)
        elif key == "h":
            kw["h_schedule"] = tuple(_real(v, lineno) for v in val.split(","))
        elif key == "tolfactor":
            kw["angle_tolerance_factor"] = _real(val, lineno)
        elif key == "bias":
            kw["bias_fraction"] = _real(val, lineno)
        else:
            raise SceneParseError(f"unknown verify option {key!r}", lineno)
    return kw


def parse_scene_text(text: str, name: str = "<string>"):
    """Parse scene source into (ComplexSpec, VerifierConfig)."""
    kappa = None
    pieces, arcs, gluings = [], [], []
    verify_kw = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        head, rest = toks[0], toks[1:]
        if head == "kappa":
            if len(rest) != 1:
                raise SceneParseError("kappa takes one number", lineno)
            kappa = _real(rest[0], lineno)
        elif head == "piece":
            pieces.append(_parse_piece(rest, lineno))
        elif head == "arc":
            arcs.append(_parse_arc(rest, lineno))
        elif head == "glue":
            gluings.append(_parse_glue(rest, lineno))
        elif head == "verify":
            verify_kw = _parse_verify(rest, lineno)
        else:
            raise SceneParseError(f"unknown statement {head!r}", lineno)
    if not pieces:
        raise SceneParseError("no pieces", None)
    spec = ComplexSpec(pieces, arcs, gluings, Curvature(kappa if kappa is not None else 0.0))
    return spec, VerifierConfig(**verify_kw)


def parse_scene(path):
    """Parse a scene file into (ComplexSpec, VerifierConfig)."""
    with open(path, "r", encoding="utf-8") as fh:
        return parse_scene_text(fh.read(), name=str(path))
