"""Command line interface: validate, distance, verify, links, report.

Exit codes: 0 pass, 1 violations found, 2 invalid input.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from .errors import GlueSpaceError, SceneParseError, UnsupportedSceneError
from .links import catalog_links
from .metric import discretize
from .model import gluing_isometry_check, validate
from .report import Report, certificate_records, exit_code, fmt, verdict_of
from .scene import parse_scene
from .svg import draw_diameter, draw_path, draw_quadruple, draw_scene
from .verifier import (
    VerifierConfig,
    diameter_certificate,
    diameter_check,
    link_certificate,
    verify,
)


def _parse_point(text: str):
    try:
        pid, coords = text.split(":", 1)
        x, y = coords.split(",")
        return pid, (float(x), float(y))
    except ValueError:
        raise SceneParseError(f"point must look like piece:x,y, got {text!r}") from None


def _merge_config(config: VerifierConfig, flags) -> VerifierConfig:
    kw = {
        "sample_count": config.sample_count,
        "seed": config.seed,
        "h_schedule": config.h_schedule,
        "angle_tolerance_factor": config.angle_tolerance_factor,
        "bias_fraction": config.bias_fraction,
    }
    if flags.get("samples") is not None:
        kw["sample_count"] = flags["samples"]
    if flags.get("seed") is not None:
        kw["seed"] = flags["seed"]
    if flags.get("h") is not None:
        kw["h_schedule"] = tuple(float(x) for x in flags["h"].split(","))
    if flags.get("tolfactor") is not None:
        kw["angle_tolerance_factor"] = flags["tolfactor"]
    if flags.get("bias") is not None:
        kw["bias_fraction"] = flags["bias"]
    return VerifierConfig(**kw)


def _validate_records(rep: Report, spec, with_isometry=True):
    vrep = validate(spec)
    rep.record(("check", "validate"), ("status", vrep.status), ("findings", len(vrep.findings)))
    for i, f in enumerate(vrep.findings):
        rep.record(
            ("finding", i),
            ("severity", f.severity),
            ("code", f.code),
            ("location", f.location),
            ("message", f.message.replace("=", ":").replace("\n", " ")),
        )
    if vrep.status != "invalid" and with_isometry and spec.gluings:
        irep = gluing_isometry_check(spec)
        rep.record(("check", "gluing_isometry"), ("status", irep.status))
        for i, f in enumerate(irep.findings):
            rep.record(
                ("isometry_finding", i),
                ("severity", f.severity),
                ("code", f.code),
                ("message", f.message.replace("=", ":")),
            )
        if irep.status == "invalid":
            return vrep, True
    return vrep, vrep.status == "invalid"


def _links_records(rep: Report, spec):
    certs = []
    try:
        cat = catalog_links(spec)
    except UnsupportedSceneError as exc:
        rep.record(("check", "links"), ("status", "unsupported"), ("reason", str(exc)))
        return certs
    rep.record(("check", "links"), ("classes", len(cat)))
    for label, node, link, verdict in cat:
        rep.record(
            ("class", label),
            ("representatives", len(node.reps)),
            ("kind", link.kind),
            ("length", link.length),
            ("detail", link.description.replace(" ", "_").replace(",", ";")),
            ("judge", "ok" if verdict.ok else "violation"),
        )
        if not verdict.ok:
            certs.append((label, link, link_certificate(label, link, verdict)))
    return certs


def _write_svgs(outdir, spec, certs, extra=None):
    os.makedirs(outdir, exist_ok=True)
    canvas, _ = draw_scene(spec)
    with open(os.path.join(outdir, "scene.svg"), "w", encoding="utf-8") as fh:
        fh.write(canvas.render())
    for i, cert in enumerate(certs):
        if cert.kind == "quadruple":
            canvas = draw_quadruple(spec, cert.data["points"])
        elif cert.kind == "diameter":
            canvas = draw_diameter(spec, cert.data["witness"])
        else:
            canvas, _ = draw_scene(spec)
        with open(os.path.join(outdir, f"cert_{i:03d}_{cert.kind}.svg"), "w", encoding="utf-8") as fh:
            fh.write(canvas.render())
    for name, canvas in (extra or {}).items():
        with open(os.path.join(outdir, name), "w", encoding="utf-8") as fh:
            fh.write(canvas.render())


def run(command: str, scene_path: str, flags=None):
    """Execute one CLI command; returns (Report, exit code)."""
    flags = dict(flags or {})
    rep = Report()
    rep.record(("command", command), ("scene", scene_path))
    try:
        spec, config = parse_scene(scene_path)
    except (OSError, SceneParseError) as exc:
        rep.record(("error", str(exc).replace(" ", "_")))
        rep.record(("verdict", "invalid"))
        return rep, 2
    config = _merge_config(config, flags)
    kappa = spec.kappa.kappa
    rep.record(
        ("kappa", kappa),
        ("pieces", len(spec.pieces)),
        ("arcs", len(spec.arcs)),
        ("gluings", len(spec.gluings)),
    )

    try:
        if command == "validate":
            _, invalid = _validate_records(rep, spec)
            verdict = "invalid" if invalid else "pass"
            rep.record(("verdict", verdict))
            return rep, exit_code(verdict)

        if command == "distance":
            _, invalid = _validate_records(rep, spec, with_isometry=False)
            if invalid:
                rep.record(("verdict", "invalid"))
                return rep, 2
            h = flags.get("h_single") or config.h_schedule[-1]
            src = _parse_point(flags["src"])
            dst = _parse_point(flags["dst"])
            dc = discretize(spec, h)
            rep.record(("check", "distance"), ("h", h), ("nodes", dc.n_nodes))
            if flags.get("m") is not None:
                m = int(flags["m"])
                value = dc.predistance(src, dst, m)
                rep.record(("m", m), ("value", value))
            else:
                value, err = dc.distance(src, dst)
                if np.isfinite(value):
                    path = dc.shortest_path(src, dst)
                    rep.record(
                        ("value", value),
                        ("error_bound", err),
                        ("crossings", len(path.crossings)),
                        ("legs", len(path.legs)),
                    )
                    if flags.get("out"):
                        _write_svgs(flags["out"], spec, [], extra={"path.svg": draw_path(spec, path)})
                else:
                    rep.record(("value", value), ("error_bound", err))
            rep.record(("verdict", "pass"))
            return rep, 0

        if command in ("verify", "report"):
            _, invalid = _validate_records(rep, spec)
            if invalid:
                rep.record(("verdict", "invalid"))
                return rep, 2
            dc = discretize(spec, config.h_schedule[0])
            rep.record(
                ("check", "verify"),
                ("h_schedule", list(config.h_schedule)),
                ("samples", config.sample_count),
                ("seed", config.seed),
                ("tolfactor", config.angle_tolerance_factor),
                ("bias", config.bias_fraction),
                ("nodes", dc.n_nodes),
            )
            vrep = verify(dc, kappa, config)
            rep.record(
                ("quadruples", vrep.counts["sampled"]),
                ("passed", vrep.counts["passed"]),
                ("skipped", vrep.counts["skipped"]),
                ("discarded", vrep.counts["discarded"]),
                ("failed_raw", vrep.counts["failed_raw"]),
                ("certificates", vrep.counts["certificates"]),
            )
            certs = list(vrep.certificates)
            dia = diameter_check(dc, kappa)
            drec = [("check", "diameter"), ("status", dia.status)]
            if "diameter" in dia.detail:
                drec += [
                    ("estimate", dia.detail["diameter"]),
                    ("error_bound", dia.detail["error"]),
                    ("d_kappa", dia.detail["d_kappa"]),
                ]
            rep.record(*drec)
            if dia.status == "fail":
                certs.append(diameter_certificate(dia))
            certs.extend(cert for _, _, cert in _links_records(rep, spec))
            certificate_records(rep, certs)
            verdict = verdict_of(certs)
            if flags.get("out"):
                _write_svgs(flags["out"], spec, certs)
                with open(os.path.join(flags["out"], "report.txt"), "w", encoding="utf-8") as fh:
                    fh.write(rep.text() + f"verdict={verdict}\n")
            rep.record(("verdict", verdict))
            return rep, exit_code(verdict)

        if command == "links":
            _, invalid = _validate_records(rep, spec, with_isometry=False)
            if invalid:
                rep.record(("verdict", "invalid"))
                return rep, 2
            certs = [cert for _, _, cert in _links_records(rep, spec)]
            certificate_records(rep, certs)
            verdict = verdict_of(certs)
            rep.record(("verdict", verdict))
            return rep, exit_code(verdict)

        raise SceneParseError(f"unknown command {command!r}")
    except GlueSpaceError as exc:
        rep.record(("error", str(exc).replace(" ", "_")))
        rep.record(("verdict", "invalid"))
        return rep, 2


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="gluespace",
        description="Glued polygonal length spaces: distances, geodesics, curvature verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="structural validation of a scene")
    p.add_argument("scene")

    p = sub.add_parser("distance", help="glued distance between two points")
    p.add_argument("scene")
    p.add_argument("--from", dest="src", required=True, metavar="PIECE:X,Y")
    p.add_argument("--to", dest="dst", required=True, metavar="PIECE:X,Y")
    p.add_argument("--m", type=int, default=None, help="hop bound for the m-predistance")
    p.add_argument("--h", dest="h_single", type=float, default=None, help="sample spacing")
    p.add_argument("--out", default=None, help="directory for SVG output")

    p = sub.add_parser("verify", help="curvature verification: quadruples, diameter, links")
    p.add_argument("scene")
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--h", default=None, help="comma-separated refinement schedule")
    p.add_argument("--tolfactor", type=float, default=None)
    p.add_argument("--bias", type=float, default=None)
    p.add_argument("--out", default=None, help="directory for SVG output")

    p = sub.add_parser("links", help="links of all boundary classes")
    p.add_argument("scene")

    p = sub.add_parser("report", help="full report written to a directory")
    p.add_argument("scene")
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--h", default=None)
    p.add_argument("--tolfactor", type=float, default=None)
    p.add_argument("--bias", type=float, default=None)
    p.add_argument("--out", required=True)

    args = parser.parse_args(argv)
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "scene")}
    rep, code = run(args.command, args.scene, flags)
    sys.stdout.write(rep.text())
    return code


if __name__ == "__main__":
    raise SystemExit(main())
