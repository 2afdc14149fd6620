"""Deterministic line-oriented key=value reports.

Identical (scene, flags, seed) must produce byte-identical output, so all
floats go through one fixed format and nothing iterates over unordered
containers.
"""

from __future__ import annotations

import math


def fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        if math.isnan(v):
            return "nan"
        return f"{v:.8g}"
    if isinstance(v, (list, tuple)):
        return ",".join(fmt(x) for x in v)
    return str(v)


class Report:
    def __init__(self):
        self.records = []

    def record(self, *pairs):
        self.records.append(" ".join(f"{k}={fmt(v)}" for k, v in pairs))

    def text(self) -> str:
        return "\n".join(self.records) + "\n"


def verdict_of(certificates, invalid=False) -> str:
    if invalid:
        return "invalid"
    if certificates:
        return f"violations:{len(certificates)}"
    return "pass"


def exit_code(verdict: str) -> int:
    if verdict == "invalid":
        return 2
    if verdict.startswith("violations"):
        return 1
    return 0


def _sanitize(v):
    if isinstance(v, str):
        return v.replace(" ", "_")
    if isinstance(v, (list, tuple)):
        return [_sanitize(x) for x in v]
    return v


def certificate_records(rep: Report, certs):
    for i, c in enumerate(certs):
        head = [("certificate", i), ("kind", c.kind), ("margin", c.margin), ("tolerance", c.tolerance)]
        for key in sorted(c.data):
            head.append((key, _sanitize(c.data[key])))
        rep.record(*head)
        if c.refinement:
            rep.record(
                ("certificate", i),
                ("refinement_h", [h for h, _ in c.refinement]),
                ("refinement_margin", [m for _, m in c.refinement]),
            )
