"""Structured reports: JSON encoding and aligned text tables.

Integers beyond the 53-bit range exact in IEEE doubles are written as
decimal strings so that any JSON reader keeps them exact.
"""
from __future__ import annotations

import json
import platform
from dataclasses import asdict, dataclass, field

from . import __version__
from .invariants import INFINITE, OrbitReport

SCHEMA_VERSION = 1
_SAFE = 2 ** 53


def encode_int(n):
    if n is None or isinstance(n, str):
        return n
    return str(n) if abs(n) >= _SAFE else n


def decode_int(v):
    if v is None or v == INFINITE:
        return v
    if isinstance(v, str):
        return int(v)
    return v


@dataclass
class BoundaryRow:
    kind: str  # "DFold" or "Pair"
    label: str
    r: int  # d for DFold, the smaller multiplicity for Pair
    r_high: int | None
    dimension: int
    premultiplicity: int | None
    multiplicity: int | None

    def to_dict(self) -> dict:
        out = asdict(self)
        out["premultiplicity"] = encode_int(self.premultiplicity)
        out["multiplicity"] = encode_int(self.multiplicity)
        return out

    @classmethod
    def from_dict(cls, d: dict) -> BoundaryRow:
        return cls(d["kind"], d["label"], d["r"], d.get("r_high"), d["dimension"],
                   decode_int(d["premultiplicity"]), decode_int(d["multiplicity"]))


@dataclass
class ReportDocument:
    input: str
    form: str
    degree_d: int
    minpoly: str | None
    profile: list[int]
    s: int
    dimension: int
    predegree: int
    stabilizer: dict
    degree: int | None
    boundary: list[BoundaryRow]
    smooth: bool | None
    smooth_codim1: bool | None
    hessian: dict
    tolerance: float | None = None
    warnings: list[str] = field(default_factory=list)
    provenance: dict = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION

    def to_dict(self) -> dict:
        stab = dict(self.stabilizer)
        stab["order"] = encode_int(stab.get("order"))
        return {
            "schema_version": self.schema_version,
            "input": self.input,
            "form": self.form,
            "degree_d": self.degree_d,
            "minpoly": self.minpoly,
            "profile": list(self.profile),
            "s": self.s,
            "dimension": self.dimension,
            "predegree": encode_int(self.predegree),
            "stabilizer": stab,
            "degree": encode_int(self.degree),
            "boundary": [b.to_dict() for b in self.boundary],
            "smooth": self.smooth,
            "smooth_codim1": self.smooth_codim1,
            "hessian": dict(self.hessian),
            "tolerance": self.tolerance,
            "warnings": list(self.warnings),
            "provenance": dict(self.provenance),
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, d: dict) -> ReportDocument:
        if d.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported report schema {d.get('schema_version')!r}")
        stab = dict(d["stabilizer"])
        stab["order"] = decode_int(stab.get("order"))
        return cls(
            input=d["input"],
            form=d["form"],
            degree_d=d["degree_d"],
            minpoly=d["minpoly"],
            profile=list(d["profile"]),
            s=d["s"],
            dimension=d["dimension"],
            predegree=decode_int(d["predegree"]),
            stabilizer=stab,
            degree=decode_int(d["degree"]),
            boundary=[BoundaryRow.from_dict(b) for b in d["boundary"]],
            smooth=d["smooth"],
            smooth_codim1=d["smooth_codim1"],
            hessian=dict(d["hessian"]),
            tolerance=d.get("tolerance"),
            warnings=list(d.get("warnings", [])),
            provenance=dict(d.get("provenance", {})),
            schema_version=d["schema_version"],
        )

    @classmethod
    def from_json(cls, text: str) -> ReportDocument:
        return cls.from_dict(json.loads(text))


def provenance() -> dict:
    import gmpy2
    import numpy

    return {
        "binorbit": __version__,
        "python": platform.python_version(),
        "numpy": numpy.__version__,
        "gmpy2": gmpy2.version(),
    }


def build_document(text: str, F, report: OrbitReport, stab_info: dict,
                   minpoly: str | None, tol: float | None) -> ReportDocument:
    P = report.profile
    rows = []
    for e in report.boundary:
        O = e.orbit
        if O.kind == "dfold":
            rows.append(BoundaryRow("DFold", str(O), P.d, None, O.dimension,
                                    e.premultiplicity, e.multiplicity))
        else:
            rows.append(BoundaryRow("Pair", str(O), O.r_low, O.r_high, O.dimension,
                                    e.premultiplicity, e.multiplicity))
    ext = report.external_hessian
    hess = {
        "external_profile": list(ext.multiplicities) if ext is not None else None,
        "sum_k": ext.sum_k if ext is not None else None,
        "sum_k2": ext.sum_k2 if ext is not None else None,
        "residual_orders": [
            {"r": rd.r, "points": rd.weight, "order": rd.hess_mult} for rd in report.residuals
        ],
    }
    return ReportDocument(
        input=text,
        form=str(F),
        degree_d=P.d,
        minpoly=minpoly,
        profile=list(P.multiplicities),
        s=P.s,
        dimension=report.dimension,
        predegree=report.predegree,
        stabilizer=stab_info,
        degree=report.degree,
        boundary=rows,
        smooth=report.smooth,
        smooth_codim1=report.smooth_codim1,
        hessian=hess,
        tolerance=tol,
        warnings=list(report.notes),
        provenance=provenance(),
    )


def _fmt(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    return str(v)


def table(rows: list[list], header: list[str]) -> str:
    """Left-aligned columns separated by two spaces."""
    cells = [[_fmt(c) for c in r] for r in [header] + rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def render(doc: ReportDocument) -> str:
    stab = doc.stabilizer
    order = stab.get("order")
    if order is not None and stab.get("source") == "numeric":
        margin = stab.get("certification")
        order = f"{order} (certified, margin {margin:.2g})" if margin is not None else f"{order} (certified)"
    elif order is not None and stab.get("source") == "given":
        order = f"{order} (given)"
    head = [
        ["form", doc.form],
        ["field", doc.minpoly and f"Q[t]/({doc.minpoly})" or "Q"],
        ["degree d", doc.degree_d],
        ["profile", "{" + ",".join(map(str, doc.profile)) + "}"],
        ["points s", doc.s],
        ["dimension", doc.dimension],
        ["predegree", doc.predegree],
        ["stabilizer", order],
        ["degree", doc.degree],
        ["smooth", doc.smooth],
        ["smooth in codim 1", doc.smooth_codim1],
    ]
    if doc.hessian.get("external_profile") is not None:
        head.append(["external Hessian", "{" + ",".join(map(str, doc.hessian["external_profile"])) + "}"])
    width = max(len(k) for k, _ in head)
    out = [f"{k.ljust(width)}  {_fmt(v)}" for k, v in head]
    if doc.boundary:
        out.append("")
        out.append(table(
            [[b.label, b.dimension, b.premultiplicity, b.multiplicity] for b in doc.boundary],
            ["boundary orbit", "dim", "premultiplicity", "multiplicity"],
        ))
    for w in doc.warnings:
        out.append(f"warning: {w}")
    return "\n".join(out)
