"""Command line interface: ``binorbit analyze|special|catalog|stabilizer|oracle``."""
from __future__ import annotations

import argparse
import json
import math
import random
import sys
from fractions import Fraction

from . import __version__
from .classification import (
    GroupId,
    _cross_check,
    abc_multiplicities,
    composite_form,
    local_multiplicities,
)
from .errors import BinOrbitError, DomainError, InconsistencyError, NumericError
from .forms import BinaryForm, MultiplicityProfile, factorize
from .invariants import INFINITE, assemble_report, boundary, orbit_dimension, predegree
from .oracle import oracle_predegree, oracle_surface_degree
from .parse import parse_form, parse_partition
from .report import build_document, encode_int, render, table
from .stabilizer import DEFAULT_TOL, stabilizer

EXIT_OK, EXIT_PARSE, EXIT_NUMERIC, EXIT_INCONSISTENT = 0, 2, 3, 4

# Beyond this degree ``special`` checks the roster with local series only.
PIPELINE_MAX_DEGREE = 120


def _finite(x: float) -> float | None:
    return x if math.isfinite(x) else None


def _stabilizer_info(F: BinaryForm, s: int, args) -> tuple[object, dict]:
    if s < 3:
        return INFINITE, {"order": INFINITE, "certified": True, "source": "exact"}
    if args.stab is not None:
        if args.stab < 1:
            raise DomainError("--stab must be a positive integer")
        return args.stab, {"order": args.stab, "certified": False, "source": "given"}
    if args.no_numeric:
        return None, {"order": None, "certified": False, "source": "skipped"}
    res = stabilizer(F, args.tol)
    return res.order, {
        "order": res.order,
        "certified": True,
        "certification": _finite(res.certification),
        "min_separation": res.min_separation,
        "source": "numeric",
    }


def cmd_analyze(args) -> int:
    F = parse_form(args.form, args.minpoly)
    P = factorize(F).profile()
    stab, info = _stabilizer_info(F, P.s, args)
    report = assemble_report(F, stab)
    doc = build_document(args.form, F, report, info, args.minpoly, args.tol)
    if P.s < 3 and args.stab is not None:
        doc.warnings.append("--stab ignored: forms on one or two points have an infinite stabilizer")
    print(doc.to_json() if args.json else render(doc))
    return EXIT_OK


def _special_payload(args) -> tuple[dict, int]:
    G = GroupId.parse(args.group, args.n)
    a, b, c = args.a, args.b, args.c
    if min(a, b, c) < 0 or not (a or b or c):
        raise DomainError("exponents must be non-negative and not all zero")
    roster = abc_multiplicities(G, a, b, c)
    d = sum(e * dx for e, dx in zip((a, b, c), G.orbit_degrees))
    out = {
        "group": str(G),
        "order": G.order,
        "exponents": [a, b, c],
        "degree_d": d,
        "roster": dict(zip("ABC", roster.values)),
        "conditions": {k: str(v) for k, v in roster.conditions.items()},
        "warnings": list(roster.warnings),
        "effective": dict(zip("ABC", roster.effective)) if roster.effective else None,
        "checks": [],
    }
    status = EXIT_OK
    if d <= PIPELINE_MAX_DEGREE:
        out["form"] = str(composite_form(G, a, b, c))
    if args.fast:
        return out, status
    local = local_multiplicities(G, a, b, c)
    agree = tuple(local) == roster.values
    out["checks"].append({"check": "local series", "values": dict(zip("ABC", local)), "ok": agree})
    if not agree:
        status = EXIT_INCONSISTENT
    if d <= PIPELINE_MAX_DEGREE and sum(dx for dx, e in zip(G.orbit_degrees, (a, b, c)) if e) >= 3:
        F = composite_form(G, a, b, c)
        report = assemble_report(F, None)
        fails = _cross_check(G, (a, b, c), roster, report)
        entry = {"check": "pipeline premultiplicities", "ok": not fails, "failures": fails}
        try:
            N = stabilizer(F, args.tol).order
        except NumericError as exc:
            entry["stabilizer"] = None
            entry["failures"].append(f"stabilizer: {exc}")
        else:
            full = assemble_report(F, N)
            entry.update(stabilizer=N, degree=encode_int(full.degree), smooth=full.smooth,
                         smooth_codim1=full.smooth_codim1,
                         boundary=[[str(e.orbit), e.premultiplicity, e.multiplicity]
                                   for e in full.boundary])
            if N % G.order:
                entry["failures"].append(f"stabilizer order {N} is not a multiple of {G.order}")
        entry["ok"] = not entry["failures"]
        out["checks"].append(entry)
        if not entry["ok"]:
            status = EXIT_INCONSISTENT
    elif d > PIPELINE_MAX_DEGREE:
        out["checks"].append({"check": "pipeline premultiplicities", "ok": None,
                              "failures": [f"skipped: degree {d} > {PIPELINE_MAX_DEGREE}"]})
    return out, status


def cmd_special(args) -> int:
    out, status = _special_payload(args)
    if args.json:
        print(json.dumps(out, indent=2))
        return status
    ex = out["exponents"]
    print(f"group      {out['group']} (order {out['order']})")
    print(f"exponents  a={ex[0]} b={ex[1]} c={ex[2]}, degree {out['degree_d']}")
    if "form" in out:
        print(f"form       {out['form']}")
    rows = [[X, out["roster"][X], out["effective"][X] if out["effective"] else None] for X in "ABC"]
    print()
    print(table(rows, ["orbit", "multiplicity", "effective"]))
    for k, v in out["conditions"].items():
        print(f"condition  {k} = {v}")
    for w in out["warnings"]:
        print(f"warning: {w}")
    for chk in out["checks"]:
        state = {True: "ok", False: "FAILED", None: "skipped"}[chk["ok"]]
        print(f"check      {chk['check']}: {state}")
        if "values" in chk:
            print("           " + ", ".join(f"{k}={v}" for k, v in chk["values"].items()))
        if chk.get("stabilizer") is not None:
            print(f"           stabilizer {chk['stabilizer']}, degree {chk['degree']}, "
                  f"smooth {chk['smooth']}")
        for f in chk.get("failures", []):
            print(f"           {f}")
    return status


# -- catalog ------------------------------------------------------------------------

def partitions(d: int, top: int | None = None):
    """Partitions of ``d`` in decreasing order, largest parts first."""
    top = d if top is None else top
    if d == 0:
        yield ()
        return
    for k in range(min(d, top), 0, -1):
        for rest in partitions(d - k, k):
            yield (k,) + rest


def random_points(rng: random.Random, s: int, height: int = 9) -> list[Fraction]:
    """``s`` distinct small rationals; coincidences are redrawn."""
    pts: list[Fraction] = []
    while len(pts) < s:
        z = Fraction(rng.randint(-height, height), rng.randint(1, 5))
        if z not in pts:
            pts.append(z)
    return pts


def generic_stabilizer_order(P: MultiplicityProfile) -> int:
    """Stabilizer order of a general configuration with profile ``P`` (``s >= 3``)."""
    m = P.multiplicities
    if P.s == 3:
        return math.prod(math.factorial(m.count(v)) for v in set(m))
    if P.s == 4:
        pairings = (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2)))
        return 1 + sum(m[i] == m[j] and m[k] == m[l] for (i, j), (k, l) in pairings)
    return 1


def catalog_rows(d_max: int, seed: int, tol: float = DEFAULT_TOL) -> list[dict]:
    rng = random.Random(seed)
    rows = []
    for d in range(1, d_max + 1):
        for part in partitions(d):
            P = MultiplicityProfile(part)
            row = {
                "d": d,
                "profile": list(P.multiplicities),
                "s": P.s,
                "dimension": orbit_dimension(P),
                "predegree": encode_int(predegree(P)),
                "oracle_predegree": encode_int(oracle_predegree(P)),
                "boundary": [str(O) for O in boundary(P)],
                "configuration": None,
                "problems": [],
            }
            if predegree(P) != oracle_predegree(P):
                row["problems"].append("predegree differs from oracle")
            if P.s <= 2:
                report = assemble_report(BinaryForm.from_roots(list(range(P.s)), list(part)), INFINITE)
                row.update(stabilizer=INFINITE, degree=report.degree,
                           multiplicities={str(e.orbit): [e.premultiplicity, e.multiplicity]
                                           for e in report.boundary})
                if P.s == 2 and report.degree != oracle_surface_degree(P):
                    row["problems"].append("surface degree differs from oracle")
                rows.append(row)
                continue
            pts = random_points(rng, P.s)
            F = BinaryForm.from_roots(pts, list(part))
            row["configuration"] = [str(z) for z in pts]
            try:
                N = stabilizer(F, tol).order
            except NumericError as exc:
                row["problems"].append(f"stabilizer: {exc}")
                N = None
            report = assemble_report(F, N)
            ext = report.external_hessian.multiplicities
            row.update(
                stabilizer=N,
                degree=encode_int(report.degree),
                multiplicities={str(e.orbit): [encode_int(e.premultiplicity), encode_int(e.multiplicity)]
                                for e in report.boundary},
                external_hessian=list(ext),
            )
            want = generic_stabilizer_order(P)
            if N is not None and N != want:
                row["problems"].append(f"stabilizer {N}, general position gives {want}")
            if any(k != 1 for k in ext):
                row["problems"].append("external Hessian zeros are not simple")
            rows.append(row)
    return rows


def cmd_catalog(args) -> int:
    if args.dmax < 1:
        raise DomainError("dmax must be at least 1")
    rows = catalog_rows(args.dmax, args.seed, args.tol)
    if args.json:
        print(json.dumps({"seed": args.seed, "rows": rows}, indent=2))
        return EXIT_OK

    def cell(pair):
        pre, mult = pair
        return f"{mult}" if pre is None else f"{pre}/{mult}"

    body = []
    for r in rows:
        mults = r["multiplicities"]
        body.append([
            r["d"],
            "{" + ",".join(map(str, r["profile"])) + "}",
            r["dimension"],
            r["predegree"],
            r["oracle_predegree"],
            "inf" if r["stabilizer"] == INFINITE else r["stabilizer"],
            r["degree"],
            " ".join(f"{k}:{cell(v)}" for k, v in mults.items()),
            "ok" if not r["problems"] else "CHECK: " + "; ".join(r["problems"]),
        ])
    print(table(body, ["d", "profile", "dim", "predegree", "oracle", "stab*", "degree*",
                       "boundary pre/mult*", "status"]))
    print(f"\n* depends on the configuration when s >= 3; drawn with seed {args.seed}")
    return EXIT_OK


def cmd_stabilizer(args) -> int:
    F = parse_form(args.form, args.minpoly)
    P = factorize(F).profile()
    if P.s < 3:
        print(f"order  infinite (form on {P.s} point{'s' if P.s > 1 else ''})")
        return EXIT_OK
    res = stabilizer(F, args.tol)
    if args.json:
        print(json.dumps({
            "order": res.order,
            "elements": [M.to_json() for M in res.elements],
            "min_separation": res.min_separation,
            "certification": _finite(res.certification),
        }, indent=2))
        return EXIT_OK
    print(f"order          {res.order}")
    print(f"separation     {res.min_separation:.3g}")
    print(f"certification  {res.certification:.3g} (best rejected / worst accepted residual)")
    for M in res.elements:
        print(f"  {M!r}")
    return EXIT_OK


def cmd_oracle(args) -> int:
    P = MultiplicityProfile(parse_partition(args.partition))
    ok = True
    pre, ora = predegree(P), oracle_predegree(P)
    print(f"profile          {P}")
    if P.s >= 3:
        print(f"predegree        {pre}")
        print(f"oracle           {ora}")
        ok = pre == ora
    else:
        print(f"predegree        {pre} (power sums); oracle {ora}")
        ok = pre == ora
        if P.s == 2:
            surf = assemble_report(BinaryForm.from_roots([0, 1], list(P.multiplicities)), INFINITE).degree
            osurf = oracle_surface_degree(P)
            print(f"surface degree   {surf}")
            print(f"oracle           {osurf}")
            ok = ok and surf == osurf
    print("agree" if ok else "DISAGREE")
    return EXIT_OK if ok else EXIT_INCONSISTENT


# -- entry point --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="binorbit",
        description="Orbit closure invariants of binary forms (d-tuples on the projective line).",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="full invariant report for one form")
    a.add_argument("form", help='e.g. "x*y*(x+y)" or "x^4 + 2*t*x^2*y^2 + y^4"')
    a.add_argument("--minpoly", help="minimal polynomial of t, e.g. t^2+3")
    g = a.add_mutually_exclusive_group()
    g.add_argument("--stab", type=int, help="use this stabilizer order instead of computing it")
    g.add_argument("--no-numeric", action="store_true", help="skip the stabilizer; report premultiplicities only")
    a.add_argument("--tol", type=float, default=DEFAULT_TOL)
    a.add_argument("--json", action="store_true")
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("special", help="A^a B^b C^c composites of a finite group")
    s.add_argument("group", help="Dn, D5, A4, S4 or A5")
    s.add_argument("--n", type=int)
    s.add_argument("a", type=int)
    s.add_argument("b", type=int)
    s.add_argument("c", type=int)
    s.add_argument("--fast", action="store_true", help="roster values only")
    s.add_argument("--tol", type=float, default=DEFAULT_TOL)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_special)

    c = sub.add_parser("catalog", help="one row per partition of each d <= dmax")
    c.add_argument("dmax", type=int)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--tol", type=float, default=DEFAULT_TOL)
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_catalog)

    st = sub.add_parser("stabilizer", help="numeric stabilizer with certification")
    st.add_argument("form")
    st.add_argument("--minpoly")
    st.add_argument("--tol", type=float, default=DEFAULT_TOL)
    st.add_argument("--json", action="store_true")
    st.set_defaults(func=cmd_stabilizer)

    o = sub.add_parser("oracle", help="closed form versus brute-force count for a partition")
    o.add_argument("partition", help='e.g. "1,1,1,1,1"')
    o.set_defaults(func=cmd_oracle)
    return p


def _exit_code(exc: BaseException) -> int:
    if isinstance(exc, InconsistencyError):
        return EXIT_INCONSISTENT
    if isinstance(exc, NumericError):
        return EXIT_NUMERIC
    return EXIT_PARSE


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (BinOrbitError, ValueError) as exc:
        code = getattr(exc, "code", "DOMAIN")
        print(f"error [{code}]: {exc}", file=sys.stderr)
        return _exit_code(exc)


if __name__ == "__main__":
    sys.exit(main())
