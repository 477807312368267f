"""Command-line front end.

    lcsurf {check|invariants|verify|classify} --chart FILE [options]

Exit codes: 0 ok, 2 parse/config error, 3 geometric precondition failure,
4 a residual above tolerance.  Output never depends on the worker count,
so golden files can be compared byte for byte.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from .analysis import DEFAULT_ORDER, Tolerances, analyze_chart
from .classifier import ISOTROPY_TOL, PHI_TOL, RANK_TOL
from .algebra import DEFAULT_TOL
from .dsl import ChartError, ChartSpec, load_chart
from .invariants import (
    FUNDAMENTAL_KEYS,
    MIN_RESIDUAL_ORDER,
    RESIDUAL_KEYS,
    STRUCTURE_KEYS,
    compute_invariants,
)
from .pipeline import (
    GeometryError,
    SpaceFormModel,
    canonical_frame,
    check_lift,
    conformal_factor,
    laplacian_and_curvature,
    lift_to_lightcone,
)

__all__ = ["main", "build_parser", "VERIFY_GATE"]

EXIT_OK, EXIT_PARSE, EXIT_GEOMETRY, EXIT_TOLERANCE = 0, 2, 3, 4
VERIFY_GATE = 1e-6


class ConfigError(ValueError):
    pass


def _point(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected U,V, got {text!r}")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected U,V, got {text!r}") from None


def _positive(text: str) -> float:
    x = float(text)
    if not x > 0:
        raise argparse.ArgumentTypeError(f"tolerance must be > 0, got {text}")
    return x


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="lcsurf", description="Conformal invariants of space-like surfaces in Lorentzian space forms."
    )
    sub = p.add_subparsers(dest="command", required=True)
    for name, help_ in [
        ("check", "check that the chart is space-like, isothermal and regular on its grid"),
        ("invariants", "dump the invariants at one point"),
        ("verify", "maximum residual of every structure/fundamental equation over the grid"),
        ("classify", "decide the branch from grid samples"),
    ]:
        s = sub.add_parser(name, help=help_)
        s.add_argument("--chart", required=True, help="chart file")
        s.add_argument("--at", type=_point, default=None, help="evaluation point U,V")
        s.add_argument("--order", type=int, default=DEFAULT_ORDER, help="jet order (>= 7)")
        s.add_argument("--tol-phi", type=_positive, default=PHI_TOL)
        s.add_argument("--tol-isotropy", type=_positive, default=ISOTROPY_TOL)
        s.add_argument("--tol-rank", type=_positive, default=RANK_TOL)
        s.add_argument("--tol-isothermal", type=_positive, default=DEFAULT_TOL)
        s.add_argument("--format", choices=("json", "csv", "text"), default="text")
        s.add_argument("--workers", type=int, default=1)
    return p


# ---------------------------------------------------------------------------
# helpers


def _tolerances(args) -> Tolerances:
    return Tolerances(
        phi=args.tol_phi,
        isotropy=args.tol_isotropy,
        rank=args.tol_rank,
        isothermal=args.tol_isothermal,
    )


def _config(args) -> dict:
    # the worker count is deliberately not echoed: it must not change output
    return {
        "order": args.order,
        "tol_phi": args.tol_phi,
        "tol_isotropy": args.tol_isotropy,
        "tol_rank": args.tol_rank,
        "tol_isothermal": args.tol_isothermal,
        "verify_gate": VERIFY_GATE,
        "at": list(args.at) if args.at is not None else None,
    }


def _chart_info(chart: ChartSpec, path: str) -> dict:
    return {
        "path": path,
        "name": chart.name,
        "space": chart.space,
        "n": chart.n,
        "constants": {k: v for k, v in chart.constants},
        "coordinates": list(chart.sources),
        "domain": list(chart.domain),
        "grid": list(chart.grid),
    }


def _cplx(z) -> dict:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def _points(chart: ChartSpec, args):
    if args.at is None:
        return None
    if not chart.contains(*args.at):
        raise ConfigError(f"point {args.at} lies outside the chart domain {list(chart.domain)}")
    return [args.at]


def _dump_json(doc) -> str:
    return json.dumps(doc, indent=2, allow_nan=True) + "\n"


def _csv(rows, header) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _fmt(x) -> str:
    if x is None:
        return "-"
    if isinstance(x, float):
        return f"{x:.6g}"
    return str(x)


# ---------------------------------------------------------------------------
# commands


def cmd_check(chart: ChartSpec, args, path: str):
    model = SpaceFormModel.of(chart)
    sig = model.lift_signature
    pts = _points(chart, args) or chart.grid_points()
    rows = []
    for base in pts:
        y = lift_to_lightcone(chart, base, min(args.order, 4))
        chk = check_lift(y, sig, args.tol_isothermal)
        lam = 0.5 * chk.e2lambda.log()
        dy, kappa = laplacian_and_curvature(y, lam)
        rho2, omega = conformal_factor(dy, kappa, lam, sig)
        rows.append((base, chk, float(np.exp(2 * omega.value))))
    e2l = [r[1].h11 for r in rows]
    iso = [max(abs(r[1].h12), abs(r[1].h11 - r[1].h22)) / r[1].h11 for r in rows]
    e2w = [r[2] for r in rows]
    result = {
        "status": "ok",
        "points": len(rows),
        "e2lambda_min": min(e2l),
        "e2lambda_max": max(e2l),
        "isothermal_defect_max": max(iso),
        "e2omega_min": min(e2w),
        "e2omega_max": max(e2w),
    }
    doc = {"chart": _chart_info(chart, path), "config": _config(args), "check": result}
    if args.format == "json":
        out = _dump_json(doc)
    elif args.format == "csv":
        out = _csv(list(result.items()), ["field", "value"])
    else:
        out = f"chart {chart.name}: space-like, isothermal and regular at {len(rows)} point(s)\n"
        out += "".join(f"  {k:24s} {_fmt(v)}\n" for k, v in result.items() if k != "status")
    return out, EXIT_OK


def cmd_invariants(chart: ChartSpec, args, path: str):
    at = args.at
    if at is None:
        u0, u1, v0, v1 = chart.domain
        at = (0.5 * (u0 + u1), 0.5 * (v0 + v1))
    elif not chart.contains(*at):
        raise ConfigError(f"point {at} lies outside the chart domain {list(chart.domain)}")
    frame = canonical_frame(chart, at, args.order, tol=args.tol_isothermal)
    inv = compute_invariants(frame)
    k = inv.n_normal
    fields = [
        ("psi", [_cplx(inv.psi.value)], False),
        ("phi", [_cplx(p.value) for p in inv.phi], True),
        ("Omega", [_cplx(o.value) for o in inv.Omega], True),
        ("A", [_cplx(inv.A[a][b].value) for a in range(k) for b in range(k)], True),
        ("omega", [frame.omega.value], False),
        ("K", [frame.K.value], False),
        ("rho2", [frame.rho2.value], False),
        ("phi_norm_sq", [inv.phi_norm_sq], False),
        ("quartic", [_cplx(inv.quartic)], False),
        ("normal_signs", list(frame.signs), False),
    ]
    table = {
        name: {"value": vals if len(vals) != 1 or name in ("phi", "Omega", "A") else vals[0],
               "gauge_dependent": gauge}
        for name, vals, gauge in fields
    }
    table["Y"] = {"value": [float(x) for x in np.real(frame.Y.value)], "gauge_dependent": False}
    table["N"] = {"value": [float(x) for x in np.real(frame.N.value)], "gauge_dependent": False}
    doc = {
        "chart": _chart_info(chart, path),
        "config": _config(args),
        "point": [float(at[0]), float(at[1])],
        "invariants": table,
    }
    if args.format == "json":
        return _dump_json(doc), EXIT_OK
    rows = []
    for name, entry in table.items():
        vals = entry["value"] if isinstance(entry["value"], list) else [entry["value"]]
        for i, val in enumerate(vals):
            re, im = (val["re"], val["im"]) if isinstance(val, dict) else (float(val), 0.0)
            rows.append((name, i, re, im, int(entry["gauge_dependent"])))
    if args.format == "csv":
        return _csv(rows, ["field", "index", "re", "im", "gauge_dependent"]), EXIT_OK
    out = f"chart {chart.name} at (u, v) = ({at[0]:g}, {at[1]:g})\n"
    complex_fields = ("psi", "phi", "Omega", "A", "quartic")
    for name, i, re, im, gauge in rows:
        tag = "  [gauge-dependent]" if gauge else ""
        val = f"{re:+.12g} {im:+.12g}i" if name in complex_fields else f"{re:+.12g}"
        out += f"  {name}[{i}] = {val}{tag}\n"
    return out, EXIT_OK


def _analysis(chart: ChartSpec, args):
    return analyze_chart(
        chart,
        order=args.order,
        tols=_tolerances(args),
        workers=args.workers,
        points=_points(chart, args),
    )


def _residual_doc(analysis) -> dict | None:
    rep = analysis.residuals
    if rep is None:
        return None
    return {
        k: {"max": rep.values[k], "at": list(rep.argmax[k])} for k in RESIDUAL_KEYS
    }


def _gate(analysis) -> bool:
    rep = analysis.residuals
    return rep is not None and rep.max_of(STRUCTURE_KEYS + FUNDAMENTAL_KEYS) <= VERIFY_GATE


def cmd_verify(chart: ChartSpec, args, path: str):
    analysis = _analysis(chart, args)
    if analysis.failures:
        f = analysis.failures[0]
        raise GeometryError(f"{f.message} at (u, v) = ({f.u:g}, {f.v:g})")
    res = _residual_doc(analysis)
    doc = {"chart": _chart_info(chart, path), "config": _config(args), "residuals": res, "classification": None}
    code = EXIT_OK if _gate(analysis) else EXIT_TOLERANCE
    if args.format == "json":
        return _dump_json(doc), code
    rows = [(k, res[k]["max"], res[k]["at"][0], res[k]["at"][1]) for k in RESIDUAL_KEYS]
    if args.format == "csv":
        return _csv(rows, ["key", "max", "u", "v"]), code
    out = f"chart {chart.name}: residual maxima over {len(analysis.points)} point(s)\n"
    for key, m, u, v in rows:
        gated = "*" if key in STRUCTURE_KEYS + FUNDAMENTAL_KEYS else " "
        out += f"  {gated} {key:6s} {m:.3e}  at ({u:g}, {v:g})\n"
    out += f"  (* gated at {VERIFY_GATE:g}: {'pass' if code == EXIT_OK else 'FAIL'})\n"
    return out, code


def cmd_classify(chart: ChartSpec, args, path: str):
    analysis = _analysis(chart, args)
    rep = analysis.classification
    doc = {
        "chart": _chart_info(chart, path),
        "config": _config(args),
        "residuals": _residual_doc(analysis),
        "classification": rep.to_dict(),
    }
    if rep.branch == "Degenerate":
        code = EXIT_GEOMETRY
    else:
        code = EXIT_OK if _gate(analysis) else EXIT_TOLERANCE
    if args.format == "json":
        return _dump_json(doc), code
    d = rep.to_dict()
    scalar = [(k, v) for k, v in d.items() if k not in ("K_values", "failures", "warnings", "isotropic_c")]
    if args.format == "csv":
        return _csv([(k, "" if v is None else v) for k, v in scalar], ["field", "value"]), code
    out = f"chart {chart.name}: {rep.branch}\n"
    out += "".join(f"  {k:16s} {_fmt(v)}\n" for k, v in scalar if k != "branch")
    out += "".join(f"  warning: {w}\n" for w in rep.warnings)
    return out, code


COMMANDS = {
    "check": cmd_check,
    "invariants": cmd_invariants,
    "verify": cmd_verify,
    "classify": cmd_classify,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.order < MIN_RESIDUAL_ORDER:
            raise ConfigError(f"order ≥ {MIN_RESIDUAL_ORDER} required (got {args.order})")
        if args.workers < 1:
            raise ConfigError("workers must be >= 1")
        chart = load_chart(args.chart)
    except ChartError as err:
        print(f"lcsurf: {args.chart}: {err}", file=sys.stderr)
        return EXIT_PARSE
    except (ConfigError, OSError) as err:
        print(f"lcsurf: {err}", file=sys.stderr)
        return EXIT_PARSE
    try:
        out, code = COMMANDS[args.command](chart, args, args.chart)
    except ConfigError as err:
        print(f"lcsurf: {err}", file=sys.stderr)
        return EXIT_PARSE
    except GeometryError as err:
        print(f"lcsurf: {chart.name}: {err}", file=sys.stderr)
        return EXIT_GEOMETRY
    sys.stdout.write(out)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
