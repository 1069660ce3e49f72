"""Command-line front end.

Subcommands: gen, partition, verify, metrics, discrepancy, plot.
Exit codes: 0 success, 1 unexpected runtime error, 2 invalid model or
arguments, 3 verification failure.  All output is deterministic for a
given command line, so re-runs are byte-identical.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys

import numpy as np

from .ensemble import (
    DiamondModel,
    ModelError,
    ModelSpec,
    generate,
    model_constants,
    simple_model,
    validate,
)
from .geometry import PointSet
from .metrics import (
    compute_metrics,
    equatorial_discrepancy,
    l2_discrepancy_quadrature,
    l2_discrepancy_stolarsky,
    polar_cap_profile,
    sup_discrepancy_estimate,
    sup_discrepancy_exact,
)
from .partition import (
    VerificationFailure,
    build_partition,
    partition_records,
    polar_cap_radius,
    covering_upper_bound,
    region_area,
    region_area_fraction_exact,
    side_lengths,
    verify_matching,
)
from . import plotting

CSV_HEADER = ["index", "parallel", "i", "x", "y", "z", "phi", "z_height"]


def _g17(v: float) -> str:
    return f"{v:.17g}"


def write_points_csv(path: str, points: PointSet) -> None:
    lines = [",".join(CSV_HEADER)]
    coords = points.coords
    for k in range(len(points)):
        x, y, z = coords[k]
        phi = math.atan2(y, x) % (2.0 * math.pi)
        lines.append(",".join([
            str(k), str(int(points.parallel[k])), str(int(points.index_in_parallel[k])),
            _g17(x), _g17(y), _g17(z), _g17(phi), _g17(z),
        ]))
    with open(path, "w", newline="\n") as f:
        f.write("\n".join(lines) + "\n")


def read_points_csv(path: str) -> PointSet:
    with open(path, newline="") as f:
        reader = csv.reader(f)
        header = next(reader)
        if header != CSV_HEADER:
            raise ValueError(f"unexpected CSV header {header!r}")
        rows = list(reader)
    coords = np.empty((len(rows), 3))
    parallel = np.empty(len(rows), dtype=np.int64)
    index_in = np.empty(len(rows), dtype=np.int64)
    for k, row in enumerate(rows):
        if int(row[0]) != k:
            raise ValueError(f"row {k} has index {row[0]}")
        parallel[k] = int(row[1])
        index_in[k] = int(row[2])
        coords[k] = [float(row[3]), float(row[4]), float(row[5])]
    return PointSet(coords, parallel=parallel, index_in_parallel=index_in)


def _dump_json(obj, path: str | None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="\n") as f:
            f.write(text)


def _add_model_args(p: argparse.ArgumentParser, required: bool = True) -> None:
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--simple-M", type=int, metavar="M",
                   help="one-piece model with slope 4 and M northern parallels")
    g.add_argument("--model", metavar="FILE",
                   help="JSON file with keys M, n, t, alpha, beta")
    p.add_argument("--theta", default="zeros",
                   help='ring rotations: "zeros", "seed:<int>", or a '
                        "comma-separated list (default zeros)")


def _parse_theta(raw: str):
    if raw in ("zeros",) or raw.startswith("seed:"):
        return raw
    return [float(v) for v in raw.split(",")]


def _resolve_model(args) -> DiamondModel | None:
    theta = _parse_theta(args.theta)
    if args.simple_M is not None:
        if isinstance(theta, list):
            theta = tuple(theta)
        return validate(simple_model(args.simple_M, theta_policy=theta))
    if args.model is not None:
        with open(args.model) as f:
            payload = json.load(f)
        # an explicit --theta wins over whatever the file carries
        if args.theta != "zeros" or "theta_policy" not in payload:
            payload["theta_policy"] = theta
        return validate(ModelSpec.from_dict(payload))
    return None


def _model_sidecar(model: DiamondModel) -> dict:
    return {
        "model": model.spec.to_dict(),
        "N": model.N,
        "p": model.p,
        "r": list(model.r),
        "z_exact": [str(z) for z in model.z_exact],
        "theta": list(model.theta),
    }


# ---------------------------------------------------------------------------
# subcommands


def cmd_gen(args) -> int:
    model = _resolve_model(args)
    points = generate(model)
    write_points_csv(args.output, points)
    if args.json:
        _dump_json(_model_sidecar(model), args.json)
    print(f"wrote {len(points)} points to {args.output}")
    return 0


PARTITION_CSV_COLUMNS = [
    "region_id", "kind", "j", "i", "phi_lo", "phi_hi",
    "h_lo", "h_hi", "h_lo_exact", "h_hi_exact", "matched_point",
]


def cmd_partition(args) -> int:
    model = _resolve_model(args)
    part = build_partition(model)
    records = partition_records(part)
    if args.output not in (None, "-") and args.output.endswith(".csv"):
        lines = [",".join(PARTITION_CSV_COLUMNS)]
        for rec in records:
            lines.append(",".join("" if rec[c] is None else str(rec[c])
                                  for c in PARTITION_CSV_COLUMNS))
        with open(args.output, "w", newline="\n") as f:
            f.write("\n".join(lines) + "\n")
        return 0
    payload = _model_sidecar(model)
    payload["regions"] = records
    payload["polar_cap_radius"] = polar_cap_radius(part)
    payload["covering_upper_bound"] = covering_upper_bound(part)
    _dump_json(payload, args.output)
    return 0


def cmd_verify(args) -> int:
    model = _resolve_model(args)
    points = generate(model)
    part = build_partition(model)
    n = model.N

    from fractions import Fraction
    target = Fraction(1, n)
    area_f = 4.0 * math.pi / n
    for rid in range(n):
        region = part.region(rid)
        if region_area_fraction_exact(part, region) != target:
            raise VerificationFailure(f"region {rid} area fraction is not 1/N")
        if abs(region_area(region) - area_f) > 1e-12 * area_f:
            raise VerificationFailure(f"region {rid} float area off 4*pi/N")
    print(f"ok: all {n} regions have area 4*pi/N (exact + float)")

    report = verify_matching(part, points)
    if not report.ok:
        for line in report.failures[:10]:
            print(f"FAIL: {line}", file=sys.stderr)
        raise VerificationFailure("matching verification failed")
    print("ok: height interleaving certificate")
    print("ok: region-point matching is the designed bijection")

    # Shape control on the canonical horizontal side (the arc at the
    # collar's defining height): the tight band for the one-piece model,
    # the instance constants d1/d2 otherwise.
    sq = math.sqrt(n)
    if model.is_simple:
        lo_bound, hi_bound = math.pi / math.sqrt(2.0), math.pi * math.sqrt(2.0)
        label = "(pi/sqrt(2), pi*sqrt(2))"
    elif model.M >= 2:
        cst = model_constants(model)
        lo_bound, hi_bound = cst.d1, cst.d2
        label = "[d1, d2]"
    else:
        lo_bound, hi_bound = 0.0, 2.0 * math.pi * sq
        label = "(0, 2*pi*sqrt(N))"
    strict = model.is_simple
    for j in range(1, model.M + 1):
        side = side_lengths(part, j).horizontal_lo * sq
        bad = not (lo_bound < side < hi_bound) if strict else \
            not (lo_bound - 1e-12 <= side <= hi_bound + 1e-12)
        if bad:
            raise VerificationFailure(
                f"collar {j}: sqrt(N) x horizontal side {side:.6f} outside {label}"
            )
    print(f"ok: sqrt(N) x canonical horizontal sides within {label}")

    if args.points:
        file_points = read_points_csv(args.points)
        if len(file_points) != n or not np.array_equal(file_points.coords, points.coords):
            raise VerificationFailure(f"{args.points} does not match the model ensemble")
        print(f"ok: {args.points} matches the regenerated ensemble bit for bit")
    print("all checks passed")
    return 0


def cmd_metrics(args) -> int:
    model = _resolve_model(args)
    if args.points:
        points = read_points_csv(args.points)
        if model is not None and len(points) != model.N:
            raise ValueError("points file size does not match the model")
    elif model is not None:
        points = generate(model)
    else:
        raise ValueError("need --points or a model")
    part = build_partition(model) if model is not None else None
    sup_mode = None if args.sup == "none" else args.sup
    report = compute_metrics(
        points, model, part,
        riesz_s=tuple(float(s) for s in args.riesz_s.split(",")) if args.riesz_s else (),
        energies=not args.no_energies,
        covering_k=args.k,
        sup_mode=sup_mode,
        sup_samples=args.samples,
        sup_seed=args.seed,
        l2_quadrature=args.l2_quadrature,
        workers=args.workers,
    )
    _dump_json(report.to_dict(), args.json)
    return 0


def cmd_discrepancy(args) -> int:
    model = _resolve_model(args)
    points = generate(model)
    n = model.N
    out = {"N": n, "mode": args.mode}
    code = 0

    if args.mode == "polar":
        prof = polar_cap_profile(model, points)
        out["profile"] = [
            {"j": j, "exact": str(v), "value": float(v)}
            for j, v in zip(prof.j, prof.exact)
        ]
        out["max"] = {"j": prof.argmax_j, "exact": str(prof.max_exact),
                      "value": float(prof.max_exact)}
    elif args.mode == "equatorial":
        eq = equatorial_discrepancy(model, points)
        out["exact"] = str(eq.exact)
        out["value"] = float(eq.exact)
        out["counting"] = eq.counting
    elif args.mode == "l2-stolarsky":
        out["value"] = l2_discrepancy_stolarsky(points, workers=args.workers)
    elif args.mode == "l2-quadrature":
        out["value"] = l2_discrepancy_quadrature(
            points, n_centers=args.quad_centers, n_t=args.quad_t
        )
    else:
        if args.mode == "exact":
            if n > args.max_points:
                raise ValueError(
                    f"exact mode handles at most {args.max_points} points "
                    f"(model has {n}); use --mode estimate"
                )
            sup = sup_discrepancy_exact(points, max_points=args.max_points)
        else:
            sup = sup_discrepancy_estimate(points, n_samples=args.samples,
                                           seed=args.seed)
        c = sup.witness.center
        out["value"] = sup.value
        out["side"] = sup.side
        out["witness_center"] = [c.x, c.y, c.z]
        out["witness_t"] = sup.witness.t
        if model.is_simple:
            lower = math.sqrt(n - 2) / n
            upper = (4.0 + 2.0 * math.sqrt(2.0)) / math.sqrt(n)
            out["envelope"] = {"lower": lower, "upper": upper}
            ok = lower - 1e-12 <= sup.value <= upper + 1e-12
            out["envelope_ok"] = bool(ok)
            if args.check_envelope and not ok:
                code = 3
    _dump_json(out, args.json)
    return code


def cmd_plot(args) -> int:
    if args.kind == "partition":
        model = _resolve_model(args)
        if model is None:
            raise ValueError("--kind partition needs --simple-M or --model")
        points = generate(model)
        part = build_partition(model)
        svg = plotting.svg_projection(points, part)
    else:
        lo, hi = (int(v) for v in args.m_range.split(":"))
        if lo < 1 or hi < lo:
            raise ValueError("bad --M-range, want LO:HI with 1 <= LO <= HI")
        ms = list(range(lo, hi + 1))
        ns, sup_vals, polar_vals = [], [], []
        for m in ms:
            model = validate(simple_model(m))
            points = generate(model)
            ns.append(model.N)
            sup = sup_discrepancy_estimate(points, n_samples=args.samples,
                                           seed=args.seed)
            sup_vals.append(math.sqrt(model.N) * sup.value)
            prof = polar_cap_profile(model, points)
            polar_vals.append(math.sqrt(model.N) * float(prof.max_exact))
        svg = plotting.svg_scaling(
            ns,
            {"sqrt(N) * sup-cap estimate": sup_vals,
             "sqrt(N) * polar maximum": polar_vals},
            guides=[("1", 1.0), ("4+2*sqrt(2)", 4.0 + 2.0 * math.sqrt(2.0))],
            title="scale-free cap discrepancy, one-piece model",
        )
    with open(args.output, "w", newline="\n") as f:
        f.write(svg)
    print(f"wrote {args.output}")
    return 0


def cmd_constants(args) -> int:
    model = _resolve_model(args)
    _dump_json(model_constants(model).to_dict(), args.json)
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="diamondsphere",
        description="equal-area diamond point ensembles on the unit sphere",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate an ensemble as CSV")
    _add_model_args(p)
    p.add_argument("-o", "--out", "--output", dest="output", required=True,
                   metavar="CSV")
    p.add_argument("--json", metavar="FILE", help="model sidecar with exact heights")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("partition", help="emit the equal-area partition as JSON")
    _add_model_args(p)
    p.add_argument("-o", "--output", default="-", metavar="FILE")
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("verify", help="run the exact structure checks")
    _add_model_args(p)
    p.add_argument("--points", metavar="CSV", help="also check a points file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("metrics", help="compute quality metrics as JSON")
    _add_model_args(p, required=False)
    p.add_argument("--points", metavar="CSV", help="load points instead of generating")
    p.add_argument("--json", default="-", metavar="FILE")
    p.add_argument("--riesz-s", default="1", metavar="S1,S2,...")
    p.add_argument("--no-energies", action="store_true")
    p.add_argument("--sup", choices=["estimate", "exact", "none"], default="estimate")
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--k", type=int, default=None, help="covering grid size (>= 10 N)")
    p.add_argument("--l2-quadrature", action="store_true")
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("discrepancy", help="cap discrepancy report as JSON")
    _add_model_args(p)
    p.add_argument("--mode", default="estimate",
                   choices=["polar", "equatorial", "exact", "estimate",
                            "l2-stolarsky", "l2-quadrature"])
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-points", type=int, default=150)
    p.add_argument("--quad-centers", type=int, default=4096)
    p.add_argument("--quad-t", type=int, default=256)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--check-envelope", action="store_true",
                   help="exit 3 if a simple model leaves its guaranteed band")
    p.add_argument("--json", default="-", metavar="FILE")
    p.set_defaults(func=cmd_discrepancy)

    p = sub.add_parser("constants", help="print the model constant table as JSON")
    _add_model_args(p)
    p.add_argument("--json", default="-", metavar="FILE")
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("plot", help="render an SVG figure")
    _add_model_args(p, required=False)
    p.add_argument("--kind", choices=["partition", "scaling"], default="partition")
    p.add_argument("--M-range", "--m-range", dest="m_range", default="2:24",
                   metavar="LO:HI", help="M values for --kind scaling")
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", required=True, metavar="SVG")
    p.set_defaults(func=cmd_plot)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ModelError as exc:
        print(f"model error [{exc.code}]: {exc}", file=sys.stderr)
        return 2
    except VerificationFailure as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover
        print(f"unexpected error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
