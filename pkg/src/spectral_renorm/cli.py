"""Batch front-end: reproducible data files and static plots.

Subcommands (each writes CSV + JSON into --out, plus SVG when requested):

  spectrum          eigenvalues and atom summary of one level
  dos-compare       level-to-limit distances and fitted decay rates
  schur-verify      exact determinant-recursion check at random points
  conjugacy-verify  exact conjugacy identities + fiber spot checks
  maps-verify       contracted curves, indeterminacy points, chart facts
  dyndeg            degree growth along lines, dynamical-degree class
  cohomology        printed-matrix verification / invariant classes
  potential-grid    the cascade potential sampled on a window
  julia             backward orbit of a quadratic polynomial
  experiment        twist / skew / backward-equidistribution runs

Exit status: 0 on success, 1 when a verification fails, 2 on bad
configuration or exceeded budgets.  A fixed --seed makes all CSV/JSON
outputs byte-identical.  SPECTRAL_RENORM_THREADS caps BLAS parallelism.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path


def _cap_threads():
    cap = os.environ.get("SPECTRAL_RENORM_THREADS")
    if cap:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS",
                    "NUMEXPR_NUM_THREADS"):
            os.environ.setdefault(var, cap)


class BudgetError(RuntimeError):
    pass


def _load_config(path: str | None) -> dict:
    """key=value text config; flags given on the command line win."""
    if not path:
        return {}
    out = {}
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise BudgetError(f"bad config line: {line!r}")
        key, value = line.split("=", 1)
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spectral-renorm",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--config", help="key=value file; flags override it")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--format", default="csv,json",
                       help="comma list from csv,json,svg")

    p = sub.add_parser("spectrum", help="eigenvalues and atoms of one level")
    p.add_argument("--group", required=True,
                   choices=["grigorchuk", "lamplighter", "hanoi"])
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--grig-slice", type=float, default=-1.0)
    common(p)

    p = sub.add_parser("dos-compare", help="convergence diagnostics across levels")
    p.add_argument("--group", required=True,
                   choices=["grigorchuk", "lamplighter", "hanoi"])
    p.add_argument("--levels", default="", help="a..b (inclusive)")
    common(p)

    p = sub.add_parser("schur-verify", help="exact recursion check")
    p.add_argument("--group", required=True,
                   choices=["grigorchuk", "lamplighter", "hanoi"])
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--samples", type=int, default=20)
    common(p)

    p = sub.add_parser("conjugacy-verify", help="exact conjugacy identities")
    p.add_argument("--samples", type=int, default=100)
    common(p)

    p = sub.add_parser("maps-verify",
                       help="contracted curves, indeterminacy, chart facts")
    common(p)

    p = sub.add_parser("dyndeg", help="degree growth and dynamical degree")
    p.add_argument("--map", required=True, dest="map_name",
                   choices=["R_G", "G_G", "R_L", "R_H", "H_inv", "model_square",
                            "model_twist", "model_skew", "cheb"])
    p.add_argument("--iters", type=int, default=7)
    p.add_argument("--trials", type=int, default=3)
    common(p)

    p = sub.add_parser("cohomology", help="blow-up class calculus")
    p.add_argument("--surface", default=None,
                   choices=["grigorchuk4", "lamplighter2", "hanoi4"])
    p.add_argument("--surface-json", default=None, metavar="FILE",
                   help='custom surface/action as {"k", "incidences", "F_star"}')
    p.add_argument("--check", action="store_true",
                   help="verify the printed matrices")
    p.add_argument("--invariant-classes", type=int, default=None, metavar="D",
                   help="detect classes with F^* c = D c")
    common(p)

    p = sub.add_parser("potential-grid", help="cascade potential on a window")
    p.add_argument("--group", required=True,
                   choices=["grigorchuk", "lamplighter", "hanoi"])
    p.add_argument("--window", default="-4,4,-4,4")
    p.add_argument("--resolution", type=int, default=256)
    p.add_argument("--iters", type=int, default=12)
    common(p)

    p = sub.add_parser("julia", help="backward orbit of a quadratic")
    p.add_argument("--poly", default="1,-1,-3", help="a,b,c of a z^2 + b z + c")
    p.add_argument("--depth", type=int, default=12)
    p.add_argument("--mode", default="full_tree",
                   choices=["full_tree", "random_walk"])
    common(p)

    p = sub.add_parser("experiment", help="model-system experiments")
    p.add_argument("--kind", required=True,
                   choices=["twist", "skew", "backward-square", "backward-cheb",
                            "backward-cantor"])
    p.add_argument("--n", type=int, default=10, help="time / depth parameter")
    p.add_argument("--eta0", type=float, default=3.0)
    p.add_argument("--seed-point", default="1.7")
    common(p)
    return parser


def main(argv=None) -> int:
    _cap_threads()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _load_config(args.config)
        for key, value in config.items():
            if hasattr(args, key) and parser.get_default(key) == getattr(args, key):
                setattr(args, key, type(getattr(args, key))(value)
                        if getattr(args, key) is not None else value)
        handler = _HANDLERS[args.command]
        return handler(args)
    except BudgetError as exc:
        _err(str(exc))
        return 2
    except ValueError as exc:
        _err(str(exc))
        return 2


def _err(message: str) -> None:
    sys.stderr.write(json.dumps({"error": message}, sort_keys=True) + "\n")


def _formats(args):
    return set(args.format.split(","))


def _outdir(args) -> Path:
    path = Path(args.out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def cmd_spectrum(args) -> int:
    from spectral_renorm import output, spectra

    out = _outdir(args)
    fmts = _formats(args)
    result = spectra.dos(args.group, args.level, args.grig_slice)
    m = result.measure
    stem = f"spectrum_{args.group}_n{args.level}"
    if "csv" in fmts:
        size = 3 ** args.level if args.group == "hanoi" else 2 ** args.level
        rows = [(args.level, p, int(round(w * size))) for p, w in zip(m.points, m.weights)]
        output.write_csv(out / f"{stem}.csv", ["level", "eigenvalue", "multiplicity"], rows)
    if "json" in fmts:
        clusters = spectra.atoms(m, 1e-8 * max(abs(m.points[0]), abs(m.points[-1]), 1.0))
        output.write_json(out / f"{stem}.json", {
            "group": result.group,
            "level": result.level,
            "slice": result.slice_descriptor,
            "mass": m.mass,
            "atoms": [{"center": c, "mass": w} for c, w in clusters],
            "residual_bound": result.residual_bound,
        })
    if "svg" in fmts:
        import numpy as np

        output.svg_cdf(out / f"{stem}_cdf.svg", m.points, m.weights,
                       title=f"{args.group} level {args.level} spectral CDF")
        size = 3 ** args.level if args.group == "hanoi" else 2 ** args.level
        mults = [max(int(round(w * size)), 1) for w in m.weights]
        output.svg_histogram(out / f"{stem}_hist.svg",
                             np.repeat(m.points, mults),
                             title=f"{args.group} level {args.level} spectrum")
    return 0


def cmd_dos_compare(args) -> int:
    from spectral_renorm import output, spectra

    out = _outdir(args)
    fmts = _formats(args)
    if args.levels:
        lo, hi = args.levels.split("..")
        levels = list(range(int(lo), int(hi) + 1))
    else:
        levels = {"grigorchuk": list(range(4, 12)), "lamplighter": list(range(4, 13)),
                  "hanoi": list(range(3, 8))}[args.group]
    report = spectra.convergence_report(args.group, levels)
    stem = f"dos_compare_{args.group}"
    if "csv" in fmts:
        output.write_csv(out / f"{stem}.csv", ["level", "distance", "metric"],
                         [(r["level"], r["distance"], r["metric"]) for r in report["rows"]])
    if "json" in fmts:
        output.write_json(out / f"{stem}.json", report)
    if "svg" in fmts:
        output.svg_series(out / f"{stem}.svg",
                          [r["level"] for r in report["rows"]],
                          [r["distance"] for r in report["rows"]],
                          title=f"{args.group}: distance to limit", logy=True)
    return 0


def cmd_schur_verify(args) -> int:
    from spectral_renorm import output, pencils

    out = _outdir(args)
    scheme = pencils.builtin_scheme(args.group)
    try:
        report = pencils.verify_recursion(scheme, args.level, args.samples, args.seed)
    except ValueError as exc:
        raise BudgetError(str(exc)) from None
    stem = f"schur_{args.group}_n{args.level}"
    if "json" in _formats(args):
        output.write_json(out / f"{stem}.json", report)
    if "csv" in _formats(args):
        output.write_csv(out / f"{stem}.csv", ["lambda", "mu"],
                         [(l, m) for l, m in report["points"]])
    return 0 if not report["failures"] else 1


def cmd_conjugacy_verify(args) -> int:
    from spectral_renorm import conjugacy, output

    out = _outdir(args)
    report = {
        "identities": conjugacy.conjugacy_checks(),
        "chebyshev_normalization": conjugacy.chebyshev_semiconj_check(),
        "fiber": conjugacy.fiber_conjugation_check(args.samples, seed=args.seed),
    }
    if "json" in _formats(args):
        output.write_json(out / "conjugacy_verify.json", report)
    ok = (all(report["identities"].values())
          and report["chebyshev_normalization"]["2z^2-1"]
          and report["fiber"]["passed"]
          and all(report["fiber"]["symbolic"].values()))
    return 0 if ok else 1


def cmd_maps_verify(args) -> int:
    from spectral_renorm import output
    from spectral_renorm.ratmaps import charts
    from spectral_renorm.verification import contracted_curve_report, indeterminacy_report

    out = _outdir(args)
    report = {
        "contracted": contracted_curve_report(),
        "indeterminacy": indeterminacy_report(),
        "charts": charts.standard_chart_checks(),
    }
    if "json" in _formats(args):
        output.write_json(out / "maps_verify.json", report)
    ok = (all(r["ok"] for r in report["contracted"])
          and all(r["ok"] for r in report["indeterminacy"])
          and all(report["charts"].values()))
    return 0 if ok else 1


def cmd_dyndeg(args) -> int:
    from spectral_renorm import output
    from spectral_renorm.ratmaps import degrees, maps

    if args.iters > degrees.MAX_ITERATES:
        raise BudgetError(f"iteration budget is {degrees.MAX_ITERATES}")
    out = _outdir(args)
    result = degrees.dynamical_degree(maps.builtin_map(args.map_name),
                                      iterations=args.iters, trials=args.trials,
                                      seed=args.seed)
    stem = f"dyndeg_{args.map_name}"
    if "json" in _formats(args):
        output.write_json(out / f"{stem}.json", result)
    if "csv" in _formats(args):
        output.write_csv(out / f"{stem}.csv", ["iterate", "degree"],
                         list(enumerate(result["degrees"], start=1)))
    if "svg" in _formats(args):
        output.svg_series(out / f"{stem}.svg", list(range(1, len(result["degrees"]) + 1)),
                          result["degrees"], title=f"deg {args.map_name}^n", logy=True)
    return 0


def cmd_cohomology(args) -> int:
    from spectral_renorm import cohomology, output

    out = _outdir(args)
    status = 0
    if args.surface_json:
        data = json.loads(Path(args.surface_json).read_text())
        action = cohomology.action_from_json(data)
        report = {
            "surface": "custom",
            "signature": list(action.surface.signature()),
            "pullback": [list(r) for r in action.pull],
            "spectral_radius": str(action.spectral_radius),
            "jordan_block": action.jordan_block,
        }
        if args.invariant_classes is not None:
            report["invariant_classes"] = cohomology.invariant_classes(
                action, args.invariant_classes)
        name = "custom"
    elif args.surface:
        report = {"surface": args.surface}
        if args.check or args.invariant_classes is None:
            check = cohomology.verify_printed_matrices(args.surface)
            report["check"] = check
            if not check["all_ok"]:
                status = 1
        if args.invariant_classes is not None:
            x = cohomology.surface(args.surface)
            action = cohomology.map_action(x, cohomology.PUSHFORWARD[args.surface],
                                           cohomology.TOP_DEGREE[args.surface])
            report["invariant_classes"] = cohomology.invariant_classes(
                action, args.invariant_classes)
        name = args.surface
    else:
        raise BudgetError("cohomology needs --surface or --surface-json")
    if "json" in _formats(args):
        output.write_json(out / f"cohomology_{name}.json", report)
    return status


def cmd_potential_grid(args) -> int:
    from spectral_renorm import output, pencils
    from spectral_renorm.ratmaps.potential import RecursionPotential, potential_grid

    out = _outdir(args)
    window = tuple(float(v) for v in args.window.split(","))
    if len(window) != 4:
        raise BudgetError("window must be xmin,xmax,ymin,ymax")
    if args.resolution > 2048:
        raise BudgetError("resolution capped at 2048")
    scheme = pencils.builtin_scheme(args.group)
    spec = RecursionPotential.from_scheme(scheme)
    grid = potential_grid(spec, window, args.resolution, args.iters)
    stem = f"potential_{args.group}_r{args.resolution}_n{args.iters}"
    fmts = _formats(args)
    if "csv" in fmts:
        rows = []
        values = grid["values"]
        for i, y in enumerate(grid["ys"]):
            for j, x in enumerate(grid["xs"]):
                rows.append((x, y, values[i, j]))
        output.write_csv(out / f"{stem}.csv", ["x", "y", "value"], rows)
    if "json" in fmts:
        import numpy as np

        finite = grid["values"][np.isfinite(grid["values"])]
        output.write_json(out / f"{stem}.json", {
            "group": args.group,
            "window": grid["window"],
            "resolution": args.resolution,
            "iters": args.iters,
            "finite_cells": int(finite.size),
            "neg_inf_cells": int(grid["neg_inf_mask"].sum()),
            "dead_cells": int(grid["dead_mask"].sum()),
            "min": float(finite.min()) if finite.size else None,
            "max": float(finite.max()) if finite.size else None,
        })
    output.write_pgm16(out / f"{stem}.pgm", grid["values"])
    return 0


def cmd_julia(args) -> int:
    from spectral_renorm import output, spectra

    out = _outdir(args)
    coeffs = tuple(float(v) for v in args.poly.split(","))
    if len(coeffs) != 3:
        raise BudgetError("--poly needs a,b,c")
    if args.mode == "full_tree" and args.depth > 16:
        raise BudgetError("full-tree depth capped at 16")
    pts, measure = spectra.julia_backward(coeffs, args.depth, mode=args.mode,
                                          seed=args.seed)
    stem = f"julia_d{args.depth}"
    fmts = _formats(args)
    if "csv" in fmts:
        output.write_csv(out / f"{stem}.csv", ["re", "im"],
                         [(complex(p).real, complex(p).imag) for p in pts])
    if "json" in fmts:
        output.write_json(out / f"{stem}.json", {
            "poly": list(coeffs),
            "depth": args.depth,
            "mode": args.mode,
            "count": len(pts),
            "support_min": measure.points[0],
            "support_max": measure.points[-1],
        })
    if "svg" in fmts:
        output.svg_histogram(out / f"{stem}.svg", [complex(p).real for p in pts],
                             title=f"backward orbit depth {args.depth}")
    return 0


def cmd_experiment(args) -> int:
    from spectral_renorm import experiments, output

    out = _outdir(args)
    fmts = _formats(args)
    kind = args.kind
    if kind == "twist":
        if args.n > experiments.TWIST_COUNT_MAX:
            raise BudgetError(f"twist n capped at {experiments.TWIST_COUNT_MAX}")
        r = experiments.twist_experiment(args.n)
        r["plane_line_count"] = experiments.twist_plane_count(args.n)
        summary = {
            "kind": kind,
            "params": {"n": args.n, "curve": "angular graph pi + 0.45 eta",
                       "line": "beta = alpha"},
            "count": r["count"],
            "distances": [r["w1_arccos_law"], r["w1_narrow_law"]],
            "plane_line_count": r["plane_line_count"],
        }
        points = r["line_points"]
        measure = r["measure"]
    elif kind == "skew":
        if args.n > experiments.SKEW_DEPTH_MAX:
            raise BudgetError(f"skew depth capped at {experiments.SKEW_DEPTH_MAX}")
        r = experiments.skew_cantor_experiment(args.eta0, args.n)
        summary = {
            "kind": kind, "params": {"eta0": args.eta0, "depth": args.n},
            "count": r["count"], "distances": [r["w1_to_balanced"]],
        }
        points = r["line_points"]
        measure = r["measure"]
    else:
        model = kind.split("-", 1)[1]
        seed_point = complex(args.seed_point) if model == "square" else float(args.seed_point)
        r = experiments.backward_equidistribution(model, seed_point, args.n)
        summary = {
            "kind": kind, "params": {"seed_point": args.seed_point, "depth": args.n},
            "count": 2 ** args.n,
            "distances": [row["distance"] for row in r["series"]],
        }
        points = None
        measure = None
        if "csv" in fmts:
            output.write_csv(out / f"experiment_{kind}.csv",
                             ["depth", "distance", "metric"],
                             [(row["depth"], row["distance"], row["metric"])
                              for row in r["series"]])
        if "svg" in fmts:
            output.svg_series(out / f"experiment_{kind}.svg",
                              [row["depth"] for row in r["series"]],
                              [row["distance"] for row in r["series"]],
                              title=kind, logy=True)
    if points is not None and "csv" in fmts:
        output.write_csv(out / f"experiment_{kind}.csv", ["x", "y"], points)
    if points is not None and "svg" in fmts and len(points) > 1:
        output.svg_scatter(out / f"experiment_{kind}_points.svg",
                           [p[0] for p in points], [p[1] for p in points],
                           title=f"{kind} intersection points")
    if measure is not None and "svg" in fmts:
        output.svg_cdf(out / f"experiment_{kind}_cdf.svg", measure.points,
                       measure.weights, title=kind)
    if "json" in fmts:
        output.write_json(out / f"experiment_{kind}.json", summary)
    return 0


_HANDLERS = {
    "spectrum": cmd_spectrum,
    "dos-compare": cmd_dos_compare,
    "schur-verify": cmd_schur_verify,
    "conjugacy-verify": cmd_conjugacy_verify,
    "maps-verify": cmd_maps_verify,
    "dyndeg": cmd_dyndeg,
    "cohomology": cmd_cohomology,
    "potential-grid": cmd_potential_grid,
    "julia": cmd_julia,
    "experiment": cmd_experiment,
}


if __name__ == "__main__":
    sys.exit(main())
