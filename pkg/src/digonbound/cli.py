"""Command-line front end.

Subcommands: config, bound (theorem-a | origin | general), optimal-alpha,
corollary, extremal (closed-form | ode), measure-beta, verify suite,
audit variants, plot.  Angles are radians; complex flags use "re,im" pairs;
boundary points are given by angle only so they stay exactly unimodular.
Every numeric output is serialized with 17 significant digits and every run
is fully determined by its invocation (DIGON_SEED supplies the default
seed).  Exit status: 0 success / no violations, 1 violation or audit
failure found, 2 invalid input.
"""

from __future__ import annotations

import argparse
import cmath
import json
import math
import os
import sys
from pathlib import Path

from . import bounds, extremal, harness, jsonio, maps
from .errors import DomainError
from .moduli import Variant, reduced_modulus_general
from .partition import (
    BoundaryAnchorSet,
    ExtremalConfig,
    HeightVector,
    config_from_json_obj,
    solve_deltas,
)

USAGE_EXIT = 2


class CliError(Exception):
    pass


def _parse_complex(text: str) -> complex:
    parts = text.split(",")
    if len(parts) != 2:
        raise CliError(f"expected 're,im', got {text!r}")
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError as exc:
        raise CliError(str(exc)) from None


def _parse_floats(text: str):
    try:
        return tuple(float(x) for x in text.split(","))
    except ValueError as exc:
        raise CliError(str(exc)) from None


def _emit(obj, out_path: str | None):
    text = jsonio.dumps(obj, indent=2) + "\n"
    if out_path:
        Path(out_path).write_text(text)
    else:
        sys.stdout.write(text)


def _load_config(args) -> ExtremalConfig:
    if getattr(args, "config_file", None):
        obj = json.loads(Path(args.config_file).read_text())
        return config_from_json_obj(obj)
    if args.theta is None or args.alpha is None:
        raise CliError("provide --theta and --alpha, or --config-file")
    return solve_deltas(
        BoundaryAnchorSet(_parse_floats(args.theta)),
        HeightVector(_parse_floats(args.alpha)),
    )


def _default_seed() -> int:
    return int(os.environ.get("DIGON_SEED", "7"))


# --- subcommand handlers --------------------------------------------------------


def _cmd_config(args) -> int:
    config = solve_deltas(
        BoundaryAnchorSet(_parse_floats(args.theta)),
        HeightVector(_parse_floats(args.alpha)),
    )
    _emit(config.to_json_obj(), args.out)
    return 0


def _both_bounds(fn) -> dict:
    return {v.value: fn(v) for v in Variant}


def _cmd_bound_theorem_a(args) -> int:
    z = _parse_complex(args.z)
    w = _parse_complex(args.w)
    beta = float(args.beta)
    inputs = {"z": [z.real, z.imag], "w": [w.real, w.imag], "beta": beta}
    try:
        inputs["alpha_star"] = bounds.extremal_alpha(z, w, beta)
    except DomainError:
        inputs["alpha_star"] = None
    slack = None
    bound = _both_bounds(lambda v: bounds.bound_single(z, w, beta, v))
    if args.map_file:
        expr = maps.expr_from_json(Path(args.map_file).read_text())
        actual = abs(expr.deriv(z))
        inputs["actual"] = actual
        slack = actual - bound[bounds.OPERATIVE_VARIANT.value]
    report = bounds.BoundReport(bound, bounds.OPERATIVE_VARIANT.value, inputs, slack)
    _emit(report.to_json_obj(), args.out)
    return 0


def _cmd_bound_origin(args) -> int:
    betas = _parse_floats(args.beta)
    heights = HeightVector(_parse_floats(args.alpha))
    report = {
        "bound": bounds.bound_origin(betas, heights),
        "beta": list(betas),
        "alpha": list(heights.alphas),
    }
    _emit(report, args.out)
    return 0


def _cmd_bound_general(args) -> int:
    z = _parse_complex(args.z)
    w = _parse_complex(args.w)
    betas = _parse_floats(args.beta)
    config = _load_config(args)
    anchors = BoundaryAnchorSet(config.thetas, betas)
    heights = config.heights
    bound = _both_bounds(lambda v: bounds.bound_general(z, w, anchors, heights, v))
    inputs = {
        "z": [z.real, z.imag],
        "w": [w.real, w.imag],
        "beta": list(betas),
        "alpha": list(heights.alphas),
        "theta": list(config.thetas),
        "moduli": {
            v.value: {
                "z": [
                    reduced_modulus_general(config, z, j, v)
                    for j in range(config.n)
                ],
                "w": [
                    reduced_modulus_general(config, w, j, v)
                    for j in range(config.n)
                ],
            }
            for v in Variant
        },
    }
    slack = None
    if args.map_file:
        expr = maps.expr_from_json(Path(args.map_file).read_text())
        actual = abs(expr.deriv(z))
        inputs["actual"] = actual
        slack = actual - bound[bounds.OPERATIVE_VARIANT.value]
    report = bounds.BoundReport(bound, bounds.OPERATIVE_VARIANT.value, inputs, slack)
    _emit(report.to_json_obj(), args.out)
    return 0


def _cmd_optimal_alpha(args) -> int:
    betas = _parse_floats(args.beta)
    hv = bounds.optimal_alpha(betas)
    _emit(
        {
            "alpha": list(hv.alphas),
            "beta": list(betas),
            "bound": bounds.bound_origin(betas, hv),
        },
        args.out,
    )
    return 0


def _cmd_corollary(args) -> int:
    betas = _parse_floats(args.beta)
    slack = bounds.corollary_slack(betas, float(args.phi_prime_0))
    _emit(
        {"slack": slack, "feasible": slack >= 0.0, "beta": list(betas),
         "phi_prime_0": float(args.phi_prime_0)},
        args.out,
    )
    return 0


def _cmd_extremal_closed_form(args) -> int:
    z = _parse_complex(args.z)
    w = _parse_complex(args.w)
    beta = float(args.beta)
    expr = extremal.extremal_single(z, w, beta)
    obj = {
        "map": expr.to_json_obj(),
        "alpha_star": bounds.extremal_alpha(z, w, beta),
        "attained": abs(expr.deriv(z)),
    }
    _emit(obj, args.out)
    return 0


def _ray_angles(config: ExtremalConfig, rays: int):
    base = {k * 2.0 * math.pi / rays for k in range(rays)} if rays else set()
    return sorted(base | set(config.thetas))


def _cmd_extremal_ode(args) -> int:
    config = _load_config(args)
    sampled = extremal.integrate_extremal_ode(
        config, float(args.c), _ray_angles(config, args.rays), r_max=float(args.r_max)
    )
    if args.csv_dir:
        extremal.write_ray_csv(sampled, args.csv_dir)
    summary = {
        "config": config.to_json_obj(),
        "c": sampled.origin_slope,
        "rays": [
            {
                "angle": ray.angle,
                "samples": int(len(ray.radii)),
                "r_last": float(ray.radii[-1]),
                "truncated": ray.truncated,
                "max_qd_residual": float(ray.qd_residuals.max()),
            }
            for ray in sampled.rays
        ],
        "equality_audit": extremal.equality_audit(sampled)
        if float(args.r_max) >= 0.99
        else None,
    }
    _emit(summary, args.out)
    return 0


def _cmd_measure_beta(args) -> int:
    config = _load_config(args)
    j = int(args.anchor)
    sampled = extremal.integrate_extremal_ode(
        config, float(args.c), [config.thetas[j]], r_max=float(args.r_max)
    )
    est = extremal.measure_beta(sampled, j)
    _emit(
        {
            "anchor": j,
            "c": float(args.c),
            "value": [est.value.real, est.value.imag],
            "error_bound": est.error_bound,
            "radii_used": est.radii_used,
        },
        args.out,
    )
    return 0


def _cmd_verify_suite(args) -> int:
    if args.config_file:
        suite = json.loads(Path(args.config_file).read_text())
    else:
        suite = harness.default_suite(seed=args.seed, cases=args.cases)
        suite["seed"] = args.seed
    report, status = harness.run_suite(suite)
    _emit(report, args.out)
    return status


def _cmd_audit_variants(args) -> int:
    audit = bounds.audit_variants()
    _emit(audit, args.out)
    all_pass = all(audit[v.value]["passed"] for v in Variant)
    return 0 if all_pass else 1


def _cmd_plot(args) -> int:
    config = _load_config(args)
    sampled = extremal.integrate_extremal_ode(
        config, float(args.c), _ray_angles(config, args.rays), r_max=float(args.r_max)
    )
    emit_plot_data(sampled, args.out)
    return 0


# --- plot emission ---------------------------------------------------------------


def _svg_coord(z: complex, size: int = 500):
    # unit disk mapped into a size x size viewport with 10% margin
    s = size / 2.4
    return (size / 2 + s * z.real, size / 2 - s * z.imag)


def emit_plot_data(sampled: extremal.SampledMap, dirpath: str):
    """Per-ray CSVs plus an SVG overlay of the circle, anchors, zeros, and images."""
    extremal.write_ray_csv(sampled, dirpath)
    out = Path(dirpath)
    size = 500
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<circle cx="{size/2}" cy="{size/2}" r="{size/2.4}" fill="none" '
        'stroke="black" stroke-width="1"/>',
    ]
    for ray in sampled.rays:
        pts = " ".join(
            "{:.3f},{:.3f}".format(*_svg_coord(w)) for w in ray.ws[:: max(1, len(ray.ws) // 200)]
        )
        parts.append(
            f'<polyline points="{pts}" fill="none" stroke="steelblue" stroke-width="0.8"/>'
        )
    for t in sampled.config.thetas:
        x, y = _svg_coord(cmath.exp(1j * t))
        parts.append(
            f'<path d="M {x-5} {y} L {x+5} {y} M {x} {y-5} L {x} {y+5}" '
            'stroke="crimson" stroke-width="2"/>'
        )
    for d in sampled.config.deltas:
        x, y = _svg_coord(cmath.exp(1j * d))
        parts.append(
            f'<circle cx="{x:.3f}" cy="{y:.3f}" r="5" fill="none" '
            'stroke="darkgreen" stroke-width="2"/>'
        )
    parts.append("</svg>")
    (out / "overlay.svg").write_text("\n".join(parts) + "\n")


# --- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="digonbound",
        description="Sharp lower-bound toolkit for univalent disk self-maps "
        "with prescribed boundary anchors (angles in radians).",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("config", help="solve an extremal configuration")
    p.add_argument("--theta", required=True, help="anchor angles, comma-separated radians")
    p.add_argument("--alpha", required=True, help="heights, comma-separated, summing to 1")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_config)

    pb = sub.add_parser("bound", help="evaluate a lower bound")
    bsub = pb.add_subparsers(dest="bound_kind", required=True)

    p = bsub.add_parser("theorem-a", help="single anchor at angle 0, free basepoint")
    p.add_argument("--z", required=True, help="basepoint as re,im")
    p.add_argument("--w", required=True, help="image point as re,im")
    p.add_argument("--beta", required=True, help="boundary derivative at the anchor")
    p.add_argument("--map-file", help="MapExpr JSON to evaluate slack against")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_bound_theorem_a)

    p = bsub.add_parser("origin", help="maps fixing 0 and n anchors")
    p.add_argument("--beta", required=True, help="boundary derivatives, comma-separated")
    p.add_argument("--alpha", required=True, help="heights, comma-separated")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_bound_origin)

    p = bsub.add_parser("general", help="n anchors, free basepoint")
    p.add_argument("--z", required=True)
    p.add_argument("--w", required=True)
    p.add_argument("--beta", required=True)
    p.add_argument("--theta")
    p.add_argument("--alpha")
    p.add_argument("--config-file", help="configuration JSON from `config`")
    p.add_argument("--map-file")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_bound_general)

    p = sub.add_parser("optimal-alpha", help="heights maximizing the origin bound")
    p.add_argument("--beta", required=True)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_optimal_alpha)

    p = sub.add_parser("corollary", help="feasibility slack of the log-derivative inequality")
    p.add_argument("--beta", required=True)
    p.add_argument("--phi-prime-0", required=True)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_corollary)

    pe = sub.add_parser("extremal", help="construct an equality map")
    esub = pe.add_subparsers(dest="extremal_kind", required=True)

    p = esub.add_parser("closed-form", help="single-anchor equality map")
    p.add_argument("--z", required=True)
    p.add_argument("--w", required=True)
    p.add_argument("--beta", required=True)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_extremal_closed_form)

    p = esub.add_parser("ode", help="integrate the trajectory equation")
    p.add_argument("--theta")
    p.add_argument("--alpha")
    p.add_argument("--config-file")
    p.add_argument("--c", required=True, help="origin slope in (0, 1]")
    p.add_argument("--rays", type=int, default=8)
    p.add_argument("--r-max", default="0.999")
    p.add_argument("--csv-dir", help="write per-ray CSV sample files here")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_extremal_ode)

    p = sub.add_parser("measure-beta", help="boundary derivative of an integrated map")
    p.add_argument("--theta")
    p.add_argument("--alpha")
    p.add_argument("--config-file")
    p.add_argument("--c", required=True)
    p.add_argument("--anchor", required=True, help="anchor index j")
    p.add_argument("--r-max", default="0.999")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_measure_beta)

    pv = sub.add_parser("verify", help="run a verification suite")
    vsub = pv.add_subparsers(dest="verify_kind", required=True)
    p = vsub.add_parser("suite")
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--cases", type=int, default=10_000)
    p.add_argument("--config-file", help="suite description JSON")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_verify_suite)

    pa = sub.add_parser("audit", help="audit the bound formula variants")
    asub = pa.add_subparsers(dest="audit_kind", required=True)
    p = asub.add_parser("variants")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_audit_variants)

    p = sub.add_parser("plot", help="emit ray CSVs and an SVG overlay")
    p.add_argument("--theta")
    p.add_argument("--alpha")
    p.add_argument("--config-file")
    p.add_argument("--c", required=True)
    p.add_argument("--rays", type=int, default=16)
    p.add_argument("--r-max", default="0.995")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(fn=_cmd_plot)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except (CliError, DomainError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_EXIT


if __name__ == "__main__":
    sys.exit(main())
