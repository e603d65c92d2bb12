"""Command-line front end.

Every command delegates to a library function, writes its artifact with
``--out`` (CSV or JSON by extension, or ``--format``) and prints one line
of ``key=value`` pairs.  Options may also come from a JSON job file given
with ``--job``; explicit flags take precedence.

Exit status: 0 on success, 1 on usage errors (bad flags, descriptors or
space names), 2 when a numerical routine fails.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import groupcase, holo, transform
from .dsl import parse_function_dsl
from .errors import CatalogError, DSLError, NumericError
from .geometry import SPACE_NAMES, catalog_space, radius_bounds
from .serialize import format_float, write_csv, write_json

COMMANDS = ("transform", "synthesize", "extend", "type-fit", "pw-check", "support",
            "group-transform", "k-average", "carlson-demo", "bounds")

DEFAULTS = {
    "space": "s2",
    "f": None,
    "l_max": None,
    "n_max": 20,
    "sigma_max": 120.0,
    "n_sigma": 40,
    "r": None,
    "grid": None,
    "ray": None,
    "method": "edge-corrected",
    "threshold": 1e-12,
    "tol": 1e-6,
    "out": None,
    "format": None,
}

LIMITS = {
    "l_max": (0, 2000),
    "n_max": (0, 2000),
    "sigma_max": (holo.MIN_SIGMA_MAX, 600.0),
    "n_sigma": (holo.MIN_RAY_SAMPLES, 2000),
    "grid": (8, 200_001),
    "r": (0.0, 2 * math.pi),
    "threshold": (0.0, 1.0),
    "tol": (0.0, 1.0),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pwsph", description="Spherical transforms and Paley-Wiener diagnostics.")
    p.add_argument("command", nargs="?", choices=COMMANDS)
    p.add_argument("--job", help="JSON file with option values (flags override it)")
    p.add_argument("--space", help=f"catalog space: {', '.join(SPACE_NAMES)}")
    p.add_argument("--f", help="function descriptor, e.g. 'bump(r=1.0)' or 'char(n=2)'")
    p.add_argument("--l-max", type=int, help="largest degree (transform, synthesize)")
    p.add_argument("--n-max", type=int, help="largest character label (group-transform)")
    p.add_argument("--sigma-max", type=float, help="end of the imaginary ray")
    p.add_argument("--n-sigma", type=int, help="number of ray samples")
    p.add_argument("--r", type=float, help="claimed support radius (pw-check)")
    p.add_argument("--grid", type=int, help="number of angle samples")
    p.add_argument("--ray", help="ray CSV (sigma,re,im) for type-fit")
    p.add_argument("--method", choices=("edge-corrected", "plain"), help="type-fit regression")
    p.add_argument("--threshold", type=float, help="relative support threshold (k-average)")
    p.add_argument("--tol", type=float, help="sup-norm tail target for adaptive synthesis")
    p.add_argument("--out", help="artifact path (.csv or .json)")
    p.add_argument("--format", choices=("csv", "json"), help="artifact format if not implied by --out")
    return p


def _resolve(args) -> dict:
    job = {}
    if args.job:
        try:
            with open(args.job, encoding="utf-8") as fh:
                job = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read job file: {exc}") from None
        if not isinstance(job, dict):
            raise UsageError("job file must hold a JSON object")
        job = {k.replace("-", "_"): v for k, v in job.items()}
        unknown = set(job) - set(DEFAULTS) - {"command"}
        if unknown:
            raise UsageError(f"unknown job keys: {', '.join(sorted(unknown))}")
    opts = {}
    for key, default in DEFAULTS.items():
        flag = getattr(args, key)
        opts[key] = flag if flag is not None else job.get(key, default)
    opts["command"] = args.command or job.get("command")
    if opts["command"] not in COMMANDS:
        raise UsageError(f"command must be one of {', '.join(COMMANDS)}")
    for key, (lo, hi) in LIMITS.items():
        v = opts[key]
        if v is not None and not (lo <= v <= hi):
            raise UsageError(f"--{key.replace('_', '-')}={v} outside [{lo}, {hi}]")
    return opts


def _fmt(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format_float(v)
    return str(v)


def _summary(pairs: dict) -> str:
    return " ".join(f"{k}={_fmt(v)}" for k, v in pairs.items())


def _format(opts) -> str:
    if opts["format"]:
        return opts["format"]
    out = opts["out"] or ""
    return "json" if out.endswith(".json") else "csv"


def _emit_table(opts, header, rows, payload):
    if not opts["out"]:
        return
    if _format(opts) == "json":
        write_json(opts["out"], payload)
    else:
        write_csv(opts["out"], header, rows)


def _emit_json(opts, payload):
    if opts["out"]:
        write_json(opts["out"], payload)


def _need(opts, key):
    if opts[key] is None:
        raise UsageError(f"--{key.replace('_', '-')} is required for {opts['command']}")
    return opts[key]


def _space(opts):
    return catalog_space(opts["space"])


def _radial(opts, space):
    return parse_function_dsl(_need(opts, "f"), target="radial", space=space)


def _class(opts):
    return parse_function_dsl(_need(opts, "f"), target="class")


# --- commands ------------------------------------------------------------------


def cmd_transform(opts):
    space = _space(opts)
    f = _radial(opts, space)
    table = transform.coefficient_table(space, f, _need(opts, "l_max"))
    _emit_table(opts, ["l", "re", "im", "quad_err"], table.rows(),
                {"space": space.name, "f": opts["f"], "rows": table.rows()})
    return {"space": space.name, "l_max": table.l_max, "entries": len(table.ls),
            "max_quad_err": float(np.max(table.quad_err))}


def cmd_synthesize(opts):
    space = _space(opts)
    f = _radial(opts, space)
    grid = np.linspace(0.0, math.pi, opts["grid"] or 1001)
    if opts["l_max"] is None:
        values, table, tail = transform.synthesize_adaptive(space, f, grid, tol=opts["tol"])
    else:
        table = transform.coefficient_table(space, f, opts["l_max"])
        values, tail = transform.synthesize(space, table, grid), transform.truncation_tail(space, table)
    values = np.asarray(values, dtype=complex)
    rows = [(t, v.real, v.imag) for t, v in zip(grid, values)]
    _emit_table(opts, ["t", "re", "im"], rows, {"space": space.name, "f": opts["f"], "rows": rows})
    sup_err = float(np.max(np.abs(values - f(grid))))
    return {"space": space.name, "l_max": table.l_max, "tail_bound": tail, "sup_error": sup_err}


def cmd_extend(opts):
    space = _space(opts)
    f = _radial(opts, space)
    ray = holo.extend_on_ray(space, f, 1.0, holo.default_sigmas(opts["sigma_max"], opts["n_sigma"]))
    _emit_table(opts, ["sigma", "re", "im"], ray.rows(),
                {"space": space.name, "f": opts["f"], "center": ray.center, "rows": ray.rows()})
    return {"space": space.name, "samples": int(ray.sigmas.size), "truncated": ray.truncated,
            "center": ray.center.real}


def cmd_type_fit(opts):
    ray = holo.RaySamples.from_csv(_need(opts, "ray"))
    report = holo.fit_exponential_type(ray, method=opts["method"])
    _emit_json(opts, report.to_dict())
    return {"r_hat": report.r_hat, "window_lo": report.window[0], "window_hi": report.window[1],
            "slope_plain": report.slope_plain, "envelope_used": report.envelope_used}


def cmd_pw_check(opts):
    space = _space(opts)
    f = _radial(opts, space)
    report = holo.pw_membership(space, holo.extension_accessor(space, f), _need(opts, "r"),
                                sigma_max=opts["sigma_max"], n_sigma=opts["n_sigma"])
    _emit_json(opts, report.to_dict())
    return {"verdict": report.verdict_for_r, "r_hat": report.type_fit.r_hat, "r": report.claimed_r,
            "symmetry_residual": report.symmetry_residual, "decay_ok": report.decay_ok,
            "coverage": report.coverage}


def cmd_support(opts):
    space = _space(opts)
    f = _radial(opts, space)
    report = holo.support_radius(space, f, sigma_max=opts["sigma_max"], n_sigma=opts["n_sigma"],
                                 method=opts["method"])
    _emit_json(opts, report.to_dict())
    return {"r_hat": report.r_hat, "zero_function": report.zero_function, "method": report.method}


def cmd_group_transform(opts):
    F = _class(opts)
    table = groupcase.group_table(F, opts["n_max"])
    _emit_table(opts, ["n", "re", "im", "quad_err"], table.rows(), {"f": opts["f"], "rows": table.rows()})
    return {"n_max": table.l_max, "entries": len(table.ls), "max_quad_err": float(np.max(table.quad_err))}


def cmd_k_average(opts):
    F = _class(opts)
    n = opts["grid"] or 2048
    grid = np.linspace(0.0, math.pi, n)
    values = np.asarray(groupcase.k_average(F, grid), dtype=complex)
    rows = [(t, v.real, v.imag) for t, v in zip(grid, values)]
    _emit_table(opts, ["t", "re", "im"], rows, {"f": opts["f"], "rows": rows})
    check = groupcase.support_transfer_check(F, threshold=opts["threshold"], n_grid=n)
    out = {"grid": n, "max_abs": float(np.max(np.abs(values))),
           "measured_support": check["measured_support"], "support_check": "skipped"}
    if not check["skipped"]:
        out["support_bound"] = check["support_bound"]
        out["support_check"] = "pass" if check["ok"] else "fail"
    return out


def cmd_carlson_demo(opts):
    space = catalog_space(opts["space"])
    report = holo.carlson_sharpness(space, sigma_max=opts["sigma_max"], n_sigma=opts["n_sigma"])
    _emit_json(opts, report)
    return {"type": report["type"], "lattice_max_abs": report["lattice_max_abs"],
            "symmetry_residual": report["symmetry_residual"], "threshold": report["threshold"]}


def cmd_bounds(opts):
    space = _space(opts)
    b = radius_bounds(space)
    _emit_json(opts, {"space": space.name, **b.to_dict()})
    return {"space": space.name, **b.to_dict()}


HANDLERS = {
    "transform": cmd_transform,
    "synthesize": cmd_synthesize,
    "extend": cmd_extend,
    "type-fit": cmd_type_fit,
    "pw-check": cmd_pw_check,
    "support": cmd_support,
    "group-transform": cmd_group_transform,
    "k-average": cmd_k_average,
    "carlson-demo": cmd_carlson_demo,
    "bounds": cmd_bounds,
}


def run(opts: dict, stdout=None) -> int:
    """Execute a resolved job and return the exit status."""
    stdout = sys.stdout if stdout is None else stdout
    try:
        summary = HANDLERS[opts["command"]](opts)
    except (UsageError, DSLError, CatalogError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        print(_summary({"command": opts["command"], "status": "usage-error"}), file=stdout)
        return 1
    except (NumericError, FloatingPointError) as exc:
        record = exc.record() if isinstance(exc, NumericError) else {"type": type(exc).__name__,
                                                                      "message": str(exc)}
        if opts.get("out") and _format(opts) == "json":
            write_json(opts["out"], {"status": "numeric-failure", "error": record})
        print(f"numeric failure: {exc}", file=sys.stderr)
        print(_summary({"command": opts["command"], "status": "numeric-failure",
                        "error": record["type"]}), file=stdout)
        return 2
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        print(_summary({"command": opts["command"], "status": "usage-error"}), file=stdout)
        return 1
    print(_summary({"command": opts["command"], "status": "ok", **summary}), file=stdout)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        opts = _resolve(parser.parse_args(argv))
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 1
    return run(opts)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
