"""Command-line interface.

Subcommands: ``construct`` (evaluate a field on a grid and dump it),
``label`` (nodal decomposition to CSV), ``growth`` (maximum-function
profile), ``suite <name>`` (named verification suite), ``all``.  Exit
code 0 iff every suite verdict is PASS.  Config files are JSON;
unknown keys are rejected.
"""

import argparse
import json
import os
import sys

import numpy as np

from .components import label_components, local_components
from .configs import SUITE_NAMES
from .fields import field_from_json
from .grids import MetricBall, build_grid
from .growth import max_function_profile
from .reports import format_value, rows_to_csv_text
from .suites import run_all, run_suite

_GRID_KEYS = {"domain", "n", "resolution"}


def _load_config(path, allowed):
    if path is None:
        raise SystemExit("this command requires --config <path.json>")
    with open(path) as fh:
        cfg = json.load(fh)
    unknown = set(cfg) - allowed
    if unknown:
        raise SystemExit(f"unknown config keys: {sorted(unknown)}")
    return cfg


def _build_field_and_grid(cfg, resolution_override):
    field = field_from_json(json.dumps(cfg["field"]))
    gspec = cfg["grid"]
    unknown = set(gspec) - _GRID_KEYS
    if unknown:
        raise SystemExit(f"unknown grid keys: {sorted(unknown)}")
    res = resolution_override or gspec["resolution"]
    grid = build_grid((gspec["domain"], gspec["n"]), res)
    return field, grid


def _write(out_dir, name, fmt, rows, columns, summary):
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    if fmt == "csv":
        path = os.path.join(out_dir, f"{name}.csv")
        with open(path, "w") as fh:
            fh.write(rows_to_csv_text(rows, columns))
        paths.append(path)
    payload = dict(summary)
    if fmt == "json":
        payload["rows"] = rows
        payload["columns"] = columns
    path = os.path.join(out_dir, f"{name}.json")
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    paths.append(path)
    for p in paths:
        print(p)


def _cmd_construct(args):
    cfg = _load_config(args.config, {"field", "grid"})
    field, grid = _build_field_and_grid(cfg, args.resolution)
    values = grid.evaluate(field)
    pts = grid.points()
    d = pts.shape[1]
    columns = ["cell"] + [f"x{i + 1}" for i in range(d)] + ["value"]
    rows = []
    flat = values.ravel()
    for i in range(pts.shape[0]):
        row = {"cell": i, "value": float(flat[i])}
        for a in range(d):
            row[f"x{a + 1}"] = float(pts[i, a])
        rows.append(row)
    summary = {
        "field": json.loads(field.to_json()),
        "grid": {"domain": grid.domain.name, "n": grid.domain.n, "resolution": grid.resolution},
        "sup_abs": float(np.abs(values).max()),
        "n_cells": grid.n_cells,
    }
    _write(args.out_dir, "construct", args.format, rows, columns, summary)
    return 0


def _cmd_label(args):
    cfg = _load_config(args.config, {"field", "grid", "zero_tol", "ball"})
    field, grid = _build_field_and_grid(cfg, args.resolution)
    zero_tol = cfg.get("zero_tol")
    if "ball" in cfg:
        ball = MetricBall(tuple(cfg["ball"]["center"]), cfg["ball"]["radius"])
        table = local_components(field, grid, ball, zero_tol=zero_tol)
    else:
        table = label_components(field, grid, zero_tol=zero_tol)
    rows = table.to_rows(field_id=field.to_json())
    columns = ["field_id", "component_id", "sign", "volume", "cell_count"] + sorted(table.flags)
    summary = {
        "n_components": table.n_components,
        "zero_tol": table.zero_tol,
        "region_measure": table.region_measure,
        "unlabeled_measure": table.unlabeled_measure,
    }
    _write(args.out_dir, "label", args.format, rows, columns, summary)
    return 0


def _cmd_growth(args):
    cfg = _load_config(args.config, {"field", "radii", "n_samples"})
    field = field_from_json(json.dumps(cfg["field"]))
    rspec = cfg.get("radii", {"start": 0.3, "stop": 1.0, "count": 16})
    if isinstance(rspec, dict):
        radii = np.geomspace(rspec["start"], rspec["stop"], int(rspec["count"]))
    else:
        radii = np.asarray(rspec, dtype=float)
    rep = max_function_profile(field, radii, n_samples=int(cfg.get("n_samples", 4096)))
    columns = ["radius", "sup_value", "beta", "beta_prime", "sup_log_error"]
    rows = [
        {
            "radius": float(rep.radii[i]),
            "sup_value": float(rep.sup_values[i]),
            "beta": float(rep.betas[i]),
            "beta_prime": float(rep.beta_primes[i]),
            "sup_log_error": float(rep.sup_log_errors[i]),
        }
        for i in range(rep.radii.size)
    ]
    summary = {
        "convexity_defect": rep.convexity_defect,
        "defect_bound": rep.defect_bound,
        "log_convexity_defect": rep.log_convexity_defect,
        "log_defect_bound": rep.log_defect_bound,
        "max_monotonicity_violation": rep.max_monotonicity_violation,
    }
    _write(args.out_dir, "growth", args.format, rows, columns, summary)
    return 0


def _suite_overrides(args):
    over = {}
    if args.config:
        with open(args.config) as fh:
            over.update(json.load(fh))
    if "suite" in over:
        over.pop("suite")
    if args.resolution:
        over["resolution"] = args.resolution
    if args.seed is not None:
        over["seed"] = args.seed
    if args.out_dir:
        over["out_dir"] = args.out_dir
    if args.format:
        over["format"] = args.format
    return over


def _emit_and_print(report, out_dir, fmt):
    from .reports import emit_report

    paths = emit_report(report, out_dir, fmt)
    print(f"{report.suite}: {report.verdict}")
    for p in paths:
        print(f"  {p}")
    return report.verdict == "PASS"


def _cmd_suite(args):
    if args.name not in SUITE_NAMES:
        raise SystemExit(f"unknown suite {args.name!r}; known: {', '.join(SUITE_NAMES)}")
    over = _suite_overrides(args)
    out_dir = over.pop("out_dir", "reports")
    fmt = over.pop("format", "csv")
    report = run_suite(args.name, {**over, "out_dir": out_dir, "format": fmt})
    return 0 if _emit_and_print(report, out_dir, fmt) else 1


def _cmd_all(args):
    over = _suite_overrides(args)
    out_dir = over.pop("out_dir", "reports")
    fmt = over.pop("format", "csv")
    ok = True
    for report in run_all({**over, "out_dir": out_dir, "format": fmt}):
        ok = _emit_and_print(report, out_dir, fmt) and ok
    return 0 if ok else 1


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="nodalgeom",
        description="Eigenfunction construction, nodal decomposition, and "
        "growth/volume verification suites.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp):
        sp.add_argument("--config", help="JSON config path")
        sp.add_argument("--resolution", type=int, help="grid resolution override")
        sp.add_argument("--seed", type=int, help="RNG seed override")
        sp.add_argument("--out-dir", default="reports", help="output directory")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")

    for name, fn in (("construct", _cmd_construct), ("label", _cmd_label), ("growth", _cmd_growth)):
        sp = sub.add_parser(name)
        add_common(sp)
        sp.set_defaults(fn=fn)
    sp = sub.add_parser("suite")
    sp.add_argument("name", help=f"one of: {', '.join(SUITE_NAMES)}")
    add_common(sp)
    sp.set_defaults(fn=_cmd_suite)
    sp = sub.add_parser("all")
    add_common(sp)
    sp.set_defaults(fn=_cmd_all)

    args = parser.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
