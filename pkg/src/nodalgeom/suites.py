"""Named verification suites.

Each suite composes the field library, grids, nodal decomposition and
growth analysis into one quantitative check with a machine-recomputable
verdict:

* ``local_faber_krahn`` -- scan metric balls below the wavelength scale
  and verify the volume of every local nodal component meeting the half
  ball stays above a calibrated dimensionless floor once scaled by
  (sqrt(lambda) log lambda)^(n-1).  A layer-scan mode covers
  above-wavelength balls by summing component volume over annular layers.
* ``sharpness_sphere``  -- pole-centered balls on the many-domain sphere
  harmonics: the smallest component volume ratio times sqrt(lambda)^(n-1)
  stays bounded above, so the local volume bound is tight up to the log
  factor.
* ``torus_example``     -- order-one balls on the torus: the strip
  through the ball center has volume ratio of order sqrt(lambda)^-(n-1)
  while wrapping around the torus (never contained in the ball).
* ``property_suites``   -- three-circles convexity, rapid growth in
  narrow components, propagation of smallness, the restricted-growth
  comparison with fit-and-freeze constants, and the dimension-2 volume
  bound, on seeded random harmonic ensembles plus closed-form families.

All randomness flows through per-part seeded generators; reruns with the
same config produce byte-identical reports.
"""

import math

import numpy as np

from . import __version__
from .components import label_components, local_components
from .configs import prepare_config
from .fields import harmonic_polynomial_2d, sphere_harmonic_y, sphere_north_pole, torus_eigenfunction
from .grids import MetricBall, build_grid, spherical_layers
from .growth import (
    SubharmonicRestriction,
    eremenko_check,
    max_function_profile,
    propagation_check,
    rapid_growth_ratio,
    dim2_volume_bound_check,
)
from .reports import SuiteReport

_SECTOR_TARGET = math.log(2.0) / 2.0


def _next_pow2(x):
    return 1 << (int(math.ceil(x)) - 1).bit_length()


def _auto_resolution(domain, k, radius, max_resolution):
    """Resolution giving >= 8 cells across the ball radius and >= 6 cells
    across one nodal width."""
    if domain == "torus":
        need = max(8.0 / radius, 12.0 * k, 512.0)
    else:
        need = max(8.0 * math.pi / radius, 6.0 * (k + 1), 256.0)
    return min(_next_pow2(need), max_resolution)


def _provenance(params, resolutions):
    return {
        "tool_version": __version__,
        "seed": params["seed"],
        "resolutions": resolutions,
        "config": {k: v for k, v in sorted(params.items())},
    }


def _params(config, suite):
    if hasattr(config, "params"):
        return dict(config.params)
    return prepare_config(suite, config)


# ---------------------------------------------------------------------------
# local Faber-Krahn scan


def _ball_centers(params, rng, domain, n):
    policy = params["ball_policy"]
    if policy == "fixed":
        centers = [tuple(c) for c in params["ball_centers"]]
        if not centers:
            raise ValueError("ball_policy 'fixed' requires ball_centers")
        return centers
    if policy == "pole":
        if domain != "sphere":
            raise ValueError("pole ball policy requires the sphere domain")
        return [tuple(sphere_north_pole(n))]
    count = int(params["ball_count"])
    if domain == "torus":
        return [tuple(c) for c in rng.random((count, n))]
    v = rng.normal(size=(count, n + 1))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    return [tuple(c) for c in v]


def run_local_faber_krahn(config=None):
    """Scan sub-wavelength balls; verify the scaled local-volume floor."""
    p = _params(config, "local_faber_krahn")
    domain, n = p["domain"], p["n"]
    rng = np.random.default_rng([p["seed"], 11])
    rows = []
    resolutions = {}
    per_k_min = {}
    for k in p["k_list"]:
        field = torus_eigenfunction(n, k) if domain == "torus" else sphere_harmonic_y(n, k)
        lam = field.eigenvalue
        radius = p["radius_scale"] / math.sqrt(lam)
        res = p["resolution"]
        if res == "auto":
            res = _auto_resolution(domain, k, radius, p["max_resolution"])
        grid = build_grid((domain, n), res)
        values = grid.evaluate(field)
        resolutions[str(k)] = res
        factor = (math.sqrt(lam) * math.log(lam)) ** (n - 1)
        if p["mode"] == "layer_scan":
            rows.extend(_layer_scan_rows(p, grid, values, field, k, factor))
            per_k_min[str(k)] = min(
                r["invariant"] for r in rows if r["k"] == k and r["case"] == "layer"
            )
            continue
        centers = _ball_centers(p, rng, domain, n)
        k_min = math.inf
        for b_i, center in enumerate(centers):
            ball = MetricBall(center, radius)
            table = local_components(None, grid, ball, zero_tol=0.0, values=values)
            meets = table.flags["meets_half_ball"]
            ratios = table.volumes[meets] / table.region_measure
            min_ratio = float(ratios.min())
            inv = min_ratio * factor
            k_min = min(k_min, inv)
            rows.append(
                {
                    "case": "ball",
                    "k": k,
                    "ball_index": b_i,
                    "lambda": lam,
                    "radius": radius,
                    "resolution": res,
                    "ball_cells": int(table.region_measure / grid.cell_measures())
                    if np.isscalar(grid.cell_measures())
                    else -1,
                    "n_components": table.n_components,
                    "n_meeting_half": int(meets.sum()),
                    "min_volume_ratio": min_ratio,
                    "trivial_interior": bool(table.n_components == 1),
                    "invariant": inv,
                }
            )
        per_k_min[str(k)] = k_min
    mins = np.array([per_k_min[str(k)] for k in p["k_list"]])
    ks = np.array([float(k) for k in p["k_list"]])
    trend = float(np.polyfit(np.log(ks), np.log(mins), 1)[0]) if len(ks) > 1 else 0.0
    rule = {"kind": "min_above", "column": "invariant", "floor": p["floor"]}
    report = SuiteReport(
        suite=f"local_faber_krahn_{domain}{n}",
        columns=[
            "case",
            "k",
            "ball_index",
            "lambda",
            "radius",
            "resolution",
            "ball_cells",
            "n_components",
            "n_meeting_half",
            "min_volume_ratio",
            "trivial_interior",
            "invariant",
        ],
        cases=rows,
        verdict_rule=rule,
        fitted_constants={
            "floor": p["floor"],
            "per_k_min": per_k_min,
            "trend_slope_log_min_vs_log_k": trend,
        },
        invariant_min=float(mins.min()),
        invariant_max=float(max(r["invariant"] for r in rows)),
        provenance=_provenance(p, resolutions),
    )
    return report


def _layer_scan_rows(p, grid, values, field, k, factor):
    """Above-wavelength mode: annular layers each probed by a small ball."""
    n = grid.domain.n
    lam = field.eigenvalue
    width = p["layer_width_scale"] / math.sqrt(lam)
    center = (1.0 / (4 * k),) * (n - 1) + (0.5,)
    big = MetricBall(center, p["layer_big_radius"])
    table = label_components(values, grid, zero_tol=0.0)
    center_idx = tuple(int(c * grid.resolution) for c in center)
    cid = int(table.labels[center_idx])
    comp = table.labels == cid
    dist = grid.distance_to(np.array(center))
    measures = grid.cell_measures()
    pts = grid.points()

    def place(inner, outer):
        shell = comp & (dist >= inner) & (dist < outer)
        if not shell.any():
            return None
        flat = np.flatnonzero(shell.ravel())
        mid = 0.5 * (inner + outer)
        best = flat[np.argmin(np.abs(dist.ravel()[flat] - mid))]
        return pts[best]

    decomp = spherical_layers(big, width, place_probe=place)
    rows = []
    covered = 0.0
    for li, layer in enumerate(decomp.layers):
        if layer.probe_ball is None:
            continue
        pdist = grid.distance_to(layer.probe_ball.center_array)
        in_probe = pdist < layer.probe_ball.radius
        half_probe = pdist < layer.probe_ball.radius / 2
        if np.isscalar(measures):
            vol = measures * float((comp & in_probe).sum())
            probe_measure = measures * float(in_probe.sum())
        else:
            vol = float(measures[comp & in_probe].sum())
            probe_measure = float(measures[in_probe].sum())
        covered += vol
        rows.append(
            {
                "case": "layer",
                "k": k,
                "ball_index": li,
                "lambda": lam,
                "radius": layer.probe_ball.radius,
                "resolution": grid.resolution,
                "ball_cells": int(in_probe.sum()),
                "n_components": 1,
                "n_meeting_half": int((comp & half_probe).any()),
                "min_volume_ratio": vol / probe_measure,
                "trivial_interior": False,
                "invariant": vol / probe_measure * factor,
            }
        )
    if np.isscalar(measures):
        comp_in_big = measures * float((comp & (dist < big.radius)).sum())
    else:
        comp_in_big = float(measures[comp & (dist < big.radius)].sum())
    rows.append(
        {
            "case": "layer_sum",
            "k": k,
            "ball_index": -1,
            "lambda": lam,
            "radius": big.radius,
            "resolution": grid.resolution,
            "ball_cells": decomp.count,
            "n_components": 1,
            "n_meeting_half": 1,
            "min_volume_ratio": covered / comp_in_big,
            "trivial_interior": covered <= comp_in_big,
            "invariant": factor * covered / comp_in_big,
        }
    )
    return rows


# ---------------------------------------------------------------------------
# sharpness on the sphere


def run_sharpness_sphere(config=None):
    """Pole-centered sub-wavelength balls on sphere harmonics: smallest
    component volume ratio times sqrt(lambda)^(n-1) is bounded above."""
    p = _params(config, "sharpness_sphere")
    n = 2
    rows = []
    resolutions = {}
    for k in p["k_list"]:
        field = sphere_harmonic_y(n, k)
        lam = field.eigenvalue
        radius = p["radius_scale"] / k
        if radius >= 1.0 / k:
            raise ValueError("ball radius must stay below 1/k (sub-wavelength hypothesis)")
        res = p["resolution"]
        if res == "auto":
            res = _auto_resolution("sphere", k, radius, p["max_resolution"])
        resolutions[str(k)] = res
        grid = build_grid(("sphere", n), res)
        values = grid.evaluate(field)
        ball = MetricBall(tuple(sphere_north_pole(n)), radius)
        table = local_components(None, grid, ball, zero_tol=0.0, values=values)
        meets = table.flags["meets_half_ball"]
        ratios = table.volumes[meets] / table.region_measure
        min_ratio = float(ratios.min())
        expected_count = 2 * (k // 2)
        rows.append(
            {
                "case": "pole_ball",
                "k": k,
                "lambda": lam,
                "radius": radius,
                "resolution": res,
                "n_components": table.n_components,
                "count_ok": bool(table.n_components >= expected_count),
                "min_volume_ratio": min_ratio,
                "invariant": min_ratio * math.sqrt(lam) ** (n - 1),
                "invariant_k": min_ratio * float(k) ** (n - 1),
            }
        )
    rule = {
        "kind": "and",
        "rules": [
            {"kind": "max_below", "column": "invariant", "ceiling": p["ceiling"]},
            {"kind": "all_true", "column": "count_ok"},
        ],
    }
    invs = [r["invariant"] for r in rows]
    return SuiteReport(
        suite="sharpness_sphere",
        columns=[
            "case",
            "k",
            "lambda",
            "radius",
            "resolution",
            "n_components",
            "count_ok",
            "min_volume_ratio",
            "invariant",
            "invariant_k",
        ],
        cases=rows,
        verdict_rule=rule,
        fitted_constants={"ceiling": p["ceiling"]},
        invariant_min=min(invs),
        invariant_max=max(invs),
        provenance=_provenance(p, resolutions),
    )


# ---------------------------------------------------------------------------
# torus order-one balls


def run_torus_example(config=None):
    """Order-one balls on the torus: the component through the ball center
    has scaled volume ratio bounded above and wraps around the torus.

    The unit torus admits no embedded radius-1 ball (injectivity radius
    1/2); an order-one radius is realized as ball_radius (default 1/4).
    The ball center sits at the midpoint of a positive strip.
    """
    p = _params(config, "torus_example")
    n = p["n"]
    ball_radius = p["ball_radius"]
    rows = []
    resolutions = {}
    for k in p["k_list"]:
        field = torus_eigenfunction(n, k)
        lam = field.eigenvalue
        res = p["resolution"]
        if res == "auto":
            base = 512.0 if n == 2 else 128.0
            res = min(_next_pow2(max(base, 12.0 * k)), p["max_resolution"])
        resolutions[str(k)] = res
        grid = build_grid(("torus", n), res)
        values = grid.evaluate(field)
        center = (1.0 / (4 * k),) * (n - 1) + (0.5,)
        table = label_components(values, grid, zero_tol=0.0)
        center_idx = tuple(int(c * res) for c in center)
        cid = int(table.labels[center_idx])
        comp = table.labels == cid
        dist = grid.distance_to(np.array(center))
        in_ball = dist < ball_radius
        m = grid.cell_measures()
        vol_in = m * float((comp & in_ball).sum())
        ball_measure = m * float(in_ball.sum())
        ratio = vol_in / ball_measure
        rows.append(
            {
                "case": "center_component",
                "k": k,
                "lambda": lam,
                "radius": ball_radius,
                "resolution": res,
                "volume_ratio": ratio,
                "invariant": ratio * math.sqrt(lam) ** (n - 1),
                "meets_half_ball": bool((comp & (dist < ball_radius / 2)).any()),
                "not_contained_in_ball": bool((comp & ~in_ball).any()),
            }
        )
    rule = {
        "kind": "and",
        "rules": [
            {"kind": "max_below", "column": "invariant", "ceiling": p["ceiling"]},
            {"kind": "all_true", "column": "meets_half_ball"},
            {"kind": "all_true", "column": "not_contained_in_ball"},
        ],
    }
    invs = [r["invariant"] for r in rows]
    return SuiteReport(
        suite=f"torus_example_t{n}",
        columns=[
            "case",
            "k",
            "lambda",
            "radius",
            "resolution",
            "volume_ratio",
            "invariant",
            "meets_half_ball",
            "not_contained_in_ball",
        ],
        cases=rows,
        verdict_rule=rule,
        fitted_constants={"ceiling": p["ceiling"], "radius_substitution": ball_radius},
        invariant_min=min(invs),
        invariant_max=max(invs),
        provenance=_provenance(p, resolutions),
    )


# ---------------------------------------------------------------------------
# property suites (growth machinery)

_PART_SEEDS = {
    "three_circles": 101,
    "rapid_growth": 202,
    "propagation": 303,
    "eremenko": 404,
    "dim2_volume": 505,
}

_PROPERTY_COLUMNS = [
    "part",
    "case",
    "draw",
    "k",
    "degree",
    "resolution",
    "eta",
    "log_ratio",
    "exponent_est",
    "volume_fraction",
    "beta_h",
    "beta_phi",
    "beta_r",
    "c_est",
    "residual",
    "defect",
    "defect_bound",
    "log_defect",
    "log_defect_bound",
    "product",
    "expected",
    "rel_error",
    "ok",
]


def _draw_polynomial(rng, max_degree):
    a = rng.normal(size=max_degree + 1)
    b = rng.normal(size=max_degree + 1)
    a[0] = 0.0
    b[0] = 0.0
    return harmonic_polynomial_2d(a, b)


def _gradient_mass(field):
    spec = field.spec
    m = np.arange(len(spec.cos_coeffs), dtype=float)
    return float(np.sum(m * (np.abs(spec.cos_coeffs) + np.abs(spec.sin_coeffs))))


def _qualifying_components(table, dist, min_cells, inner_radius=0.5, positive_only=False):
    out = []
    for pos, cid in enumerate(table.ids):
        if positive_only and table.signs[pos] <= 0:
            continue
        if table.counts[pos] < min_cells:
            continue
        if not ((table.labels == cid) & (dist < inner_radius)).any():
            continue
        out.append(int(cid))
    return out


def _sector_component(grid, table, k):
    """Component of Re z^k containing the positive sector around angle 0."""
    res = grid.resolution
    idx = tuple(int((c + 1.0) / (2.0 / res)) for c in (0.9, 0.0))
    cid = int(table.labels[idx])
    if cid < 0:
        raise RuntimeError("sector probe cell is unlabeled")
    return cid


def _three_circles_part(p, rows):
    rng = np.random.default_rng([p["seed"], _PART_SEEDS["three_circles"]])
    start, stop, count = p["profile_radii"]
    radii = np.geomspace(start, stop, int(count))
    for d in range(int(p["three_circles_draws"])):
        field = _draw_polynomial(rng, p["max_degree"])
        rep = max_function_profile(field, radii)
        rows.append(
            {
                "part": "three_circles",
                "case": "harmonic_profile",
                "draw": d,
                "degree": field.spec.degree,
                "defect": rep.convexity_defect,
                "defect_bound": rep.defect_bound,
                "log_defect": rep.log_convexity_defect,
                "log_defect_bound": rep.log_defect_bound,
                "ok": bool(rep.convexity_defect <= rep.defect_bound),
            }
        )
    grid = build_grid(("ball", 2), p["resolution"])
    dist = grid.distance_to(np.zeros(2))
    rstart, rstop, rcount = p["restriction_radii"]
    rradii = np.geomspace(rstart, rstop, int(rcount))
    collected = 0
    attempts = 0
    while collected < int(p["restriction_draws"]) and attempts < 20 * int(p["restriction_draws"]):
        attempts += 1
        field = _draw_polynomial(rng, p["max_degree"])
        values = grid.evaluate(field)
        table = label_components(values, grid, zero_tol=0.0)
        cids = _qualifying_components(table, dist, p["min_cells"], positive_only=True)
        if not cids:
            continue
        h = SubharmonicRestriction(field, grid, table, cids[0])
        rep = max_function_profile(
            h, rradii, extra_abs_error=2.0 * _gradient_mass(field) * grid.cell_diameter
        )
        rows.append(
            {
                "part": "three_circles",
                "case": "restriction_profile",
                "draw": collected,
                "degree": field.spec.degree,
                "resolution": p["resolution"],
                "defect": rep.convexity_defect,
                "defect_bound": rep.defect_bound,
                "log_defect": rep.log_convexity_defect,
                "log_defect_bound": rep.log_defect_bound,
                "ok": bool(rep.convexity_defect <= rep.defect_bound),
            }
        )
        collected += 1
    return {"kind": "all_true", "column": "ok", "where": {"part": "three_circles"}}, {}


def _rapid_growth_part(p, rows):
    rng = np.random.default_rng([p["seed"], _PART_SEEDS["rapid_growth"]])
    grid = build_grid(("ball", 2), p["sector_resolution"])
    for k in range(int(p["sector_k_min"]), int(p["sector_k_max"]) + 1):
        field = harmonic_polynomial_2d([0.0] * k + [1.0], [])
        values = grid.evaluate(field)
        table = label_components(values, grid, zero_tol=0.0)
        cid = _sector_component(grid, table, k)
        rg = rapid_growth_ratio(values, grid, table, cid, 0.5)
        product = rg.log_ratio * rg.volume_fraction
        rel = abs(product - _SECTOR_TARGET) / _SECTOR_TARGET
        rows.append(
            {
                "part": "rapid_growth",
                "case": "sector_calibration",
                "k": k,
                "resolution": p["sector_resolution"],
                "eta": rg.eta,
                "log_ratio": rg.log_ratio,
                "exponent_est": rg.exponent_est,
                "volume_fraction": rg.volume_fraction,
                "product": product,
                "expected": _SECTOR_TARGET,
                "rel_error": rel,
                "ok": bool(rel <= p["sector_tolerance"] and rg.exponent_est > p["exponent_floor"]),
            }
        )
    grid = build_grid(("ball", 2), p["resolution"])
    dist = grid.distance_to(np.zeros(2))
    n_narrow = 0
    for d in range(int(p["ensemble_draws"])):
        field = _draw_polynomial(rng, p["max_degree"])
        values = grid.evaluate(field)
        table = label_components(values, grid, zero_tol=0.0)
        for cid in _qualifying_components(table, dist, p["min_cells"]):
            rg = rapid_growth_ratio(values, grid, table, cid, 0.5)
            if rg.eta > p["narrow_eta"]:
                continue
            n_narrow += 1
            rows.append(
                {
                    "part": "rapid_growth",
                    "case": "ensemble_narrow",
                    "draw": d,
                    "degree": field.spec.degree,
                    "resolution": p["resolution"],
                    "eta": rg.eta,
                    "log_ratio": rg.log_ratio,
                    "exponent_est": rg.exponent_est,
                    "volume_fraction": rg.volume_fraction,
                    "ok": bool(rg.exponent_est > p["exponent_floor"]),
                }
            )
    rule = {"kind": "all_true", "column": "ok", "where": {"part": "rapid_growth"}}
    return rule, {"narrow_components": n_narrow}


def _propagation_part(p, rows):
    rng = np.random.default_rng([p["seed"], _PART_SEEDS["propagation"]])
    radius = p["propagation_radius"]
    grid = build_grid(("ball", 2), p["resolution"])
    dist = grid.distance_to(np.zeros(2))
    e_full = np.flatnonzero((dist < radius).ravel() & grid.valid.ravel())
    for k in range(int(p["propagation_k_min"]), int(p["propagation_k_max"]) + 1):
        field = harmonic_polynomial_2d([0.0] * k + [1.0], [])
        values = grid.evaluate(field)
        res = propagation_check(values, grid, e_full, radius)
        rel = abs(res.c_est - 0.5) / 0.5
        rows.append(
            {
                "part": "propagation",
                "case": "full_subset_closed_form",
                "k": k,
                "resolution": p["resolution"],
                "beta_r": res.beta_r,
                "c_est": res.c_est,
                "expected": 0.5,
                "rel_error": rel,
                "ok": bool(rel <= p["propagation_tolerance"]),
            }
        )
    # ensemble at two resolutions with geometry-identical subsets
    draws = []
    for d in range(int(p["ensemble_draws"])):
        coeffs = (rng.normal(size=p["max_degree"] + 1), rng.normal(size=p["max_degree"] + 1))
        angle = rng.uniform(0.0, 2.0 * math.pi)
        offset = rng.uniform(0.0, radius / 2)
        draws.append((coeffs, angle, offset))
    maxima = {}
    for res_factor in (1, 2):
        res = p["resolution"] * res_factor
        g = build_grid(("ball", 2), res)
        dvec = g.distance_to(np.zeros(2))
        pts = g.points()
        best = -math.inf
        for d, (coeffs, angle, offset) in enumerate(draws):
            a = coeffs[0].copy()
            b = coeffs[1].copy()
            a[0] = 0.0
            b[0] = 0.0
            field = harmonic_polynomial_2d(a, b)
            values = g.evaluate(field)
            u = np.array([math.cos(angle), math.sin(angle)])
            half = (pts @ u) <= offset
            e_idx = np.flatnonzero((dvec < radius).ravel() & half & g.valid.ravel())
            pres = propagation_check(values, g, e_idx, radius)
            if not (pres.subset_vanishes or pres.degenerate_growth):
                best = max(best, pres.c_est)
            rows.append(
                {
                    "part": "propagation",
                    "case": f"ensemble_res{res}",
                    "draw": d,
                    "degree": int(p["max_degree"]),
                    "resolution": res,
                    "beta_r": pres.beta_r,
                    "c_est": pres.c_est,
                    "ok": True,
                }
            )
        maxima[res] = best
    res1 = p["resolution"]
    stability = abs(maxima[2 * res1] - maxima[res1]) / maxima[res1]
    rows.append(
        {
            "part": "propagation",
            "case": "ensemble_max_stability",
            "resolution": res1,
            "c_est": maxima[res1],
            "expected": maxima[2 * res1],
            "rel_error": stability,
            "ok": bool(stability <= p["propagation_stability"]),
        }
    )
    rule = {"kind": "all_true", "column": "ok", "where": {"part": "propagation"}}
    return rule, {"ensemble_max_c_est": maxima[res1], "refined_max_c_est": maxima[2 * res1]}


def _eremenko_records(p, rng, grid, dist, n_draws):
    records = []
    attempts = 0
    while len(records) < n_draws and attempts < 20 * n_draws:
        attempts += 1
        field = _draw_polynomial(rng, p["max_degree"])
        values = grid.evaluate(field)
        table = label_components(values, grid, zero_tol=0.0)
        cids = _qualifying_components(table, dist, p["min_cells"], positive_only=True)
        if not cids:
            continue
        best = None
        for cid in cids:
            er = eremenko_check(values, grid, table, cid)
            if best is None or er.beta_h > best.beta_h:
                best = er
        records.append((field.spec.degree, best))
    return records


def _eremenko_part(p, rows):
    rng = np.random.default_rng([p["seed"], _PART_SEEDS["eremenko"]])
    grid = build_grid(("ball", 2), p["resolution"])
    dist = grid.distance_to(np.zeros(2))
    cal = _eremenko_records(p, rng, grid, dist, int(p["eremenko_calibration_draws"]))
    ev = _eremenko_records(p, rng, grid, dist, int(p["eremenko_eval_draws"]))
    if p["eremenko_constants"] is not None:
        c1, c2 = (float(c) for c in p["eremenko_constants"])
        fit_meta = {"source": "config"}
    else:
        bh = np.array([r.beta_h for _, r in cal])
        bp = np.array([r.beta_phi for _, r in cal])
        slope = float(np.polyfit(bp, bh, 1)[0])
        c1 = max(1.0, slope)
        c2 = float(np.max(bh - c1 * bp)) + float(p["eremenko_margin"])
        fit_meta = {
            "source": "calibration",
            "ls_slope": slope,
            "margin": float(p["eremenko_margin"]),
            "calibration_draws": len(cal),
        }
    for d, (deg, rec) in enumerate(cal):
        rows.append(
            {
                "part": "eremenko",
                "case": "calibration",
                "draw": d,
                "degree": deg,
                "resolution": p["resolution"],
                "beta_h": rec.beta_h,
                "beta_phi": rec.beta_phi,
                "residual": rec.beta_h - (c1 * rec.beta_phi + c2),
                "ok": True,
            }
        )
    for d, (deg, rec) in enumerate(ev):
        residual = rec.beta_h - (c1 * rec.beta_phi + c2)
        rows.append(
            {
                "part": "eremenko",
                "case": "evaluation",
                "draw": d,
                "degree": deg,
                "resolution": p["resolution"],
                "beta_h": rec.beta_h,
                "beta_phi": rec.beta_phi,
                "residual": residual,
                "ok": bool(residual <= 0.0),
            }
        )
    rule = {
        "kind": "all_true",
        "column": "ok",
        "where": {"part": "eremenko", "case": "evaluation"},
    }
    return rule, {"c1": c1, "c2": c2, "fit": fit_meta}


def _dim2_volume_part(p, rows):
    rng = np.random.default_rng([p["seed"], _PART_SEEDS["dim2_volume"]])
    grid = build_grid(("ball", 2), p["sector_resolution"])
    for k in range(int(p["sector_k_min"]), int(p["sector_k_max"]) + 1):
        field = harmonic_polynomial_2d([0.0] * k + [1.0], [])
        values = grid.evaluate(field)
        table = label_components(values, grid, zero_tol=0.0)
        cid = _sector_component(grid, table, k)
        d2 = dim2_volume_bound_check(values, grid, table, cid)
        rel = abs(d2.product - _SECTOR_TARGET) / _SECTOR_TARGET
        rows.append(
            {
                "part": "dim2_volume",
                "case": "sector_dim2",
                "k": k,
                "resolution": p["sector_resolution"],
                "volume_fraction": d2.volume_fraction,
                "product": d2.product,
                "expected": _SECTOR_TARGET,
                "rel_error": rel,
                "ok": bool(rel <= p["sector_tolerance"]),
            }
        )
    # the floor branch: low degree keeps beta below 3, so beta' == 3
    gridf = build_grid(("ball", 2), p["resolution"])
    field = harmonic_polynomial_2d([0.0, 0.0, 1.0], [])
    values = gridf.evaluate(field)
    table = label_components(values, gridf, zero_tol=0.0)
    cid = _sector_component(gridf, table, 2)
    d2 = dim2_volume_bound_check(values, gridf, table, cid)
    rows.append(
        {
            "part": "dim2_volume",
            "case": "beta_floor_branch",
            "k": 2,
            "resolution": p["resolution"],
            "beta_phi": d2.beta,
            "product": d2.product,
            "expected": 3.0,
            "ok": bool(d2.beta < 3.0 and d2.beta_prime == 3.0),
        }
    )
    dist = gridf.distance_to(np.zeros(2))
    min_product = math.inf
    for d in range(int(p["ensemble_draws"])):
        field = _draw_polynomial(rng, p["max_degree"])
        values = gridf.evaluate(field)
        table = label_components(values, gridf, zero_tol=0.0)
        for cid in _qualifying_components(table, dist, p["min_cells"]):
            d2 = dim2_volume_bound_check(values, gridf, table, cid)
            min_product = min(min_product, d2.product)
            rows.append(
                {
                    "part": "dim2_volume",
                    "case": "ensemble_dim2",
                    "draw": d,
                    "degree": field.spec.degree,
                    "resolution": p["resolution"],
                    "volume_fraction": d2.volume_fraction,
                    "beta_phi": d2.beta,
                    "product": d2.product,
                    "ok": bool(d2.product >= p["dim2_floor"]),
                }
            )
    rule = {"kind": "all_true", "column": "ok", "where": {"part": "dim2_volume"}}
    return rule, {"ensemble_min_product": min_product, "floor": p["dim2_floor"]}


def run_property_suites(config=None):
    """Run the growth-property parts and aggregate one verdict."""
    p = _params(config, "property_suites")
    rows = []
    rules = []
    fitted = {}
    part_fns = {
        "three_circles": _three_circles_part,
        "rapid_growth": _rapid_growth_part,
        "propagation": _propagation_part,
        "eremenko": _eremenko_part,
        "dim2_volume": _dim2_volume_part,
    }
    for part in p["parts"]:
        rule, fit = part_fns[part](p, rows)
        rules.append(rule)
        if fit:
            fitted[part] = fit
    products = [r["product"] for r in rows if "product" in r and r.get("product") is not None]
    cs = [
        r["c_est"]
        for r in rows
        if r.get("c_est") is not None and isinstance(r.get("c_est"), float) and math.isfinite(r["c_est"])
    ]
    return SuiteReport(
        suite="property_suites",
        columns=_PROPERTY_COLUMNS,
        cases=rows,
        verdict_rule={"kind": "and", "rules": rules},
        fitted_constants=fitted,
        invariant_min=min(products) if products else float("nan"),
        invariant_max=max(cs) if cs else float("nan"),
        provenance=_provenance(p, {"default": p["resolution"], "sector": p["sector_resolution"]}),
    )


# ---------------------------------------------------------------------------


def run_suite(name, overrides=None):
    """Dispatch a named suite with config overrides."""
    if name == "local_faber_krahn":
        return run_local_faber_krahn(prepare_config(name, overrides))
    if name == "sharpness_sphere":
        return run_sharpness_sphere(prepare_config(name, overrides))
    if name == "torus_example":
        return run_torus_example(prepare_config(name, overrides))
    if name == "property_suites":
        return run_property_suites(prepare_config(name, overrides))
    raise ValueError(f"unknown suite {name!r}")


def run_all(overrides=None):
    """All suites at their defaults (local scan on both torus and sphere)."""
    overrides = dict(overrides or {})
    reports = [
        run_local_faber_krahn(prepare_config("local_faber_krahn", overrides)),
        run_local_faber_krahn(
            prepare_config(
                "local_faber_krahn",
                {**overrides, "domain": "sphere", "ball_policy": "random", "ball_count": 50},
            )
        ),
        run_sharpness_sphere(prepare_config("sharpness_sphere", overrides)),
        run_torus_example(prepare_config("torus_example", overrides)),
        run_property_suites(prepare_config("property_suites", overrides)),
    ]
    return reports
