"""Growth exponents, maximum-function profiles, and the quantitative
growth/volume checks they feed.

All quantities are ratios of sups, so every output is invariant under
positive rescaling of the field (bit-exact for power-of-two scalings).
Sups over grid regions are cell-center maxima; maximum-function profiles
sample concentric circles (valid for harmonic and subharmonic inputs,
where the disk max sits on the boundary circle) at two angular
resolutions, and the difference feeds the reported sampling bounds.
"""

import math
from dataclasses import dataclass

import numpy as np

from .grids import MetricBall

_BETA_FLOOR = 3.0


def _values_on_grid(field, grid):
    if isinstance(field, np.ndarray):
        if field.shape != grid.shape:
            raise ValueError(f"values shape {field.shape} does not match lattice {grid.shape}")
        return field
    return grid.evaluate(field)


def _region_mask(grid, values, region):
    """Resolve a region spec into a lattice mask.

    Accepts a MetricBall, a (table, component_id) pair, or a
    (table, component_id, ball) triple for the intersection.
    """
    valid = grid.valid_mask()
    if isinstance(region, MetricBall):
        mask = grid.distance_to(region.center_array) < region.radius
    else:
        table, cid = region[0], region[1]
        if table.window is not None:
            raise ValueError("component regions require a full-domain table")
        mask = table.labels == cid
        if len(region) > 2 and region[2] is not None:
            ball = region[2]
            mask = mask & (grid.distance_to(ball.center_array) < ball.radius)
    if valid is not None:
        mask = mask & valid
    return mask


def sup_on_region(field, grid, region):
    """Max of |field| over the region's cell centers.

    ``field`` may be a ScalarField or a precomputed lattice array;
    ``region`` a MetricBall or a (table, component_id[, ball]) tuple.
    Raises on regions containing no cells.
    """
    values = _values_on_grid(field, grid)
    mask = _region_mask(grid, values, region)
    if not mask.any():
        raise ValueError("region contains no grid cells")
    return float(np.abs(values[mask]).max())


def growth_exponent(field, grid, ball, r):
    """Growth exponent log(sup over B / sup over rB) for 0 < r < 1.

    Returns ``inf`` when the field vanishes on the inner ball (the
    infinite-growth flag)."""
    if not 0 < r < 1:
        raise ValueError("growth radius must lie in (0, 1)")
    values = _values_on_grid(field, grid)
    sup_outer = sup_on_region(values, grid, ball)
    sup_inner = sup_on_region(values, grid, ball.scaled(r))
    if sup_inner == 0.0:
        return float("inf")
    return float(np.log(sup_outer / sup_inner))


# ---------------------------------------------------------------------------
# maximum-function profiles


@dataclass
class GrowthReport:
    """Maximum-function profile over concentric balls.

    ``betas[i] = log(M(r_max) / M(r_i))`` (zero at the outermost radius);
    ``beta_primes`` floors the exponents at 3.

    ``convexity_defect`` is the worst midpoint violation of the
    three-circles property -- M convex as a function of log r, the form
    valid for harmonic and subharmonic inputs -- over consecutive radius
    triples, in units relative to the midpoint value.  Values at or below
    ``defect_bound`` are consistent with convexity at this sampling
    accuracy.  ``log_convexity_defect`` tracks the stronger log M form;
    that form holds for moduli of holomorphic functions but genuinely
    fails for harmonic functions with sign-mixed coefficients, so it is
    reported for diagnostics only.
    """

    ball: MetricBall
    radii: np.ndarray
    sup_values: np.ndarray
    sup_log_errors: np.ndarray
    betas: np.ndarray
    beta_primes: np.ndarray
    convexity_defect: float
    defect_bound: float
    log_convexity_defect: float
    log_defect_bound: float
    max_monotonicity_violation: float


def _circle_max(field, center, radius, n_samples):
    alpha = 2 * math.pi * (np.arange(n_samples) + 0.5) / n_samples
    pts = np.stack(
        [center[0] + radius * np.cos(alpha), center[1] + radius * np.sin(alpha)], axis=-1
    )
    vals = np.abs(field.evaluate(pts))
    return float(vals.max())


def _angular_curvature(field, radius):
    """Bound on the second angular derivative along the radius-r circle.

    Available for trigonometric-moment polynomials (and restrictions of
    them), where it is sum over m of m^2 r^m (|a_m| + |b_m|); None for
    fields without coefficient metadata.
    """
    spec = getattr(field, "spec", None)
    if spec is not None and getattr(spec, "kind", None) == "harmonic_poly_2d":
        m = np.arange(len(spec.cos_coeffs), dtype=float)
        amp = np.abs(np.array(spec.cos_coeffs)) + np.abs(np.array(spec.sin_coeffs))
        return float(np.sum(m * m * radius**m * amp))
    base = getattr(field, "field", None)
    if base is not None:
        return _angular_curvature(base, radius)
    return None


def max_function_profile(field, radii, ball=None, n_samples=4096, extra_log_error=0.0, extra_abs_error=0.0):
    """Profile M(r) = max over the r-disk of |field|, with convexity defect.

    Valid for harmonic fields and subharmonic restrictions, whose disk
    maximum is attained on the bounding circle; each circle is sampled at
    ``n_samples`` and ``2 * n_samples`` angles and the refinement gap
    enters the sampling bound.  ``extra_log_error`` adds a per-radius
    relative error and ``extra_abs_error`` an absolute one (divided by
    M(r) per radius; used for cell-rounded component restrictions).
    """
    radii = np.asarray(radii, dtype=float)
    if radii.size < 3:
        raise ValueError("need at least 3 radii for a convexity defect")
    if np.any(np.diff(radii) <= 0) or radii[0] <= 0 or radii[-1] > 1:
        raise ValueError("radii must be strictly increasing within (0, 1]")
    if ball is None:
        ball = MetricBall((0.0, 0.0), 1.0)
    center = ball.center_array
    sups = np.empty(radii.size)
    errs = np.empty(radii.size)
    for i, rr in enumerate(radii):
        coarse = _circle_max(field, center, rr * ball.radius, n_samples)
        fine = _circle_max(field, center, rr * ball.radius, 2 * n_samples)
        m = max(fine, coarse)
        sups[i] = m
        if m <= 0:
            errs[i] = np.inf
            continue
        gap_term = 3.0 * abs(fine - coarse) / m
        curv = _angular_curvature(field, rr * ball.radius)
        if curv is not None:
            # a sample sits within pi/(2 n_samples) of the true angular max
            analytic = 0.5 * (math.pi / (2 * n_samples)) ** 2 * curv / m
            gap_term = max(gap_term, analytic)
        errs[i] = gap_term + extra_log_error + extra_abs_error / m
    if np.any(sups == 0.0):
        raise ValueError("maximum function vanishes at a sampled radius")
    log_m = np.log(sups)
    log_r = np.log(radii)
    defect, bound = -np.inf, 0.0
    log_defect, log_bound = -np.inf, 0.0
    for i in range(1, radii.size - 1):
        w = (log_r[i] - log_r[i - 1]) / (log_r[i + 1] - log_r[i - 1])
        # three-circles form: M itself convex against log r
        interp = (1 - w) * sups[i - 1] + w * sups[i + 1]
        d = (sups[i] - interp) / sups[i]
        b = errs[i] + ((1 - w) * errs[i - 1] * sups[i - 1] + w * errs[i + 1] * sups[i + 1]) / sups[i]
        defect = max(defect, float(d))
        bound = max(bound, float(b) + 1e-12)
        # diagnostic: log M against log r
        d_log = log_m[i] - ((1 - w) * log_m[i - 1] + w * log_m[i + 1])
        b_log = errs[i] + (1 - w) * errs[i - 1] + w * errs[i + 1]
        log_defect = max(log_defect, float(d_log))
        log_bound = max(log_bound, float(b_log) + 1e-12)
    mono = float(np.max(np.maximum(sups[:-1] - sups[1:], 0.0)))
    betas = log_m[-1] - log_m
    return GrowthReport(
        ball=ball,
        radii=radii,
        sup_values=sups,
        sup_log_errors=errs,
        betas=betas,
        beta_primes=np.maximum(betas, _BETA_FLOOR),
        convexity_defect=defect,
        defect_bound=bound,
        log_convexity_defect=log_defect,
        log_defect_bound=log_bound,
        max_monotonicity_violation=mono,
    )


# ---------------------------------------------------------------------------
# component restrictions


class SubharmonicRestriction:
    """h = field on a fixed sign component, 0 elsewhere in the unit disk.

    For a positivity component of a harmonic field this is subharmonic,
    vanishes continuously across the nodal boundary, and keeps the
    maximum-function convexity property.  Membership of off-center points
    is resolved through the owning grid cell.
    """

    def __init__(self, field, grid, table, component_id):
        if table.window is not None:
            raise ValueError("component restrictions require a full-domain table")
        if grid.domain.name != "ball" or grid.domain.n != 2:
            raise ValueError("restrictions are defined on 2-D ball grids")
        self.field = field
        self.grid = grid
        self.table = table
        self.component_id = component_id
        self.sign = int(table.signs[table.index_of(component_id)])

    def evaluate(self, points):
        pts = np.asarray(points, dtype=float)
        squeeze = pts.ndim == 1
        if squeeze:
            pts = pts[None, :]
        res = self.grid.resolution
        h = 2.0 / res
        idx = np.floor((pts + 1.0) / h).astype(np.int64)
        inside = np.all((idx >= 0) & (idx < res), axis=-1)
        idx = np.clip(idx, 0, res - 1)
        owner = self.table.labels[idx[:, 0], idx[:, 1]]
        member = inside & (owner == self.component_id)
        vals = np.where(member, self.field.evaluate(pts) * self.sign, 0.0)
        return float(vals[0]) if squeeze else vals


# ---------------------------------------------------------------------------
# quantitative checks


@dataclass
class PropagationResult:
    c_est: float
    beta_r: float
    sup_ball: float
    sup_subset: float
    measure_ratio: float
    subset_vanishes: bool
    degenerate_growth: bool


def propagation_check(field, grid, subset_indices, R):
    """Smallness-propagation constant for a cell subset E of the R-ball.

    c_est is the smallest C with
    sup_B1 |f| <= sup_E |f| * (|B1|/|E|)^(C * beta_R / log(1/R)).
    Flags (not errors): the field vanishing on E, and zero growth.
    """
    if grid.domain.name != "ball":
        raise ValueError("propagation checks run on ball grids")
    if not 0 < R <= 0.5:
        raise ValueError("R must lie in (0, 1/2]")
    subset_indices = np.asarray(subset_indices, dtype=np.int64)
    if subset_indices.size == 0:
        raise ValueError("subset E is empty")
    values = _values_on_grid(field, grid)
    dist = grid.distance_to(np.zeros(grid.domain.n))
    slack = grid.cell_diameter
    if np.any(dist.ravel()[subset_indices] >= R + slack):
        raise ValueError("subset E must lie inside the R-ball")
    measures = grid.cell_measures()
    if np.isscalar(measures):
        e_measure = measures * subset_indices.size
    else:
        e_measure = float(measures.ravel()[subset_indices].sum())
    total = grid.total_measure()
    sup_e = float(np.abs(values.ravel()[subset_indices]).max())
    sup_b1 = sup_on_region(values, grid, MetricBall((0.0,) * grid.domain.n, 1.0))
    sup_br = sup_on_region(values, grid, MetricBall((0.0,) * grid.domain.n, R))
    beta_r = np.log(sup_b1 / sup_br) if sup_br > 0 else np.inf
    vanishes = sup_e == 0.0
    degenerate = not np.isfinite(beta_r) or beta_r == 0.0
    if vanishes or degenerate:
        c_est = float("nan")
    else:
        c_est = float(
            np.log(sup_b1 / sup_e) * np.log(1.0 / R) / (beta_r * np.log(total / e_measure))
        )
    return PropagationResult(
        c_est=c_est,
        beta_r=float(beta_r),
        sup_ball=sup_b1,
        sup_subset=sup_e,
        measure_ratio=float(total / e_measure),
        subset_vanishes=vanishes,
        degenerate_growth=degenerate,
    )


@dataclass
class RapidGrowthResult:
    eta: float
    log_ratio: float
    exponent_est: float
    volume_fraction: float


def rapid_growth_ratio(field, grid, table, component_id, r0, n_scan=16):
    """Narrow-domain growth data for a sign component of the unit ball.

    eta is the worst relative cross-volume (|comp ∩ B_r| / |B_r|)^(1/(n-1))
    over radii r in [r0, 1]; the log sup ratio between the component and
    its r0-ball part should exceed a positive constant times log(1/r0)/eta.
    """
    if table.window is not None:
        raise ValueError("rapid-growth checks require a full-domain table")
    if not 0 < r0 <= 0.5:
        raise ValueError("r0 must lie in (0, 1/2]")
    values = _values_on_grid(field, grid)
    n = grid.domain.n
    comp = table.labels == component_id
    dist = grid.distance_to(np.zeros(n))
    inner = comp & (dist < r0)
    if not inner.any():
        raise ValueError("component does not meet the r0-ball")
    measures = grid.cell_measures()
    scan = np.linspace(r0, 1.0, n_scan)
    eta = 0.0
    for rr in scan:
        in_r = dist < rr
        if np.isscalar(measures):
            num = measures * float((comp & in_r).sum())
            den = measures * float(in_r.sum())
        else:
            num = float(measures[comp & in_r].sum())
            den = float(measures[in_r].sum())
        if den > 0 and num > 0:
            frac = num / den
            eta = max(eta, frac ** (1.0 / (n - 1)))
    sup_comp = float(np.abs(values[comp]).max())
    sup_inner = float(np.abs(values[inner]).max())
    log_ratio = float(np.log(sup_comp / sup_inner)) if sup_inner > 0 else float("inf")
    if np.isscalar(measures):
        vol_frac = measures * float(comp.sum()) / grid.total_measure()
    else:
        vol_frac = float(measures[comp].sum()) / grid.total_measure()
    exponent = log_ratio * eta / math.log(1.0 / r0)
    return RapidGrowthResult(
        eta=float(eta),
        log_ratio=log_ratio,
        exponent_est=float(exponent),
        volume_fraction=float(vol_frac),
    )


@dataclass
class EremenkoResult:
    beta_h: float
    beta_phi: float
    residual: float


def eremenko_check(field, grid, table, component_id, constants=None):
    """Growth of the component restriction against growth of the field.

    beta_h is the 3/4-growth exponent of h = field restricted to the
    positivity component; beta_phi the 1/2-growth exponent of the field on
    the unit ball.  With fitted ``constants = (c1, c2)`` the residual
    beta_h - (c1 * beta_phi + c2) is returned (NaN when no constants are
    supplied).
    """
    if grid.domain.name != "ball" or grid.domain.n != 2:
        raise ValueError("this comparison is defined on 2-D ball grids")
    if table.window is not None:
        raise ValueError("requires a full-domain table")
    pos = table.index_of(component_id)
    if table.signs[pos] <= 0:
        raise ValueError("component must be a positivity component")
    values = _values_on_grid(field, grid)
    comp = table.labels == component_id
    dist = grid.distance_to(np.zeros(2))
    comp_inner = comp & (dist < 0.75)
    if not comp_inner.any():
        raise ValueError("component has no cells inside the 3/4-ball")
    sup_h = float(values[comp].max())
    sup_h_inner = float(values[comp_inner].max())
    beta_h = float(np.log(sup_h / sup_h_inner)) if sup_h_inner > 0 else float("inf")
    unit = MetricBall((0.0, 0.0), 1.0)
    sup_1 = sup_on_region(values, grid, unit)
    sup_half = sup_on_region(values, grid, unit.scaled(0.5))
    beta_phi = float(np.log(sup_1 / sup_half)) if sup_half > 0 else float("inf")
    residual = float("nan")
    if constants is not None:
        c1, c2 = constants
        residual = beta_h - (c1 * beta_phi + c2)
    return EremenkoResult(beta_h=beta_h, beta_phi=beta_phi, residual=float(residual))


@dataclass
class Dim2VolumeResult:
    product: float
    volume_fraction: float
    beta: float
    beta_prime: float


def dim2_volume_bound_check(field, grid, table, component_id):
    """Dimensionless product (|comp|/|B1|) * max(beta_{1/2}(field), 3).

    The two-dimensional volume bound predicts a uniform positive lower
    bound for this product over components meeting the half ball.
    """
    if grid.domain.name != "ball" or grid.domain.n != 2:
        raise ValueError("this check is defined on 2-D ball grids")
    if table.window is not None:
        raise ValueError("requires a full-domain table")
    values = _values_on_grid(field, grid)
    comp = table.labels == component_id
    dist = grid.distance_to(np.zeros(2))
    if not (comp & (dist < 0.5)).any():
        raise ValueError("component does not meet the half ball")
    unit = MetricBall((0.0, 0.0), 1.0)
    beta = growth_exponent(values, grid, unit, 0.5)
    beta_prime = max(beta, _BETA_FLOOR)
    pos = table.index_of(component_id)
    fraction = float(table.volumes[pos] / grid.total_measure())
    return Dim2VolumeResult(
        product=fraction * beta_prime,
        volume_fraction=fraction,
        beta=float(beta),
        beta_prime=float(beta_prime),
    )
