"""Connected-component decomposition of sign sets on sample grids.

Cells are classified +/-/0 against a zero tolerance; components are
maximal face-connected sets of same-sign cells (4-neighbor in 2-D,
6-neighbor in 3-D -- corner contact never merges).  Component ids are the
smallest contained lattice cell index, which makes every report
reproducible byte for byte.

The default zero tolerance is 1e-12 times the sup of |field| over the
scanned region; pass ``zero_tol=0.0`` to classify by exact floating-point
sign (useful for fields whose amplitude spans many orders of magnitude,
e.g. high-degree harmonics near their zeros of high order).
"""

import math
from dataclasses import dataclass, field as dataclass_field

import numpy as np
from scipy import ndimage

from .grids import MetricBall

_REL_ZERO_TOL = 1e-12


def _union_parents(n_labels, pairs):
    parent = np.arange(n_labels + 1)

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a, b in pairs:
        ra, rb = find(int(a)), find(int(b))
        if ra != rb:
            if ra < rb:
                parent[rb] = ra
            else:
                parent[ra] = rb
    for i in range(1, n_labels + 1):
        parent[i] = find(i)
    return parent


def _label_lattice(sign, wrap_axes, region=None):
    """Raw same-sign labeling (0 = unlabeled); returns (raw, sign_of_raw)."""
    struct = ndimage.generate_binary_structure(sign.ndim, 1)
    raw = np.zeros(sign.shape, dtype=np.int64)
    sign_of = [0]
    offset = 0
    for s in (1, -1):
        mask = sign == s
        if region is not None:
            mask &= region
        if not mask.any():
            continue
        lab, n_lab = ndimage.label(mask, structure=struct)
        pairs = []
        for ax, wrap in enumerate(wrap_axes):
            if not wrap or sign.shape[ax] < 3:
                continue
            first = np.take(lab, 0, axis=ax).ravel()
            last = np.take(lab, -1, axis=ax).ravel()
            both = (first > 0) & (last > 0)
            if both.any():
                pairs.append(np.unique(np.stack([last[both], first[both]], axis=1), axis=0))
        if pairs:
            parent = _union_parents(n_lab, np.concatenate(pairs))
            lab = parent[lab]
        present = np.unique(lab[mask])
        remap = np.zeros(int(lab.max()) + 1, dtype=np.int64)
        remap[present] = offset + np.arange(1, present.size + 1)
        raw[mask] = remap[lab[mask]]
        sign_of.extend([s] * present.size)
        offset += present.size
    return raw, np.array(sign_of, dtype=np.int8)


@dataclass
class ComponentTable:
    """Nodal decomposition over a grid (optionally restricted to a ball).

    ``labels`` is lattice-shaped over the scan window; entries are global
    component ids (smallest flat lattice index in the component) or -1.
    Per-component arrays are aligned with ``ids`` (ascending).
    """

    grid: object
    window: object
    ball: object
    labels: np.ndarray
    ids: np.ndarray
    signs: np.ndarray
    volumes: np.ndarray
    counts: np.ndarray
    zero_tol: float
    region_measure: float
    unlabeled_measure: float
    flags: dict = dataclass_field(default_factory=dict)

    @property
    def n_components(self):
        return int(self.ids.size)

    def index_of(self, component_id):
        pos = int(np.searchsorted(self.ids, component_id))
        if pos >= self.ids.size or self.ids[pos] != component_id:
            raise KeyError(f"no component with id {component_id}")
        return pos

    def component_cells(self, component_id):
        """Boolean window-shaped mask of the component's cells."""
        return self.labels == component_id

    def id_at_flat_index(self, flat_index):
        """Component id owning a global lattice cell (-1 if unlabeled)."""
        if self.window is None:
            return int(self.labels.ravel()[flat_index])
        gids = self.window.global_flat_ids(self.grid.shape).ravel()
        pos = np.nonzero(gids == flat_index)[0]
        if pos.size == 0:
            raise KeyError("cell outside the scan window")
        return int(self.labels.ravel()[pos[0]])

    def to_rows(self, field_id=""):
        rows = []
        for i, cid in enumerate(self.ids):
            row = {
                "field_id": field_id,
                "component_id": int(cid),
                "sign": int(self.signs[i]),
                "volume": float(self.volumes[i]),
                "cell_count": int(self.counts[i]),
            }
            for name, arr in sorted(self.flags.items()):
                row[name] = bool(arr[i])
            rows.append(row)
        return rows


def _resolve_values(field_or_values, grid, window):
    if isinstance(field_or_values, np.ndarray):
        vals = field_or_values
        expected = grid.shape if window is None else window.shape
        if vals.shape == grid.shape and window is not None:
            vals = window.extract(vals)
        if vals.shape != expected:
            raise ValueError(f"values shape {vals.shape} does not match lattice {expected}")
        return vals
    return grid.evaluate(field_or_values, window=window)


def _build_table(grid, window, ball, values, zero_tol, region):
    wrap = grid.periodic if window is None else window.wrap_axes
    valid = grid.valid_mask(window)
    scan = region
    if valid is not None:
        scan = valid if scan is None else (scan & valid)
    if zero_tol is None:
        scope = values if scan is None else values[scan]
        zero_tol = _REL_ZERO_TOL * float(np.abs(scope).max(initial=0.0))
    sign = np.zeros(values.shape, dtype=np.int8)
    sign[values > zero_tol] = 1
    sign[values < -zero_tol] = -1
    if scan is not None:
        sign[~scan] = 0
    if not np.any(sign != 0):
        raise ValueError(
            "all cells fall in the zero class: zero field or zero_tol too large"
        )
    raw, sign_of_raw = _label_lattice(sign, wrap, region=None)

    if window is None:
        gids = np.arange(values.size, dtype=np.int64).reshape(values.shape)
    else:
        gids = window.global_flat_ids(grid.shape)
    mask = raw > 0
    raw_ids = raw[mask]
    n_raw = int(sign_of_raw.size) - 1
    first = np.full(n_raw + 1, np.iinfo(np.int64).max, dtype=np.int64)
    np.minimum.at(first, raw_ids, gids[mask])

    measures = grid.cell_measures(window)
    if np.isscalar(measures):
        vol_raw = np.bincount(raw_ids, minlength=n_raw + 1).astype(float) * measures
        region_measure = measures * float(scan.sum()) if scan is not None else measures * values.size
        unlabeled = region_measure - measures * float(mask.sum())
    else:
        vol_raw = np.bincount(raw_ids, weights=measures[mask], minlength=n_raw + 1)
        region_measure = float(measures[scan].sum()) if scan is not None else float(measures.sum())
        un_mask = ~mask if scan is None else (scan & ~mask)
        unlabeled = float(measures[un_mask].sum())
    cnt_raw = np.bincount(raw_ids, minlength=n_raw + 1)

    order = np.argsort(first[1:], kind="stable") + 1
    labels = np.where(mask, first[raw], -1)
    table = ComponentTable(
        grid=grid,
        window=window,
        ball=ball,
        labels=labels,
        ids=first[order],
        signs=sign_of_raw[order],
        volumes=vol_raw[order],
        counts=cnt_raw[order],
        zero_tol=float(zero_tol),
        region_measure=float(region_measure),
        unlabeled_measure=float(unlabeled),
    )
    table._raw = raw
    table._raw_order = order
    return table


def label_components(field, grid, zero_tol=None):
    """Label connected components of {field > tol} and {field < -tol} over
    the whole grid.  ``field`` may be a ScalarField or a precomputed
    lattice-shaped value array."""
    values = _resolve_values(field, grid, None)
    return _build_table(grid, None, None, values, zero_tol, None)


def local_components(field, grid, ball, zero_tol=None, values=None):
    """Label components of the nonzero set intersected with a metric ball.

    Each component carries flags: ``meets_half_ball`` (has a cell whose
    center lies in the concentric half ball -- one-pitch uncertainty),
    ``touches_ball_boundary`` (has a cell within one cell diameter of the
    ball boundary) and ``contained_in_ball`` (its complement).
    ``values`` may supply precomputed full-lattice field values.
    """
    window = grid.ball_window(ball)
    if values is not None:
        vals = _resolve_values(values, grid, window)
    else:
        vals = _resolve_values(field, grid, window)
    dist = grid.distance_to(ball.center_array, window=window)
    in_ball = dist < ball.radius
    valid = grid.valid_mask(window)
    if valid is not None:
        in_ball = in_ball & valid
    if not in_ball.any():
        raise ValueError("ball contains no grid cells")
    table = _build_table(grid, window, ball, vals, zero_tol, in_ball)

    raw = table._raw
    order = table._raw_order
    n_raw = order.size
    mask = raw > 0
    raw_ids = raw[mask]
    dmin = np.full(n_raw + 1, np.inf)
    dmax = np.full(n_raw + 1, -np.inf)
    np.minimum.at(dmin, raw_ids, dist[mask])
    np.maximum.at(dmax, raw_ids, dist[mask])
    touches = dmax[order] > ball.radius - grid.cell_diameter
    table.flags["meets_half_ball"] = dmin[order] < ball.radius / 2
    table.flags["touches_ball_boundary"] = touches
    table.flags["contained_in_ball"] = ~touches
    return table


def components_touching_point(table, point, contact_radius):
    """Ids of components owning a cell within ``contact_radius`` of the
    point.  The radius must be at least twice the grid pitch."""
    grid = table.grid
    if contact_radius < 2 * grid.pitch:
        raise ValueError("contact radius below twice the grid pitch")
    dist = grid.distance_to(np.asarray(point, dtype=float), window=table.window)
    near = (dist < contact_radius) & (table.labels >= 0)
    return np.unique(table.labels[near])


def stable_touch_count(table, point, growth=1.5, max_radius=None):
    """Count of components at a point, stabilized over the contact radius.

    Scans geometrically growing radii starting at 2.5 grid pitches and
    returns (count, radius) at the first radius whose nonzero count
    equals the count at the next scanned radius.  This pins down the
    boundary-contact count without fixing an arbitrary radius.
    """
    grid = table.grid
    if max_radius is None:
        max_radius = grid.domain.diameter / 4
    r = 2.5 * grid.pitch
    prev_r, prev_count = None, None
    while r <= max_radius:
        count = int(components_touching_point(table, point, r).size)
        if prev_count is not None and prev_count > 0 and count == prev_count:
            return prev_count, prev_r
        prev_r, prev_count = r, count
        r *= growth
    return (prev_count if prev_count else 0), prev_r


def cross_section_bound(table, axis):
    """Per-component maximum (n-1)-measure of slices normal to a torus axis.

    Returns an array aligned with ``table.ids``.  Only defined for torus
    grids (uniform lattices whose hyperplane slices have uniform cell
    measure).
    """
    grid = table.grid
    if grid.domain.name != "torus":
        raise ValueError("cross sections are only defined for torus grids")
    if table.window is not None:
        raise ValueError("cross sections require a full-domain table")
    n = grid.domain.n
    if not 0 <= axis < n:
        raise ValueError(f"axis must be in [0, {n})")
    res = grid.resolution
    labels = table.labels
    mask = labels >= 0
    comp_pos = np.searchsorted(table.ids, labels[mask])
    slice_idx = np.indices(labels.shape)[axis][mask]
    keys = comp_pos.astype(np.int64) * res + slice_idx
    per_slice = np.bincount(keys, minlength=table.n_components * res)
    per_slice = per_slice.reshape(table.n_components, res)
    cell_slice_measure = res ** (-(float(n) - 1.0))
    return per_slice.max(axis=1) * cell_slice_measure
