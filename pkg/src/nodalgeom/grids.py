"""Domain discretizations: sample grids, geodesic distance, metric balls.

Supported domains: sphere(n) for n in {1,2,3} (round, embedded in
R^{n+1}), torus(n) for n in {2,3} (unit side, flat), ball(n) for n in
{2,3} (unit ball of R^n).

Grids are structured lattices with half-cell offsets, so no node ever
sits on a pole, a domain boundary, or an axis-aligned rational nodal
line.  Sphere grids are equal-angle latitude/longitude lattices; the
per-cell measure integrates the area element exactly across each cell,
which keeps total measures exact up to roundoff.  Ball grids are
Cartesian lattices clipped to the ball with cells counted fully (the
O(pitch) boundary bias is reported alongside ball measures).

Grids are immutable after construction and all queries are reentrant.
"""

import math
from dataclasses import dataclass, field as dataclass_field

import numpy as np

from .fields import sphere_embedding_to_angles

_MIN_RESOLUTION = 16


@dataclass(frozen=True)
class Domain:
    """A named domain with intrinsic dimension n."""

    name: str
    n: int

    def __post_init__(self):
        if self.name == "sphere" and self.n in (1, 2, 3):
            return
        if self.name == "torus" and self.n in (2, 3):
            return
        if self.name == "ball" and self.n in (2, 3):
            return
        raise NotImplementedError(f"unsupported domain {self.name}({self.n})")

    @property
    def ambient_dim(self):
        return self.n + 1 if self.name == "sphere" else self.n

    @property
    def measure(self):
        if self.name == "sphere":
            return {1: 2 * math.pi, 2: 4 * math.pi, 3: 2 * math.pi**2}[self.n]
        if self.name == "torus":
            return 1.0
        return {2: math.pi, 3: 4 * math.pi / 3}[self.n]

    @property
    def diameter(self):
        if self.name == "sphere":
            return math.pi
        if self.name == "torus":
            return math.sqrt(self.n) / 2
        return 2.0


@dataclass(frozen=True)
class MetricBall:
    """Metric ball: geodesic on the sphere, quotient-flat on the torus,
    Euclidean on the ball domain."""

    center: tuple
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))
        if not self.radius > 0:
            raise ValueError("ball radius must be positive")

    @property
    def center_array(self):
        return np.array(self.center)

    def scaled(self, r):
        """Concentric ball with radius scaled by r (0 < r <= 1)."""
        if not 0 < r <= 1:
            raise ValueError("concentric scaling factor must lie in (0, 1]")
        return MetricBall(self.center, r * self.radius)


@dataclass(frozen=True)
class GridWindow:
    """Axis-aligned index window into a grid lattice.

    ``index_arrays`` holds global indices per axis; ``wrap_axes`` marks
    axes on which the window covers the whole (periodic) extent, so that
    adjacency still wraps inside the window.
    """

    index_arrays: tuple
    wrap_axes: tuple

    @property
    def shape(self):
        return tuple(len(ix) for ix in self.index_arrays)

    def extract(self, lattice_array):
        return lattice_array[np.ix_(*self.index_arrays)]

    def global_flat_ids(self, lattice_shape):
        mesh = np.meshgrid(*self.index_arrays, indexing="ij")
        return np.ravel_multi_index(tuple(mesh), lattice_shape)


class SampleGrid:
    """Structured sample grid over a domain.

    Attributes:
        domain: the :class:`Domain`.
        resolution: cells along the colatitude/each torus or ball axis.
        shape: lattice shape (longitude axes carry 2x resolution).
        periodic: per-axis wrap flags for adjacency.
        valid: boolean lattice mask (ball grids only; None elsewhere).
    """

    def __init__(self, domain, resolution):
        if resolution < _MIN_RESOLUTION:
            raise ValueError(f"resolution must be >= {_MIN_RESOLUTION}, got {resolution}")
        self.domain = domain
        self.resolution = int(resolution)
        name, n, res = domain.name, domain.n, int(resolution)
        if name == "sphere":
            if n == 1:
                self.shape = (2 * res,)
                self.periodic = (True,)
                self._axis_coords = (2 * math.pi * (np.arange(2 * res) + 0.5) / (2 * res),)
                self._row_weights = None
                self._uniform_measure = 2 * math.pi / (2 * res)
            else:
                theta_axes = []
                weights = []
                edges = math.pi * np.arange(res + 1) / res
                centers = math.pi * (np.arange(res) + 0.5) / res
                # exact integral of sin theta (resp. sin^2) across each cell
                w_sin = np.cos(edges[:-1]) - np.cos(edges[1:])
                w_sin2 = 0.5 * (np.diff(edges) - 0.5 * (np.sin(2 * edges[1:]) - np.sin(2 * edges[:-1])))
                if n == 2:
                    theta_axes = [centers]
                    weights = [w_sin]
                else:
                    theta_axes = [centers, centers.copy()]
                    weights = [w_sin2, w_sin]
                phi = 2 * math.pi * (np.arange(2 * res) + 0.5) / (2 * res)
                self.shape = tuple([res] * (n - 1) + [2 * res])
                self.periodic = tuple([False] * (n - 1) + [True])
                self._axis_coords = tuple(theta_axes + [phi])
                dphi = 2 * math.pi / (2 * res)
                self._row_weights = [w * 1.0 for w in weights]
                self._row_weights.append(np.full(2 * res, dphi))
                self._uniform_measure = None
        elif name == "torus":
            self.shape = (res,) * n
            self.periodic = (True,) * n
            x = (np.arange(res) + 0.5) / res
            self._axis_coords = tuple(x.copy() for _ in range(n))
            self._row_weights = None
            self._uniform_measure = res ** (-float(n))
        elif name == "ball":
            self.shape = (res,) * n
            self.periodic = (False,) * n
            h = 2.0 / res
            x = -1.0 + h * (np.arange(res) + 0.5)
            self._axis_coords = tuple(x.copy() for _ in range(n))
            self._row_weights = None
            self._uniform_measure = h**n
        else:  # pragma: no cover - Domain already validated
            raise NotImplementedError(name)
        self.valid = None
        if name == "ball":
            rsq = np.zeros(self.shape)
            for a, coords in enumerate(self._axis_coords):
                view = [None] * n
                view[a] = slice(None)
                rsq = rsq + coords[tuple(view)] ** 2
            self.valid = rsq < 1.0

    # -- geometry -----------------------------------------------------------

    @property
    def n_lattice(self):
        return int(np.prod(self.shape))

    @property
    def n_cells(self):
        return int(self.valid.sum()) if self.valid is not None else self.n_lattice

    @property
    def pitch(self):
        """Largest per-axis cell extent (geodesic units)."""
        if self.domain.name == "sphere":
            return math.pi / self.resolution
        if self.domain.name == "torus":
            return 1.0 / self.resolution
        return 2.0 / self.resolution

    @property
    def cell_diameter(self):
        return self.pitch * math.sqrt(self.domain.n)

    def axis_coords(self, window=None):
        if window is None:
            return self._axis_coords
        return tuple(c[ix] for c, ix in zip(self._axis_coords, window.index_arrays))

    def points(self, window=None):
        """Materialize domain points, shape (prod(shape), ambient_dim)."""
        coords = self.axis_coords(window)
        mesh = np.meshgrid(*coords, indexing="ij")
        if self.domain.name == "sphere":
            ang = np.stack([m.ravel() for m in mesh], axis=-1)
            from .fields import sphere_angles_to_embedding

            return sphere_angles_to_embedding(ang)
        return np.stack([m.ravel() for m in mesh], axis=-1)

    def evaluate(self, field, window=None):
        """Evaluate a field on the (windowed) lattice; lattice-shaped array."""
        coords = self.axis_coords(window)
        shape = tuple(len(c) for c in coords)
        vals = field.evaluate(self.points(window))
        return vals.reshape(shape)

    def cell_measures(self, window=None):
        """Per-cell measure: scalar for uniform grids, else lattice array.

        Invalid (outside-the-ball) cells carry measure zero.
        """
        if self._uniform_measure is not None and self.valid is None:
            return self._uniform_measure
        if self._row_weights is not None:
            coords = self.axis_coords(window)
            out = np.ones(tuple(len(c) for c in coords))
            weights = self._row_weights
            if window is not None:
                weights = [w[ix] for w, ix in zip(weights, window.index_arrays)]
            for a, w in enumerate(weights):
                view = [None] * len(weights)
                view[a] = slice(None)
                out = out * w[tuple(view)]
            return out
        # uniform measure with a validity mask (ball grids)
        mask = self.valid if window is None else window.extract(self.valid)
        return self._uniform_measure * mask

    def total_measure(self, window=None):
        m = self.cell_measures(window)
        if np.isscalar(m):
            shape = self.shape if window is None else window.shape
            return m * float(np.prod(shape))
        return float(m.sum())

    def valid_mask(self, window=None):
        if self.valid is None:
            return None
        return self.valid if window is None else window.extract(self.valid)

    # -- distances ----------------------------------------------------------

    def distance_to(self, center, window=None):
        """Geodesic distance from ``center`` to every (windowed) cell."""
        c = np.asarray(center, dtype=float)
        coords = self.axis_coords(window)
        name, n = self.domain.name, self.domain.n
        if name == "sphere":
            dot = self._sphere_dot(c, coords, n)
            return np.arccos(np.clip(dot, -1.0, 1.0))
        shape = tuple(len(x) for x in coords)
        acc = np.zeros(shape)
        for a, x in enumerate(coords):
            d = x - c[a]
            if name == "torus":
                d = np.abs(d)
                d = np.minimum(d, 1.0 - d)
            view = [None] * len(coords)
            view[a] = slice(None)
            acc = acc + d[tuple(view)] ** 2
        return np.sqrt(acc)

    @staticmethod
    def _sphere_dot(c, coords, n):
        if n == 1:
            (phi,) = coords
            return np.cos(phi) * c[0] + np.sin(phi) * c[1]
        if n == 2:
            th, phi = coords
            inner = np.cos(phi) * c[1] + np.sin(phi) * c[2]
            return np.cos(th)[:, None] * c[0] + np.sin(th)[:, None] * inner[None, :]
        th1, th2, phi = coords
        inner = np.cos(phi) * c[2] + np.sin(phi) * c[3]
        mid = np.cos(th2)[:, None] * c[1] + np.sin(th2)[:, None] * inner[None, :]
        return np.cos(th1)[:, None, None] * c[0] + np.sin(th1)[:, None, None] * mid[None, :, :]

    def ball_window(self, ball, pad_cells=2):
        """Index window guaranteed to contain the ball (plus padding).

        Falls back to the full lattice where a tight axis-aligned bound is
        not straightforward (general sphere balls away from the poles).
        """
        name, n = self.domain.name, self.domain.n
        r_pad = ball.radius + pad_cells * self.pitch
        if name == "torus":
            idx = []
            res = self.resolution
            for a in range(n):
                half = min(int(math.ceil(r_pad * res)) + 1, res // 2)
                c_idx = int(np.floor(ball.center[a] * res))
                if 2 * half + 1 >= res:
                    idx.append(np.arange(res))
                else:
                    idx.append(np.mod(np.arange(c_idx - half, c_idx + half + 1), res))
            wrap = tuple(len(ix) == self.shape[a] for a, ix in enumerate(idx))
            return GridWindow(tuple(idx), wrap)
        if name == "ball":
            idx = []
            res = self.resolution
            h = 2.0 / res
            for a in range(n):
                lo = int(np.floor((ball.center[a] - r_pad + 1.0) / h)) - 1
                hi = int(np.ceil((ball.center[a] + r_pad + 1.0) / h)) + 1
                idx.append(np.arange(max(lo, 0), min(hi, res)))
            return GridWindow(tuple(idx), (False,) * n)
        if name == "sphere" and n >= 2:
            thetas = self._axis_coords[0]
            c_ang = sphere_embedding_to_angles(np.asarray(ball.center, dtype=float))
            th_c = float(np.atleast_1d(c_ang)[0])
            rows = np.nonzero(np.abs(thetas - th_c) <= r_pad)[0]
            if rows.size == 0:
                rows = np.array([int(np.argmin(np.abs(thetas - th_c)))])
            full = [np.arange(s) for s in self.shape]
            full[0] = rows
            wrap = tuple(len(ix) == self.shape[a] for a, ix in enumerate(full))
            return GridWindow(tuple(full), wrap)
        # sphere(1): full circle
        return GridWindow(tuple(np.arange(s) for s in self.shape), self.periodic)

    # -- adjacency (for tests; labeling uses lattice structure directly) ----

    def neighbors(self, flat_index):
        """Face-adjacent valid neighbors of a lattice cell (flat indices)."""
        idx = np.array(np.unravel_index(flat_index, self.shape))
        out = []
        for a in range(len(self.shape)):
            for step in (-1, 1):
                nb = idx.copy()
                nb[a] += step
                if self.periodic[a]:
                    nb[a] %= self.shape[a]
                elif not 0 <= nb[a] < self.shape[a]:
                    continue
                flat = int(np.ravel_multi_index(tuple(nb), self.shape))
                if self.valid is not None and not self.valid.ravel()[flat]:
                    continue
                out.append(flat)
        return sorted(out)


def build_grid(domain, resolution):
    """Build a sample grid; ``domain`` is a Domain or a (name, n) pair."""
    if not isinstance(domain, Domain):
        domain = Domain(*domain)
    return SampleGrid(domain, resolution)


def geodesic_distance(domain, p, q):
    """Distance between points: arccos of the inner product on the sphere,
    minimum over integer shifts on the torus, Euclidean on the ball."""
    if not isinstance(domain, Domain):
        domain = Domain(*domain)
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if domain.name == "sphere":
        dot = np.clip(np.sum(p * q, axis=-1), -1.0, 1.0)
        return float(np.arccos(dot)) if dot.ndim == 0 else np.arccos(dot)
    d = np.abs(p - q)
    if domain.name == "torus":
        d = np.minimum(d, 1.0 - d)
    out = np.sqrt(np.sum(d * d, axis=-1))
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class BallCells:
    """Cells of a grid inside a metric ball.

    ``boundary_measure`` is the total measure of cells within one cell
    diameter of the ball boundary; it bounds the discretization error of
    ``measure``.
    """

    indices: np.ndarray
    measure: float
    n_cells: int
    empty: bool
    boundary_measure: float


def cells_in_ball(grid, ball):
    """Flat lattice indices of the cells strictly inside the ball, with the
    summed cell measure and a boundary error bound.  An empty result (radius
    below the grid pitch) is flagged, not fatal."""
    if ball.radius > grid.domain.diameter:
        raise ValueError("ball radius exceeds the domain diameter")
    dist = grid.distance_to(ball.center_array)
    inside = dist < ball.radius
    if grid.valid is not None:
        inside &= grid.valid
    m = grid.cell_measures()
    shell = np.abs(dist - ball.radius) <= grid.cell_diameter
    if grid.valid is not None:
        shell &= grid.valid
    if np.isscalar(m):
        measure = m * float(inside.sum())
        boundary = m * float(shell.sum())
    else:
        measure = float(m[inside].sum())
        boundary = float(m[shell].sum())
    idx = np.flatnonzero(inside.ravel())
    return BallCells(
        indices=idx,
        measure=measure,
        n_cells=int(idx.size),
        empty=idx.size == 0,
        boundary_measure=boundary,
    )


@dataclass(frozen=True)
class SphericalLayer:
    inner: float
    outer: float
    probe_ball: MetricBall = None


@dataclass(frozen=True)
class LayerDecomposition:
    """Annular decomposition of B minus its concentric half."""

    ball: MetricBall
    layers: tuple
    single_layer_fallback: bool

    @property
    def count(self):
        return len(self.layers)


def spherical_layers(ball, width, place_probe=None):
    """Partition the annulus between the half ball and the full ball into
    layers of the given width (the outermost layer absorbs the remainder).

    ``place_probe(inner, outer)`` may return a center for a probe ball of
    radius width/2 inside the layer (or None).  A width of at least half
    the radius collapses to a single flagged layer.
    """
    if width <= 0:
        raise ValueError("layer width must be positive")
    r = ball.radius
    fallback = width >= r / 2
    n_layers = 1 if fallback else int(math.floor((r / 2) / width))
    edges = [r / 2 + i * width for i in range(n_layers)] + [r]
    layers = []
    for inner, outer in zip(edges[:-1], edges[1:]):
        probe = None
        if place_probe is not None:
            center = place_probe(inner, outer)
            if center is not None:
                probe = MetricBall(tuple(np.asarray(center, dtype=float)), width / 2)
        layers.append(SphericalLayer(inner=inner, outer=outer, probe_ball=probe))
    return LayerDecomposition(ball=ball, layers=tuple(layers), single_layer_fallback=fallback)
