"""Closed-form eigenfunctions and harmonic test fields.

Families provided:

* ``sphere_harmonic_y`` -- product-structure spherical harmonics built
  inductively from associated Legendre factors and an equatorial sine,
  with many nodal domains (``sphere_harmonic_h`` exposes the inductive
  intermediates).
* ``zonal_harmonic``    -- rotation-invariant harmonic of a given degree,
  normalized to the value 1 at its pole.
* ``torus_eigenfunction`` -- product of sines on the unit flat torus.
* ``harmonic_polynomial_2d`` -- trigonometric-moment harmonic polynomials
  on the plane (exactly harmonic, used as test functions).

Point conventions (shared with :mod:`nodalgeom.grids`):

* sphere(n): unit vectors in R^{n+1}; the north pole is +e1, and the
  colatitude theta_1 is measured from it.
* torus(n): coordinates in [0,1)^n with unit side length.
* ball(n): Cartesian coordinates in the closed unit ball of R^n.

All evaluation is pure and deterministic; fields carry no mutable state
and may be shared freely across workers.
"""

import json
import math
from dataclasses import dataclass

import numpy as np

# Slack for the Legendre argument leaving [-1, 1] through roundoff.
_T_SLACK = 1e-12

_POLE_NORM_NOTE = "unit_at_argument_one"


def _as_points(points, dim):
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[None, :]
    if pts.shape[-1] != dim:
        raise ValueError(f"expected points with {dim} coordinates, got shape {pts.shape}")
    return pts


def _legendre_kernel(n, k, t):
    """Three-term recurrence for the dimension-n Legendre polynomial.

    Normalized so the value at t=1 is 1 for every degree; this is the
    unique normalization under which the zonal harmonic takes the value 1
    at its pole.  Stable in the degree (no Rodrigues differentiation).
    """
    p_prev = np.ones_like(t)
    if k == 0:
        return p_prev
    p_cur = t.copy()
    for j in range(1, k):
        p_next = ((2 * j + n - 2) * t * p_cur - j * p_prev) / (j + n - 2)
        p_prev = p_cur
        p_cur = p_next
    return p_cur


def legendre_p(n, k, t):
    """Evaluate the dimension-n Legendre polynomial of degree k at t.

    n >= 2 is the dimension parameter of the family (n = 3 gives the
    classical Legendre polynomials, n = 2 the Chebyshev T_k).  t may be a
    scalar or an array with entries in [-1, 1] (1e-12 slack).
    """
    if int(n) != n or n < 2:
        raise NotImplementedError(f"legendre_p requires integer n >= 2, got {n}")
    if int(k) != k or k < 0:
        raise ValueError(f"degree k must be a nonnegative integer, got {k}")
    t_arr = np.asarray(t, dtype=float)
    if np.any(np.abs(t_arr) > 1.0 + _T_SLACK):
        raise ValueError("legendre_p argument outside [-1, 1]")
    t_arr = np.clip(t_arr, -1.0, 1.0)
    out = _legendre_kernel(int(n), int(k), np.atleast_1d(t_arr))
    if np.isscalar(t) or t_arr.ndim == 0:
        return float(out[0])
    return out.reshape(t_arr.shape)


def _derivative_weight(n, k, j):
    # j-fold differentiation lowers the degree by one and raises the
    # dimension parameter by two at each step; this is its scalar weight.
    w = 1.0
    for i in range(j):
        w *= (k - i) * (k + n - 2 + i) / (n - 1 + 2 * i)
    return w


def assoc_legendre_e(n, k, j, t):
    """Associated Legendre function: (1-t^2)^(j/2) times the j-th derivative
    of the dimension-n Legendre polynomial of degree k.

    The derivative is evaluated through the derivative-lowering recurrence
    (degree k-j polynomial of the dimension n+2j family times an explicit
    weight), never by finite differences.  Has exactly k-j sign changes on
    (-1, 1).
    """
    if int(n) != n or n < 2:
        raise NotImplementedError(f"assoc_legendre_e requires integer n >= 2, got {n}")
    if int(k) != k or k < 0:
        raise ValueError(f"degree k must be a nonnegative integer, got {k}")
    if int(j) != j or j < 0 or j > k:
        raise ValueError(f"derivative order j must satisfy 0 <= j <= k, got j={j}, k={k}")
    n, k, j = int(n), int(k), int(j)
    t_arr = np.asarray(t, dtype=float)
    if np.any(np.abs(t_arr) > 1.0 + _T_SLACK):
        raise ValueError("assoc_legendre_e argument outside [-1, 1]")
    t_arr = np.clip(t_arr, -1.0, 1.0)
    flat = np.atleast_1d(t_arr)
    core = _legendre_kernel(n + 2 * j, k - j, flat)
    if j > 0:
        core = core * _derivative_weight(n, k, j) * (1.0 - flat * flat) ** (j / 2.0)
    if np.isscalar(t) or t_arr.ndim == 0:
        return float(core[0])
    return core.reshape(t_arr.shape)


# ---------------------------------------------------------------------------
# spherical coordinates


def sphere_angles_to_embedding(angles):
    """Map angles (theta_1..theta_{n-1}, phi) to a unit vector in R^{n+1}.

    x_1 = cos(theta_1), x_l = sin(theta_1)..sin(theta_{l-1}) cos(theta_l),
    and the last two coordinates carry cos(phi), sin(phi).
    """
    ang = np.asarray(angles, dtype=float)
    squeeze = ang.ndim == 1
    if squeeze:
        ang = ang[None, :]
    n = ang.shape[-1]
    out = np.empty(ang.shape[:-1] + (n + 1,), dtype=float)
    prefix = np.ones(ang.shape[:-1], dtype=float)
    for l in range(n - 1):
        out[..., l] = prefix * np.cos(ang[..., l])
        prefix = prefix * np.sin(ang[..., l])
    out[..., n - 1] = prefix * np.cos(ang[..., n - 1])
    out[..., n] = prefix * np.sin(ang[..., n - 1])
    return out[0] if squeeze else out


def sphere_embedding_to_angles(x):
    """Inverse of :func:`sphere_angles_to_embedding` (phi reduced to [0, 2pi))."""
    v = np.asarray(x, dtype=float)
    squeeze = v.ndim == 1
    if squeeze:
        v = v[None, :]
    n = v.shape[-1] - 1
    ang = np.empty(v.shape[:-1] + (n,), dtype=float)
    rest = v
    for l in range(n - 1):
        tail = np.linalg.norm(rest[..., 1:], axis=-1)
        ang[..., l] = np.arctan2(tail, rest[..., 0])
        rest = rest[..., 1:]
    phi = np.arctan2(rest[..., 1], rest[..., 0])
    ang[..., n - 1] = np.mod(phi, 2.0 * math.pi)
    return ang[0] if squeeze else ang


@dataclass(frozen=True)
class SphericalPoint:
    """A sphere point given by angles (theta_1..theta_{n-1}, phi).

    Colatitudes are restricted to the open interval (0, pi): the
    parametrization is singular at the poles, and grids never place
    nodes there.
    """

    angles: tuple

    def __post_init__(self):
        ang = tuple(float(a) for a in self.angles)
        object.__setattr__(self, "angles", ang)
        if len(ang) < 1:
            raise ValueError("need at least the longitude angle")
        for theta in ang[:-1]:
            if not 0.0 < theta < math.pi:
                raise ValueError(f"colatitude {theta} outside (0, pi)")
        if not 0.0 <= ang[-1] < 2.0 * math.pi:
            raise ValueError(f"longitude {ang[-1]} outside [0, 2pi)")

    @property
    def n(self):
        return len(self.angles)

    @property
    def embedding(self):
        return sphere_angles_to_embedding(np.array(self.angles))


def sphere_north_pole(n):
    """Embedding coordinates of the north pole of sphere(n)."""
    p = np.zeros(n + 1)
    p[0] = 1.0
    return p


# ---------------------------------------------------------------------------
# field specification and the field object


@dataclass(frozen=True)
class FieldSpec:
    """Construction metadata for a scalar field.

    ``degree`` is the polynomial/eigenfunction degree k; ``sector_index``
    is the inductive sector order j (only set for intermediate
    ``sphere_harmonic`` levels built with a non-default j).
    """

    domain: str
    n: int
    kind: str
    degree: int = None
    sector_index: int = None
    cos_coeffs: tuple = None
    sin_coeffs: tuple = None
    pole: tuple = None

    @property
    def eigenvalue(self):
        """Laplacian eigenvalue (geometric sign convention, spectrum >= 0)."""
        if self.kind in ("sphere_harmonic", "zonal"):
            return float(self.degree * (self.degree + self.n - 1))
        if self.kind == "torus_product":
            return 4.0 * (self.n - 1) * self.degree**2 * math.pi**2
        if self.kind == "harmonic_poly_2d":
            return 0.0
        raise ValueError(f"unknown field kind {self.kind!r}")

    def to_json_dict(self):
        d = {"domain": self.domain, "kind": self.kind, "n": self.n}
        if self.degree is not None:
            d["k"] = self.degree
        if self.sector_index is not None:
            d["j"] = self.sector_index
        if self.cos_coeffs is not None:
            inter = []
            for a, b in zip(self.cos_coeffs, self.sin_coeffs):
                inter.extend((a, b))
            d["coefficients"] = inter
        if self.pole is not None:
            d["pole"] = list(self.pole)
        if self.kind in ("sphere_harmonic", "zonal"):
            d["normalization"] = _POLE_NORM_NOTE
        return d


class ScalarField:
    """An exactly evaluable real function on a named domain.

    Wraps a pure vectorized kernel together with its :class:`FieldSpec`.
    Construction probes the field on a coarse deterministic grid and
    rejects identically-zero fields.
    """

    def __init__(self, spec, kernel):
        self.spec = spec
        self._kernel = kernel
        probe = _probe_points(spec.domain, spec.n)
        if not np.any(np.abs(kernel(probe)) > 0.0):
            raise ValueError("field evaluates to zero everywhere on the construction probe grid")

    @property
    def domain(self):
        return self.spec.domain

    @property
    def n(self):
        return self.spec.n

    @property
    def eigenvalue(self):
        return self.spec.eigenvalue

    def evaluate(self, points):
        """Evaluate at one point (1-D input, returns float) or many (last
        axis = coordinates, returns array of the leading shape)."""
        pts = np.asarray(points, dtype=float)
        if pts.ndim == 1:
            return float(self._kernel(pts[None, :])[0])
        lead = pts.shape[:-1]
        out = self._kernel(pts.reshape(-1, pts.shape[-1]))
        return out.reshape(lead)

    __call__ = evaluate

    def to_json(self):
        return json.dumps(self.spec.to_json_dict(), sort_keys=True)


def _probe_points(domain, n):
    # Coarse deterministic probe used by the nonzero check at construction.
    # Staggered offsets keep probe nodes off the axis-aligned nodal sets of
    # every supported family.
    if domain == "sphere":
        axes = [math.pi * (np.arange(9) + 0.5) / 9 for _ in range(n - 1)]
        axes.append(2 * math.pi * (np.arange(23) + 0.382) / 23)
        mesh = np.meshgrid(*axes, indexing="ij")
        ang = np.stack([m.ravel() for m in mesh], axis=-1)
        return sphere_angles_to_embedding(ang)
    if domain == "torus":
        axes = [(np.arange(17) + 0.37) / 17 for _ in range(n)]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)
    if domain == "ball":
        if n == 2:
            r = np.array([0.25, 0.55, 0.85])
            th = 2 * math.pi * (np.arange(31) + 0.17) / 31
            rr, tt = np.meshgrid(r, th, indexing="ij")
            return np.stack([rr.ravel() * np.cos(tt.ravel()), rr.ravel() * np.sin(tt.ravel())], axis=-1)
        axes = [np.linspace(-0.9, 0.9, 9) + 0.013 for _ in range(n)]
        mesh = np.meshgrid(*axes, indexing="ij")
        pts = np.stack([m.ravel() for m in mesh], axis=-1)
        return pts[np.linalg.norm(pts, axis=-1) < 1.0]
    raise ValueError(f"unknown domain {domain!r}")


# ---------------------------------------------------------------------------
# constructors


def _y_eval(n, k, v):
    """Evaluate the inductive harmonic of degree k on sphere(n) at vectors v.

    v has n+1 columns and need not be normalized (only directions enter).
    Base level: sin(k * phi) on the circle; inductive level: associated
    Legendre factor in cos(theta_1) times the level below at sector order
    j = floor(k/2).  A degree-0 request returns the constant 1.
    """
    if k == 0:
        return np.ones(v.shape[0])
    if n == 1:
        phi = np.arctan2(v[:, 1], v[:, 0])
        return np.sin(k * phi)
    j = k // 2
    return _h_eval(n, k, j, v)


def _h_eval(n, k, j, v):
    nrm = np.linalg.norm(v, axis=-1)
    safe = np.where(nrm > 0.0, nrm, 1.0)
    t = np.clip(v[:, 0] / safe, -1.0, 1.0)
    out = assoc_legendre_e(n + 1, k, j, t) * _y_eval(n - 1, j, v[:, 1:])
    return np.where(nrm > 0.0, out, 0.0)


def sphere_harmonic_h(n, k, j):
    """Inductive intermediate: associated Legendre factor of order (k, j)
    in the colatitude times the sector harmonic of degree j one dimension
    down.  Exposed mainly for tests; ``sphere_harmonic_y`` is the default
    j = floor(k/2) member."""
    if not 1 <= n <= 3:
        raise NotImplementedError(f"sphere harmonics are supported for 1 <= n <= 3, got n={n}")
    if k < 1:
        raise ValueError(f"degree k must be >= 1, got {k}")
    if n == 1:
        if j not in (None, 0):
            raise ValueError("the circle level has no sector index")
        spec = FieldSpec(domain="sphere", n=1, kind="sphere_harmonic", degree=k)
        return ScalarField(spec, lambda pts, k=k: _y_eval(1, k, _as_points(pts, 2)))
    if not 0 <= j <= k:
        raise ValueError(f"sector index j must satisfy 0 <= j <= k, got {j}")
    sector = None if j == k // 2 else j
    spec = FieldSpec(domain="sphere", n=n, kind="sphere_harmonic", degree=k, sector_index=sector)
    return ScalarField(spec, lambda pts, n=n, k=k, j=j: _h_eval(n, k, j, _as_points(pts, n + 1)))


def sphere_harmonic_y(n, k):
    """Degree-k spherical harmonic on sphere(n) with ~k^n nodal domains,
    ~k^{n-1} of which touch the north pole.  Eigenvalue k(k+n-1)."""
    if not 1 <= n <= 3:
        raise NotImplementedError(f"sphere harmonics are supported for 1 <= n <= 3, got n={n}")
    if k < 1:
        raise ValueError(f"degree k must be >= 1, got {k}")
    if n == 1:
        return sphere_harmonic_h(1, k, 0)
    return sphere_harmonic_h(n, k, k // 2)


def zonal_harmonic(n, k, pole):
    """Rotation-invariant spherical harmonic of degree k about ``pole``,
    normalized to the value 1 at the pole; depends on x only through the
    inner product with the pole."""
    if not 1 <= n <= 3:
        raise NotImplementedError(f"zonal harmonics are supported for 1 <= n <= 3, got n={n}")
    if int(k) != k or k < 0:
        raise ValueError(f"degree k must be a nonnegative integer, got {k}")
    p = np.asarray(pole, dtype=float)
    if p.shape != (n + 1,):
        raise ValueError(f"pole must be a vector in R^{n + 1}")
    if abs(np.linalg.norm(p) - 1.0) > 1e-9:
        raise ValueError("pole must have unit norm (tolerance 1e-9)")
    spec = FieldSpec(domain="sphere", n=n, kind="zonal", degree=int(k), pole=tuple(p))

    def kernel(pts, n=n, k=int(k), p=p):
        x = _as_points(pts, n + 1)
        t = np.clip(x @ p, -1.0, 1.0)
        return _legendre_kernel(n + 1, k, t)

    return ScalarField(spec, kernel)


def torus_eigenfunction(n, k):
    """Product of sines over the first n-1 coordinates of the unit torus;
    eigenvalue 4(n-1) k^2 pi^2."""
    if n not in (2, 3):
        raise NotImplementedError(f"torus eigenfunctions are supported for n in {{2, 3}}, got n={n}")
    if k < 1:
        raise ValueError(f"frequency k must be >= 1, got {k}")
    spec = FieldSpec(domain="torus", n=n, kind="torus_product", degree=int(k))

    def kernel(pts, n=n, k=int(k)):
        x = _as_points(pts, n)
        out = np.ones(x.shape[0])
        for axis in range(n - 1):
            out = out * np.sin(2.0 * math.pi * k * x[:, axis])
        return out

    return ScalarField(spec, kernel)


def harmonic_polynomial_2d(cos_coeffs, sin_coeffs):
    """Harmonic polynomial sum_m r^m (a_m cos(m theta) + b_m sin(m theta))
    on the plane, evaluated at Cartesian points of the unit disk.

    Exactly harmonic by construction (real part of a complex polynomial).
    All-zero coefficient input is rejected.
    """
    a = tuple(float(c) for c in cos_coeffs)
    b = tuple(float(c) for c in sin_coeffs)
    m = max(len(a), len(b))
    if m == 0:
        raise ValueError("at least one coefficient is required")
    a = a + (0.0,) * (m - len(a))
    b = b + (0.0,) * (m - len(b))
    # b_0 multiplies sin(0) == 0, so it cannot make the field nonzero.
    if all(c == 0.0 for c in a) and all(c == 0.0 for c in b[1:]):
        raise ValueError("all-zero coefficients give the zero field")
    degree = max(i for i in range(m) if a[i] != 0.0 or (i > 0 and b[i] != 0.0))
    coeffs = np.array([a[i] - 1j * b[i] for i in range(m)])
    spec = FieldSpec(
        domain="ball", n=2, kind="harmonic_poly_2d", degree=degree, cos_coeffs=a, sin_coeffs=b
    )

    def kernel(pts, coeffs=coeffs):
        x = _as_points(pts, 2)
        z = x[:, 0] + 1j * x[:, 1]
        acc = np.zeros(z.shape, dtype=complex)
        for c in coeffs[::-1]:
            acc = acc * z + c
        return acc.real

    return ScalarField(spec, kernel)


# ---------------------------------------------------------------------------
# JSON round trip


def field_from_json(text):
    """Rebuild a field from the JSON produced by ``ScalarField.to_json``.

    Integer parameters round-trip bit-exactly; coefficient/pole floats
    round-trip exactly through JSON's shortest-repr encoding.
    """
    d = json.loads(text)
    kind = d["kind"]
    if kind == "sphere_harmonic":
        if "j" in d:
            return sphere_harmonic_h(d["n"], d["k"], d["j"])
        return sphere_harmonic_y(d["n"], d["k"])
    if kind == "zonal":
        return zonal_harmonic(d["n"], d["k"], np.array(d["pole"]))
    if kind == "torus_product":
        return torus_eigenfunction(d["n"], d["k"])
    if kind == "harmonic_poly_2d":
        inter = d["coefficients"]
        return harmonic_polynomial_2d(inter[0::2], inter[1::2])
    raise ValueError(f"unknown field kind {kind!r}")
