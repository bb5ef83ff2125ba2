import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nodalgeom import (
    SphericalPoint,
    assoc_legendre_e,
    field_from_json,
    harmonic_polynomial_2d,
    legendre_p,
    sphere_harmonic_h,
    sphere_harmonic_y,
    sphere_north_pole,
    torus_eigenfunction,
    zonal_harmonic,
)
from nodalgeom.fields import sphere_angles_to_embedding, sphere_embedding_to_angles

from _oracles import count_sign_changes, rodrigues_assoc, rodrigues_legendre


class TestLegendre:
    def test_degree_zero_is_one(self):
        assert legendre_p(3, 0, 0.37) == 1.0

    def test_value_one_at_one(self):
        for n in (2, 3, 4, 7):
            for k in (0, 1, 5, 12):
                assert legendre_p(n, k, 1.0) == pytest.approx(1.0, abs=1e-12)

    def test_frozen_quadratic_value(self):
        # expanded from the degree-2 differentiation: (3t^2 - 1)/2 at 0
        assert legendre_p(3, 2, 0.0) == pytest.approx(-0.5, abs=1e-15)

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_recurrence_matches_symbolic_expansion(self, n):
        rng = np.random.default_rng(42)
        t = rng.uniform(-1, 1, 300)
        for k in range(0, 9):
            ref = np.asarray(rodrigues_legendre(n, k)(t), dtype=float)
            got = legendre_p(n, k, t)
            assert np.max(np.abs(got - ref) / np.maximum(np.abs(ref), 1e-3)) < 1e-10

    def test_argument_range_checks(self):
        with pytest.raises(ValueError):
            legendre_p(3, 2, 1.1)
        legendre_p(3, 2, 1.0 + 5e-13)  # inside the documented slack
        with pytest.raises(NotImplementedError):
            legendre_p(1, 2, 0.5)
        with pytest.raises(ValueError):
            legendre_p(3, -1, 0.5)

    @given(st.floats(min_value=-1.0, max_value=1.0), st.integers(0, 40))
    @settings(max_examples=200, deadline=None)
    def test_bounded_by_pole_value(self, t, k):
        assert abs(legendre_p(3, k, t)) <= 1.0 + 1e-12

    def test_deterministic_evaluation(self):
        a = legendre_p(4, 11, 0.123456789)
        b = legendre_p(4, 11, 0.123456789)
        assert a == b


class TestAssociatedLegendre:
    def test_order_zero_reduces_to_legendre(self):
        t = np.linspace(-0.99, 0.99, 57)
        assert np.array_equal(assoc_legendre_e(3, 6, 0, t), legendre_p(3, 6, t))

    def test_frozen_first_order_value(self):
        # degree-1 polynomial is t, so the order-1 function is sqrt(1-t^2)
        assert assoc_legendre_e(3, 1, 1, 0.6) == pytest.approx(0.8, abs=1e-15)

    @pytest.mark.parametrize("n,k,j", [(3, 4, 2), (3, 5, 3), (4, 6, 2), (2, 7, 4)])
    def test_derivative_lowering_matches_symbolic(self, n, k, j):
        rng = np.random.default_rng(5)
        t = rng.uniform(-0.999, 0.999, 200)
        ref = np.asarray(rodrigues_assoc(n, k, j)(t), dtype=float)
        got = assoc_legendre_e(n, k, j, t)
        scale = np.abs(ref).max()
        assert np.max(np.abs(got - ref)) < 1e-9 * scale

    def test_sign_change_counts(self):
        t = (np.arange(100000) + 0.5) / 50000 - 1.0
        for n in (1, 2):
            for k in (0, 1, 3, 7, 12):
                for j in range(k + 1):
                    changes = count_sign_changes(assoc_legendre_e(n + 1, k, j, t))
                    assert changes == k - j, (n, k, j)

    def test_order_range_check(self):
        with pytest.raises(ValueError):
            assoc_legendre_e(3, 4, 5, 0.2)


class TestSphericalCoordinates:
    def test_embedding_is_unit(self):
        rng = np.random.default_rng(0)
        ang = np.stack(
            [
                rng.uniform(1e-3, math.pi - 1e-3, 200),
                rng.uniform(1e-3, math.pi - 1e-3, 200),
                rng.uniform(0, 2 * math.pi, 200),
            ],
            axis=-1,
        )
        emb = sphere_angles_to_embedding(ang)
        assert np.max(np.abs(np.linalg.norm(emb, axis=-1) - 1.0)) < 1e-12

    def test_parametrization_formulas(self):
        th, ph = 0.7, 2.1
        x = sphere_angles_to_embedding(np.array([th, ph]))
        assert x[0] == pytest.approx(math.cos(th))
        assert x[1] == pytest.approx(math.sin(th) * math.cos(ph))
        assert x[2] == pytest.approx(math.sin(th) * math.sin(ph))

    def test_round_trip(self):
        rng = np.random.default_rng(3)
        ang = np.stack(
            [rng.uniform(0.05, math.pi - 0.05, 50), rng.uniform(0, 2 * math.pi, 50)], axis=-1
        )
        back = sphere_embedding_to_angles(sphere_angles_to_embedding(ang))
        assert np.max(np.abs(back - ang)) < 1e-12

    def test_spherical_point_validation(self):
        p = SphericalPoint((0.4, 1.0))
        assert np.linalg.norm(p.embedding) == pytest.approx(1.0, abs=1e-12)
        with pytest.raises(ValueError):
            SphericalPoint((0.0, 1.0))  # pole excluded
        with pytest.raises(ValueError):
            SphericalPoint((0.3, 7.0))


class TestSphereHarmonics:
    def test_circle_base_case(self):
        y = sphere_harmonic_y(1, 5)
        pt = np.array([math.cos(math.pi / 10), math.sin(math.pi / 10)])
        assert y.evaluate(pt) == pytest.approx(1.0, abs=1e-12)

    def test_product_structure_on_two_sphere(self):
        y = sphere_harmonic_y(2, 4)
        th, ph = 0.83, 1.21
        pt = sphere_angles_to_embedding(np.array([th, ph]))
        expected = assoc_legendre_e(3, 4, 2, math.cos(th)) * math.sin(2 * ph)
        assert y.evaluate(pt) == pytest.approx(expected, rel=1e-12)

    def test_eigenvalue_metadata(self):
        assert sphere_harmonic_y(2, 4).eigenvalue == 20.0
        assert sphere_harmonic_y(3, 5).eigenvalue == 5 * (5 + 2)

    def test_three_sphere_induction(self):
        y = sphere_harmonic_h(3, 5, 2)
        ang = np.array([0.7, 1.1, 2.0])
        pt = sphere_angles_to_embedding(ang)
        expected = (
            assoc_legendre_e(4, 5, 2, math.cos(0.7))
            * assoc_legendre_e(3, 2, 1, math.cos(1.1))
            * math.sin(2.0)
        )
        assert y.evaluate(pt) == pytest.approx(expected, rel=1e-12)

    def test_unsupported_dimension(self):
        with pytest.raises(NotImplementedError):
            sphere_harmonic_y(4, 3)

    def test_eigen_equation_residual_shrinks_quadratically(self):
        from nodalgeom import build_grid
        from _oracles import discrete_sphere_laplacian

        y = sphere_harmonic_y(2, 4)
        lam = y.eigenvalue
        residuals = {}
        for res in (64, 128):
            grid = build_grid(("sphere", 2), res)
            vals = grid.evaluate(y)
            lap = discrete_sphere_laplacian(vals, grid)
            resid = np.abs(lap - lam * vals[1:-1, :]).max() / np.abs(vals).max()
            residuals[res] = resid
        assert residuals[128] < residuals[64] / 2.5
        assert residuals[128] < 0.05 * lam


class TestTorusEigenfunctions:
    def test_direct_substitution(self):
        f = torus_eigenfunction(2, 3)
        assert f.evaluate(np.array([1 / 12, 0.77])) == pytest.approx(1.0, abs=1e-12)
        f3 = torus_eigenfunction(3, 2)
        assert f3.evaluate(np.array([1 / 8, 1 / 8, 0.4])) == pytest.approx(1.0, abs=1e-12)

    def test_eigenvalues(self):
        assert torus_eigenfunction(2, 3).eigenvalue == pytest.approx(36 * math.pi**2)
        assert torus_eigenfunction(3, 2).eigenvalue == pytest.approx(32 * math.pi**2)

    def test_eigen_equation_discrete(self):
        from nodalgeom import build_grid
        from _oracles import discrete_torus_laplacian

        f = torus_eigenfunction(2, 4)
        grid = build_grid(("torus", 2), 256)
        vals = grid.evaluate(f)
        lap = discrete_torus_laplacian(vals, grid)
        rel = np.abs(lap - f.eigenvalue * vals).max() / np.abs(vals).max()
        assert rel < 0.01 * f.eigenvalue

    def test_unsupported(self):
        with pytest.raises(NotImplementedError):
            torus_eigenfunction(4, 2)


class TestHarmonicPolynomials:
    def test_single_term(self):
        f = harmonic_polynomial_2d([], [0, 0, 0, 1.0])
        r, th = 0.8, 0.9
        pt = np.array([r * math.cos(th), r * math.sin(th)])
        assert f.evaluate(pt) == pytest.approx(r**3 * math.sin(3 * th), rel=1e-12)

    def test_five_point_laplacian_vanishes(self):
        rng = np.random.default_rng(11)
        f = harmonic_polynomial_2d(rng.normal(size=7), rng.normal(size=7))
        pts = rng.uniform(-0.5, 0.5, (50, 2))

        def stencil_residual(h):
            lap = (
                f.evaluate(pts + [h, 0])
                + f.evaluate(pts - [h, 0])
                + f.evaluate(pts + [0, h])
                + f.evaluate(pts - [0, h])
                - 4 * f.evaluate(pts)
            ) / h**2
            return np.abs(lap).max()

        r1, r2 = stencil_residual(2e-3), stencil_residual(1e-3)
        assert r1 < 1e-3
        assert r2 < r1 / 3.0  # second-order truncation

    def test_homogeneity_sup(self):
        from _oracles import boundary_max

        f = harmonic_polynomial_2d([], [0, 0, 0, 0, 1.0])  # r^4 sin(4 theta)
        for s in (0.3, 0.8):
            assert boundary_max(f, s, 20001) == pytest.approx(s**4, rel=1e-6)

    def test_all_zero_rejected(self):
        with pytest.raises(ValueError):
            harmonic_polynomial_2d([0.0, 0.0], [0.0])
        with pytest.raises(ValueError):
            harmonic_polynomial_2d([], [1.0])  # sin(0*theta) term only

    def test_degree_metadata(self):
        f = harmonic_polynomial_2d([0, 1, 0], [0, 0, 0, 2.0, 0])
        assert f.spec.degree == 3


class TestZonalHarmonics:
    def test_value_one_at_pole(self):
        north = sphere_north_pole(2)
        z = zonal_harmonic(2, 7, north)
        assert z.evaluate(north) == pytest.approx(1.0, abs=1e-12)

    def test_equator_value_from_expansion(self):
        z = zonal_harmonic(2, 2, sphere_north_pole(2))
        assert z.evaluate(np.array([0.0, 1.0, 0.0])) == pytest.approx(-0.5, abs=1e-12)

    def test_degree_zero_constant(self):
        z = zonal_harmonic(2, 0, sphere_north_pole(2))
        rng = np.random.default_rng(1)
        v = rng.normal(size=(20, 3))
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        assert np.allclose(z.evaluate(v), 1.0)

    def test_rotation_invariance_about_pole(self):
        rng = np.random.default_rng(9)
        pole = rng.normal(size=4)
        pole /= np.linalg.norm(pole)
        z = zonal_harmonic(3, 5, pole)
        x = rng.normal(size=4)
        x /= np.linalg.norm(x)
        base = z.evaluate(x)
        # rotate x about the pole: keep the component along the pole, spin the rest
        for _ in range(10):
            q, _ = np.linalg.qr(np.column_stack([pole, rng.normal(size=(4, 3))]))
            perp = x - (x @ pole) * pole
            coords = q[:, 1:].T @ perp
            theta = rng.uniform(0, 2 * math.pi)
            c, s = math.cos(theta), math.sin(theta)
            rot = np.array(
                [
                    [c, -s, 0],
                    [s, c, 0],
                    [0, 0, 1],
                ]
            )
            x_rot = (x @ pole) * pole + q[:, 1:] @ (rot @ coords)
            assert abs(z.evaluate(x_rot) - base) < 1e-10

    def test_pole_validation(self):
        with pytest.raises(ValueError):
            zonal_harmonic(2, 3, np.array([1.0, 1.0, 0.0]))


class TestFieldSerialization:
    @pytest.mark.parametrize(
        "field",
        [
            sphere_harmonic_y(2, 6),
            sphere_harmonic_h(2, 6, 1),
            torus_eigenfunction(3, 4),
            zonal_harmonic(2, 3, sphere_north_pole(2)),
            harmonic_polynomial_2d([0.25, -1.5], [0, 2.0, 0.125]),
        ],
    )
    def test_round_trip(self, field):
        clone = field_from_json(field.to_json())
        assert clone.to_json() == field.to_json()
        d = json.loads(field.to_json())
        assert d["n"] == field.spec.n
        if field.spec.degree is not None and "k" in d:
            assert d["k"] == field.spec.degree  # bit-exact integer round trip

    def test_round_trip_values_identical(self):
        f = harmonic_polynomial_2d([0.1, -0.7, 0.33], [0, 1.25])
        g = field_from_json(f.to_json())
        pts = np.random.default_rng(2).uniform(-0.7, 0.7, (40, 2))
        assert np.array_equal(f.evaluate(pts), g.evaluate(pts))

    def test_normalization_recorded(self):
        d = json.loads(sphere_harmonic_y(2, 3).to_json())
        assert d["normalization"] == "unit_at_argument_one"
