import math

import numpy as np
import pytest

from nodalgeom import (
    Domain,
    MetricBall,
    build_grid,
    cells_in_ball,
    geodesic_distance,
    sphere_north_pole,
    spherical_layers,
)


class TestDomains:
    @pytest.mark.parametrize(
        "name,n,measure,diameter",
        [
            ("sphere", 1, 2 * math.pi, math.pi),
            ("sphere", 2, 4 * math.pi, math.pi),
            ("sphere", 3, 2 * math.pi**2, math.pi),
            ("torus", 2, 1.0, math.sqrt(2) / 2),
            ("torus", 3, 1.0, math.sqrt(3) / 2),
            ("ball", 2, math.pi, 2.0),
            ("ball", 3, 4 * math.pi / 3, 2.0),
        ],
    )
    def test_analytic_constants(self, name, n, measure, diameter):
        d = Domain(name, n)
        assert d.measure == pytest.approx(measure)
        assert d.diameter == pytest.approx(diameter)

    def test_unsupported(self):
        with pytest.raises(NotImplementedError):
            Domain("sphere", 4)
        with pytest.raises(NotImplementedError):
            Domain("ball", 1)


class TestGridMeasures:
    def test_torus_uniform(self):
        g = build_grid(("torus", 2), 100)
        assert g.n_cells == 10_000
        assert g.cell_measures() == pytest.approx(1e-4)
        assert g.total_measure() == pytest.approx(1.0, rel=1e-12)

    @pytest.mark.parametrize("res", [256, 512])
    def test_sphere_total_area(self, res):
        g = build_grid(("sphere", 2), res)
        assert abs(g.total_measure() - 4 * math.pi) / (4 * math.pi) < 1e-6

    def test_sphere3_total(self):
        g = build_grid(("sphere", 3), 32)
        assert g.total_measure() == pytest.approx(2 * math.pi**2, rel=1e-9)

    def test_ball_area_first_order_bias(self):
        for res, tol in ((128, 4 / 128), (512, 4 / 512)):
            g = build_grid(("ball", 2), res)
            assert abs(g.total_measure() - math.pi) / math.pi < tol

    def test_minimum_resolution(self):
        with pytest.raises(ValueError):
            build_grid(("torus", 2), 8)

    def test_pole_exclusion(self):
        g = build_grid(("sphere", 2), 64)
        th = g.axis_coords()[0]
        assert th.min() > 0 and th.max() < math.pi


class TestGeodesicDistance:
    def test_sphere_pole_to_equator(self):
        d = geodesic_distance(("sphere", 2), sphere_north_pole(2), np.array([0.0, 1.0, 0.0]))
        assert d == pytest.approx(math.pi / 2)

    def test_torus_wraparound(self):
        d = geodesic_distance(("torus", 2), np.array([0.1, 0.0]), np.array([0.9, 0.0]))
        assert d == pytest.approx(0.2)

    def test_identity(self):
        for dom, p in [
            (("sphere", 2), sphere_north_pole(2)),
            (("torus", 2), np.array([0.3, 0.7])),
            (("ball", 2), np.array([0.1, -0.2])),
        ]:
            assert geodesic_distance(dom, p, p) == 0.0

    def test_torus_metric_triangle_inequality(self):
        rng = np.random.default_rng(17)
        p, q, r = rng.random((3, 10_000, 2))
        dom = ("torus", 2)
        dpq = geodesic_distance(dom, p, q)
        dqr = geodesic_distance(dom, q, r)
        dpr = geodesic_distance(dom, p, r)
        assert np.all(dpr <= dpq + dqr + 1e-12)

    def test_distance_to_matches_pointwise(self):
        g = build_grid(("sphere", 2), 48)
        c = np.array([0.2, -0.4, 0.0])
        c /= np.linalg.norm(c)
        field_dist = g.distance_to(c)
        ref = np.arccos(np.clip(g.points() @ c, -1, 1)).reshape(g.shape)
        assert np.abs(field_dist - ref).max() < 1e-12


class TestCellsInBall:
    def test_torus_disk_measure(self):
        g = build_grid(("torus", 2), 512)
        got = cells_in_ball(g, MetricBall((0.5, 0.5), 0.25))
        want = math.pi / 16
        assert abs(got.measure - want) / want < 0.02
        assert abs(got.measure - want) <= got.boundary_measure

    def test_whole_sphere(self):
        g = build_grid(("sphere", 2), 64)
        got = cells_in_ball(g, MetricBall(tuple(sphere_north_pole(2)), math.pi))
        assert got.measure == pytest.approx(g.total_measure())
        assert got.n_cells == g.n_cells

    def test_subpitch_ball_flagged_empty(self):
        g = build_grid(("torus", 2), 512)
        got = cells_in_ball(g, MetricBall((0.25, 0.25), 5e-4))
        assert got.empty and got.n_cells == 0

    def test_monotone_set_inclusion(self):
        g = build_grid(("torus", 2), 256)
        inner = cells_in_ball(g, MetricBall((0.3, 0.3), 0.1))
        outer = cells_in_ball(g, MetricBall((0.3, 0.3), 0.2))
        assert set(inner.indices).issubset(set(outer.indices))
        assert inner.measure <= outer.measure

    def test_refinement_within_reported_bound(self):
        ball = MetricBall((0.37, 0.64), 0.21)
        m = {}
        for res in (256, 512):
            got = cells_in_ball(build_grid(("torus", 2), res), ball)
            m[res] = got
        assert abs(m[512].measure - m[256].measure) < m[256].boundary_measure

    def test_radius_beyond_diameter(self):
        g = build_grid(("torus", 2), 64)
        with pytest.raises(ValueError):
            cells_in_ball(g, MetricBall((0.5, 0.5), 2.0))


class TestMetricBall:
    def test_concentric_scaling(self):
        b = MetricBall((0.5, 0.5), 0.2)
        assert b.scaled(0.5).radius == pytest.approx(0.1)
        assert b.scaled(1.0).radius == b.radius
        with pytest.raises(ValueError):
            b.scaled(1.5)
        with pytest.raises(ValueError):
            MetricBall((0.0, 0.0), 0.0)


class TestSphericalLayers:
    def test_quarter_width(self):
        d = spherical_layers(MetricBall((0.5, 0.5), 1.0), 1 / 8)
        assert d.count == 4
        assert not d.single_layer_fallback
        assert d.layers[0].inner == pytest.approx(0.5)
        assert d.layers[-1].outer == pytest.approx(1.0)

    def test_wavelength_layer_count(self):
        # layer count for width = 1/sqrt(lambda) is floor(R sqrt(lambda) / 2) +- 1
        for lam in (400.0, 1234.5, 9999.0):
            radius = 0.8
            width = 1.0 / math.sqrt(lam)
            d = spherical_layers(MetricBall((0.5, 0.5), radius), width)
            expected = math.floor(radius * math.sqrt(lam) / 2)
            assert abs(d.count - expected) <= 1

    def test_fallback_single_layer(self):
        d = spherical_layers(MetricBall((0.5, 0.5), 1.0), 0.6)
        assert d.count == 1 and d.single_layer_fallback

    def test_probe_placement_callback(self):
        calls = []

        def placer(inner, outer):
            calls.append((inner, outer))
            return (0.5 + (inner + outer) / 2, 0.5)

        d = spherical_layers(MetricBall((0.5, 0.5), 0.4), 0.05, place_probe=placer)
        assert len(calls) == d.count
        for layer in d.layers:
            assert layer.probe_ball.radius == pytest.approx(0.025)


class TestAdjacency:
    def test_symmetric_and_degree(self):
        for dom, res in [(("torus", 2), 32), (("sphere", 2), 16), (("ball", 2), 32)]:
            g = build_grid(dom, res)
            rng = np.random.default_rng(4)
            valid = None if g.valid is None else np.flatnonzero(g.valid.ravel())
            pool = valid if valid is not None else np.arange(g.n_lattice)
            for idx in rng.choice(pool, size=25, replace=False):
                nbrs = g.neighbors(int(idx))
                for nb in nbrs:
                    assert int(idx) in g.neighbors(nb)  # symmetry
                if g.domain.name != "ball":
                    assert len(nbrs) >= g.domain.n

    def test_torus_wraps(self):
        g = build_grid(("torus", 2), 32)
        assert (32 * 31) in g.neighbors(0) or 31 in g.neighbors(0)


class TestWindows:
    def test_window_matches_full_computation(self):
        g = build_grid(("torus", 2), 128)
        ball = MetricBall((0.02, 0.97), 0.07)
        w = g.ball_window(ball)
        d_full = g.distance_to(ball.center_array)
        d_win = g.distance_to(ball.center_array, window=w)
        assert np.array_equal(w.extract(d_full), d_win)
        # every in-ball cell is inside the window
        gids = w.global_flat_ids(g.shape).ravel()
        inside_full = np.flatnonzero((d_full < ball.radius).ravel())
        assert set(inside_full).issubset(set(gids))

    def test_sphere_polar_window_covers_cap(self):
        g = build_grid(("sphere", 2), 64)
        ball = MetricBall(tuple(sphere_north_pole(2)), 0.2)
        w = g.ball_window(ball)
        assert w.wrap_axes[1]  # full longitude circle stays periodic
        d_win = g.distance_to(ball.center_array, window=w)
        d_full = g.distance_to(ball.center_array)
        assert (d_win < ball.radius).sum() == (d_full < ball.radius).sum()
