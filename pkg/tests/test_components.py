import math

import numpy as np
import pytest

from nodalgeom import (
    MetricBall,
    build_grid,
    components_touching_point,
    cross_section_bound,
    harmonic_polynomial_2d,
    label_components,
    local_components,
    sphere_harmonic_y,
    sphere_north_pole,
    stable_touch_count,
    torus_eigenfunction,
    zonal_harmonic,
)

from _oracles import strip_disk_area


class TestTorusStripCounts:
    @pytest.mark.parametrize("k", [3, 5, 8, 12])
    def test_two_k_strips(self, k):
        g = build_grid(("torus", 2), 256)
        t = label_components(torus_eigenfunction(2, k), g)
        assert t.n_components == 2 * k
        assert (t.signs > 0).sum() == k and (t.signs < 0).sum() == k

    def test_count_stable_under_refinement(self):
        counts = {}
        for res in (512, 1024):
            g = build_grid(("torus", 2), res)
            counts[res] = label_components(torus_eigenfunction(2, 32), g).n_components
        assert counts[512] == counts[1024] == 64

    def test_torus3_checkerboard_columns(self):
        g = build_grid(("torus", 3), 64)
        t = label_components(torus_eigenfunction(3, 2), g)
        assert t.n_components == 16


class TestSphereCounts:
    @pytest.mark.parametrize("k", [4, 8])
    def test_band_sector_product(self, k):
        j = k // 2
        g = build_grid(("sphere", 2), 256)
        t = label_components(sphere_harmonic_y(2, k), g, zero_tol=0.0)
        assert t.n_components == 2 * j * (k - j + 1)

    @pytest.mark.parametrize("k", [4, 8])
    def test_pole_touching_count(self, k):
        g = build_grid(("sphere", 2), 256)
        t = label_components(sphere_harmonic_y(2, k), g, zero_tol=0.0)
        count, radius = stable_touch_count(t, sphere_north_pole(2))
        assert count == 2 * (k // 2)
        assert radius >= 2 * g.pitch

    def test_touch_count_monotone_in_radius(self):
        g = build_grid(("sphere", 2), 128)
        t = label_components(sphere_harmonic_y(2, 6), g, zero_tol=0.0)
        pole = sphere_north_pole(2)
        radii = [3 * g.pitch * 1.5**m for m in range(8)]
        counts = [components_touching_point(t, pole, r).size for r in radii]
        assert all(a <= b for a, b in zip(counts, counts[1:]))

    def test_zonal_single_cap_at_pole(self):
        g = build_grid(("sphere", 2), 128)
        t = label_components(zonal_harmonic(2, 5, sphere_north_pole(2)), g, zero_tol=0.0)
        assert t.n_components == 6  # bands between the 5 latitude zeros
        count, _ = stable_touch_count(t, sphere_north_pole(2))
        assert count == 1

    def test_contact_radius_precondition(self):
        g = build_grid(("sphere", 2), 64)
        t = label_components(sphere_harmonic_y(2, 4), g, zero_tol=0.0)
        with pytest.raises(ValueError):
            components_touching_point(t, sphere_north_pole(2), 0.5 * g.pitch)


class TestTableInvariants:
    def _table(self):
        g = build_grid(("torus", 2), 128)
        f = torus_eigenfunction(2, 5)
        return g, g.evaluate(f), label_components(f, g)

    def test_volume_additivity(self):
        _, _, t = self._table()
        total = t.volumes.sum() + t.unlabeled_measure
        assert abs(total - t.region_measure) <= 1e-12 * t.region_measure

    def test_sign_correctness(self):
        g, vals, t = self._table()
        for pos, cid in enumerate(t.ids):
            cells = t.labels == cid
            if t.signs[pos] > 0:
                assert np.all(vals[cells] > t.zero_tol)
            else:
                assert np.all(vals[cells] < -t.zero_tol)

    def test_ids_are_smallest_cell_index(self):
        _, _, t = self._table()
        flat = t.labels.ravel()
        for cid in t.ids:
            members = np.flatnonzero(flat == cid)
            assert members.min() == cid

    def test_relabeling_deterministic(self):
        g = build_grid(("torus", 2), 128)
        f = torus_eigenfunction(2, 5)
        t1 = label_components(f, g)
        t2 = label_components(f, g)
        assert np.array_equal(t1.labels, t2.labels)
        assert np.array_equal(t1.volumes, t2.volumes)

    def test_constant_sign_single_component(self):
        g = build_grid(("ball", 2), 64)
        t = label_components(harmonic_polynomial_2d([5.0], []), g)
        assert t.n_components == 1
        assert t.volumes[0] == pytest.approx(g.total_measure())

    def test_all_zero_rejected(self):
        g = build_grid(("ball", 2), 64)
        with pytest.raises(ValueError):
            label_components(np.zeros(g.shape), g)

    def test_csv_rows(self):
        _, _, t = self._table()
        rows = t.to_rows(field_id="strips5")
        assert len(rows) == t.n_components
        assert set(rows[0]) == {"field_id", "component_id", "sign", "volume", "cell_count"}


class TestLocalComponents:
    def test_whole_domain_ball_matches_global(self):
        g = build_grid(("torus", 2), 256)
        f = torus_eigenfunction(2, 6)
        glob = label_components(f, g)
        loc = local_components(f, g, MetricBall((0.5, 0.5), 0.71))
        assert loc.n_components == glob.n_components
        assert np.array_equal(np.sort(loc.ids), np.sort(glob.ids))

    def test_strip_volumes_match_chord_oracle(self):
        k = 8
        g = build_grid(("torus", 2), 1024)
        f = torus_eigenfunction(2, k)
        ball = MetricBall((0.5, 0.5), 0.25)
        t = local_components(f, g, ball)
        # compare strip pieces against the exact strip/disk intersection areas
        edges = np.arange(2 * k + 1) / (2 * k)
        got = np.sort(t.volumes)[::-1]
        want = np.sort(
            [
                strip_disk_area(lo, hi, 0.5, 0.25)
                for lo, hi in zip(edges[:-1], edges[1:])
                if strip_disk_area(lo, hi, 0.5, 0.25) > 0
            ]
        )[::-1]
        assert len(got) == len(want)
        assert np.max(np.abs(got - want) / want[0]) < 0.03

    def test_min_meeting_fraction_scales_inverse_k(self):
        # narrowest piece meeting the half ball is a chord cut near R/2:
        # fraction ~ width * sqrt(3) R / (pi R^2) = Theta(1/k)
        for k in (8, 16):
            g = build_grid(("torus", 2), 1024)
            ball = MetricBall((0.5, 0.5), 0.25)
            t = local_components(torus_eigenfunction(2, k), g, ball)
            meets = t.flags["meets_half_ball"]
            frac = (t.volumes[meets] / t.region_measure).min()
            assert 0.5 / k < frac * 2 < 4.0 / k

    def test_containment_flags(self):
        # a small bump field: one positive blob strictly inside the ball
        g = build_grid(("ball", 2), 128)
        pts = g.points()
        vals = (0.05 - (pts[:, 0] ** 2 + pts[:, 1] ** 2)).reshape(g.shape)
        ball = MetricBall((0.0, 0.0), 0.8)
        t = local_components(vals, g, ball, zero_tol=0.0, values=vals)
        pos = [i for i in range(t.n_components) if t.signs[i] > 0]
        assert len(pos) == 1
        assert t.flags["contained_in_ball"][pos[0]]
        assert not t.flags["touches_ball_boundary"][pos[0]]
        neg = [i for i in range(t.n_components) if t.signs[i] < 0]
        assert all(t.flags["touches_ball_boundary"][i] for i in neg)

    def test_wrapping_strip_not_contained(self):
        g = build_grid(("torus", 2), 512)
        k = 6
        ball = MetricBall((1 / (4 * k), 0.5), 0.25)
        t = local_components(torus_eigenfunction(2, k), g, ball)
        meets = t.flags["meets_half_ball"]
        assert t.flags["touches_ball_boundary"][meets].all()

    def test_empty_ball_rejected(self):
        g = build_grid(("torus", 2), 64)
        with pytest.raises(ValueError):
            local_components(torus_eigenfunction(2, 4), g, MetricBall((0.1, 0.1), 1e-4))


class TestCrossSections:
    @pytest.mark.parametrize("k", [4, 9, 16])
    def test_strip_width(self, k):
        res = 512
        g = build_grid(("torus", 2), res)
        t = label_components(torus_eigenfunction(2, k), g)
        xs = cross_section_bound(t, axis=1)
        assert np.all(np.abs(xs - 1 / (2 * k)) <= 1.0 / res + 1e-12)

    def test_torus3_area_scaling(self):
        g = build_grid(("torus", 3), 64)
        k = 4
        t = label_components(torus_eigenfunction(3, k), g)
        xs = cross_section_bound(t, axis=2)
        want = 1.0 / (2 * k) ** 2
        assert np.all(np.abs(xs - want) <= 2.0 * (1 / 64) / (2 * k) + 1e-12)

    def test_whole_domain_component(self):
        g = build_grid(("torus", 2), 64)
        t = label_components(np.ones(g.shape), g)
        xs = cross_section_bound(t, axis=0)
        assert xs[0] == pytest.approx(1.0)

    def test_requires_torus(self):
        g = build_grid(("ball", 2), 64)
        t = label_components(harmonic_polynomial_2d([1.0], []), g)
        with pytest.raises(ValueError):
            cross_section_bound(t, axis=0)
