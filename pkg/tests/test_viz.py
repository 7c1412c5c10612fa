import numpy as np
import pytest
from numpy.testing import assert_allclose

from polardem.polar import StokesMaps
from polardem.viz import aop_dop_legend, render_aop_dop, render_aop_dop_planes


class TestRendering:
    def test_zero_dop_is_grayscale(self, rng):
        aop = rng.uniform(-90, 90, (6, 6))
        r, g, b = render_aop_dop_planes(aop, np.zeros((6, 6)))
        assert_allclose(r, g)
        assert_allclose(g, b)

    def test_zero_aop_full_dop_is_red(self):
        r, g, b = render_aop_dop_planes(np.zeros((3, 3)), np.ones((3, 3)))
        assert_allclose(r, 1.0)
        assert_allclose(g, 0.0)
        assert_allclose(b, 0.0)

    def test_wrap_continuity_at_range_ends(self):
        delta = 1e-6
        lo = render_aop_dop_planes(np.full((1, 1), -90.0 + delta), np.ones((1, 1)))
        hi = render_aop_dop_planes(np.full((1, 1), 90.0), np.ones((1, 1)))
        for a, b in zip(lo, hi):
            assert abs(a[0, 0] - b[0, 0]) < 1e-4

    def test_hue_periodicity_mod_180(self, rng):
        aop = rng.uniform(-90, 90, (4, 4))
        d = rng.uniform(0, 1, (4, 4))
        base = render_aop_dop_planes(aop, d)
        wrapped = render_aop_dop_planes(aop + 180.0, d)
        for a, b in zip(base, wrapped):
            assert_allclose(a, b, atol=1e-12)

    def test_saturation_monotone_in_dop(self):
        aop = np.full((1, 1), 30.0)
        prev_spread = -1.0
        for d in (0.0, 0.3, 0.6, 1.0):
            r, g, b = render_aop_dop_planes(aop, np.full((1, 1), d))
            spread = max(r[0, 0], g[0, 0], b[0, 0]) - min(r[0, 0], g[0, 0], b[0, 0])
            assert spread > prev_spread or (d == 0.0 and spread == 0.0)
            prev_spread = spread

    def test_output_in_unit_range(self, rng):
        aop = rng.uniform(-90, 90, (5, 5))
        d = rng.uniform(0, 2, (5, 5))  # clamped internally
        for plane in render_aop_dop_planes(aop, d):
            assert plane.min() >= 0.0 and plane.max() <= 1.0


class TestStokesModes:
    def make_stokes(self):
        s0 = np.full((4, 4), 1.0)
        s1 = np.full((4, 4), 0.5)
        s2 = np.zeros((4, 4))
        return StokesMaps(s0, s1, s2)

    def test_flat_mode_value_one(self):
        r, g, b = render_aop_dop(self.make_stokes(), mode="flat")
        assert np.maximum.reduce([r, g, b]).max() == pytest.approx(1.0)

    def test_intensity_mode_scales_value(self):
        s = self.make_stokes()
        r1, g1, b1 = render_aop_dop(s, mode="flat")
        r2, g2, b2 = render_aop_dop(s, mode="intensity")
        assert_allclose(r2, r1 * 0.5, atol=1e-12)

    def test_bad_mode(self):
        with pytest.raises(ValueError):
            render_aop_dop(self.make_stokes(), mode="neon")


class TestLegend:
    def test_legend_shape_and_range(self):
        r, g, b = aop_dop_legend(90, 16)
        assert r.shape == (16, 90)
        for plane in (r, g, b):
            assert plane.min() >= 0.0 and plane.max() <= 1.0

    def test_legend_bottom_row_unsaturated(self):
        r, g, b = aop_dop_legend(36, 8)
        assert_allclose(r[-1], g[-1], atol=1e-12)
        assert_allclose(g[-1], b[-1], atol=1e-12)
