import numpy as np
import pytest
from numpy.testing import assert_allclose

from polardem.errors import DimensionMismatch, EmptyMask
from polardem.mosaic import ANGLES, MpfaPattern, mosaic_mpfa
from polardem.ri import (
    GuidedFilterParams,
    SparsePlane,
    box_guide,
    demosaick_mpfa_eari,
    demosaick_mpfa_ri,
    demosaick_mpfa_ri_box,
    guided_filter,
    residual_interpolate,
)

from conftest import constant_stack, random_consistent_stack
from oracles import guided_filter_reference


def smooth_image(rng, shape, knots=4, lo=0.2, hi=0.8):
    """Low-frequency random image: bilinear upsampling of a coarse grid."""
    coarse = rng.uniform(lo, hi, (knots, knots))
    ys = np.linspace(0, knots - 1, shape[0])
    xs = np.linspace(0, knots - 1, shape[1])
    rows = np.stack([np.interp(ys, np.arange(knots), coarse[:, j]) for j in range(knots)], axis=1)
    return np.stack([np.interp(xs, np.arange(knots), rows[i]) for i in range(shape[0])], axis=0)


class TestGuidedFilter:
    def test_identity_limit_small_eps(self, rng):
        g = rng.random((16, 16))
        q = guided_filter(g, g, GuidedFilterParams(radius=2, eps=1e-8))
        assert np.abs(q - g).max() <= 1e-4

    def test_constant_input_any_guide(self, rng):
        g = rng.random((12, 12))
        p = np.full((12, 12), 0.37)
        q = guided_filter(p, g, GuidedFilterParams())
        assert_allclose(q, 0.37, atol=1e-12)

    def test_affine_relation_recovered_exactly_with_zero_eps(self, rng):
        g = rng.random((14, 14))
        p = 2.0 * g + 0.3
        q = guided_filter(p, g, GuidedFilterParams(radius=2, eps=0.0))
        assert_allclose(q, p, atol=1e-10)

    @pytest.mark.parametrize("use_mask", [False, True])
    def test_matches_window_statistics_oracle(self, rng, use_mask):
        g = rng.random((12, 11))
        p = rng.random((12, 11))
        mask = None
        if use_mask:
            mask = np.zeros((12, 11), dtype=bool)
            mask[1::2, 0::2] = True
        params = GuidedFilterParams(radius=2, eps=1e-4)
        q = guided_filter(p, g, params, mask=mask)
        ref = guided_filter_reference(p, g, mask, params.radius, params.eps)
        assert_allclose(q, ref, atol=1e-10)

    def test_single_sample_windows(self):
        # 3x3 with one valid sample: every window sees it or nothing
        p = np.zeros((3, 3))
        p[1, 1] = 0.8
        mask = np.zeros((3, 3), dtype=bool)
        mask[1, 1] = True
        q = guided_filter(p, np.random.default_rng(0).random((3, 3)), GuidedFilterParams(radius=1), mask=mask)
        assert_allclose(q, 0.8, atol=1e-12)

    def test_constant_guide_zero_eps_degrades_to_mean(self, rng):
        # var == 0 and eps == 0: the slope guard keeps a = 0 and the fit
        # falls back to the masked window mean
        p = rng.random((8, 8))
        mask = np.zeros((8, 8), dtype=bool)
        mask[0::2, 0::2] = True
        q = guided_filter(p, np.full((8, 8), 0.5), GuidedFilterParams(radius=1, eps=0.0), mask=mask)
        assert np.all(np.isfinite(q))

    def test_empty_mask_rejected(self):
        with pytest.raises(EmptyMask):
            guided_filter(np.ones((4, 4)), np.ones((4, 4)), mask=np.zeros((4, 4), dtype=bool))

    def test_shape_mismatch(self):
        with pytest.raises(DimensionMismatch):
            guided_filter(np.ones((4, 4)), np.ones((4, 5)))

    def test_params_validation(self):
        with pytest.raises(ValueError):
            GuidedFilterParams(radius=0)
        with pytest.raises(ValueError):
            GuidedFilterParams(eps=-1e-3)

    def test_box_sum_stable_at_full_resolution(self, rng):
        # cross-check the sliding-window backend against an integral image
        # at the sensor size the pipeline targets
        from polardem.ri import _box_sum

        arr = rng.random((768, 1024))
        h, w = arr.shape
        ii = np.zeros((h + 1, w + 1))
        np.cumsum(np.cumsum(arr, axis=0), axis=1, out=ii[1:, 1:])
        r = np.arange(h)
        c = np.arange(w)
        r0, r1 = np.clip(r - 2, 0, h), np.clip(r + 3, 0, h)
        c0, c1 = np.clip(c - 2, 0, w), np.clip(c + 3, 0, w)
        expected = (
            ii[np.ix_(r1, c1)] - ii[np.ix_(r0, c1)] - ii[np.ix_(r1, c0)] + ii[np.ix_(r0, c0)]
        )
        assert np.abs(_box_sum(arr, 2) - expected).max() <= 1e-9


class TestResidualInterpolate:
    def stride2_mask(self, shape, r0=0, c0=0):
        mask = np.zeros(shape, dtype=bool)
        mask[r0::2, c0::2] = True
        return mask

    def test_constant_samples_any_guide(self, rng):
        shape = (12, 12)
        sparse = SparsePlane(np.full(shape, 0.6), self.stride2_mask(shape))
        out = residual_interpolate(sparse, rng.random(shape))
        assert_allclose(out, 0.6, atol=1e-12)

    def test_self_reconstruction_from_half_samples(self, rng):
        # Radius 3: at radius 2 a 16x16 stride-2 lattice leaves border
        # windows whose samples are collinear (single row/column), where the
        # regression legitimately degrades toward the window mean.
        shape = (16, 16)
        guide = smooth_image(rng, shape)
        mask = self.stride2_mask(shape, 1, 0)
        out = residual_interpolate(
            SparsePlane(guide, mask), guide, GuidedFilterParams(radius=3, eps=1e-8)
        )
        assert np.abs(out - guide).max() <= 1e-3

    def test_unmasked_values_are_ignored(self, rng):
        shape = (12, 12)
        mask = self.stride2_mask(shape, 1, 0)
        values = rng.random(shape)
        poisoned = values.copy()
        poisoned[~mask] = 7500.0
        guide = rng.random(shape)
        params = GuidedFilterParams()
        a = residual_interpolate(SparsePlane(values, mask), guide, params)
        b = residual_interpolate(SparsePlane(poisoned, mask), guide, params)
        assert_allclose(a, b, atol=1e-12)

    def test_samples_reproduced_exactly(self, rng):
        shape = (15, 13)
        values = rng.random(shape)
        mask = self.stride2_mask(shape, 1, 1)
        out = residual_interpolate(SparsePlane(values, mask), rng.random(shape))
        assert np.abs(out[mask] - values[mask]).max() <= 1e-12

    def test_empty_mask(self):
        sparse = SparsePlane(np.ones((4, 4)), np.zeros((4, 4), dtype=bool))
        with pytest.raises(EmptyMask):
            residual_interpolate(sparse, np.ones((4, 4)))


class TestDemosaick:
    def test_constant_stack_reproduced(self):
        raw = mosaic_mpfa(constant_stack((16, 16), 0.9))
        out = demosaick_mpfa_eari(raw)
        for angle in ANGLES:
            assert_allclose(out.plane(angle), 0.45, atol=1e-9)

    def test_sample_fidelity_all_methods(self, rng):
        stack = random_consistent_stack(rng, (32, 32))
        pat = MpfaPattern()
        raw = mosaic_mpfa(stack, pat)
        for demosaick in (demosaick_mpfa_eari, demosaick_mpfa_ri_box):
            out = demosaick(raw, pat)
            for angle in ANGLES:
                mask = pat.angle_mask(angle, raw.shape)
                assert np.abs(out.plane(angle)[mask] - raw[mask]).max() <= 1e-12

    def test_overshoot_bounded_on_natural_inputs(self):
        # piecewise-smooth scenes with edges and texture; true values in [0,1]
        from polardem.bench import synth_scene

        for i, kind in enumerate(("step", "disk", "sinusoid", "ramp")):
            scene = synth_scene(kind, 32, 32, seed=50 + i, shading=0.3)
            out = demosaick_mpfa_eari(mosaic_mpfa(scene))
            for angle in ANGLES:
                plane = out.plane(angle)
                assert plane.min() >= -0.5 and plane.max() <= 1.5

    def test_degenerate_constant_guide_terminates(self):
        raw = mosaic_mpfa(constant_stack((10, 10), 0.5))
        out = demosaick_mpfa_ri(raw, MpfaPattern(), np.full((10, 10), 0.25))
        for angle in ANGLES:
            assert np.all(np.isfinite(out.plane(angle)))

    def test_box_guide_is_plain_average(self, rng):
        raw = rng.random((8, 8))
        g = box_guide(raw)
        assert g[4, 4] == pytest.approx(raw[3:6, 3:6].mean(), abs=1e-12)

    def test_edge_rich_scene_eari_beats_box_guide(self, rng):
        # polarization-edge scene: the edge-aware guide must not lose
        from polardem.bench import synth_scene
        from polardem.polar import stack_metrics

        scene = synth_scene(
            "step", 64, 64, seed=9, shading=0.4, shade_cycles=(8.0, 14.0),
            dop_min=0.03, dop_max=0.15,
        )
        raw = mosaic_mpfa(scene)
        eari_psnr = stack_metrics(scene, demosaick_mpfa_eari(raw))["psnr_i0"]
        box_psnr = stack_metrics(scene, demosaick_mpfa_ri_box(raw))["psnr_i0"]
        assert eari_psnr > box_psnr
