import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from polardem.errors import DimensionMismatch
from polardem.mosaic import ANGLES, PolarizationStack
from polardem.polar import (
    METRIC_COLUMNS,
    MetricsReport,
    StokesMaps,
    angle_rmse,
    aop_degrees,
    cpsnr,
    dop,
    psnr,
    stack_from_stokes,
    stack_metrics,
    stokes_consistency,
    stokes_from_stack,
    wrap_angle_error,
)

from conftest import random_consistent_stack


def const_stack(i0, i45, i90, i135, shape=(4, 4)):
    return PolarizationStack(*[np.full(shape, v) for v in (i0, i45, i90, i135)])


class TestStokes:
    def test_fully_polarized_horizontal(self):
        s = stokes_from_stack(const_stack(1.0, 0.5, 0.0, 0.5))
        assert_allclose(s.s0, 1.0)
        assert_allclose(s.s1, 1.0)
        assert_allclose(s.s2, 0.0)

    def test_unpolarized_constant(self):
        s = stokes_from_stack(const_stack(0.3, 0.3, 0.3, 0.3))
        assert_allclose(s.s0, 0.6)
        assert_allclose(s.s1, 0.0)
        assert_allclose(s.s2, 0.0)

    def test_round_trip_consistent_stack(self, rng):
        stack = random_consistent_stack(rng, (10, 10))
        back = stack_from_stokes(stokes_from_stack(stack))
        for a in ANGLES:
            assert_allclose(back.plane(a), stack.plane(a), atol=1e-12)

    def test_simulator_output_physically_valid(self):
        # polarized power never exceeds total power on generated scenes;
        # demosaicked data may violate this, which shows up as dop > 1
        from polardem.bench import synth_scene

        for i, kind in enumerate(("step", "disk", "sinusoid")):
            s = stokes_from_stack(synth_scene(kind, 16, 16, seed=i, shading=0.3))
            assert np.all(s.s1**2 + s.s2**2 <= s.s0**2 + 1e-12)
            assert dop(s).max() <= 1.0 + 1e-12

    def test_consistency_diagnostic(self, rng):
        stack = random_consistent_stack(rng, (6, 6))
        assert_allclose(stokes_consistency(stack), 0.0, atol=1e-12)
        bumped = PolarizationStack(stack.i0 + 0.25, stack.i45, stack.i90, stack.i135)
        assert_allclose(stokes_consistency(bumped), 0.25, atol=1e-12)


class TestDopAop:
    def test_fully_polarized_axes(self):
        s = StokesMaps(np.ones((2, 2)), np.ones((2, 2)), np.zeros((2, 2)))
        assert_allclose(dop(s), 1.0)
        assert_allclose(aop_degrees(s), 0.0)
        s = StokesMaps(np.ones((2, 2)), np.zeros((2, 2)), np.ones((2, 2)))
        assert_allclose(dop(s), 1.0)
        assert_allclose(aop_degrees(s), 45.0)

    def test_unpolarized_convention(self):
        s = StokesMaps(np.full((2, 2), 1.4), np.zeros((2, 2)), np.zeros((2, 2)))
        assert_allclose(dop(s), 0.0)
        assert_allclose(aop_degrees(s), 0.0)  # atan2(0, 0) == 0 by convention

    def test_dop_clamped_mode(self):
        s = StokesMaps(np.full((1, 1), 0.1), np.full((1, 1), 0.4), np.zeros((1, 1)))
        assert dop(s)[0, 0] == pytest.approx(4.0)
        assert dop(s, clamp=True)[0, 0] == 1.0

    def test_scale_invariance(self, rng):
        stack = random_consistent_stack(rng, (8, 8))
        s1 = stokes_from_stack(stack)
        s2 = stokes_from_stack(
            PolarizationStack(*[0.5 * stack.plane(a) for a in ANGLES])
        )
        keep = s1.s0 > 1e-3
        assert_allclose(dop(s2)[keep], dop(s1)[keep], rtol=1e-10)
        assert_allclose(aop_degrees(s2)[keep], aop_degrees(s1)[keep], rtol=1e-10)

    @pytest.mark.parametrize("phi_deg", [30.0, 90.0])
    def test_aop_rotation_covariance(self, rng, phi_deg):
        stack = random_consistent_stack(rng, (6, 6))
        s = stokes_from_stack(stack)
        phi = math.radians(2.0 * phi_deg)
        rot = StokesMaps(
            s.s0,
            math.cos(phi) * s.s1 - math.sin(phi) * s.s2,
            math.sin(phi) * s.s1 + math.cos(phi) * s.s2,
        )
        shifted = wrap_angle_error(aop_degrees(rot) - aop_degrees(s))
        expected = wrap_angle_error(np.full(shifted.shape, phi_deg))
        assert_allclose(np.abs(shifted), np.abs(expected), atol=1e-9)


class TestPsnr:
    def test_identical_is_inf(self):
        img = np.random.default_rng(0).random((5, 5))
        assert math.isinf(psnr(img, img))

    def test_uniform_error(self):
        ref = np.zeros((10, 10))
        assert psnr(ref, ref + 0.1) == pytest.approx(20.0, abs=1e-12)

    def test_single_pixel_error(self):
        ref = np.full((10, 10), 0.5)
        test = ref.copy()
        test[0, 0] += 0.5
        # MSE = 0.25/100 -> 10*log10(400) = 26.0206
        assert psnr(ref, test) == pytest.approx(10 * math.log10(400.0), abs=1e-12)

    def test_peak_parameter(self):
        ref = np.zeros((4, 4))
        assert psnr(ref, ref + 0.1, peak=2.0) == pytest.approx(20.0 + 20 * math.log10(2), abs=1e-12)

    def test_cpsnr_pools_channels(self):
        ref = [np.zeros((4, 4))] * 3
        test = [np.zeros((4, 4)), np.zeros((4, 4)), np.full((4, 4), 0.3)]
        mse = 0.09 / 3
        assert cpsnr(ref, test) == pytest.approx(10 * math.log10(1 / mse), abs=1e-12)
        assert math.isinf(cpsnr(ref, ref))

    def test_shape_mismatch(self):
        with pytest.raises(DimensionMismatch):
            psnr(np.ones((3, 3)), np.ones((3, 4)))


class TestAngleRmse:
    def test_identical(self):
        aop = np.random.default_rng(1).uniform(-90, 90, (6, 6))
        assert angle_rmse(aop, aop) == 0.0

    def test_wraparound_pair(self):
        ref = np.full((3, 3), 89.0)
        test = np.full((3, 3), -89.0)
        assert angle_rmse(ref, test) == pytest.approx(2.0, abs=1e-12)

    def test_half_zero_half_ten(self):
        ref = np.zeros((2, 10))
        test = np.zeros((2, 10))
        test[1, :] = 10.0
        assert angle_rmse(ref, test) == pytest.approx(math.sqrt(50.0), abs=1e-12)

    @given(st.floats(-500, 500))
    def test_wrap_range(self, d):
        w = float(wrap_angle_error(np.array([d]))[0])
        assert -90.0 <= w < 90.0
        # difference is a multiple of 180
        assert abs((d - w) % 180.0) < 1e-9 or abs((d - w) % 180.0 - 180.0) < 1e-9


class TestMetricsReport:
    def test_stack_metrics_perfect(self, rng):
        stack = random_consistent_stack(rng, (6, 6))
        row = stack_metrics(stack, stack)
        for col in METRIC_COLUMNS:
            if col == "aop_rmse_deg":
                assert row[col] == 0.0
            else:
                assert math.isinf(row[col])

    def test_means_are_arithmetic(self):
        report = MetricsReport()
        rows = [
            {c: float(i + 1) for c in METRIC_COLUMNS} for i in range(3)
        ]
        for i, r in enumerate(rows):
            report.add_row(f"s{i}", "m", r)
        mean = report.mean_rows()[0]
        for c in METRIC_COLUMNS:
            assert mean[c] == pytest.approx(2.0, abs=1e-12)

    def test_inf_serialized_as_inf(self):
        report = MetricsReport()
        report.add_row("s0", "m", {c: math.inf for c in METRIC_COLUMNS})
        text = report.per_scene_csv()
        assert "inf" in text.splitlines()[1]

    def test_column_order(self):
        report = MetricsReport(header_lines=["# hello"])
        report.add_row("s0", "m", {c: 1.0 for c in METRIC_COLUMNS})
        lines = report.per_scene_csv().splitlines()
        assert lines[0] == "# hello"
        assert lines[1] == "scene,method," + ",".join(METRIC_COLUMNS)
