"""Cross-cutting stress cases: odd sizes, tiny images, non-default patterns."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from polardem.errors import EmptyMask
from polardem.methods import MPFA_METHODS, demosaick_mpfa
from polardem.mosaic import ANGLES, MpfaPattern, mosaic_mpfa
from polardem.ri import demosaick_mpfa_eari

from conftest import constant_stack, random_consistent_stack

ALL_LAYOUTS = [
    ((90, 45), (135, 0)),
    ((45, 90), (0, 135)),
    ((135, 0), (90, 45)),
    ((0, 135), (45, 90)),
]


@pytest.mark.parametrize("layout", ALL_LAYOUTS)
@pytest.mark.parametrize("method", MPFA_METHODS)
def test_sample_fidelity_for_shifted_patterns(rng, layout, method):
    pat = MpfaPattern(layout)
    stack = random_consistent_stack(rng, (12, 12))
    raw = mosaic_mpfa(stack, pat)
    out = demosaick_mpfa(raw, pat, method)
    for a in ANGLES:
        mask = pat.angle_mask(a, raw.shape)
        assert np.abs(out.plane(a)[mask] - raw[mask]).max() <= 1e-12


@pytest.mark.parametrize("layout", ALL_LAYOUTS)
def test_constant_exact_for_shifted_patterns(layout):
    pat = MpfaPattern(layout)
    raw = mosaic_mpfa(constant_stack((10, 10), 0.8), pat)
    out = demosaick_mpfa_eari(raw, pat)
    for a in ANGLES:
        assert_allclose(out.plane(a), 0.4, atol=1e-9)


@pytest.mark.parametrize("shape", [(7, 9), (9, 7), (5, 5)])
@pytest.mark.parametrize("method", MPFA_METHODS)
def test_odd_dimensions(rng, shape, method):
    stack = random_consistent_stack(rng, shape)
    pat = MpfaPattern()
    raw = mosaic_mpfa(stack, pat)
    out = demosaick_mpfa(raw, pat, method)
    for a in ANGLES:
        plane = out.plane(a)
        assert plane.shape == shape
        assert np.all(np.isfinite(plane))
        mask = pat.angle_mask(a, shape)
        assert np.abs(plane[mask] - raw[mask]).max() <= 1e-12


@pytest.mark.parametrize("method", MPFA_METHODS)
def test_2x2_image(method):
    raw = mosaic_mpfa(constant_stack((2, 2), 1.0))
    out = demosaick_mpfa(raw, MpfaPattern(), method)
    for a in ANGLES:
        assert_allclose(out.plane(a), 0.5, atol=1e-9)


def test_1x1_image_has_no_samples_for_three_angles():
    raw = np.array([[0.5]])
    with pytest.raises(EmptyMask):
        demosaick_mpfa_eari(raw, MpfaPattern())
