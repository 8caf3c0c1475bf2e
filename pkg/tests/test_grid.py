"""Tests for the spatial torus layer: transforms, norms, pairings."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from torusnls.grid import (
    DimensionError,
    GridSpec,
    ModeRangeError,
    PeriodicField,
    SobolevIndex,
    TWO_PI,
    field_from_modes,
    hs_norm,
    l2_norm,
    lp_norm,
    random_field,
    to_physical,
    to_spectral,
    weak_pairing,
)


class TestGridSpec:
    def test_rejects_odd_and_tiny(self):
        for bad in (3, 7, 2, 0):
            with pytest.raises(ValueError):
                GridSpec(bad)

    def test_mode_index_bijection(self):
        grid = GridSpec(16)
        for k in grid.modes:
            assert grid.modes[grid.index_of(int(k))] == k

    def test_index_out_of_band(self):
        grid = GridSpec(8)
        with pytest.raises(ModeRangeError):
            grid.index_of(4)
        with pytest.raises(ModeRangeError):
            grid.index_of(-5)


class TestTransforms:
    def test_constant_function(self):
        grid = GridSpec(8)
        f = to_spectral(grid, np.full(8, 2.5 - 1j))
        assert f.coeff(0) == pytest.approx(2.5 - 1j)
        others = np.delete(f.coeffs, grid.index_of(0))
        assert np.max(np.abs(others)) < 1e-14

    def test_single_mode(self):
        grid = GridSpec(16)
        f = to_spectral(grid, np.exp(3j * grid.points))
        assert f.coeff(3) == pytest.approx(1.0)
        assert np.sum(np.abs(f.coeffs)) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("n", [8, 16, 64, 128, 512])
    def test_round_trip(self, n):
        grid = GridSpec(n)
        u = random_field(grid, seed=n)
        back = to_spectral(grid, to_physical(u))
        assert np.max(np.abs(back.coeffs - u.coeffs)) <= 1e-12 * np.max(np.abs(u.coeffs))

    def test_to_physical_trivials(self):
        grid = GridSpec(8)
        const = field_from_modes(grid, {0: 3.0})
        assert np.allclose(to_physical(const), 3.0)
        single = field_from_modes(grid, {1: 1.0})
        assert np.allclose(to_physical(single), np.exp(1j * grid.points))

    def test_length_mismatch(self):
        with pytest.raises(DimensionError):
            to_spectral(GridSpec(8), np.zeros(9))

    def test_field_immutable(self):
        u = random_field(GridSpec(8), 0)
        with pytest.raises(AttributeError):
            u.coeffs = None
        with pytest.raises(ValueError):
            u.coeffs[0] = 1.0


class TestL2Norm:
    def test_constant_one(self):
        grid = GridSpec(8)
        assert l2_norm(field_from_modes(grid, {0: 1.0})) == pytest.approx(np.sqrt(TWO_PI))

    def test_two_mode_mass(self):
        # ||beta1 + beta2 e^{inx}||^2 = 2*pi*(|beta1|^2 + |beta2|^2)
        grid = GridSpec(32)
        b1, b2 = 0.7 - 0.2j, 1.3 + 0.4j
        u = field_from_modes(grid, {0: b1, 5: b2})
        expected = np.sqrt(TWO_PI * (abs(b1) ** 2 + abs(b2) ** 2))
        assert l2_norm(u) == pytest.approx(expected, rel=1e-14)

    def test_against_quadrature(self):
        grid = GridSpec(64)
        u = random_field(grid, 3)
        vals = to_physical(u)
        quad = np.sqrt(TWO_PI / 64 * np.sum(np.abs(vals) ** 2))
        assert l2_norm(u) == pytest.approx(quad, rel=1e-10)


class TestHsNorm:
    def test_constant_any_s(self):
        grid = GridSpec(8)
        u = field_from_modes(grid, {0: -2.0 + 1j})
        for s in (-1.0, -0.5, 0.0, 2.0):
            assert hs_norm(u, s) == pytest.approx(abs(-2.0 + 1j))

    def test_single_mode_minus_half(self):
        grid = GridSpec(32)
        n = 5
        u = field_from_modes(grid, {n: 1.0})
        assert hs_norm(u, -0.5) == pytest.approx((1 + n ** 2) ** -0.25)

    def test_two_mode_difference_decays(self):
        grid = GridSpec(256)
        b1, b2 = 1.0, 0.8
        u0 = field_from_modes(grid, {0: b1})
        prev = np.inf
        for n in (8, 16, 32, 64):
            u0n = field_from_modes(grid, {0: b1, n: b2})
            d = hs_norm(u0n - u0, SobolevIndex(-0.5))
            assert d == pytest.approx(abs(b2) * (1 + n ** 2) ** -0.25, rel=1e-13)
            assert d < prev
            prev = d

    def test_s_zero_matches_l2_convention(self):
        u = random_field(GridSpec(64), 9)
        assert hs_norm(u, 0.0) == pytest.approx(l2_norm(u) / np.sqrt(TWO_PI), rel=1e-12)


class TestWeakPairing:
    def test_trivials(self):
        grid = GridSpec(64)
        b1, b2, n = 0.4 + 0.1j, -1.2j, 9
        u = field_from_modes(grid, {0: b1, n: b2})
        assert weak_pairing(u, 0) == pytest.approx(TWO_PI * b1)
        assert weak_pairing(u, n) == pytest.approx(TWO_PI * b2)
        assert weak_pairing(u, 1) == pytest.approx(0.0)

    def test_linearity(self):
        grid = GridSpec(32)
        u, v = random_field(grid, 1), random_field(grid, 2)
        a, b = 1.5 - 0.5j, -2.0 + 1j
        combo = a * u + b * v
        for j in (-3, 0, 7):
            assert weak_pairing(combo, j) == pytest.approx(
                a * weak_pairing(u, j) + b * weak_pairing(v, j))

    def test_out_of_band(self):
        with pytest.raises(ModeRangeError):
            weak_pairing(random_field(GridSpec(16), 0), 8)


class TestLpNorm:
    def test_constant_p4(self):
        u = field_from_modes(GridSpec(8), {0: 1.0})
        assert lp_norm(u, 4) == pytest.approx(TWO_PI ** 0.25)

    def test_unimodular_mode_p4(self):
        u = field_from_modes(GridSpec(32), {5: 1.0})
        assert lp_norm(u, 4) == pytest.approx(TWO_PI ** 0.25)

    def test_refined_grid_oracle(self):
        # quarter-band field: quadrature must agree with a 4x finer grid
        coarse = GridSpec(32)
        fine = GridSpec(128)
        u = random_field(coarse, 17, band=8)
        u_fine = field_from_modes(
            fine, {int(k): u.coeff(int(k)) for k in coarse.modes})
        assert lp_norm(u, 4) == pytest.approx(lp_norm(u_fine, 4), abs=1e-8)

    def test_invalid_p(self):
        with pytest.raises(ValueError):
            lp_norm(random_field(GridSpec(8), 0), 3)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10 ** 6), exp=st.sampled_from([8, 16, 32, 64]))
def test_round_trip_property(seed, exp):
    grid = GridSpec(exp)
    u = random_field(grid, seed)
    back = to_spectral(grid, to_physical(u))
    scale = max(np.max(np.abs(u.coeffs)), 1e-30)
    assert np.max(np.abs(back.coeffs - u.coeffs)) <= 1e-12 * scale
