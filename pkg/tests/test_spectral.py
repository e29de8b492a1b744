"""Tests for the periodic-box spectral core"""

import numpy as np
import pytest

from spectral.errors import ArtifactError, NonFiniteMultiplier, ValidationFailure
from spectral.fields import SpectralScalarField, SpectralVectorField
from spectral.grid import Grid
from spectral.operators import (
    advect,
    apply_multiplier,
    cross,
    curl,
    dealias,
    divergence,
    fractional_derivative,
    gradient,
    gradient_sup,
    laplacian,
    lp_norm,
    multiply,
    to_physical,
    to_spectral,
)
from spectral.snapshot import read_snapshot, write_snapshot
from rotation.projections import helical_mode


# ==================== Grid ====================

class TestGrid:
    def test_rejects_non_power_of_two(self):
        with pytest.raises(ValidationFailure, match="power of two"):
            Grid(12)

    def test_rejects_tiny_grid(self):
        with pytest.raises(ValidationFailure, match="n >= 4"):
            Grid(2)

    def test_fft_ordering_and_nyquist_row(self):
        grid = Grid(8)
        assert list(grid.wavenumbers) == [0, 1, 2, 3, -4, -3, -2, -1]
        assert grid.nyquist_row.sum() == 1
        assert grid.nyquist_row[4]

    def test_physical_frequencies_scale_with_box(self):
        grid = Grid(8, box_size=4.0 * np.pi)
        assert grid.frequencies[1] == pytest.approx(0.5)

    def test_dealias_mask_keeps_a_third(self):
        grid = Grid(32)
        assert grid.dealias_cutoff == 10
        assert grid.dealias_mask[10, 0, 0]
        assert not grid.dealias_mask[11, 0, 0]


# ==================== Transforms ====================

class TestTransforms:
    def test_constant_is_dc_mode(self, grid16):
        f = to_spectral(np.ones(grid16.shape), grid16)
        assert f.coeffs[0, 0, 0] == pytest.approx(1.0)
        rest = np.array(f.coeffs)
        rest[0, 0, 0] = 0.0
        assert np.abs(rest).max() < 1e-15

    def test_single_cosine_mode(self, grid16):
        x = grid16.mesh()[0]
        f = to_spectral(np.cos(x), grid16)
        assert f.coeffs[1, 0, 0] == pytest.approx(0.5)
        assert f.coeffs[15, 0, 0] == pytest.approx(0.5)
        rest = np.array(f.coeffs)
        rest[1, 0, 0] = rest[15, 0, 0] = 0.0
        assert np.abs(rest).max() < 1e-15

    def test_round_trip(self, grid16, rng):
        values = rng.standard_normal(grid16.shape)
        back = to_physical(to_spectral(values, grid16))
        assert np.abs(back - values).max() <= 1e-12 * np.abs(values).max()

    def test_parseval(self, grid16, rng):
        values = rng.standard_normal(grid16.shape)
        f = to_spectral(values, grid16)
        direct = np.sqrt(np.sum(values ** 2) * grid16.cell_volume)
        assert lp_norm(f, 2) == pytest.approx(direct, rel=1e-12)

    def test_shape_mismatch_rejected(self, grid16):
        with pytest.raises(ValidationFailure, match="does not match"):
            to_spectral(np.zeros((8, 8, 8)), grid16)

    def test_real_samples_give_hermitian_coefficients(self, grid16, rng):
        f = to_spectral(rng.standard_normal(grid16.shape), grid16)
        assert f.is_hermitian()

    def test_vector_samples_make_vector_field(self, grid16, rng):
        v = to_spectral(rng.standard_normal((3,) + grid16.shape), grid16)
        assert isinstance(v, SpectralVectorField)
        assert len(v.components) == 3


# ==================== Multipliers and derivatives ====================

class TestMultipliers:
    def test_constant_symbol_scales(self, grid16, rng):
        f = to_spectral(rng.standard_normal(grid16.shape), grid16)
        doubled = apply_multiplier(f, 2.0)
        assert np.allclose(doubled.coeffs, 2.0 * f.coeffs)

    def test_unit_symbol_is_identity_on_the_mean(self, grid16):
        f = to_spectral(3.0 * np.ones(grid16.shape), grid16)
        same = apply_multiplier(f, 1.0)
        assert same.coeffs[0, 0, 0] == pytest.approx(3.0)
        assert np.array_equal(apply_multiplier(f, lambda x1, x2, x3: np.ones_like(x1)).coeffs, same.coeffs)

    def test_value_at_origin(self, grid16, rng):
        f = to_spectral(1.0 + rng.standard_normal(grid16.shape), grid16)
        riesz = apply_multiplier(f, lambda x1, x2, x3: x1 / np.sqrt(x1 ** 2 + x2 ** 2 + x3 ** 2))
        assert riesz.coeffs[0, 0, 0] == 0.0
        shifted = apply_multiplier(f, 1.0, at_zero=0.0)
        assert shifted.coeffs[0, 0, 0] == 0.0
        assert np.array_equal(shifted.coeffs[1:], f.coeffs[1:])

    def test_non_finite_symbol_reports_frequency(self, grid16):
        f = SpectralScalarField.zeros(grid16)
        with pytest.raises(NonFiniteMultiplier) as info:
            apply_multiplier(f, lambda x1, x2, x3: 1.0 / x1)
        assert info.value.xi[0] == 0.0

    def test_gradient_of_sine(self, grid16):
        x = grid16.mesh()[0]
        g = gradient(to_spectral(np.sin(x), grid16)).to_physical()
        assert np.abs(g[0] - np.cos(x)).max() < 1e-12
        assert np.abs(g[1]).max() < 1e-12

    def test_laplacian_and_fractional_derivative(self, grid16):
        x = grid16.mesh()[0]
        f = to_spectral(np.sin(2.0 * x), grid16)
        assert np.abs(laplacian(f).to_physical() + 4.0 * np.sin(2.0 * x)).max() < 1e-11
        assert np.allclose(fractional_derivative(f, 2.0).coeffs, -laplacian(f).coeffs)

    def test_taylor_green_is_divergence_free(self, tg16):
        assert np.abs(divergence(tg16).coeffs).max() < 1e-14

    def test_curl_of_helical_mode(self, grid16):
        u = helical_mode(grid16, (1, 0, 1), sign=1)
        w = curl(u)
        assert np.abs(w.coeffs - np.sqrt(2.0) * u.coeffs).max() < 1e-12

    def test_divergence_of_curl_vanishes(self, grid16, rng):
        v = to_spectral(rng.standard_normal((3,) + grid16.shape), grid16)
        assert np.abs(divergence(curl(v)).coeffs).max() < 1e-12
        f = to_spectral(rng.standard_normal(grid16.shape), grid16)
        assert np.abs(curl(gradient(f)).coeffs).max() < 1e-12

    def test_derivatives_commute(self, grid16, rng):
        f = to_spectral(rng.standard_normal(grid16.shape), grid16)
        grad = gradient(f).components
        for i in range(3):
            for j in range(3):
                dij = gradient(grad[j]).components[i].coeffs
                dji = gradient(grad[i]).components[j].coeffs
                assert np.allclose(dij, dji, rtol=0.0, atol=1e-12)
        assert np.allclose(divergence(gradient(f)).coeffs, laplacian(f).coeffs, rtol=0.0, atol=1e-12)

    def test_nyquist_convention(self, grid16):
        x = grid16.mesh()[0]
        f = to_spectral(np.cos(8.0 * x), grid16)
        assert f.coeffs[8, 0, 0] == pytest.approx(1.0)
        assert np.abs(to_physical(f) - np.cos(8.0 * x)).max() < 1e-12
        assert np.abs(gradient(f).coeffs).max() < 1e-12
        assert apply_multiplier(f, 2.0).coeffs[8, 0, 0] == pytest.approx(2.0)
        assert np.abs(f.strip_nyquist().coeffs).max() < 1e-12

    def test_gradient_sup_of_taylor_green(self, tg32):
        assert gradient_sup(tg32) == pytest.approx(1.0, rel=1e-12)


# ==================== Dealiasing and products ====================

class TestProducts:
    def test_dealias_is_idempotent(self, grid16, rng):
        f = to_spectral(rng.standard_normal(grid16.shape), grid16)
        once = dealias(f)
        assert np.array_equal(dealias(once).coeffs, once.coeffs)
        assert np.abs(once.coeffs[grid16.dealias_cutoff + 1, 0, 0]) == 0.0

    def test_advect_by_constant_velocity(self, grid16):
        x = grid16.mesh()[0]
        v = SpectralVectorField.from_physical(np.stack([np.ones_like(x), np.zeros_like(x), np.zeros_like(x)]), grid16)
        f = to_spectral(np.sin(x), grid16)
        out = advect(v, f).to_physical()
        assert np.abs(out - np.cos(x)).max() < 1e-12

    def test_cross_is_antisymmetric(self, tg16, random16):
        assert np.allclose(cross(tg16, random16).coeffs, -cross(random16, tg16).coeffs, atol=1e-15)

    def test_multiply_low_modes_exactly(self, grid16):
        x, y, _ = grid16.mesh()
        f = to_spectral(np.sin(x), grid16)
        g = to_spectral(np.cos(y), grid16)
        assert np.abs(multiply(f, g).to_physical() - np.sin(x) * np.cos(y)).max() < 1e-13

    def test_grid_mismatch_rejected(self, grid16, grid32):
        with pytest.raises(ValidationFailure, match="grid mismatch"):
            cross(SpectralVectorField.zeros(grid16), SpectralVectorField.zeros(grid32))


# ==================== Norms ====================

class TestLpNorms:
    def test_constant_field(self, grid16):
        f = to_spectral(2.0 * np.ones(grid16.shape), grid16)
        assert lp_norm(f, np.inf) == pytest.approx(2.0)
        assert lp_norm(f, 1) == pytest.approx(2.0 * grid16.volume)
        assert lp_norm(f, 2) == pytest.approx(2.0 * np.sqrt(grid16.volume))

    def test_vector_uses_pointwise_magnitude(self, grid16):
        u = helical_mode(grid16, (0, 1, 1), sign=-1, amplitude=3.0)
        assert lp_norm(u, np.inf) == pytest.approx(3.0, rel=1e-12)

    def test_unsupported_exponent(self, tg16):
        with pytest.raises(ValidationFailure, match="unsupported"):
            lp_norm(tg16, 3)


# ==================== Snapshots ====================

class TestSnapshots:
    def test_round_trip(self, tmp_path, random16):
        path = write_snapshot(tmp_path / "snap.bin", random16, 0.25)
        field, time = read_snapshot(path)
        assert time == 0.25
        assert field.grid == random16.grid
        assert np.array_equal(field.coeffs, random16.coeffs)

    def test_scalar_round_trip(self, tmp_path, grid16, rng):
        f = to_spectral(rng.standard_normal(grid16.shape), grid16)
        field, _ = read_snapshot(write_snapshot(tmp_path / "f.bin", f, 0.0))
        assert isinstance(field, SpectralScalarField)

    def test_bad_magic(self, tmp_path, random16):
        path = write_snapshot(tmp_path / "snap.bin", random16, 0.0)
        raw = bytearray(path.read_bytes())
        raw[:8] = b"NOTASNAP"
        path.write_bytes(bytes(raw))
        with pytest.raises(ArtifactError, match="bad magic"):
            read_snapshot(path)

    def test_truncated_body(self, tmp_path, random16):
        path = write_snapshot(tmp_path / "snap.bin", random16, 0.0)
        path.write_bytes(path.read_bytes()[:-16])
        with pytest.raises(ArtifactError, match="expected"):
            read_snapshot(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ArtifactError, match="not found"):
            read_snapshot(tmp_path / "nope.bin")
