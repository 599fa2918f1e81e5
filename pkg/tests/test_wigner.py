import cmath
import math

import numpy as np
import pytest

from subplanck.oracle import cat_fock, wigner_fock
from subplanck.states import CatStateSpec, ComplexAmplitude, Convention
from subplanck.wigner import (
    CoverageWarning,
    GridGeometry,
    InsufficientResolution,
    WignerGrid,
    central_tile_spacing,
    cross_wigner,
    quadrature_norm,
    sign_changes,
    wigner_cat,
    wigner_values,
)

TRUE = Convention.TRUE_NORMALIZED

# tile measurements look only at the central window
pytestmark = pytest.mark.filterwarnings("ignore::subplanck.wigner.CoverageWarning")


def compass(alpha_mag):
    # rotated by pi/4 so that no component sits on the axes through the origin
    return CatStateSpec(4, ComplexAmplitude.from_polar(alpha_mag, math.pi / 4), convention=TRUE)


def test_vacuum_peak():
    assert wigner_values(CatStateSpec(1, 0), 0j) == pytest.approx(2 / math.pi, abs=1e-15)


def test_vacuum_profile():
    beta = np.array([0.3, 0.5j, -0.4 + 0.2j])
    expected = (2 / math.pi) * np.exp(-2 * np.abs(beta) ** 2)
    assert np.allclose(wigner_values(CatStateSpec(1, 0), beta), expected, atol=1e-15, rtol=0)


def test_coherent_state_is_displaced_vacuum():
    beta = np.array([2.0, 2.3 - 0.1j, 1.5 + 0.4j])
    got = wigner_values(CatStateSpec(1, 2.0), beta)
    expected = wigner_values(CatStateSpec(1, 0), beta - 2.0)
    assert np.allclose(got, expected, atol=1e-15, rtol=0)


def test_cross_wigner_diagonal_is_real_gaussian():
    values = cross_wigner(np.array([0.1 + 0.2j, -1.0]), 0.5j, 0.5j)
    assert np.all(values.imag == 0)


def test_matches_fock_wigner():
    spec = CatStateSpec(4, 3.0, convention=TRUE)
    vector = cat_fock(spec, 128)
    probes = np.linspace(-2, 2, 11)
    worst = 0.0
    for x in probes:
        for p in probes:
            beta = complex(x, p)
            worst = max(worst, abs(wigner_values(spec, beta) - wigner_fock(vector, beta)))
    assert worst < 1e-6


def test_realness():
    spec = CatStateSpec(5, ComplexAmplitude.from_polar(2.5, 0.3), coeffs=(1, 1j, -1, cmath.exp(0.4j), 1))
    geometry = GridGeometry.square(4.0, 41)
    beta = geometry.x[:, None] + 1j * geometry.p[None, :]
    raw = wigner_values(spec, beta, paired=False)
    assert np.max(np.abs(raw.imag)) < 1e-12
    assert np.allclose(raw.real, wigner_values(spec, beta), atol=1e-13, rtol=0)


def test_rotation_covariance(rng):
    phi = 0.37
    spec = CatStateSpec(3, 2.2 + 0.4j, convention=TRUE)
    rotated = spec.rotated(phi)
    beta = rng.uniform(-3, 3, 50) + 1j * rng.uniform(-3, 3, 50)
    assert np.max(np.abs(wigner_values(rotated, beta * cmath.exp(1j * phi)) - wigner_values(spec, beta))) < 1e-9


class TestNorm:
    def test_vacuum(self):
        grid = wigner_cat(CatStateSpec(1, 0), GridGeometry.square(6.0, 241))
        assert quadrature_norm(grid) == pytest.approx(1.0, abs=1e-6)

    def test_compass(self):
        grid = wigner_cat(CatStateSpec(4, 3.0, convention=TRUE), GridGeometry.square(8.0, 321))
        assert quadrature_norm(grid) == pytest.approx(1.0, abs=1e-3)

    def test_bare_prefactor_integrates_to_norm_squared(self):
        spec = CatStateSpec(2, 1.0)
        grid = wigner_cat(spec, GridGeometry.square(6.0, 241))
        assert grid.expected_norm == pytest.approx(1 + math.exp(-2), abs=1e-15)
        assert quadrature_norm(grid) == pytest.approx(grid.expected_norm, abs=1e-6)

    def test_coverage_warning(self):
        with pytest.warns(CoverageWarning):
            grid = wigner_cat(CatStateSpec(4, 6.0, convention=TRUE), GridGeometry.square(1.0, 81))
        assert not grid.covered
        assert abs(quadrature_norm(grid)) < 0.1


class TestGeometry:
    @pytest.mark.parametrize("nx,np_", [(0, 10), (10, 1), (2.5, 10)])
    def test_rejects_bad_counts(self, nx, np_):
        with pytest.raises(ValueError):
            GridGeometry(-1, 1, -1, 1, nx, np_)

    def test_rejects_empty_range(self):
        with pytest.raises(ValueError):
            GridGeometry(1, 1, -1, 1, 10, 10)

    def test_grid_shape_checked(self):
        with pytest.raises(ValueError):
            WignerGrid(np.zeros(3), np.zeros(4), np.zeros((4, 3)))


class TestTileSpacing:
    def test_compass_scales_inversely_with_amplitude(self):
        fine = GridGeometry.square(1.2, 321)
        s3 = central_tile_spacing(wigner_cat(compass(3.0), fine))
        s6 = central_tile_spacing(wigner_cat(compass(6.0), fine))
        assert s3 / s6 == pytest.approx(2.0, rel=0.05)

    def test_compass_axes_agree(self):
        grid = wigner_cat(compass(4.0), GridGeometry.square(1.2, 321))
        assert central_tile_spacing(grid, "x") == pytest.approx(central_tile_spacing(grid, "p"), rel=1e-9)

    def test_pair_fringes_across_the_separation(self):
        grid = wigner_cat(CatStateSpec(2, 5.0, convention=TRUE), GridGeometry.square(1.2, 321))
        assert central_tile_spacing(grid, "p") == pytest.approx(math.pi / 20, rel=0.02)

    @pytest.mark.xfail(strict=True, reason="consecutive sign changes are half a fringe period apart")
    def test_pair_spacing_is_full_period(self):
        grid = wigner_cat(CatStateSpec(2, 5.0, convention=TRUE), GridGeometry.square(1.2, 321))
        assert central_tile_spacing(grid, "p") == pytest.approx(math.pi / 10, rel=0.1)

    @pytest.mark.parametrize("alpha", [3.0, 6.0])
    def test_axis_aligned_compass_not_measurable(self, alpha):
        grid = wigner_cat(CatStateSpec(4, alpha, convention=TRUE), GridGeometry.square(1.2, 321))
        with pytest.raises(InsufficientResolution):
            central_tile_spacing(grid)

    def test_vacuum_has_no_tiles(self):
        grid = wigner_cat(CatStateSpec(1, 0), GridGeometry.square(1.2, 101))
        with pytest.raises(InsufficientResolution):
            central_tile_spacing(grid)

    def test_undersampled(self):
        grid = wigner_cat(CatStateSpec(2, 5.0, convention=TRUE), GridGeometry.square(1.2, 41))
        with pytest.raises(InsufficientResolution):
            central_tile_spacing(grid, "p")

    def test_bad_axis(self):
        grid = wigner_cat(CatStateSpec(1, 0), GridGeometry.square(1.0, 11))
        with pytest.raises(ValueError):
            central_tile_spacing(grid, "q")


def test_sign_changes_ignore_touching():
    xs = np.linspace(-1, 1, 201)
    assert len(sign_changes(xs, xs**2 + 1e-9)) == 0
    assert sign_changes(xs, xs - 0.25) == pytest.approx([0.25], abs=1e-12)


class TestExport:
    def grid(self):
        return wigner_cat(CatStateSpec(1, 0), GridGeometry(-1, 1, -0.5, 0.5, 3, 2))

    def test_csv(self):
        lines = self.grid().to_csv().splitlines()
        assert lines[0].startswith("# n=1")
        assert lines[1] == "x,p,W"
        assert len(lines) == 2 + 6
        x, p, w = map(float, lines[2].split(","))
        assert (x, p) == (-1.0, -0.5)
        assert w == pytest.approx((2 / math.pi) * math.exp(-2.5), abs=1e-16)

    def test_matrix_round_trip(self):
        grid = self.grid()
        back = np.loadtxt(grid.to_matrix_text().splitlines())
        assert np.array_equal(back, grid.values)
