import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from zonalprop.errors import ConvergenceError, DomainError
from zonalprop.oscillator import ChannelLabel, free_radial_kernel
from zonalprop.zonal import (
    GroupDescriptor,
    KernelOnAngle,
    RadialGrid,
    ZonalSeries,
    continuous_labels,
    discrete_labels,
    geodesic_convolve,
    grid_convolve,
    nfold_power,
    orthogonality_residual,
    series_convolve,
    spectrum_from_slope,
    sphere_area,
    zonal_function,
    zonal_synthesize,
    zonal_transform,
)

CIRCLE = GroupDescriptor("sphere", 2)
S2 = GroupDescriptor("sphere", 3)
E3 = GroupDescriptor("euclidean", 3)


def von_mises(kappa):
    return KernelOnAngle(lambda t: np.exp(kappa * np.cos(t)), S2)


class TestDescriptor:
    def test_sphere_area(self):
        assert sphere_area(1) == pytest.approx(2 * math.pi, rel=1e-15)
        assert sphere_area(2) == pytest.approx(4 * math.pi, rel=1e-15)

    @pytest.mark.parametrize("bad", [("torus", 3, 1.0), ("sphere", 1, 1.0), ("sphere", 2.5, 1.0), ("hyperboloid", 3, 0.0)])
    def test_rejects(self, bad):
        with pytest.raises(DomainError):
            GroupDescriptor(*bad)

    @pytest.mark.parametrize("d", [2, 3, 4, 6])
    def test_sphere_measure_normalized(self, d):
        x, w = np.polynomial.legendre.leggauss(200)
        t = 0.5 * math.pi * (x + 1)
        desc = GroupDescriptor("sphere", d)
        assert np.dot(desc.weight(t), 0.5 * math.pi * w) == pytest.approx(1.0, rel=1e-12)

    def test_sphere_plancherel(self):
        # harmonic dimensions on S^2 are 2l+1, on S^3 (l+1)^2
        l = np.arange(6)
        np.testing.assert_allclose(S2.plancherel(l), 2 * l + 1)
        np.testing.assert_allclose(GroupDescriptor("sphere", 4).plancherel(l), (l + 1) ** 2)
        np.testing.assert_allclose(CIRCLE.plancherel(l), [1, 2, 2, 2, 2, 2])

    def test_hyperboloid_plancherel_d3(self):
        rho = np.array([0.3, 1.0, 2.5])
        np.testing.assert_allclose(GroupDescriptor("hyperboloid", 3).plancherel(rho), rho**2, rtol=1e-12)


class TestKernelOnAngle:
    def test_noncompact_needs_cutoff(self):
        with pytest.raises(DomainError):
            KernelOnAngle(np.exp, GroupDescriptor("hyperboloid", 3))

    def test_sphere_cutoff_clipped(self):
        assert KernelOnAngle(np.cos, S2, 10.0).theta_max == math.pi


class TestZonalFunctions:
    def test_circle_is_cosine(self):
        t = np.linspace(0, math.pi, 7)
        np.testing.assert_allclose(zonal_function(CIRCLE, 3, t), np.cos(3 * t), atol=1e-14)

    def test_euclidean_d3_is_sinc(self):
        r = np.array([0.0, 0.5, 2.0])
        np.testing.assert_allclose(zonal_function(E3, 1.5, r), np.sinc(1.5 * r / math.pi), atol=1e-15)

    @pytest.mark.parametrize("d", [2, 3, 4, 5])
    def test_orthogonality(self, d):
        desc = GroupDescriptor("sphere", d)
        worst = max(orthogonality_residual(l, lp, desc) for l in range(9) for lp in range(9))
        assert worst < 1e-12

    def test_orthogonality_needs_discrete(self):
        with pytest.raises(DomainError):
            orthogonality_residual(0, 1, E3)


class TestTransform:
    def test_circle_coefficients_are_bessel(self):
        # (1/pi) int_0^pi e^{cos t} cos(l t) dt = I_l(1)
        s = zonal_transform(KernelOnAngle(lambda t: np.exp(np.cos(t)), CIRCLE), discrete_labels(10))
        np.testing.assert_allclose(s.coeffs, special.iv(np.arange(11), 1.0), atol=1e-14)

    def test_sphere_coefficients_are_spherical_bessel(self):
        # (1/2) int e^{k x} P_l(x) dx = sqrt(pi / 2k) I_{l+1/2}(k)
        l = np.arange(11)
        s = zonal_transform(von_mises(2.0), l.astype(float))
        np.testing.assert_allclose(s.coeffs, math.sqrt(math.pi / 4) * special.iv(l + 0.5, 2.0), atol=1e-13)

    def test_euclidean_gaussian(self):
        k = np.linspace(0.1, 4.0, 8)
        s = zonal_transform(KernelOnAngle(lambda r: np.exp(-0.5 * r * r), E3, 12.0), k)
        np.testing.assert_allclose(s.coeffs, (2 * math.pi) ** 1.5 * np.exp(-0.5 * k * k), atol=1e-12)

    def test_euclidean_roundtrip(self):
        labels, w = continuous_labels(12.0, 80)
        s = zonal_transform(KernelOnAngle(lambda r: np.exp(-0.5 * r * r), E3, 12.0), labels, weights=w)
        r = np.array([0.0, 0.5, 1.5])
        np.testing.assert_allclose(zonal_synthesize(s, r).value, np.exp(-0.5 * r * r), atol=1e-12)

    def test_sphere_roundtrip_and_tail(self):
        s = zonal_transform(von_mises(2.0), discrete_labels(30))
        syn = zonal_synthesize(s, 0.7)
        assert syn.value == pytest.approx(math.exp(2.0 * math.cos(0.7)), abs=1e-12)
        # the last term sits at the coefficient noise floor
        assert 0 < syn.error < 1e-10

    def test_unconverged_raises_with_estimate(self):
        rough = KernelOnAngle(lambda t: np.abs(t - 1.0), S2)
        with pytest.raises(ConvergenceError) as info:
            zonal_transform(rough, discrete_labels(4), max_nodes=128)
        assert info.value.estimate > 0

    def test_non_euclidean_kernel_gives_complex(self):
        k = KernelOnAngle(lambda t: np.exp(np.cos(t)), S2, euclidean=False)
        assert np.iscomplexobj(zonal_transform(k, discrete_labels(3)).coeffs)


class TestSeriesAlgebra:
    def test_validation(self):
        with pytest.raises(DomainError):
            ZonalSeries([0.0, 0.0], [1.0, 3.0], [1.0, 1.0], S2)
        with pytest.raises(DomainError):
            ZonalSeries([0.0, 1.0], [1.0, -3.0], [1.0, 1.0], S2)
        with pytest.raises(DomainError):
            ZonalSeries([0.0, 1.0], [1.0, 3.0], [1.0, np.nan], S2)

    def test_convolve_mismatch(self):
        a = zonal_transform(von_mises(1.0), discrete_labels(5))
        b = zonal_transform(von_mises(1.0), discrete_labels(6))
        with pytest.raises(DomainError):
            series_convolve(a, b)

    @settings(max_examples=20, deadline=None)
    @given(st.integers(1, 6))
    def test_power_matches_repeated_convolution(self, N):
        s = zonal_transform(von_mises(1.0), discrete_labels(8))
        rep = s
        for _ in range(N - 1):
            rep = series_convolve(rep, s)
        np.testing.assert_allclose(nfold_power(s, N).coeffs, rep.coeffs, rtol=1e-13)

    def test_power_rejects_nonpositive(self):
        s = ZonalSeries([0.0, 1.0], [1.0, 3.0], [1.0, -0.5], S2)
        with pytest.raises(DomainError):
            nfold_power(s, 2)
        with pytest.raises(DomainError):
            nfold_power(s, 0)

    def test_convolution_theorem_sphere(self):
        k1, k2 = von_mises(1.5), von_mises(0.5)
        conv = KernelOnAngle(lambda th: np.array([geodesic_convolve(k1, k2, x) for x in np.ravel(th)]), S2)
        labels = discrete_labels(10)
        lhs = zonal_transform(conv, labels).coeffs
        rhs = series_convolve(zonal_transform(k1, labels), zonal_transform(k2, labels)).coeffs
        np.testing.assert_allclose(lhs, rhs, atol=1e-12)


class TestSpectrumFromSlope:
    @settings(max_examples=30, deadline=None)
    @given(st.floats(0.0, 20.0))
    def test_exponential(self, E):
        assert spectrum_from_slope(lambda b: math.exp(-E * b)) == pytest.approx(E, rel=1e-6, abs=1e-8)

    def test_normalization_guard(self):
        with pytest.raises(DomainError):
            spectrum_from_slope(lambda b: 2.0 * math.exp(-b))


class TestRadialGrid:
    def test_free_semigroup_on_grid(self):
        ch = ChannelLabel(0, 3)
        g = RadialGrid.gauss_legendre(160, 10.0, 3)
        r = g.nodes
        k1 = free_radial_kernel(ch, r[:, None], r[None, :], 0.3)
        k2 = free_radial_kernel(ch, r[:, None], r[None, :], 0.5)
        got = grid_convolve(k1, k2, g)
        want = free_radial_kernel(ch, r[:, None], r[None, :], 0.8)
        inner = (r > 0.5) & (r < 3.0)
        assert np.max(np.abs(got - want)[np.ix_(inner, inner)]) < 1e-8

    def test_shape_mismatch(self):
        g = RadialGrid.gauss_legendre(10, 1.0, 3)
        with pytest.raises(DomainError):
            grid_convolve(np.ones((10, 9)), np.ones((9, 9)), g)

    def test_measure_moment(self):
        g = RadialGrid.gauss_legendre(20, 2.0, 3)
        assert np.sum(g.weights) == pytest.approx(8.0 / 3.0, rel=1e-14)

    def test_euclidean_geodesic_refused(self):
        k = KernelOnAngle(np.exp, E3, 5.0)
        with pytest.raises(DomainError):
            geodesic_convolve(k, k, 1.0)
