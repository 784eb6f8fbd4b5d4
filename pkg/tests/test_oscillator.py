import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, special

from zonalprop import oscillator as osc
from zonalprop.errors import DomainError, SingularTimeError

M3 = osc.OscillatorModel(3)
ODD = osc.OscillatorModel(3, M=1.3, omega=0.8, hbar=0.9)


def radial_eigenfunctions(channel, model, n_max):
    """Normalized radial eigenfunctions (measure r^{d-1} dr) and energies, via Laguerre polynomials."""
    a = 2.0 * model.alpha
    nu = channel.bessel_index
    n = np.arange(n_max)
    norm = np.sqrt(2.0 * a ** (nu + 1) * np.exp(special.gammaln(n + 1) - special.gammaln(n + nu + 1)))

    def psi(r):
        return norm * r**channel.l * np.exp(-0.5 * a * r * r) * special.eval_genlaguerre(n, nu, a * r * r)

    energies = model.hbar * model.omega * (2 * n + channel.l + 0.5 * model.d)
    return psi, energies


class TestModel:
    def test_alpha(self):
        assert ODD.alpha == pytest.approx(1.3 * 0.8 / 1.8)

    def test_angle(self):
        assert ODD.angle(2.0) == pytest.approx(0.9 * 0.8 * 2.0)
        assert osc.OscillatorModel(3, omega=2.0, mode="real-time").angle(0.5) == 1.0

    @pytest.mark.parametrize("kw", [dict(d=0), dict(d=3, M=0.0), dict(d=3, mode="x")])
    def test_rejects(self, kw):
        with pytest.raises(DomainError):
            osc.OscillatorModel(**kw)

    def test_channel(self):
        ch = osc.ChannelLabel(2, 3)
        assert ch.J == -1.75
        assert ch.bessel_index == 2.5 == -2 * ch.J - 1
        with pytest.raises(DomainError):
            osc.ChannelLabel(-1, 3)

    def test_eta_of_r(self):
        np.testing.assert_allclose(osc.eta_of_r(np.array([0.0, 1.0, 2.0]), ODD), ODD.alpha * np.array([0, 1, 4]))
        with pytest.raises(DomainError):
            osc.eta_of_r(-1.0, M3)

    def test_partial_wave_dimension(self):
        assert [osc.partial_wave_dimension(l, 3) for l in range(4)] == [1, 3, 5, 7]
        assert osc.partial_wave_dimension(2, 4) == 9


class TestVFunction:
    def test_args_validation(self):
        with pytest.raises(DomainError):
            osc.VArgs(0.5, 1.0, 1.0, 0.3)
        with pytest.raises(DomainError):
            osc.VArgs(-1.0, -1.0, 1.0, 0.3)
        with pytest.raises(SingularTimeError):
            osc.VArgs(-1.0, 1.0, 1.0, math.pi, euclidean=False)

    def test_eta_prime_zero(self):
        # I_0(0) = 1 and I_nu(0) = 0 for nu > 0
        s = 0.7
        assert osc.v_function(osc.VArgs(-0.5, 1.2, 0.0, s)) == pytest.approx(math.exp(-1.2 / math.tanh(s)) / math.sinh(s))
        assert osc.v_function(osc.VArgs(-1.0, 1.2, 0.0, s)) == 0.0

    @settings(max_examples=40, deadline=None)
    @given(st.floats(-3.0, -0.5), st.floats(0.01, 5.0), st.floats(0.01, 5.0), st.floats(0.1, 3.0))
    def test_symmetric(self, J, e1, e2, s):
        a = osc.v_function(osc.VArgs(J, e1, e2, s))
        b = osc.v_function(osc.VArgs(J, e2, e1, s))
        assert a == pytest.approx(b, rel=1e-13)

    @pytest.mark.parametrize("euclidean", [True, False])
    def test_doubled_angle_form(self, euclidean):
        for J in (-0.75, -1.5):
            for phi in (0.3, 1.1):
                assert osc.v_matrix_element_identity(J, 0.8, 1.3, phi, euclidean) < 1e-12

    def test_real_time_matches_radial(self):
        m = osc.OscillatorModel(3, mode="real-time")
        ch = osc.ChannelLabel(1, 3)
        r2, r1, tau = 1.1, 0.6, 0.7
        v = osc.v_function(osc.VArgs(ch.J, m.alpha * r2 * r2, m.alpha * r1 * r1, tau, euclidean=False))
        want = 2 * m.alpha * (r1 * r2) ** -0.5 * v
        assert osc.radial_propagator(ch, r2, r1, tau, m) == pytest.approx(want, rel=1e-12)

    def test_semigroup(self):
        assert osc.v_semigroup_residual(-1.25, 0.7, 1.4, 0.3, 0.5) < 1e-10


class TestWeber:
    def test_residual_small(self):
        assert osc.weber_residual(1.5, 1.0, 0.5, 2.0) < 1e-12

    def test_zero_argument(self):
        assert osc.weber_residual(1.0, 0.0, 1.0, 1.0) < 1e-14

    @pytest.mark.parametrize("args", [(-1.5, 1, 1, 1), (1, 1, 1, 0), (1, -1, 1, 1)])
    def test_domain(self, args):
        with pytest.raises(DomainError):
            osc.weber_residual(*args)


class TestRadialKernel:
    def test_image_method(self):
        for r2, r1, beta in ((0.4, 1.3, 0.2), (2.0, 2.2, 1.5)):
            k = osc.radial_propagator(osc.ChannelLabel(0, 3), r2, r1, beta, ODD)
            assert k == pytest.approx(osc.image_method_kernel(r2, r1, beta, ODD), rel=1e-12)

    def test_log_form(self):
        ch = osc.ChannelLabel(2, 3)
        k = osc.radial_propagator(ch, 1.0, 0.5, 0.8, M3)
        assert math.log(k) == pytest.approx(osc.radial_propagator(ch, 1.0, 0.5, 0.8, M3, log=True), rel=1e-14)

    def test_log_survives_long_times(self):
        ch = osc.ChannelLabel(0, 3)
        v = osc.radial_propagator(ch, 1.0, 1.0, 2000.0, M3, log=True)
        assert math.isfinite(v) and v < -2000

    def test_caustic(self):
        m = osc.OscillatorModel(3, mode="real-time")
        with pytest.raises(SingularTimeError):
            osc.radial_propagator(osc.ChannelLabel(0, 3), 1.0, 1.0, math.pi, m)

    def test_radii_positive(self):
        with pytest.raises(DomainError):
            osc.radial_propagator(osc.ChannelLabel(0, 3), 0.0, 1.0, 1.0, M3)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 4), st.floats(0.2, 2.5), st.floats(0.2, 2.5), st.floats(0.1, 2.0))
    def test_symmetric_and_positive(self, l, r1, r2, beta):
        ch = osc.ChannelLabel(l, 3)
        a = osc.radial_propagator(ch, r2, r1, beta, M3)
        assert a > 0
        assert a == pytest.approx(osc.radial_propagator(ch, r1, r2, beta, M3), rel=1e-13)

    def test_spectral_expansion(self):
        ch = osc.ChannelLabel(1, 3)
        psi, E = radial_eigenfunctions(ch, ODD, 60)
        beta = 0.7
        want = np.sum(psi(1.4) * psi(0.7) * np.exp(-beta * E))
        assert osc.radial_propagator(ch, 1.4, 0.7, beta, ODD) == pytest.approx(want, rel=1e-12)

    def test_semigroup(self):
        assert osc.radial_semigroup_residual(osc.ChannelLabel(2, 3), 0.9, 1.6, 0.4, 0.3, ODD) < 1e-10

    def test_short_time_approaches_exact(self):
        ch = osc.ChannelLabel(0, 3)
        errs = [abs(osc.short_time_radial(ch, 1.0, 1.0, eps, M3) / osc.radial_propagator(ch, 1.0, 1.0, eps, M3) - 1)
                for eps in (0.04, 0.02, 0.01)]
        assert errs[0] > errs[1] > errs[2]
        assert errs[2] < 1e-4

    def test_v_form_is_exact_at_slice_angle(self):
        ch = osc.ChannelLabel(1, 3)
        eps = 0.1
        want = osc.radial_propagator(ch, 1.0, 0.8, math.asinh(eps), M3)
        assert osc.short_time_radial(ch, 1.0, 0.8, eps, M3, form="v") == pytest.approx(want, rel=1e-14)

    def test_short_time_unknown_form(self):
        with pytest.raises(DomainError):
            osc.short_time_radial(osc.ChannelLabel(0, 3), 1.0, 1.0, 0.1, M3, form="trotter")

    def test_free_kernel_is_zero_frequency_limit(self):
        ch = osc.ChannelLabel(1, 3)
        slow = osc.OscillatorModel(3, omega=1e-5)
        want = osc.free_radial_kernel(ch, 1.0, 0.6, 0.5)
        assert osc.radial_propagator(ch, 1.0, 0.6, 0.5, slow) == pytest.approx(want, rel=1e-8)


class TestFullPropagator:
    def test_matches_mehler(self):
        x1, x2 = np.array([0.3, -0.5, 0.9]), np.array([1.1, 0.2, -0.4])
        got = osc.full_propagator(x2, x1, 0.6, M3)
        want = float(np.prod(osc.mehler_kernel(x2, x1, 0.6)))
        assert got.value == pytest.approx(want, rel=1e-10)
        assert got.error < 1e-12 * want

    def test_shape_checked(self):
        with pytest.raises(DomainError):
            osc.full_propagator(np.ones(2), np.ones(3), 0.5, M3)

    def test_mehler_normalized(self):
        # int k(x, y) k(y, z) dy = k(x, z) at total time; checked on a wide grid
        y = np.linspace(-12, 12, 4001)
        val = integrate.trapezoid(osc.mehler_kernel(0.3, y, 0.4) * osc.mehler_kernel(y, -0.5, 0.6), y)
        assert val == pytest.approx(float(osc.mehler_kernel(0.3, -0.5, 1.0)), rel=1e-10)


class TestPlaneWave:
    @pytest.mark.parametrize("d", [2, 3, 4, 7])
    def test_converged(self, d):
        assert osc.plane_wave_expansion_residual(2.5 + 1j, 0.3, 40, d) < 1e-10

    def test_truncation_visible(self):
        assert osc.plane_wave_expansion_residual(10.0, 1.0, 3, 3) > 1e-2

    def test_large_argument_refused(self):
        with pytest.raises(DomainError):
            osc.plane_wave_expansion_residual(60.0, 0.5, 40, 3)


class TestSpectrumAndGreen:
    def test_levels(self):
        assert [osc.spectrum(n, M3) for n in range(3)] == [1.5, 2.5, 3.5]
        with pytest.raises(DomainError):
            osc.spectrum(-1, M3)

    def test_green_forms_agree(self):
        ch = osc.ChannelLabel(1, 3)
        for E in (-1.0, 0.3, 1.5):
            a = osc.radial_green(ch, 1.4, 0.7, E, ODD)
            b = osc.radial_green_closed_form(ch, 1.4, 0.7, E, ODD)
            assert a == pytest.approx(b, rel=1e-10)

    def test_green_against_spectral_sum(self):
        # G(E1) - G(E2) = sum_n psi_n psi_n (E1 - E2) / ((E_n - E1)(E_n - E2)) converges fast
        ch = osc.ChannelLabel(1, 3)
        psi, En = radial_eigenfunctions(ch, ODD, 4000)
        E1, E2 = 0.3, -1.0
        want = np.sum(psi(1.4) * psi(0.7) * (E1 - E2) / ((En - E1) * (En - E2)))
        got = osc.radial_green(ch, 1.4, 0.7, E1, ODD) - osc.radial_green(ch, 1.4, 0.7, E2, ODD)
        assert got == pytest.approx(want, rel=1e-6)

    def test_green_vanishes_far_below_spectrum(self):
        ch = osc.ChannelLabel(0, 3)
        vals = [osc.radial_green_closed_form(ch, 1.0, 0.8, E, M3) for E in (-1, -10, -100, -1000)]
        assert all(b < a for a, b in zip(vals, vals[1:]))
        assert vals[-1] < 1e-2 * vals[0]

    def test_green_above_threshold_refused(self):
        with pytest.raises(DomainError):
            osc.radial_green(osc.ChannelLabel(0, 3), 1.0, 1.0, 1.5, M3)
        with pytest.raises(DomainError):
            osc.radial_green_closed_form(osc.ChannelLabel(0, 3), 1.0, 1.0, 2.0, M3)


class TestSlicingAngles:
    def test_total_angle_converges_second_order(self):
        dev = [osc.slicing_angles(1.0, 1.0 / N, N)[1] - 1.0 for N in (10, 20, 40)]
        assert 3.5 < dev[0] / dev[1] < 4.5
        assert 3.5 < dev[1] / dev[2] < 4.5

    def test_coarse_refused(self):
        with pytest.raises(DomainError):
            osc.slicing_angles(2.0, 0.5, 4)
        with pytest.raises(DomainError):
            osc.slicing_angles(1.0, 0.1, 0)
