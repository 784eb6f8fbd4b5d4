import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zonalprop import su11
from zonalprop.errors import DomainError


@pytest.fixture(scope="module")
def r3():
    return su11.build_realization(3, 5)


class TestBuild:
    def test_two_level_position(self):
        real = su11.build_realization(1, 1)
        want = math.sqrt(0.5) * np.array([[0, 1], [1, 0]])
        np.testing.assert_allclose(real.x[0], want, atol=1e-16)

    def test_dimension_limit(self):
        with pytest.raises(DomainError):
            su11.build_realization(3, 16)
        with pytest.raises(DomainError):
            su11.build_realization(1, 4096)
        assert su11.build_realization(2, 15).dim == 256

    @pytest.mark.parametrize("args", [(0, 3), (2, 0), (2, 2.5)])
    def test_rejects(self, args):
        with pytest.raises(DomainError):
            su11.build_realization(*args)

    def test_hermitian(self, r3):
        for A in (r3.J1, r3.J2, r3.J3, *r3.x, *r3.p):
            np.testing.assert_allclose(A, A.conj().T, atol=1e-14)

    def test_j3_positive_definite(self, r3):
        assert np.min(np.linalg.eigvalsh(r3.J3)) > 0

    def test_interior_mask(self, r3):
        assert r3.interior.sum() == 4**3
        assert np.all(r3.quanta[r3.interior] <= 3)


class TestRelations:
    @settings(max_examples=10, deadline=None)
    @given(st.integers(1, 3), st.floats(0.5, 2.0), st.floats(0.5, 2.0), st.floats(0.5, 2.0))
    def test_commutators_any_units(self, d, M, omega, hbar):
        real = su11.build_realization(d, 4, M, omega, hbar)
        assert su11.commutator_residual(real) < 1e-12
        assert su11.hamiltonian_j3_residual(real) < 1e-12
        assert su11.kplus_residual(real) < 1e-12
        assert su11.heisenberg_residual(real) < 1e-13

    def test_truncation_spoils_full_space(self, r3):
        assert su11.commutator_residual(r3, masked=False) > 1.0

    def test_casimir_relation(self, r3):
        assert su11.casimir_relation_residual(r3) < 1e-12

    def test_casimir_needs_rotations(self):
        with pytest.raises(DomainError):
            su11.casimir_relation_residual(su11.build_realization(1, 6))


class TestSpectra:
    def test_ground_state(self):
        real = su11.build_realization(3, 4)
        assert su11.j3_interior_spectrum(real)[0] == pytest.approx(1.5, abs=1e-12)

    def test_interior_levels(self):
        real = su11.build_realization(2, 6)
        vals = su11.j3_interior_spectrum(real)
        # levels n + d/2 with n = n1 + n2, n_i <= 4
        want = np.sort([n1 + n2 + 1.0 for n1 in range(5) for n2 in range(5)])
        np.testing.assert_allclose(vals, want, atol=1e-12)

    @pytest.mark.parametrize("N", [0, 1, 2, 3])
    def test_shell_casimir(self, r3, N):
        pairs = su11.casimir_shell_spectrum(r3, N)
        l = (-1 + np.sqrt(1 + 4 * pairs[:, 0])) / 2  # l(l+1) for d=3
        np.testing.assert_allclose(l, np.round(l), atol=1e-9)
        np.testing.assert_allclose(pairs[:, 1], 0.25 * pairs[:, 0] - 3 / 16, atol=1e-11)

    def test_shell_at_boundary_refused(self, r3):
        with pytest.raises(DomainError):
            su11.casimir_shell_spectrum(r3, 4)


class TestChannelCasimir:
    def test_d3_values(self):
        assert su11.channel_casimir_eigen(0, 3).from_l == pytest.approx(-3 / 16)
        assert su11.channel_casimir_eigen(0, 3).from_J == pytest.approx(-3 / 16)
        assert su11.channel_casimir_eigen(1, 3).from_l == pytest.approx(5 / 16)
        assert su11.channel_casimir_eigen(1, 3).from_J == pytest.approx(5 / 16)

    @settings(max_examples=40)
    @given(st.integers(0, 50), st.integers(2, 12))
    def test_routes_agree(self, l, d):
        assert su11.channel_casimir_eigen(l, d).discrepancy < 1e-12

    def test_rejects(self):
        with pytest.raises(DomainError):
            su11.channel_casimir_eigen(-1, 3)
