r"""Truncated matrix realization of the oscillator's su(1,1) dynamical algebra.

Position and momentum of each of the ``d`` modes are built from ladder
operators on the number states ``0..n_max``,

.. math::
    x = \sqrt{\frac{\hbar}{2M\omega}}(a + a^\dagger), \qquad
    p = i\sqrt{\frac{M\omega\hbar}{2}}(a^\dagger - a),

and combined into

.. math::
    J_1 = -\frac{p^2 - M^2\omega^2x^2}{4M\hbar\omega},\quad
    J_2 = -\frac{x\cdot p + p\cdot x}{4\hbar},\quad
    J_3 = \frac{p^2 + M^2\omega^2x^2}{4M\hbar\omega}.

Quadratic operators couple ``n`` to ``n +- 2``, so truncation only spoils
matrix entries next to the cutoff.  Every residual below is therefore taken
on the *interior* block of states whose quanta are all at most ``n_max - 2``.
All residuals are dimensionless.
"""

import itertools
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError

__all__ = [
    "TruncatedRealization",
    "build_realization",
    "commutator_residual",
    "heisenberg_residual",
    "casimir_relation_residual",
    "hamiltonian_j3_residual",
    "kplus_residual",
    "j3_interior_spectrum",
    "casimir_shell_spectrum",
    "channel_casimir_eigen",
    "CasimirValues",
]

MAX_DIM = 4096


@dataclass(frozen=True)
class TruncatedRealization:
    """Dense truncated matrices for ``x_i``, ``p_i`` and the derived generators."""

    d: int
    n_max: int
    M: float
    omega: float
    hbar: float
    x: tuple
    p: tuple
    J1: np.ndarray
    J2: np.ndarray
    J3: np.ndarray
    Kplus: np.ndarray
    quanta: np.ndarray  # (dim, d) occupation numbers of each basis state
    interior: np.ndarray  # boolean mask over basis states

    @property
    def dim(self):
        return self.J3.shape[0]

    def L(self, i, k):
        """Angular momentum component ``L_ik = x_i p_k - x_k p_i``."""
        return self.x[i] @ self.p[k] - self.x[k] @ self.p[i]

    def L2(self):
        """SO(d) Casimir ``(1/2) sum_{i,k} L_ik L_ik``."""
        out = np.zeros_like(self.J3)
        for i, k in itertools.combinations(range(self.d), 2):
            Lik = self.L(i, k)
            out = out + Lik @ Lik
        return out

    def casimir(self):
        """su(1,1) Casimir ``-J1**2 - J2**2 + J3**2``."""
        return -self.J1 @ self.J1 - self.J2 @ self.J2 + self.J3 @ self.J3

    def hamiltonian(self):
        p2 = sum(pi @ pi for pi in self.p)
        x2 = sum(xi @ xi for xi in self.x)
        return p2 / (2.0 * self.M) + 0.5 * self.M * self.omega**2 * x2

    def restrict(self, A):
        """Block of ``A`` on the interior states."""
        m = self.interior
        return A[np.ix_(m, m)]


def build_realization(d, n_max, M=1.0, omega=1.0, hbar=1.0):
    """Build the truncated realization for ``d`` modes with cutoff ``n_max``.

    Raises
    ------
    DomainError
        If ``(n_max + 1)**d`` exceeds 4096 or the arguments are invalid.
    """
    if int(d) != d or d < 1:
        raise DomainError("d must be a positive integer")
    if int(n_max) != n_max or n_max < 1:
        raise DomainError("n_max must be a positive integer")
    n1 = n_max + 1
    if n1**d > MAX_DIM:
        raise DomainError(f"(n_max+1)^d = {n1 ** d} exceeds {MAX_DIM}")
    if not (M > 0 and omega > 0 and hbar > 0):
        raise DomainError("M, omega and hbar must be positive")
    a = np.diag(np.sqrt(np.arange(1, n1, dtype=float)), k=1)
    ad = a.T
    x1 = np.sqrt(hbar / (2.0 * M * omega)) * (a + ad)
    p1 = 1j * np.sqrt(M * omega * hbar / 2.0) * (ad - a)
    eye = np.eye(n1)

    def embed(op, i):
        out = np.array([[1.0]])
        for k in range(d):
            out = np.kron(out, op if k == i else eye)
        return out.astype(complex)

    xs = tuple(embed(x1, i) for i in range(d))
    ps = tuple(embed(p1, i) for i in range(d))
    p2 = sum(p @ p for p in ps)
    x2 = sum(x @ x for x in xs)
    xp = sum(x @ p + p @ x for x, p in zip(xs, ps))
    c = 1.0 / (4.0 * M * hbar * omega)
    mw2 = (M * omega) ** 2
    J1 = -c * (p2 - mw2 * x2)
    J2 = -xp / (4.0 * hbar)
    J3 = c * (p2 + mw2 * x2)
    quanta = np.array(list(itertools.product(range(n1), repeat=d)), dtype=int).reshape(-1, d)
    interior = np.all(quanta <= n_max - 2, axis=1)
    return TruncatedRealization(d, int(n_max), M, omega, hbar, xs, ps, J1, J2, J3, J1 + J3, quanta, interior)


def _maxabs(A):
    return float(np.max(np.abs(A))) if A.size else 0.0


def commutator_residual(real, masked=True):
    """Largest deviation from ``[J1,J2] = -iJ3``, ``[J2,J3] = iJ1``, ``[J3,J1] = iJ2``.

    With ``masked=False`` the full truncated matrices are used; the residual
    is then dominated by cutoff artifacts and is not small.
    """
    J1, J2, J3 = real.J1, real.J2, real.J3
    rels = (
        J1 @ J2 - J2 @ J1 + 1j * J3,
        J2 @ J3 - J3 @ J2 - 1j * J1,
        J3 @ J1 - J1 @ J3 - 1j * J2,
    )
    pick = real.restrict if masked else (lambda A: A)
    return max(_maxabs(pick(r)) for r in rels)


def heisenberg_residual(real):
    """Largest interior deviation from ``[x_i, p_k] = i hbar delta_ik``, in units of ``hbar``."""
    worst = 0.0
    n = real.dim
    for i in range(real.d):
        for k in range(real.d):
            c = real.x[i] @ real.p[k] - real.p[k] @ real.x[i]
            if i == k:
                c = c - 1j * real.hbar * np.eye(n)
            worst = max(worst, _maxabs(real.restrict(c)) / real.hbar)
    return worst


def casimir_relation_residual(real):
    """Interior residual of ``J^2 = L^2/(4 hbar^2) + d(d-4)/16``."""
    if real.d < 2:
        raise DomainError("the relation needs d >= 2 (no rotations in one dimension)")
    d = real.d
    R = real.casimir() - real.L2() / (4.0 * real.hbar**2) - d * (d - 4) / 16.0 * np.eye(real.dim)
    return _maxabs(real.restrict(R))


def hamiltonian_j3_residual(real):
    """Interior residual of ``H = 2 hbar omega J3``, in units of ``hbar omega``."""
    hw = real.hbar * real.omega
    return _maxabs(real.restrict(real.hamiltonian() - 2.0 * hw * real.J3)) / hw


def kplus_residual(real):
    """Residual of ``K+ = J1 + J3 = (M omega / 2 hbar) x^2`` on the full truncated space."""
    x2 = sum(x @ x for x in real.x)
    return _maxabs(real.Kplus - real.M * real.omega / (2.0 * real.hbar) * x2)


def j3_interior_spectrum(real):
    """Eigenvalues of ``2 hbar omega J3`` on the interior block, ascending."""
    block = real.restrict(2.0 * real.hbar * real.omega * real.J3)
    return np.sort(np.linalg.eigvalsh(block))


def casimir_shell_spectrum(real, N):
    """Eigenvalues of ``L^2/hbar^2`` and ``J^2`` on the shell of total quanta ``N``.

    The shell must lie inside the interior (``N <= n_max - 2``).  Both
    operators commute with ``J3`` and are diagonalized together through
    ``L^2`` on the shell; returns an array of ``(l(l+d-2), J^2)`` pairs.
    """
    if N > real.n_max - 2:
        raise DomainError("shell reaches the truncation boundary")
    shell = real.interior & (real.quanta.sum(axis=1) == N)
    idx = np.flatnonzero(shell)
    L2 = real.L2()[np.ix_(idx, idx)] / real.hbar**2
    C = real.casimir()[np.ix_(idx, idx)]
    vals, vecs = np.linalg.eigh(L2)
    cas = np.real(np.einsum("ij,jk,ki->i", vecs.conj().T, C, vecs))
    return np.column_stack([vals, cas])


class CasimirValues(NamedTuple):
    from_l: float
    from_J: float
    discrepancy: float


def channel_casimir_eigen(l, d):
    r"""Casimir value of channel ``l`` computed two ways.

    ``from_l`` is :math:`\tfrac14 l(l+d-2) + \tfrac1{16}d(d-4)`, from the
    SO(d) Casimir; ``from_J`` is :math:`J(J+1)` with :math:`J = -l/2 - d/4`.
    The two agree identically.
    """
    if int(l) != l or l < 0 or int(d) != d or d < 2:
        raise DomainError("need integer l >= 0 and d >= 2")
    a = 0.25 * l * (l + d - 2) + d * (d - 4) / 16.0
    J = -0.5 * l - 0.25 * d
    b = J * (J + 1.0)
    return CasimirValues(a, b, abs(a - b))
