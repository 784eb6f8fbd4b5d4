r"""Time slicing: N-fold convolution of short-time kernels on a radial grid.

The finite-time kernel is approximated by

.. math::
    K^{(N)}(r'', r') = \int \prod_{j=1}^{N-1} d\mu(r_j)\,
    \prod_{j=1}^{N} K_\epsilon(r_j, r_{j-1}), \qquad \epsilon = \beta/N,

evaluated as a chain of weighted matrix products.  Errors are measured
against an exact kernel at a fixed set of probe radii, which need not be
grid nodes: the first and last factors are evaluated off-grid.

Three scenarios are shipped:

``oscillator-l0``
    d=3, l=0 oscillator, symmetric-split short-time kernel, exact closed form.
``free``
    free-particle radial kernel; Gaussians convolve exactly so every N sits
    at the quadrature floor.
``hyperbolic-coeff``
    coefficient-space slicing on the d=3 hyperboloid: ``lambda(beta/N)**N``
    against ``exp(-rho**2 beta / 2)``.  No grid is involved.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional

import numpy as np

from .errors import DomainError
from .hyperbolic import limit_check
from .oscillator import ChannelLabel, OscillatorModel, free_radial_kernel, radial_propagator, short_time_radial
from .zonal import RadialGrid

__all__ = [
    "SliceRun",
    "nfold_kernel",
    "nfold_at",
    "check_resolution",
    "ConvergenceRow",
    "convergence_table",
    "scenario",
    "SCENARIOS",
]

DEFAULT_PROBES = (0.4, 0.8, 1.2, 1.6, 2.0)


@dataclass(frozen=True)
class SliceRun:
    """One time-slicing experiment.

    Parameters
    ----------
    N : int
        Number of slices.
    grid : RadialGrid or None
        Intermediate integration grid; ``None`` for coefficient-space runs.
    short_kernel : callable
        ``short_kernel(r, r_prime)`` for one slice, broadcasting over arrays.
    exact_kernel : callable or None
        ``exact_kernel(r, r_prime)`` at the full time.
    width : float
        Standard deviation of the short-time kernel, used for the resolution
        check.
    probes : tuple of float
        Radii at which errors are measured.
    min_nodes_per_width : float
        Required ratio of ``width`` to the largest grid gap.
    """

    N: int
    grid: Optional[RadialGrid]
    short_kernel: Callable
    exact_kernel: Optional[Callable] = None
    width: float = math.inf
    probes: tuple = DEFAULT_PROBES
    min_nodes_per_width: float = 0.75
    coefficient: Optional[Callable] = field(default=None, compare=False)

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise DomainError("N must be a positive integer")


def check_resolution(run):
    """Raise :class:`DomainError` when the grid cannot resolve the slice width."""
    if run.grid is None:
        return
    r = run.grid.nodes
    gaps = np.diff(np.concatenate(([0.0], r)))
    ratio = run.width / float(gaps.max())
    if not ratio >= run.min_nodes_per_width:
        raise DomainError(
            f"grid too coarse: {ratio:.3g} nodes per kernel width, need {run.min_nodes_per_width:g}"
        )


def nfold_kernel(run):
    """N-fold convolution table on the grid nodes.

    Returns the ``(n, n)`` matrix :math:`K_\\epsilon (W K_\\epsilon)^{N-1}`;
    ``N=1`` gives the short-time kernel itself.
    """
    check_resolution(run)
    r = run.grid.nodes
    K = run.short_kernel(r[:, None], r[None, :])
    WK = run.grid.weights[:, None] * K
    out = K
    for _ in range(run.N - 1):
        out = out @ WK
    return out


def nfold_at(run, r2, r1):
    """N-fold kernel at off-grid radii, table over ``r2 x r1``."""
    check_resolution(run)
    r2 = np.atleast_1d(np.asarray(r2, dtype=float))
    r1 = np.atleast_1d(np.asarray(r1, dtype=float))
    if run.N == 1:
        return run.short_kernel(r2[:, None], r1[None, :])
    r = run.grid.nodes
    w = run.grid.weights
    left = run.short_kernel(r2[:, None], r[None, :]) * w
    right = run.short_kernel(r[:, None], r1[None, :])
    if run.N > 2:
        KW = run.short_kernel(r[:, None], r[None, :]) * w
        for _ in range(run.N - 2):
            left = left @ KW
    return left @ right


def _error(run):
    if run.coefficient is not None:
        return run.coefficient(run.N)
    if run.exact_kernel is None:
        raise DomainError("no exact oracle for this run")
    p = np.asarray(run.probes, dtype=float)
    approx = nfold_at(run, p, p)
    exact = run.exact_kernel(p[:, None], p[None, :])
    return float(np.max(np.abs(approx - exact)))


class ConvergenceRow(NamedTuple):
    N: int
    max_error: float
    rate: float  # nan on the first row


def convergence_table(template, N_list):
    """Errors and empirical orders for a sequence of slice counts.

    ``template(N)`` builds the :class:`SliceRun`.  The rate on row ``i`` is
    ``log(e[i-1]/e[i]) / log(N[i]/N[i-1])``, which reduces to
    ``log2(e_N/e_2N)`` for doubling sequences.
    """
    Ns = [int(n) for n in N_list]
    if any(n < 1 for n in Ns) or any(b <= a for a, b in zip(Ns, Ns[1:])):
        raise DomainError("N list must be positive and strictly ascending")
    rows = []
    prev = None
    for N in Ns:
        e = _error(template(N))
        rate = math.nan
        if prev is not None and prev[1] > 0 and e > 0:
            rate = math.log(prev[1] / e) / math.log(N / prev[0])
        rows.append(ConvergenceRow(N, e, rate))
        prev = (N, e)
    return rows


def _oscillator_l0(beta=0.5, r_max=8.0, n=200, d=3, l=0, M=1.0, omega=1.0, hbar=1.0, **_):
    model = OscillatorModel(d=d, M=M, omega=omega, hbar=hbar)
    ch = ChannelLabel(l, d)
    grid = RadialGrid.gauss_legendre(n, r_max, d)

    def template(N):
        eps = beta / N
        return SliceRun(
            N=N,
            grid=grid,
            short_kernel=lambda a, b: short_time_radial(ch, a, b, eps, model),
            exact_kernel=lambda a, b: radial_propagator(ch, a, b, beta, model),
            width=hbar * math.sqrt(eps / M),
        )

    return template


def _free(beta=0.5, r_max=8.0, n=200, d=3, l=0, M=1.0, hbar=1.0, **_):
    ch = ChannelLabel(l, d)
    grid = RadialGrid.gauss_legendre(n, r_max, d)

    def template(N):
        eps = beta / N
        return SliceRun(
            N=N,
            grid=grid,
            short_kernel=lambda a, b: free_radial_kernel(ch, a, b, eps, M, hbar),
            exact_kernel=lambda a, b: free_radial_kernel(ch, a, b, beta, M, hbar),
            width=hbar * math.sqrt(eps / M),
        )

    return template


def _hyperbolic_coeff(beta=1.0, rhos=(0.5, 1.0), **_):
    z = 1.0 / beta

    def err(N):
        return max(abs(v - t) for v, t in (limit_check(rho, z, N) for rho in rhos))

    def template(N):
        return SliceRun(N=N, grid=None, short_kernel=None, coefficient=err)

    return template


SCENARIOS = {
    "oscillator-l0": _oscillator_l0,
    "free": _free,
    "hyperbolic-coeff": _hyperbolic_coeff,
}


def scenario(name, **params):
    """Run template for a shipped scenario; ``params`` override its defaults."""
    try:
        factory = SCENARIOS[name]
    except KeyError:
        raise DomainError(f"unknown scenario {name!r}; choose from {sorted(SCENARIOS)}") from None
    return factory(**params)
