r"""Free motion on the d-dimensional hyperboloid (space of constant negative curvature).

Points of :math:`\Lambda^d` are written in geodesic polar form
:math:`(\theta, \Omega)` with embedding
:math:`x = R\sinh\theta\, u(\Omega)`, :math:`x_{d+1} = R\cosh\theta`.  Every
kernel here depends on the two points only through the geodesic angle
:math:`\Theta` and is a density with respect to the Riemannian volume
:math:`R^d\sinh^{d-1}\theta\, d\theta\, d\Omega`.

Time enters through the dimensionless combination

.. math::
    s = \frac{\hbar^2\beta}{M R^2} \quad\text{(Euclidean)}, \qquad
    s = \frac{i\hbar\tau}{M R^2} \quad\text{(real time)},

so that real-time values are the analytic continuation
:math:`\beta = i\tau/\hbar` of the Euclidean ones.  All numerical
cross-checks are done in Euclidean mode; real-time values are produced only
by the odd-dimensional closed form.
"""

import math
from dataclasses import dataclass, field
from functools import lru_cache

import mpmath
import numpy as np

from .errors import ConvergenceError, DomainError, ParityError, UnsupportedModeError
from .specfun import bessel_k_imag, gauss_legendre, gegenbauer_conical, log_gamma
from .zonal import GroupDescriptor, KernelOnAngle, geodesic_convolve

__all__ = [
    "HyperbolicModel",
    "HyperbolicPoint",
    "geodesic_angle",
    "short_time_kernel",
    "plancherel_weight",
    "fourier_coefficient",
    "spectral_propagator",
    "closed_form_odd",
    "closed_form_even",
    "closed_form",
    "energy_shift",
    "limit_check",
    "semigroup_residual",
    "short_time_kernel_on_angle",
]

MODES = ("euclidean", "real-time")

# Gaussian cutoff: exp(-CUT) is below double precision relative to the peak.
_CUT = 40.0


@dataclass(frozen=True)
class HyperbolicModel:
    """Physical parameters of a free particle on the hyperboloid.

    Parameters
    ----------
    d : int
        Dimension, ``d >= 2``.
    R : float
        Curvature radius (curvature ``-1/R**2``).
    M, hbar : float
        Mass and Planck's constant.
    mode : {"euclidean", "real-time"}
        Meaning of the time argument: inverse energy ``beta`` or time ``tau``.
    """

    d: int
    R: float = 1.0
    M: float = 1.0
    hbar: float = 1.0
    mode: str = "euclidean"

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 2:
            raise DomainError("dimension must be an integer >= 2")
        if not (self.R > 0 and self.M > 0 and self.hbar > 0):
            raise DomainError("R, M and hbar must be positive")
        if self.mode not in MODES:
            raise DomainError(f"mode must be one of {MODES}")

    @property
    def euclidean(self):
        return self.mode == "euclidean"

    @property
    def descriptor(self):
        return GroupDescriptor("hyperboloid", self.d, self.R)

    def s(self, time):
        """Dimensionless time ``hbar**2 beta / (M R**2)`` (complex in real time)."""
        if self.euclidean:
            if not time > 0:
                raise DomainError("beta must be positive")
            return self.hbar**2 * float(time) / (self.M * self.R**2)
        if time == 0:
            raise DomainError("tau must be nonzero")
        return 1j * self.hbar * float(time) / (self.M * self.R**2)

    def energy_shift(self):
        return energy_shift(self.d, self.R, self.M, self.hbar)


@dataclass(frozen=True)
class HyperbolicPoint:
    """A point in geodesic polar coordinates.

    ``omega`` holds the ``d - 1`` standard polar angles of the direction
    ``u``: the first ``d - 2`` lie in ``[0, pi]`` and the last in
    ``[0, 2 pi)``.
    """

    theta: float
    omega: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if not (math.isfinite(self.theta) and self.theta >= 0):
            raise DomainError("theta must be finite and non-negative")
        object.__setattr__(self, "omega", tuple(float(w) for w in self.omega))

    def direction(self, d):
        """Unit vector ``u(Omega)`` in ``R^d``."""
        if len(self.omega) != d - 1:
            raise DomainError(f"a point in dimension {d} needs {d - 1} angles")
        u = np.empty(d)
        prod = 1.0
        for k, w in enumerate(self.omega):
            u[k] = prod * math.cos(w)
            prod *= math.sin(w)
        u[d - 1] = prod
        return u

    def embedding(self, d, R=1.0):
        """Embedding coordinates ``(x_1, ..., x_d, x_{d+1})``."""
        return np.append(R * math.sinh(self.theta) * self.direction(d), R * math.cosh(self.theta))


def geodesic_angle(p1, p2, model):
    r"""Geodesic angle :math:`\Theta` between two points.

    Uses :math:`\cosh\Theta - 1 = 2\sinh^2\frac{\theta'-\theta''}{2}
    + \tfrac12\sinh\theta'\sinh\theta''\,|u'-u''|^2`, the embedding formula
    :math:`\cosh\Theta = (x'_{d+1}x''_{d+1} - x'\cdot x'')/R^2` rearranged
    so that nearby points lose no accuracy.
    """
    d = model.d
    u1, u2 = p1.direction(d), p2.direction(d)
    chord2 = float(np.sum((u1 - u2) ** 2))
    gap = 2.0 * math.sinh(0.5 * (p1.theta - p2.theta)) ** 2 + 0.5 * math.sinh(p1.theta) * math.sinh(p2.theta) * chord2
    if gap < 0:
        if gap < -1e-12:
            raise DomainError("cosh(Theta) below one")
        gap = 0.0
    return 2.0 * math.asinh(math.sqrt(0.5 * gap))


def energy_shift(d, R=1.0, M=1.0, hbar=1.0):
    r"""Constant :math:`(d-1)^2\hbar^2/8MR^2` separating the Hamiltonian from :math:`-\hbar^2\Delta/2M`."""
    return (d - 1) ** 2 * hbar**2 / (8.0 * M * R**2)


def short_time_kernel(Theta, eps, model):
    r"""Short-time kernel for one time slice.

    .. math::
        K_\epsilon(\Theta) = R^{-d}(2\pi s)^{-d/2}
        \exp\left[-\frac{\cosh\Theta - 1}{s} + \frac s8\right]

    with :math:`s` from :meth:`HyperbolicModel.s`.  In Euclidean mode this
    is real and positive; in real time it is the oscillatory kernel with the
    principal branch of the square root.
    """
    s = model.s(eps)
    Theta = np.asarray(Theta, dtype=float)
    gap = 2.0 * np.sinh(0.5 * Theta) ** 2
    val = (2.0 * np.pi * s) ** (-0.5 * model.d) * np.exp(-gap / s + s / 8.0) / model.R**model.d
    if model.euclidean:
        val = np.real(val)
    return val[()] if np.ndim(val) == 0 else val


def short_time_kernel_on_angle(eps, model):
    """The Euclidean short-time kernel wrapped for :func:`zonal_transform`."""
    s = model.s(eps)
    theta_max = math.acosh(1.0 + _CUT * s)
    return KernelOnAngle(lambda t: short_time_kernel(t, eps, model), model.descriptor, theta_max)


def _log_plancherel(rho, d):
    # log of 2 |Gamma((d-1)/2 + i rho)|^2 rho sinh(pi rho) / (pi Gamma(d))
    x = math.pi * rho
    log_sinh = x + math.log1p(-math.exp(-2.0 * x)) - math.log(2.0)
    return (math.log(2.0) + 2.0 * log_gamma(complex(0.5 * (d - 1), rho)).real + math.log(rho)
            + log_sinh - math.log(math.pi) - math.lgamma(d))


def plancherel_weight(rho, d):
    r"""Plancherel density :math:`d_l = 2|\Gamma(\tfrac{d-1}{2}+i\rho)|^2/(\Gamma(d)|\Gamma(i\rho)|^2)`.

    Evaluated in log form using :math:`|\Gamma(i\rho)|^2 = \pi/(\rho\sinh\pi\rho)`;
    the value at ``rho = 0`` is the limit 0.
    """
    rho = abs(float(rho))
    if rho == 0.0:
        return 0.0
    return math.exp(_log_plancherel(rho, d))


@lru_cache(maxsize=256)
def _rho_grid(d, rho_max, panels, per_panel=24):
    edges = np.linspace(0.0, rho_max, panels + 1)
    parts = [gauss_legendre(per_panel, a, b) for a, b in zip(edges[:-1], edges[1:])]
    rho = np.concatenate([p[0] for p in parts])
    w = np.concatenate([p[1] for p in parts])
    dl = np.array([plancherel_weight(r, d) for r in rho])
    out = (rho, w * dl)
    for a in out:
        a.setflags(write=False)
    return out


def fourier_coefficient(rho, eps, model):
    r"""Zonal coefficient :math:`\lambda_\rho` of the Euclidean short-time kernel.

    .. math::
        \lambda_\rho = \sqrt{2x/\pi}\; e^{1/(8x)}\; e^{x}K_{i\rho}(x),
        \qquad x = 1/s = \frac{MR^2}{\hbar^2\beta_\epsilon}.

    Raises
    ------
    UnsupportedModeError
        In real-time mode, where :math:`K_{i\rho}` of imaginary argument would
        be required.
    """
    if not model.euclidean:
        raise UnsupportedModeError("Fourier coefficients are evaluated in Euclidean mode only")
    x = 1.0 / model.s(eps)
    return math.sqrt(2.0 * x / math.pi) * math.exp(0.125 / x) * bessel_k_imag(rho, x, scaled=True)


def spectral_propagator(Theta, time, model, rel_tol=1e-10, return_error=False):
    r"""Propagator as an integral over the principal series.

    .. math::
        K(\Theta) = \frac{\Gamma(\frac{d+1}{2})}{2\pi^{(d+1)/2}R^d}
        \int_0^\infty d\rho\; d_l(\rho)\, e^{-s\rho^2/2}\,
        D^{l(\rho)}_{00}(\Theta)

    evaluated by composite Gauss-Legendre quadrature on :math:`[0, \rho_{max}]`
    with :math:`e^{-s\rho_{max}^2/2} = e^{-40}`; the panel count is doubled until
    two successive results agree to ``rel_tol`` relative to the
    coincidence-point scale.

    In real-time mode odd dimensions are delegated to :func:`closed_form_odd`
    (the continuation of the final formula); even dimensions are refused.
    """
    d = model.d
    if not model.euclidean:
        if d % 2:
            val = closed_form_odd(Theta, time, model)
            return (val, 0.0) if return_error else val
        raise UnsupportedModeError("real-time spectral integral is only available for odd d")
    s = model.s(time)
    Theta = float(Theta)
    if Theta < 0:
        raise DomainError("Theta must be non-negative")
    ct = math.cosh(Theta)
    rho_max = math.sqrt(2.0 * _CUT / s)
    # scale of the integrand near its peak, for a relative stopping rule
    scale = s ** (-0.5 * d)
    panels = 2 + int(rho_max * (Theta + 1.0) / 6.0)
    prev = None
    const = math.gamma(0.5 * (d + 1)) / (2.0 * math.pi ** (0.5 * (d + 1)))
    while True:
        rho, wd = _rho_grid(d, rho_max, panels)
        vals = wd * np.exp(-0.5 * s * rho * rho) * gegenbauer_conical(d, rho, ct)
        cur = const * math.fsum(vals)
        if prev is not None:
            err = abs(cur - prev)
            if err <= rel_tol * scale:
                break
            if panels > 2000:
                raise ConvergenceError("spectral integral unconverged", estimate=err)
        prev = cur
        panels *= 2
    cur /= model.R**d
    err /= model.R**d
    return (cur, err) if return_error else cur


# ---------------------------------------------------------------------------
# Closed forms: the derivative tower -(1/(2 pi sinh)) d/dTheta applied symbolically
# ---------------------------------------------------------------------------

def _tower(start, depth, s):
    r"""Apply :math:`T = -(2\pi\sinh\Theta)^{-1}\partial_\Theta` ``depth`` times.

    Expressions are dicts ``{(a, b, k): c}`` standing for
    :math:`\sum c\,\Theta^a\cosh^b\Theta\,\sinh^{-k}\Theta\,e^{-\Theta^2/2s}`;
    the family is closed under :math:`T`.
    """
    terms = dict(start)
    f = -1.0 / (2.0 * math.pi)
    for _ in range(depth):
        new = {}

        def add(key, c):
            new[key] = new.get(key, 0.0) + c

        for (a, b, k), c in terms.items():
            if a:
                add((a - 1, b, k + 1), f * a * c)
            if b:
                add((a, b - 1, k), f * b * c)
            if k:
                add((a, b + 1, k + 2), -f * k * c)
            add((a + 1, b, k + 1), -f * c / s)
        terms = {key: c for key, c in sorted(new.items()) if c != 0}
    return terms


def _eval_terms(terms, x, s):
    """Evaluate a tower expression on a float array."""
    x = np.asarray(x, dtype=float)
    ch, sh = np.cosh(x), np.sinh(x)
    total = 0.0
    for (a, b, k), c in terms.items():
        total = total + c * x**a * ch**b / sh**k
    return total * np.exp(-x * x / (2.0 * s))


# below this angle the tower terms cancel and are summed in extended precision
_SMALL = 0.5


def _eval_terms_mp(terms, x, s):
    kmax = max(k for (_, _, k) in terms)
    x = max(float(x), 1e-20)
    dps = 20 + int(kmax * max(0.0, -math.log10(x))) + 5 * kmax
    with mpmath.workdps(dps):
        X = mpmath.mpf(x)
        S = mpmath.mpc(s) if isinstance(s, complex) else mpmath.mpf(s)
        ch, sh = mpmath.cosh(X), mpmath.sinh(X)
        tot = mpmath.mpf(0)
        for (a, b, k), c in terms.items():
            C = mpmath.mpc(c) if isinstance(c, complex) else mpmath.mpf(c)
            tot += C * X**a * ch**b / sh**k
        val = tot * mpmath.exp(-X * X / (2 * S))
        return complex(val) if isinstance(s, complex) else float(val)


def _eval_tower(terms, x, s):
    x = np.asarray(x, dtype=float)
    cancels = len(terms) > 1
    if not cancels:
        (a, b, k), c = next(iter(terms.items()))
        if a >= k:  # Theta^a / sinh^k Theta is regular at zero
            xs = np.where(x == 0, 1.0, x)
            ratio = np.where(x == 0, 1.0, xs / np.sinh(xs)) ** k * x ** (a - k)
            return c * ratio * np.cosh(x) ** b * np.exp(-x * x / (2.0 * s))
    out = np.asarray(_eval_terms(terms, np.maximum(x, _SMALL), s), dtype=complex if isinstance(s, complex) else float)
    small = x < _SMALL
    if np.any(small):
        out = out.copy()
        idx = np.flatnonzero(small)
        flat = out.reshape(-1)
        xf = x.reshape(-1)
        for i in idx:
            flat[i] = _eval_terms_mp(terms, xf[i], s)
    return out


def closed_form_odd(Theta, time, model):
    r"""Closed form of the propagator for odd ``d``.

    .. math::
        K(\Theta) = R^{-d}(2\pi s)^{-1/2}
        \left(\frac{-1}{2\pi\sinh\Theta}\frac{\partial}{\partial\Theta}\right)^{(d-1)/2}
        e^{-\Theta^2/2s}

    The derivatives are taken exactly on the family
    :math:`\Theta^a\cosh^b\Theta\sinh^{-k}\Theta\,e^{-\Theta^2/2s}`.  Near
    :math:`\Theta = 0`, where the family's terms cancel, they are summed in
    extended precision; the coincidence value is the ``Theta -> 0`` limit.
    Works in both modes (complex ``s`` in real time).
    """
    d = model.d
    if d % 2 == 0:
        raise ParityError("closed_form_odd needs odd d")
    s = model.s(time)
    terms = _tower({(0, 0, 0): 1.0}, (d - 1) // 2, s)
    val = _eval_tower(terms, Theta, s) * (2.0 * np.pi * s) ** -0.5 / model.R**d
    if model.euclidean:
        val = np.real(val)
    return val[()] if np.ndim(val) == 0 else val


def closed_form_even(Theta, time, model, panels=16, nodes=24):
    r"""Closed form of the propagator for even ``d`` (Euclidean mode).

    .. math::
        K(\Theta) = \frac{\sqrt2}{R^d}(2\pi s)^{-3/2}
        \left(\frac{-1}{2\pi\sinh\Theta}\frac{\partial}{\partial\Theta}\right)^{(d-2)/2}
        \int_\Theta^\infty \frac{z\,e^{-z^2/2s}\,dz}{\sqrt{\cosh z - \cosh\Theta}}

    With :math:`\cosh z = \cosh\Theta + u^2` the integral becomes
    :math:`2\int_0^\infty F(z(u))\,du`, :math:`F(z) = z e^{-z^2/2s}/\sinh z`,
    free of the endpoint singularity, and the derivative tower passes under
    the integral as the same operator acting on :math:`F` in the variable
    :math:`z`.  The ``u`` integral uses composite Gauss-Legendre panels whose
    breakpoints are equally spaced in ``z`` up to the Gaussian cutoff.
    """
    d = model.d
    if d % 2:
        raise ParityError("closed_form_even needs even d")
    if not model.euclidean:
        raise UnsupportedModeError("the even-d closed form is evaluated in Euclidean mode only")
    s = model.s(time)
    terms = _tower({(1, 0, 1): 1.0}, (d - 2) // 2, s)
    Theta = np.asarray(Theta, dtype=float)
    flat = Theta.reshape(-1)
    out = np.empty(flat.shape)
    xg, wg = np.polynomial.legendre.leggauss(nodes)
    chunk = max(1, 4096 // (panels * nodes))
    for start in range(0, flat.size, chunk):
        th = flat[start:start + chunk][:, None]
        gap0 = 2.0 * np.sinh(0.5 * th) ** 2  # cosh(Theta) - 1
        z_max = np.sqrt(th * th + 2.0 * _CUT * s)
        zb = th + (z_max - th) * np.linspace(0.0, 1.0, panels + 1)[None, :]
        ub = np.sqrt(2.0 * np.sinh(0.5 * (zb + th)) * np.sinh(0.5 * (zb - th)))
        a, b = ub[:, :-1, None], ub[:, 1:, None]
        u = 0.5 * (b - a) * (xg + 1.0) + a
        w = 0.5 * (b - a) * wg
        z = 2.0 * np.arcsinh(np.sqrt(0.5 * (gap0[:, :, None] + u * u)))
        vals = _eval_tower(terms, z, s)
        out[start:start + chunk] = 2.0 * np.sum(vals * w, axis=(1, 2))
    val = out.reshape(Theta.shape) * math.sqrt(2.0) * (2.0 * math.pi * s) ** -1.5 / model.R**d
    return val[()] if val.ndim == 0 else val


def closed_form(Theta, time, model):
    """Dispatch to the closed form matching the parity of ``d``."""
    if model.d % 2:
        return closed_form_odd(Theta, time, model)
    return closed_form_even(Theta, time, model)


def limit_check(rho, z, N):
    r"""N-fold product of short-time coefficients against its limit.

    Returns ``(value, target)`` with
    :math:`value = [\sqrt{2Nz/\pi}\,e^{1/(8Nz)}e^{Nz}K_{i\rho}(Nz)]^N`
    accumulated as ``exp(N log(...))`` and :math:`target = e^{-\rho^2/2z}`.
    The difference is of order ``1/N``.
    """
    if not z > 0:
        raise DomainError("z must be positive")
    if int(N) != N or N < 1:
        raise DomainError("N must be a positive integer")
    x = N * z
    lam = math.sqrt(2.0 * x / math.pi) * math.exp(0.125 / x) * bessel_k_imag(rho, x, scaled=True)
    if lam <= 0:
        raise DomainError("coefficient is not positive at this slicing")
    return math.exp(N * math.log(lam)), math.exp(-rho * rho / (2.0 * z))


def semigroup_residual(Theta, beta1, beta2, model, n_radial=256, n_angle=48):
    """Absolute residual of ``K(beta1) * K(beta2) = K(beta1 + beta2)`` at separation ``Theta``.

    The convolution over the hyperboloid uses :func:`geodesic_convolve` on the
    closed-form kernels (Euclidean mode).
    """
    if not model.euclidean:
        raise UnsupportedModeError("semigroup check runs in Euclidean mode")

    def kernel(beta):
        t_max = math.sqrt(2.0 * _CUT * model.s(beta)) + 2.0
        return KernelOnAngle(lambda t: closed_form(t, beta, model), model.descriptor, t_max)

    conv = geodesic_convolve(kernel(beta1), kernel(beta2), Theta, n_radial, n_angle)
    return abs(conv - float(closed_form(Theta, beta1 + beta2, model)))
