r"""The isotropic harmonic oscillator in d dimensions through its SU(1,1) symmetry.

The propagator splits into partial waves,

.. math::
    K(x'', x'; \tau) = \frac{\Gamma(d/2)}{2\pi^{d/2}}
    \sum_l K_l(r'', r'; \tau)\, d_l\, D^l_{00}(\cos\gamma),

and each radial kernel is a matrix element of :math:`e^{-2i\omega\tau J_3}`
on the continuous basis diagonalizing :math:`K_+ = \alpha x^2`,
:math:`\alpha = M\omega/2\hbar`:

.. math::
    K_l(r'', r'; \tau) = 2\alpha (r'r'')^{-(d-2)/2}\,
    v_{l+(d-2)/2}(\alpha r''^2, \alpha r'^2; \omega\tau).

Euclidean quantities use :math:`\sigma = \hbar\omega\beta` in place of
:math:`i\omega\tau`; they are real and positive, and all integral identities
are verified in that form.  Radial kernels are densities for the measure
:math:`r^{d-1}dr`.
"""

import cmath
import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import mpmath
import numpy as np
from scipy import integrate

from .errors import DomainError, SingularTimeError
from .specfun import _gegenbauer_zonal_table, bessel_i, bessel_ive, gauss_legendre
from .zonal import GroupDescriptor, sphere_area

__all__ = [
    "OscillatorModel",
    "ChannelLabel",
    "VArgs",
    "eta_of_r",
    "v_function",
    "v_function_doubled",
    "v_matrix_element_identity",
    "v_semigroup_residual",
    "weber_residual",
    "short_time_radial",
    "free_radial_kernel",
    "radial_propagator",
    "full_propagator",
    "mehler_kernel",
    "image_method_kernel",
    "plane_wave_expansion_residual",
    "spectrum",
    "radial_green",
    "radial_semigroup_residual",
    "radial_green_closed_form",
    "slicing_angles",
    "partial_wave_dimension",
]

MODES = ("euclidean", "real-time")


@dataclass(frozen=True)
class OscillatorModel:
    """Isotropic oscillator parameters.

    ``mode`` fixes the meaning of time arguments: inverse energy ``beta``
    (Euclidean) or time ``tau`` (real time).
    """

    d: int
    M: float = 1.0
    omega: float = 1.0
    hbar: float = 1.0
    mode: str = "euclidean"

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 1:
            raise DomainError("dimension must be a positive integer")
        if not (self.M > 0 and self.omega > 0 and self.hbar > 0):
            raise DomainError("M, omega and hbar must be positive")
        if self.mode not in MODES:
            raise DomainError(f"mode must be one of {MODES}")

    @property
    def alpha(self):
        return self.M * self.omega / (2.0 * self.hbar)

    @property
    def euclidean(self):
        return self.mode == "euclidean"

    def angle(self, time):
        """``sigma = hbar omega beta`` in Euclidean mode, ``omega tau`` in real time."""
        if self.euclidean:
            if not time > 0:
                raise DomainError("beta must be positive")
            return self.hbar * self.omega * float(time)
        return self.omega * float(time)


@dataclass(frozen=True)
class ChannelLabel:
    """Angular-momentum channel ``l`` in dimension ``d``."""

    l: int
    d: int

    def __post_init__(self):
        if int(self.l) != self.l or self.l < 0:
            raise DomainError("l must be a non-negative integer")
        if int(self.d) != self.d or self.d < 2:
            raise DomainError("d must be an integer >= 2")

    @property
    def J(self):
        """Bargmann index ``J = -l/2 - d/4``."""
        return -0.5 * self.l - 0.25 * self.d

    @property
    def bessel_index(self):
        """``l + (d - 2)/2``, equal to ``-2J - 1``."""
        return self.l + 0.5 * (self.d - 2)


@dataclass(frozen=True)
class VArgs:
    """Arguments of the continuous-basis matrix element.

    ``phi`` is the real-time angle in ``(0, pi)`` when ``euclidean`` is
    false, and the Euclidean angle ``sigma > 0`` otherwise.
    """

    J: float
    eta: float
    eta_prime: float
    phi: float
    euclidean: bool = True

    def __post_init__(self):
        if not self.J < 0:
            raise DomainError("J must be negative")
        if self.eta < 0 or self.eta_prime < 0:
            raise DomainError("eta arguments must be non-negative")
        if self.euclidean:
            if not self.phi > 0:
                raise DomainError("Euclidean angle must be positive")
        elif math.sin(self.phi) == 0.0 or self.phi % math.pi == 0.0:
            raise SingularTimeError("v-function is singular at phi in pi*Z")

    @property
    def order(self):
        return -2.0 * self.J - 1.0


def eta_of_r(r, model):
    r"""Eigenvalue :math:`\eta = \alpha r^2` of :math:`K_+` at radius ``r``."""
    if np.any(np.asarray(r) < 0):
        raise DomainError("r must be non-negative")
    return model.alpha * np.asarray(r, dtype=float) ** 2


def _v_euclid(nu, eta, eta_p, sigma):
    # csch(s) exp(-(eta+eta')coth s) I_nu(2 sqrt(eta eta') csch s), written
    # with the scaled Bessel function so nothing overflows
    sq, sqp = np.sqrt(eta), np.sqrt(eta_p)
    x = 2.0 * sq * sqp / np.sinh(sigma)
    expo = -(sq - sqp) ** 2 / np.tanh(sigma) - 2.0 * sq * sqp * np.tanh(0.5 * sigma)
    return np.exp(expo) * bessel_ive(nu, x) / np.sinh(sigma)


def v_function(args):
    r"""Continuous-basis matrix element :math:`v_\lambda(\eta, \eta'; \varphi)`.

    Real time:

    .. math::
        v = -i\csc\varphi\, e^{i(\eta+\eta')\cot\varphi}\,
        I_\lambda(-2i\sqrt{\eta\eta'}\csc\varphi)

    Euclidean (:math:`\varphi = -i\sigma`):

    .. math::
        v_E = \operatorname{csch}\sigma\, e^{-(\eta+\eta')\coth\sigma}\,
        I_\lambda(2\sqrt{\eta\eta'}\operatorname{csch}\sigma)

    with :math:`\lambda = -2J-1`.
    """
    nu = args.order
    if args.euclidean:
        return float(_v_euclid(nu, args.eta, args.eta_prime, args.phi))
    phi = args.phi
    csc = 1.0 / math.sin(phi)
    cot = math.cos(phi) / math.sin(phi)
    z = -2j * math.sqrt(args.eta * args.eta_prime) * csc
    return -1j * csc * cmath.exp(1j * (args.eta + args.eta_prime) * cot) * bessel_i(nu, z)


def v_function_doubled(J, eta, eta_prime, theta, euclidean=False):
    r"""The same matrix element written as a function of the doubled angle.

    .. math::
        v(2\varphi) = \frac{1}{i\sin\varphi}\, e^{i(\eta+\eta')\cot\varphi}\,
        I_{-2J-1}\!\left(\frac{2\sqrt{\eta\eta'}}{i\sin\varphi}\right),
        \qquad \varphi = \theta/2,

    with the Euclidean form obtained from :math:`\varphi = -i\sigma`.
    """
    half = 0.5 * theta
    nu = -2.0 * J - 1.0
    if euclidean:
        s = math.sinh(half)
        c = math.cosh(half)
        x = 2.0 * math.sqrt(eta * eta_prime) / s
        # exp(-(eta+eta') coth) I(x) = exp(x - (eta+eta') coth) ive(x)
        return math.exp(x - (eta + eta_prime) * c / s) * float(bessel_ive(nu, x)) / s
    s = math.sin(half)
    cot = math.cos(half) / s
    return (1.0 / (1j * s)) * cmath.exp(1j * (eta + eta_prime) * cot) * bessel_i(
        nu, 2.0 * math.sqrt(eta * eta_prime) / (1j * s))


def v_matrix_element_identity(J, eta, eta_prime, phi, euclidean=False):
    """Difference between the two written forms of the v-function.

    One form takes the angle ``phi`` directly, the other the doubled angle
    ``2 phi``; both describe the same matrix element.
    """
    a = v_function(VArgs(J, eta, eta_prime, phi, euclidean))
    b = v_function_doubled(J, eta, eta_prime, 2.0 * phi, euclidean)
    return abs(a - b)


def _quad(f, a, b, epsrel=1e-13, epsabs=0.0):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        return integrate.quad(f, a, b, epsabs=epsabs, epsrel=epsrel, limit=200)


def _panel_quadrature(f, a, b, step, graded=12, nodes=32):
    """Composite Gauss-Legendre on ``[a, b]``, vectorized over all nodes.

    Panels have width at most ``step``; the first one is further split
    geometrically toward ``a`` so that algebraic endpoint behaviour such as
    ``r**p`` with non-integer ``p`` is resolved.
    """
    n_uniform = max(1, int(math.ceil((b - a) / step)))
    edges = list(np.linspace(a, b, n_uniform + 1))
    first = edges[1] - a
    fine = [a + first * 2.0 ** (-k) for k in range(graded, 0, -1)]
    edges = [a] + fine + edges[1:]
    xg, wg = gauss_legendre(nodes, -1.0, 1.0)
    lo = np.array(edges[:-1])[:, None]
    hi = np.array(edges[1:])[:, None]
    x = 0.5 * (hi - lo) * (xg + 1.0) + lo
    w = 0.5 * (hi - lo) * wg
    return math.fsum(np.ravel(f(x) * w))


def v_semigroup_residual(J, eta2, eta1, sigma1, sigma2):
    r"""Relative residual of :math:`\int_0^\infty v_E(\eta'',\eta;\sigma_1)v_E(\eta,\eta';\sigma_2)\,d\eta = v_E(\eta'',\eta';\sigma_1+\sigma_2)`.

    The integral is taken in :math:`t = \sqrt\eta` by composite
    Gauss-Legendre quadrature out to where both factors are below
    :math:`e^{-40}` of their peaks.
    """
    nu = -2.0 * J - 1.0
    if not (sigma1 > 0 and sigma2 > 0):
        raise DomainError("Euclidean angles must be positive")

    def f(t):
        eta = t * t
        return 2.0 * t * _v_euclid(nu, eta2, eta, sigma1) * _v_euclid(nu, eta, eta1, sigma2)

    # Gaussian widths in t are sqrt(tanh(sigma)); cover 40 e-folds past the far endpoint
    width = math.sqrt(max(math.tanh(sigma1), math.tanh(sigma2)))
    t_hi = max(math.sqrt(eta2), math.sqrt(eta1)) + math.sqrt(40.0) * width + 1.0
    val = _panel_quadrature(f, 0.0, t_hi, 0.5 * width)
    target = float(_v_euclid(nu, eta2, eta1, sigma1 + sigma2))
    return abs(val - target) / abs(target)


def _split(a, b, n):
    edges = np.linspace(a, b, n + 1)
    return list(zip(edges[:-1], edges[1:]))


def weber_residual(lam, a, b, beta):
    r"""Residual of Weber's second exponential integral in Euclidean form.

    .. math::
        \int_0^\infty r\,e^{-\beta r^2} I_\lambda(ar) I_\lambda(br)\,dr
        = \frac{1}{2\beta} e^{(a^2+b^2)/4\beta} I_\lambda\!\left(\frac{ab}{2\beta}\right)

    The integrand behaves as :math:`e^{-\beta(r - r_0)^2}` about
    :math:`r_0 = (a+b)/2\beta`; composite Gauss-Legendre quadrature covers ten
    widths beyond it.  The residual is relative to the right side, or
    absolute when the right side vanishes (``a = 0`` or ``b = 0`` with
    ``lam > 0``).
    """
    if not lam > -1:
        raise DomainError("order must exceed -1")
    if not beta > 0:
        raise DomainError("Weber's integral diverges unless beta > 0")
    if a < 0 or b < 0:
        raise DomainError("a and b must be non-negative")
    if lam < 0:
        raise DomainError("negative orders are not supported by bessel_ive")

    def f(r):
        return r * np.exp(-beta * r * r + (a + b) * r) * bessel_ive(lam, a * r) * bessel_ive(lam, b * r)

    width = 1.0 / math.sqrt(beta)
    hi = (a + b) / (2.0 * beta) + 10.0 * width
    val = _panel_quadrature(f, 0.0, hi, 0.5 * width)
    x = a * b / (2.0 * beta)
    rhs = math.exp((a * a + b * b) / (4.0 * beta) + x) * float(bessel_ive(lam, x)) / (2.0 * beta)
    if rhs == 0.0:
        return abs(val)
    return abs(val - rhs) / abs(rhs)


def _check_radii(*rs):
    for r in rs:
        if np.any(np.asarray(r) <= 0):
            raise DomainError("radii must be positive")


def radial_propagator(channel, r2, r1, time, model, log=False):
    r"""Finite-time radial kernel :math:`K_l(r'', r')`.

    Euclidean (:math:`\sigma = \hbar\omega\beta`):

    .. math::
        K_l = 2\alpha (r'r'')^{-(d-2)/2}\operatorname{csch}\sigma\,
        e^{-\alpha(r'^2+r''^2)\coth\sigma}\,
        I_{l+(d-2)/2}(2\alpha r'r''\operatorname{csch}\sigma)

    Real time: the same with :math:`\sigma \to i\omega\tau`, i.e. the
    :math:`-2i\alpha\csc(\omega\tau)` form; singular at :math:`\omega\tau \in \pi\mathbb{Z}`.

    With ``log=True`` (Euclidean only) returns :math:`\log K_l`, which stays
    finite far into the large-``beta`` tail.
    """
    _check_radii(r2, r1)
    nu = channel.bessel_index
    a = model.alpha
    half = 0.5 * (model.d - 2)
    if model.euclidean:
        sigma = model.angle(time)
        r2a, r1a = np.asarray(r2, dtype=float), np.asarray(r1, dtype=float)
        x = 2.0 * a * r1a * r2a / math.sinh(min(sigma, 700.0))
        expo = -a * ((r2a - r1a) ** 2 / np.tanh(sigma) + 2.0 * r1a * r2a * np.tanh(0.5 * sigma))
        log_sinh = sigma + math.log1p(-math.exp(-2.0 * sigma)) - math.log(2.0)
        logk = (math.log(2.0 * a) - half * np.log(r1a * r2a) - log_sinh + expo
                + np.log(bessel_ive(nu, x)))
        out = logk if log else np.exp(logk)
        return out[()] if np.ndim(out) == 0 else out
    if log:
        raise DomainError("log output is available in Euclidean mode only")
    phi = model.angle(time)
    s = math.sin(phi)
    if abs(s) < 1e-14 * max(1.0, abs(phi)):
        raise SingularTimeError("caustic: omega*tau is a multiple of pi")
    cot = math.cos(phi) / s
    r2, r1 = float(r2), float(r1)
    return (-2j * a * (r1 * r2) ** (-half) / s * cmath.exp(1j * a * (r1 * r1 + r2 * r2) * cot)
            * bessel_i(nu, -2j * a * r1 * r2 / s))


def short_time_radial(channel, r, r_prime, eps, model, form="feynman"):
    r"""Radial kernel of one time slice.

    ``form="feynman"`` is the partial wave of the short-time kernel with the
    potential split symmetrically between the endpoints.  In Euclidean form,
    with :math:`\sigma = \hbar\omega\beta_\epsilon`,

    .. math::
        K_l = \frac{2\alpha}{\sigma}(rr')^{-(d-2)/2}
        e^{-\frac{\alpha}{\sigma}(r^2+r'^2) - \frac{\alpha\sigma}{2}(r^2+r'^2)}
        I_{l+(d-2)/2}\!\left(\frac{2\alpha rr'}{\sigma}\right),

    and in real time

    .. math::
        K_l = -\frac{2i\alpha}{\omega\epsilon}(rr')^{-(d-2)/2}
        \exp\!\left[\frac{i\alpha}{\omega\epsilon}\left(1-\tfrac12\omega^2\epsilon^2\right)(r^2+r'^2)\right]
        I_{l+(d-2)/2}\!\left(\frac{2\alpha rr'}{i\omega\epsilon}\right).

    ``form="v"`` is the exact finite-angle kernel evaluated at the slice angle
    :math:`\sin\varphi_\epsilon = \omega\epsilon` (Euclidean:
    :math:`\sinh\sigma_\epsilon = \hbar\omega\beta_\epsilon`), whose
    convolutions add angles exactly.

    Raises
    ------
    DomainError
        For ``form="v"`` in real time when ``omega * eps >= 1``.
    """
    _check_radii(r, r_prime)
    if form not in ("feynman", "v"):
        raise DomainError(f"unknown short-time form {form!r}")
    a = model.alpha
    nu = channel.bessel_index
    half = 0.5 * (model.d - 2)
    if form == "v":
        if model.euclidean:
            sig = math.asinh(model.angle(eps))
            return radial_propagator(channel, r, r_prime, sig / (model.hbar * model.omega), model)
        phi, _ = slicing_angles(model.omega, eps, 1)
        return radial_propagator(channel, r, r_prime, phi / model.omega, model)
    if model.euclidean:
        sigma = model.angle(eps)
        ra, rb = np.asarray(r, dtype=float), np.asarray(r_prime, dtype=float)
        c = a / sigma
        out = (2.0 * c * (ra * rb) ** (-half) * np.exp(-c * (ra - rb) ** 2 - 0.5 * a * sigma * (ra * ra + rb * rb))
               * bessel_ive(nu, 2.0 * c * ra * rb))
        return out[()] if np.ndim(out) == 0 else out
    we = model.omega * float(eps)
    c = a / we
    r, r_prime = float(r), float(r_prime)
    return (-2j * c * (r * r_prime) ** (-half) * cmath.exp(1j * c * (1.0 - 0.5 * we * we) * (r * r + r_prime * r_prime))
            * bessel_i(nu, 2.0 * c * r * r_prime / 1j))


def free_radial_kernel(channel, r, r_prime, beta, M=1.0, hbar=1.0):
    r"""Euclidean radial kernel of the free particle.

    .. math::
        K_l = \frac{M}{\hbar^2\beta}(rr')^{-(d-2)/2}
        e^{-M(r^2+r'^2)/2\hbar^2\beta}\, I_{l+(d-2)/2}\!\left(\frac{Mrr'}{\hbar^2\beta}\right)
    """
    _check_radii(r, r_prime)
    c = M / (hbar * hbar * beta)
    ra, rb = np.asarray(r, dtype=float), np.asarray(r_prime, dtype=float)
    half = 0.5 * (channel.d - 2)
    out = c * (ra * rb) ** (-half) * np.exp(-0.5 * c * (ra - rb) ** 2) * bessel_ive(channel.bessel_index, c * ra * rb)
    return out[()] if np.ndim(out) == 0 else out


def partial_wave_dimension(l, d):
    r"""Dimension :math:`d_l = (2l+d-2)(l+d-3)!/(l!(d-2)!)` of the degree-``l`` harmonics on :math:`S^{d-1}`."""
    return float(GroupDescriptor("sphere", d).plancherel(l))


class Truncated(NamedTuple):
    value: float
    error: float


def full_propagator(x2, x1, time, model, L_max=40):
    r"""Full Euclidean propagator from its partial-wave expansion.

    .. math::
        K = \frac{\Gamma(d/2)}{2\pi^{d/2}}\sum_{l=0}^{L_{max}}
        K_l(r'', r')\, d_l\, \hat C_l^{(d-2)/2}(\cos\gamma)

    with :math:`\hat C` the Gegenbauer polynomial normalized to one at 1.

    Returns
    -------
    Truncated
        ``(value, error)`` where ``error`` is the magnitude of the last term.
    """
    if not model.euclidean:
        raise DomainError("full_propagator is evaluated in Euclidean mode")
    d = model.d
    x2 = np.asarray(x2, dtype=float)
    x1 = np.asarray(x1, dtype=float)
    if x2.shape != (d,) or x1.shape != (d,):
        raise DomainError(f"points must have {d} coordinates")
    r2, r1 = float(np.linalg.norm(x2)), float(np.linalg.norm(x1))
    _check_radii(r2, r1)
    cosg = float(np.clip(np.dot(x2, x1) / (r2 * r1), -1.0, 1.0))
    zon = _gegenbauer_zonal_table(L_max, 0.5 * (d - 2), cosg)
    terms = [float(radial_propagator(ChannelLabel(l, d), r2, r1, time, model)) * partial_wave_dimension(l, d) * zon[l]
             for l in range(L_max + 1)]
    pref = 1.0 / sphere_area(d - 1)
    return Truncated(pref * math.fsum(terms), pref * abs(terms[-1]))


def mehler_kernel(x, y, beta, M=1.0, omega=1.0, hbar=1.0):
    r"""Euclidean one-dimensional oscillator kernel (Mehler's formula).

    .. math::
        k(x, y) = \sqrt{\frac{\alpha'}{\pi\sinh\sigma}}
        \exp\!\left[-\alpha'\frac{(x^2+y^2)\cosh\sigma - 2xy}{\sinh\sigma}\right],
        \qquad \alpha' = \frac{M\omega}{\hbar},\ \sigma = \hbar\omega\beta.

    Arrays broadcast; for several dimensions multiply over coordinates.
    """
    a = M * omega / hbar
    s = hbar * omega * beta
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    expo = -0.25 * a * ((x - y) ** 2 / np.tanh(0.5 * s) + (x + y) ** 2 * np.tanh(0.5 * s))
    return np.sqrt(a / (2.0 * np.pi * np.sinh(s))) * np.exp(expo)


def image_method_kernel(r2, r1, beta, model):
    r"""The d=3, l=0 radial kernel from the one-dimensional Mehler kernel.

    .. math::
        K_0(r'', r') = \frac{k(r'', r') - k(r'', -r')}{r'r''},

    since :math:`rK_0` propagates odd functions of the half-line.
    """
    par = (model.M, model.omega, model.hbar)
    return (mehler_kernel(r2, r1, beta, *par) - mehler_kernel(r2, -r1, beta, *par)) / (r1 * r2)


def plane_wave_expansion_residual(z, cos_gamma, L_max, d):
    r"""Residual of the Gegenbauer expansion of a plane wave.

    .. math::
        e^{z\cos\gamma} = \left(\frac2z\right)^\lambda\Gamma(\lambda)
        \sum_l (l+\lambda) I_{l+\lambda}(z)\, C^\lambda_l(\cos\gamma),
        \qquad \lambda = \frac{d-2}{2}.

    The sum is evaluated in the equivalent form
    :math:`\Gamma(\lambda+1)(2/z)^\lambda[I_\lambda + \sum_{l\ge1} c_l I_{l+\lambda}\hat C_l]`
    with :math:`c_l = 2(l+\lambda)(2\lambda+1)_{l-1}/l!`, which is regular at
    :math:`\lambda = 0` and reduces there to
    :math:`I_0(z) + 2\sum_{l\ge1} I_l(z) T_l(\cos\gamma)`.
    """
    if d < 2:
        raise DomainError("d must be >= 2")
    z = complex(z)
    if abs(z) > 50:
        raise DomainError("|z| must not exceed 50")
    lam = 0.5 * (d - 2)
    zon = _gegenbauer_zonal_table(L_max, lam, float(cos_gamma))
    if z == 0:
        return 0.0
    terms = [bessel_i(lam, z)]
    c = 1.0
    for l in range(1, L_max + 1):
        # c_l / (l + lam) = 2 (2 lam + 1)_{l-1} / l!
        c = 2.0 if l == 1 else c * (2.0 * lam + l - 1) / l
        terms.append(c * (l + lam) * bessel_i(l + lam, z) * zon[l])
    total = complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))
    series = cmath.exp(math.lgamma(lam + 1.0) + lam * cmath.log(2.0 / z)) * total
    return abs(cmath.exp(z * float(cos_gamma)) - series)


def spectrum(n, model):
    r"""Energy :math:`E_n = \hbar\omega(n + d/2)`."""
    if int(n) != n or n < 0:
        raise DomainError("n must be a non-negative integer")
    return model.hbar * model.omega * (n + 0.5 * model.d)


def radial_green(channel, r2, r1, E, model):
    r"""Euclidean radial Green function as a Laplace transform.

    .. math::
        G_l(r'', r'; E) = \int_0^\infty d\beta\, e^{\beta E} K_l(r'', r'; \beta)
        = \langle r''|(H_l - E)^{-1}|r'\rangle

    Requires :math:`E < \hbar\omega(l + d/2)`, the bottom of the channel.
    """
    if not model.euclidean:
        raise DomainError("radial_green is defined in Euclidean mode")
    E0 = model.hbar * model.omega * (channel.l + 0.5 * model.d)
    if not E < E0:
        raise DomainError(f"Laplace transform diverges for E >= {E0}")
    hw = model.hbar * model.omega

    def f(sigma):
        # integrate in sigma, carrying the decaying exponential explicitly
        return math.exp(float(radial_propagator(channel, r2, r1, sigma / hw, model, log=True)) + sigma * E / hw)

    # beyond sigma_max the integrand has decayed by exp(-40) from its tail scale
    sigma_max = 4.0 + 40.0 * hw / (E0 - E)
    edges = [0.0, 0.05, 0.25, 1.0, 4.0, sigma_max]
    val = math.fsum(_quad(f, a, b, epsrel=1e-12)[0] for a, b in zip(edges[:-1], edges[1:]))
    return val / hw


def radial_semigroup_residual(channel, r2, r1, beta1, beta2, model):
    r"""Relative residual of :math:`\int_0^\infty r^{d-1}dr\,K_l(r'', r;\beta_1)K_l(r, r';\beta_2) = K_l(r'', r';\beta_1+\beta_2)`."""
    if not model.euclidean:
        raise DomainError("semigroup check runs in Euclidean mode")
    _check_radii(r2, r1)
    d = model.d
    # both kernels fall below exp(-40) of their peak beyond r_max
    r_max = max(r1, r2) + math.sqrt(40.0 / model.alpha)

    def f(r):
        return (r ** (d - 1) * radial_propagator(channel, r2, r, beta1, model)
                * radial_propagator(channel, r, r1, beta2, model))

    val = _panel_quadrature(f, 0.0, r_max, 0.25)
    exact = float(radial_propagator(channel, r2, r1, beta1 + beta2, model))
    return abs(val - exact) / abs(exact)


def radial_green_closed_form(channel, r2, r1, E, model):
    r"""Whittaker-function form of :func:`radial_green`.

    .. math::
        G_l = \frac{(rr')^{-d/2}}{\hbar\omega}
        \frac{\Gamma(\tfrac12 + \mu - \kappa)}{\Gamma(1 + \nu)}
        W_{\kappa,\mu}(2\alpha r_>^2)\, M_{\kappa,\mu}(2\alpha r_<^2),
        \qquad \kappa = \frac{E}{2\hbar\omega},\ \mu = \frac{\nu}{2},

    with :math:`\nu = l + (d-2)/2`.  Evaluated with mpmath.
    """
    _check_radii(r2, r1)
    E0 = model.hbar * model.omega * (channel.l + 0.5 * model.d)
    if not E < E0:
        raise DomainError(f"Green function is defined here for E < {E0}")
    hw = model.hbar * model.omega
    nu = channel.bessel_index
    kap, mu = E / (2.0 * hw), 0.5 * nu
    lo, hi = sorted((float(r1), float(r2)))
    a2 = 2.0 * model.alpha
    val = (mpmath.gamma(0.5 + mu - kap) / mpmath.gamma(1 + nu)
           * mpmath.whitw(kap, mu, a2 * hi * hi) * mpmath.whitm(kap, mu, a2 * lo * lo))
    return float(val) * (lo * hi) ** (-0.5 * model.d) / hw


def slicing_angles(omega, eps, N):
    r"""Per-slice angle :math:`\varphi_j = \arcsin(\omega\epsilon)` and total :math:`N\varphi_j`."""
    if omega < 0 or eps <= 0:
        raise DomainError("omega must be non-negative and eps positive")
    if int(N) != N or N < 1:
        raise DomainError("N must be a positive integer")
    we = omega * eps
    if we >= 1.0:
        raise DomainError("omega*eps >= 1: time slicing too coarse")
    phi = math.asin(we)
    return phi, N * phi
