"""
Zonal harmonic analysis on the two-sphere
=========================================

A kernel that depends only on the angle between two points is diagonal in
the zonal basis.  We expand a von Mises kernel, resynthesize it, and check
that convolution on the sphere turns into multiplication of coefficients.
"""

import math

import numpy as np
from scipy import special

from zonalprop.zonal import (
    GroupDescriptor,
    KernelOnAngle,
    discrete_labels,
    geodesic_convolve,
    series_convolve,
    zonal_synthesize,
    zonal_transform,
)

S2 = GroupDescriptor("sphere", 3)

# exp(kappa cos theta) has coefficients sqrt(pi / 2 kappa) I_{l+1/2}(kappa)
kappa = 2.0
kernel = KernelOnAngle(lambda t: np.exp(kappa * np.cos(t)), S2)
series = zonal_transform(kernel, discrete_labels(20))
exact = math.sqrt(math.pi / (2 * kappa)) * special.iv(np.arange(21) + 0.5, kappa)
print("largest coefficient error:", np.max(np.abs(series.coeffs - exact)))

# back to angles
theta = np.linspace(0, math.pi, 5)
syn = zonal_synthesize(series, theta)
for t, v in zip(theta, syn.value):
    print(f"theta={t:.3f}  synthesized={v:.15f}  direct={math.exp(kappa * math.cos(t)):.15f}")
print("tail bound:", syn.error)

# convolution theorem: transform of k1 * k2 equals the product of transforms
k1 = KernelOnAngle(lambda t: np.exp(1.5 * np.cos(t)), S2)
k2 = KernelOnAngle(lambda t: np.exp(-3.0 * (1 - np.cos(t))), S2)
conv = KernelOnAngle(lambda t: np.array([geodesic_convolve(k1, k2, x) for x in np.ravel(t)]), S2)
labels = discrete_labels(12)
lhs = zonal_transform(conv, labels).coeffs
rhs = series_convolve(zonal_transform(k1, labels), zonal_transform(k2, labels)).coeffs
print("convolution theorem residual:", np.max(np.abs(lhs - rhs)))
