"""
Free motion on the hyperboloid
==============================

The heat kernel on the d-dimensional hyperboloid can be written as an
integral over the principal series (the spectral form) or through a
derivative tower acting on a Gaussian in the geodesic angle.  The two routes
are independent; here they are compared, and the energy E = rho^2/2 of each
principal-series label is read off from the slope of the short-time
coefficient.
"""

import numpy as np

from zonalprop import hyperbolic as hyp
from zonalprop.zonal import spectrum_from_slope

thetas = np.linspace(0.0, 3.0, 7)
for d in (2, 3, 4, 5):
    model = hyp.HyperbolicModel(d)
    closed = hyp.closed_form(thetas, 0.8, model)
    spectral = np.array([hyp.spectral_propagator(t, 0.8, model) for t in thetas])
    print(f"d={d}: max |closed - spectral| = {np.max(np.abs(closed - spectral)):.2e}")

# real-time values come from the odd closed form, continued to imaginary s
rt = hyp.HyperbolicModel(3, mode="real-time")
print("real-time d=3 kernel at Theta=1, tau=0.5:", hyp.closed_form(1.0, 0.5, rt))

# E = -d lambda / d beta at beta = 0
model = hyp.HyperbolicModel(3)
for rho in (0.5, 1.0, 2.0):
    E = spectrum_from_slope(lambda b: hyp.fourier_coefficient(rho, b, model))
    print(f"rho={rho}: E from slope {E:.8f}, rho^2/2 = {rho * rho / 2}")

# the N-fold product of short-time coefficients approaches exp(-rho^2 / 2z)
for N in (100, 1000, 10000):
    value, target = hyp.limit_check(1.0, 1.0, N)
    print(f"N={N:6d}: {value:.8f} vs {target:.8f}")
