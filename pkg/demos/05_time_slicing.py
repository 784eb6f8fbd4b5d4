"""
Time slicing on a radial grid
=============================

The finite-time kernel is approximated by N short-time kernels chained
through integrals over intermediate radii.  For the oscillator's l=0
channel with the potential split symmetrically over each slice, the error
falls as 1/N^2.  In coefficient space on the hyperboloid the same idea
converges as 1/N.
"""

from zonalprop import slicer

print("oscillator, l=0, beta=0.5")
for row in slicer.convergence_table(slicer.scenario("oscillator-l0"), [4, 8, 16, 32, 64, 128]):
    print(f"  N={row.N:4d}  max error={row.max_error:.3e}  rate={row.rate:.3f}")

print("free particle: Gaussians compose exactly, so only quadrature error remains")
for row in slicer.convergence_table(slicer.scenario("free"), [2, 8, 32]):
    print(f"  N={row.N:4d}  max error={row.max_error:.3e}")

print("hyperboloid coefficients")
for row in slicer.convergence_table(slicer.scenario("hyperbolic-coeff"), [100, 1000, 10000]):
    print(f"  N={row.N:6d}  max error={row.max_error:.3e}  rate={row.rate:.3f}")

# a grid too coarse for the slice width is refused rather than trusted
try:
    slicer.nfold_kernel(slicer.scenario("oscillator-l0", n=20)(256))
except ValueError as exc:
    print("refused:", exc)
