"""
The su(1,1) algebra in a truncated Fock space
=============================================

Quadratic combinations of position and momentum close into su(1,1).  With
number states cut off at n_max the matrices are exact except next to the
cutoff, so every identity is checked on the interior block.
"""

import numpy as np

from zonalprop import su11

real = su11.build_realization(3, 6)
print("dimension:", real.dim, " interior states:", int(real.interior.sum()))
print("commutators, interior:", su11.commutator_residual(real))
print("commutators, full truncated space:", su11.commutator_residual(real, masked=False))
print("H = 2 hbar omega J3:", su11.hamiltonian_j3_residual(real))
print("Casimir vs L^2 relation:", su11.casimir_relation_residual(real))

# 2 hbar omega J3 on the interior has the oscillator levels n + 3/2
levels = su11.j3_interior_spectrum(real)
print("lowest levels:", np.unique(np.round(levels, 10))[:5])

# on each energy shell the Casimir is fixed by l: J^2 = l(l+1)/4 - 3/16
for N in range(4):
    pairs = su11.casimir_shell_spectrum(real, N)
    print(f"shell N={N}:", sorted({(round(float(a), 8), round(float(b), 8)) for a, b in pairs}))

# J = -l/2 - d/4 gives the same value through J(J+1)
for l in range(3):
    print(l, su11.channel_casimir_eigen(l, 3))
