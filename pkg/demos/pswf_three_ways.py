"""
Prolate spheroidal wave functions, three ways
=============================================

The PSWFs for bandlimit sigma are computed by a Legendre-Galerkin solve of
the Sturm-Liouville problem, by the integral equation in the Bessel basis,
and by the integral equation in the sinc basis. The eigenvalues agree, and
the basis methods give phi_n on the whole real line.
"""

import numpy as np

from prolate import (gauss_legendre_rule, pswf_bessel_ie, pswf_legendre_galerkin,
                     pswf_sinc_ie)

sigma = 8.0
lg = pswf_legendre_galerkin(sigma, 200, 8)
bes = pswf_bessel_ie(sigma, 60, 8)
snc = pswf_sinc_ie(sigma, 500, 8, gauss_legendre_rule(4000))

print(" n   Legendre-Galerkin    Bessel IE            sinc IE")
for n in range(8):
    print(f"{n:2d}   {lg.eigenvalues[n]:.12e}   {bes.eigenvalues[n]:.12e}   "
          f"{snc.eigenvalues[n]:.12e}")

# The eigenvalues drop from ~1 to ~0 near n = 2 sigma / pi.
print("\n2 sigma / pi =", round(2 * sigma / np.pi, 3))

# Inside (-1, 1) the functions from the two integral-equation bases coincide;
# outside only the Bessel and sinc expansions make sense.
t = np.array([0.0, 0.5, 1.0, 2.0, 5.0])
print("\n t     phi_2 (Bessel)   phi_2 (sinc)")
for ti, a, b in zip(t, bes(2, t), snc(2, t)):
    print(f"{ti:4.1f}  {a: .8f}     {b: .8f}")

# Double orthogonality: on (-1, 1) the Gram matrix is diag(lambda_n).
r = gauss_legendre_rule(200)
v = np.array([bes(n, r.nodes) for n in range(6)])
g = (v * r.weights) @ v.T
print("\nmax |<phi_m, phi_n>_(-1,1) - lambda_n delta_mn| =",
      f"{np.max(np.abs(g - np.diag(bes.eigenvalues[:6]))):.1e}")
