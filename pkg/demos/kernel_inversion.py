"""
Bandlimited kernels: eigenvalues and deconvolution
==================================================

Any convolution kernel whose spectrum lives in [-sigma, sigma] is degenerate
in the Bessel and sinc bases, so its eigenproblem on (-1, 1) and the inverse
problem x = K * y reduce to small dense matrices.
"""

import numpy as np

from prolate import (Inverter, apply_forward, builtin_kernels, kernel_eigen,
                     test_signal_pair)

k2 = builtin_kernels("K2", 8.0)
bes = kernel_eigen(k2, "bessel", 200, 8)
snc = kernel_eigen(k2, "sinc", 200, 8)
print(" n   Bessel basis        sinc basis")
for n in range(8):
    print(f"{n:2d}   {bes.eigenvalues[n]:.10e}   {snc.eigenvalues[n]:.10e}")

# The eigenvalues add up to the trace of the operator, 2 K(0).
full = kernel_eigen(k2, "bessel", 400, 400)
print(f"\nsum of eigenvalues {full.eigenvalues.sum():.10f}, 2 K(0) = {2 * k2.time_fn(0.0):.10f}")

# Deconvolution: blur y = sin(4 pi t) with K2 and recover it.
pair = test_signal_pair("pair1", 4)
k = builtin_kernels("K2", pair.sigma)


def x(t):
    return apply_forward(k, pair.y, t)


mus = 10.0 ** np.arange(-14, -3.9, 1.0)
for basis in ("bessel", "sinc"):
    rows = Inverter(k, basis, 200).sweep(x, mus, exact=pair.y)
    mu, err = min(((r[0], r[1]) for r in rows), key=lambda p: p[1])
    print(f"{basis:6s}: best mu {mu:.0e}, relative L2(-1,1) error {err:.2e}")
