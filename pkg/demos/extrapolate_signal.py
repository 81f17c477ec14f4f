"""
Extrapolating a bandlimited signal
==================================

A signal with bandlimit sigma is observed on (-1, 1) only. Solving the
sinc-kernel equation with Tikhonov regularization recovers it on the real
line. The error over (-5, 5) is U-shaped in mu: too little regularization
amplifies roundoff, too much smooths away the signal.
"""

import numpy as np

from prolate import (Extrapolator, Penalty, TikhonovConfig, mu_sweep, relative_error,
                     signal_x1, zero_extension)

sigma = 10.0


def x(t):
    return signal_x1(sigma, t)


ex = Extrapolator(sigma, "bessel", 400, 1600)
mus = 10.0 ** np.arange(-16, 0.1, 1.0)

print("  mu        T1 Bessel    T2 Bessel")
t1 = mu_sweep(ex, x, mus)
t2 = mu_sweep(ex, x, mus, Penalty.SOBOLEV)
for a, b in zip(t1, t2):
    print(f"{a.mu:8.0e}   {a.e_rel:.3e}    {b.e_rel:.3e}")

best = min(t1, key=lambda r: r.e_rel)
print(f"\nbest mu = {best.mu:.0e}, relative error {best.e_rel:.2e}")
print(f"zero extension error   {relative_error(x, zero_extension(x)):.2e}")

# the extrapolant itself, a few points outside the observation window
res = ex.run(x, TikhonovConfig(best.mu))
for t in (1.5, 2.5, 4.0):
    print(f"t = {t}: x = {x(t): .6f}, extrapolant = {res(t): .6f}")
