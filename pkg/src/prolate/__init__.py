"""
Prolate spheroidal wave functions on the real line, bandlimited extrapolation,
and eigen/inverse problems for bandlimited convolution kernels on (-1, 1).
"""

__version__ = "0.1.0"

from .errors import AccuracyError, ConfigurationError, DomainError, NumericalError, ProlateError
from .quadrature import QuadRule, gauss_legendre_rule, lgl_rule, split_gauss_rule
from .basis import (BasisKind, BasisTag, CoeffVector, GramMatrix, Parity, eval_basis,
                    eval_expansion, gram_bessel, gram_sinc, gram_sinc_parity_split,
                    diff_matrix_bessel, truncation_order, sinc_indices)
from .eigsolve import (EigenSystem, Penalty, TikhonovConfig, eig_sym_dense, eig_sym_tridiagonal,
                       tikhonov_sobolev, tikhonov_standard)
from .pswf import (Method, PswfSet, pswf_legendre_galerkin, pswf_eigenvalue_chain,
                   pswf_bessel_ie, pswf_sinc_ie, eval_pswf, pswf_fourier, pswf_nu,
                   bessel_series_extension)
# the extrapolate() function is left in its module so that prolate.extrapolate
# stays the submodule
from .extrapolate import (ExtrapolationProblem, ExtrapolationResult, Extrapolator, mu_sweep,
                          relative_error, signal_x1, signal_x2, signal_x3,
                          zero_extension)
from .blkernel import (KernelSpec, KernelEigenSet, builtin_kernels, kernel_eigen, apply_forward,
                       invert, Inverter, test_signal_pair)
