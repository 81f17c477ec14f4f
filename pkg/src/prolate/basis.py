"""
Bandlimited bases on the real line and their overlap matrices over (-1, 1).

Two families are supported:

* normalized spherical Bessel functions
  ``jbar_n(t) = sqrt(sigma (2n+1) / pi) j_n(sigma t)``, ``n >= 0``;
* normalized sinc translates
  ``psi_n(t) = sqrt(sigma / pi) sinc(sigma t - n pi)``, ``n`` signed,
  and their even/odd combinations ``psi^+_n``, ``psi^-_n``.

Both are orthonormal on the whole line; restricted to (-1, 1) they produce
the Gram matrices used throughout the package.
"""

from dataclasses import dataclass, field
from enum import Enum
import math

import numpy as np

from .errors import AccuracyError, DomainError
from .quadrature import QuadRule, default_n_quad, gauss_legendre_rule, refine_rule
from .specfun import legendre_pbar_seq, sinc, sph_bessel_j_seq

__all__ = [
    "BasisTag",
    "Parity",
    "BasisKind",
    "CoeffVector",
    "GramMatrix",
    "sinc_indices",
    "basis_matrix",
    "eval_basis",
    "eval_expansion",
    "gram_bessel",
    "gram_sinc",
    "gram_sinc_parity_split",
    "diff_matrix_bessel",
    "truncation_order",
    "GRAM_CHECK_TOL",
]

GRAM_CHECK_TOL = 1e-10


class BasisTag(Enum):
    BESSEL = "bessel"
    SINC = "sinc"
    SINC_PARITY_SPLIT = "sinc_parity_split"
    # Legendre coefficients, only meaningful on [-1, 1]
    LEGENDRE = "legendre"


class Parity(Enum):
    EVEN = "even"
    ODD = "odd"
    NONE = "none"

    @classmethod
    def of_index(cls, n):
        return cls.EVEN if n % 2 == 0 else cls.ODD


@dataclass(frozen=True)
class BasisKind:
    """Basis family and bandlimit ``sigma``."""

    tag: BasisTag
    sigma: float

    def __post_init__(self):
        object.__setattr__(self, "tag", BasisTag(self.tag))
        s = float(self.sigma)
        if not math.isfinite(s) or s <= 0.0:
            raise DomainError(f"sigma must be positive and finite, got {self.sigma!r}")
        object.__setattr__(self, "sigma", s)


def _readonly(a, dtype=float):
    arr = np.array(a, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class CoeffVector:
    """
    Coefficients of a function in a named basis.

    ``indices`` holds the basis index of each coefficient: ``0..N-1`` for
    Bessel and Legendre, signed translate indices for sinc, and ``m >= 0``
    for the parity-split sinc basis (``parity`` then selects psi^+ or psi^-).
    """

    basis: BasisKind
    coeffs: np.ndarray
    parity: Parity = Parity.NONE
    indices: np.ndarray = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _readonly(self.coeffs))
        object.__setattr__(self, "parity", Parity(self.parity))
        if self.indices is None:
            idx = np.arange(self.coeffs.size)
        else:
            idx = np.asarray(self.indices, dtype=int)
        if idx.shape != self.coeffs.shape:
            raise ValueError("indices and coeffs must have the same shape")
        object.__setattr__(self, "indices", _readonly(idx, int))
        if self.basis.tag is BasisTag.SINC_PARITY_SPLIT and self.parity is Parity.NONE:
            raise ValueError("parity-split coefficients need an explicit parity")

    def __len__(self):
        return self.coeffs.size

    def __call__(self, t):
        return eval_expansion(self, t)


@dataclass(frozen=True)
class GramMatrix:
    """Symmetric overlap matrix of a basis over (-1, 1)."""

    basis: BasisKind
    entries: np.ndarray
    indices: np.ndarray
    parity: Parity = Parity.NONE

    def __post_init__(self):
        object.__setattr__(self, "entries", _readonly(self.entries))
        object.__setattr__(self, "indices", _readonly(self.indices, int))

    @property
    def n_basis(self) -> int:
        return self.entries.shape[0]


def sinc_indices(n_basis: int) -> np.ndarray:
    """
    Signed indices for ``n_basis`` sinc translates: ``-((N-1)//2) .. N//2``.

    For odd ``N`` this is the symmetric range ``-M..M``; for even ``N`` the
    extra translate sits on the positive side.
    """
    n_basis = int(n_basis)
    if n_basis < 1:
        raise ValueError("n_basis must be positive")
    return np.arange(-((n_basis - 1) // 2), n_basis // 2 + 1)


def _bessel_rows(sigma, indices, t):
    n_max = int(indices.max()) if indices.size else 0
    vals = sph_bessel_j_seq(n_max, sigma * t)
    vals = vals[indices]
    scale = np.sqrt(sigma * (2 * indices + 1) / np.pi)
    return vals * scale[:, None]


def _sinc_rows(sigma, indices, t):
    arg = sigma * t[None, :] - np.pi * indices[:, None].astype(float)
    return math.sqrt(sigma / np.pi) * sinc(arg)


def _split_rows(sigma, indices, t, parity):
    plus = _sinc_rows(sigma, indices, t)
    minus = _sinc_rows(sigma, -indices, t)
    if parity is Parity.EVEN:
        out = (plus + minus) / math.sqrt(2.0)
        out[indices == 0] = plus[indices == 0]
    elif parity is Parity.ODD:
        if np.any(indices == 0):
            raise ValueError("psi^-_0 does not exist; odd indices start at 1")
        out = (plus - minus) / math.sqrt(2.0)
    else:
        raise ValueError("parity-split basis needs parity EVEN or ODD")
    return out


def basis_matrix(basis: BasisKind, indices, t, parity: Parity = Parity.NONE) -> np.ndarray:
    """
    Values of the basis functions, shape ``(len(indices), len(t))``.

    Legendre rows are ``Pbar_n(t)`` and require ``|t| <= 1``.
    """
    indices = np.atleast_1d(np.asarray(indices, dtype=int))
    t = np.atleast_1d(np.asarray(t, dtype=float)).ravel()
    tag = basis.tag
    if tag is BasisTag.BESSEL:
        if np.any(indices < 0):
            raise ValueError("Bessel indices must be non-negative")
        return _bessel_rows(basis.sigma, indices, t)
    if tag is BasisTag.SINC:
        return _sinc_rows(basis.sigma, indices, t)
    if tag is BasisTag.SINC_PARITY_SPLIT:
        return _split_rows(basis.sigma, indices, t, Parity(parity))
    if tag is BasisTag.LEGENDRE:
        n_max = int(indices.max()) if indices.size else 0
        return legendre_pbar_seq(n_max, t)[indices]
    raise ValueError(f"unknown basis {tag}")


def eval_basis(basis: BasisKind, n: int, t, parity: Parity = Parity.NONE):
    """Value(s) of the single basis function with index ``n``."""
    t_arr = np.asarray(t, dtype=float)
    vals = basis_matrix(basis, [n], t_arr.ravel(), parity)[0]
    return vals.reshape(t_arr.shape) if t_arr.ndim else float(vals[0])


def eval_expansion(c: CoeffVector, t):
    """Pointwise sum ``sum_k c_k b_k(t)``; valid on all of R for bandlimited bases."""
    t_arr = np.asarray(t, dtype=float)
    if c.coeffs.size == 0:
        return np.zeros_like(t_arr) if t_arr.ndim else 0.0
    mat = basis_matrix(c.basis, c.indices, t_arr.ravel(), c.parity)
    vals = c.coeffs @ mat
    return vals.reshape(t_arr.shape) if t_arr.ndim else float(vals[0])


def _weighted_gram(rows, weights):
    g = (rows * weights) @ rows.T
    return 0.5 * (g + g.T)


def _check_rows(build_rows, rule, gram, sample):
    # Recompute a few rows with a refined rule; quadrature noise above the
    # tolerance means the rule does not resolve the basis.
    fine = refine_rule(rule)
    rows_f = build_rows(fine.nodes)
    ref = (rows_f[sample] * fine.weights) @ rows_f.T
    err = np.max(np.abs(ref - gram[sample]))
    if err > GRAM_CHECK_TOL:
        raise AccuracyError(
            f"Gram matrix not converged: rule doubling changed entries by {err:.2e} "
            f"(n_quad={rule.n}); increase n_quad"
        )


def _sample_rows(n):
    return np.unique(np.array([0, 1, n // 2, n - 2, n - 1]).clip(0, n - 1))


def gram_bessel(sigma: float, n_basis: int, rule: QuadRule | None = None, check: bool = True) -> GramMatrix:
    """
    Gram matrix ``J_mn = int_{-1}^{1} jbar_m jbar_n`` for ``m, n < n_basis``.

    Opposite-parity entries are set to exactly zero.

    Parameters
    ----------
    sigma : float
        Bandlimit.
    n_basis : int
        Number of basis functions.
    rule : QuadRule, optional
        Quadrature on (-1, 1). Defaults to Gauss-Legendre with ``4 * n_basis`` nodes.
    check : bool
        Verify a sample of rows against a rule with twice the nodes.

    Raises
    ------
    AccuracyError
        If the self-check finds entries changing by more than 1e-10.
    """
    basis = BasisKind(BasisTag.BESSEL, sigma)
    n_basis = int(n_basis)
    if n_basis < 1:
        raise ValueError("n_basis must be positive")
    if rule is None:
        rule = gauss_legendre_rule(default_n_quad(n_basis))
    idx = np.arange(n_basis)

    def rows(x):
        return _bessel_rows(basis.sigma, idx, x)

    g = _weighted_gram(rows(rule.nodes), rule.weights)
    g[(idx[:, None] + idx[None, :]) % 2 == 1] = 0.0
    if check:
        _check_rows(rows, rule, g, _sample_rows(n_basis))
    return GramMatrix(basis, g, idx)


def gram_sinc(sigma: float, m_max: int | None = None, rule: QuadRule | None = None,
              check: bool = True, indices=None) -> GramMatrix:
    """
    Gram matrix ``A_mn = int_{-1}^{1} psi_m psi_n``.

    Indices run over ``-m_max..m_max`` unless ``indices`` is given explicitly
    (e.g. ``sinc_indices(N)``).
    """
    basis = BasisKind(BasisTag.SINC, sigma)
    if indices is None:
        if m_max is None:
            raise ValueError("give m_max or indices")
        idx = np.arange(-int(m_max), int(m_max) + 1)
    else:
        idx = np.asarray(indices, dtype=int)
    if rule is None:
        rule = gauss_legendre_rule(default_n_quad(idx.size))

    def rows(x):
        return _sinc_rows(basis.sigma, idx, x)

    g = _weighted_gram(rows(rule.nodes), rule.weights)
    if check:
        _check_rows(rows, rule, g, _sample_rows(idx.size))
    return GramMatrix(basis, g, idx)


def gram_sinc_parity_split(sigma: float, m_max: int, rule: QuadRule | None = None,
                           check: bool = True):
    """
    Even and odd blocks of the sinc Gram matrix in the psi^+/psi^- basis.

    Returns ``(even, odd)`` with sizes ``m_max + 1`` and ``m_max``.
    """
    basis = BasisKind(BasisTag.SINC_PARITY_SPLIT, sigma)
    m_max = int(m_max)
    if m_max < 0:
        raise ValueError("m_max must be non-negative")
    if rule is None:
        rule = gauss_legendre_rule(default_n_quad(2 * m_max + 1))
    blocks = []
    for parity, idx in ((Parity.EVEN, np.arange(0, m_max + 1)),
                        (Parity.ODD, np.arange(1, m_max + 1))):
        if idx.size == 0:
            blocks.append(GramMatrix(basis, np.zeros((0, 0)), idx, parity))
            continue

        def rows(x, idx=idx, parity=parity):
            return _split_rows(basis.sigma, idx, x, parity)

        g = _weighted_gram(rows(rule.nodes), rule.weights)
        if check:
            _check_rows(rows, rule, g, _sample_rows(idx.size))
        blocks.append(GramMatrix(basis, g, idx, parity))
    return tuple(blocks)


def diff_matrix_bessel(order: int, sigma: float, n_basis: int) -> np.ndarray:
    """
    Differentiation in Bessel coefficient space.

    Built from ``(2n+1) j_n' = n j_{n-1} - (n+1) j_{n+1}``, which gives the
    skew-symmetric bidiagonal

    ``D[k-1, k] = sigma k / sqrt((2k+1)(2k-1))``,
    ``D[k+1, k] = -sigma (k+1) / sqrt((2k+1)(2k+3))``.

    ``order=2`` returns ``D @ D``. The top ``order`` coefficients of the
    result are contaminated by truncation.
    """
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    n_basis = int(n_basis)
    if n_basis < 2:
        raise ValueError("n_basis must be at least 2")
    BasisKind(BasisTag.BESSEL, sigma)
    k = np.arange(1, n_basis, dtype=float)
    upper = sigma * k / np.sqrt((2 * k + 1) * (2 * k - 1))
    d = np.diag(upper, 1) - np.diag(upper, -1)
    return d if order == 1 else d @ d


def _log_bound(sigma, n):
    # log of (sigma e^2 / 4 pi^2) (e sigma / (2n+2))^(2n)
    return math.log(sigma * math.e ** 2 / (4 * math.pi ** 2)) + 2 * n * math.log(
        math.e * sigma / (2 * n + 2))


def truncation_order(sigma: float, tol: float = 1e-14) -> int:
    """
    Smallest ``N`` with ``|J_mn| < tol`` for all ``m, n >= N`` by the Stirling
    bound, and never below ``ceil(e sigma / 2) + 8``.
    """
    BasisKind(BasisTag.BESSEL, sigma)
    if not 0.0 < tol < 1.0:
        raise ValueError("tol must lie in (0, 1)")
    floor_n = math.ceil(math.e * sigma / 2) + 8
    n = floor_n
    log_tol = math.log(tol)
    # beyond e sigma / 2 - 1 the bound decreases monotonically in n
    while _log_bound(sigma, n) >= log_tol:
        n += 1
    return n
