"""
Symmetric eigensolvers and Tikhonov-regularized solves.

The default backend is LAPACK through scipy. A self-contained Householder
tridiagonalization plus implicit-shift QL (``method="ql"``) is kept for
cross-checking and for environments where the LAPACK path misbehaves.
"""

from dataclasses import dataclass
from enum import Enum
import math

import numpy as np
import scipy.linalg as sla

from .errors import ConfigurationError, NumericalError

__all__ = [
    "EigenSystem",
    "Penalty",
    "TikhonovConfig",
    "eig_sym_tridiagonal",
    "eig_sym_dense",
    "householder_tridiagonalize",
    "ql_implicit",
    "tikhonov_standard",
    "tikhonov_sobolev",
    "StandardTikhonov",
    "SobolevTikhonov",
    "PINV_CUTOFF",
]

PINV_CUTOFF = 1e-300
_QL_MAX_ITER = 60


@dataclass(frozen=True)
class EigenSystem:
    """Eigenvalues sorted descending, with orthonormal eigenvectors as columns."""

    eigenvalues: np.ndarray
    vectors: np.ndarray
    convention: str = "descending; largest-magnitude component positive"

    def __post_init__(self):
        for name in ("eigenvalues", "vectors"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def __len__(self):
        return self.eigenvalues.size


def _finalize(w, v):
    # Descending order; stable sort keeps ties in their original order.
    order = np.argsort(-w, kind="stable")
    w = w[order]
    v = v[:, order]
    if v.size:
        pivot = np.argmax(np.abs(v), axis=0)
        signs = np.sign(v[pivot, np.arange(v.shape[1])])
        signs[signs == 0] = 1.0
        v = v * signs
    return EigenSystem(w, v)


def ql_implicit(d, e, z=None):
    """
    Implicit-shift QL iteration on a symmetric tridiagonal matrix.

    Parameters
    ----------
    d : array_like
        Diagonal, length ``n``.
    e : array_like
        Sub-diagonal, length ``n - 1``.
    z : ndarray, optional
        Matrix whose columns are rotated along (the identity if omitted, giving
        the eigenvectors of the tridiagonal matrix itself).

    Returns
    -------
    (eigenvalues, vectors), unsorted.
    """
    d = np.array(d, dtype=float)
    n = d.size
    ee = np.zeros(n)
    ee[: n - 1] = np.asarray(e, dtype=float)
    z = np.eye(n) if z is None else np.array(z, dtype=float)
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(ee[m]) <= np.finfo(float).eps * dd:
                    break
                m += 1
            if m == l:
                break
            it += 1
            if it > _QL_MAX_ITER:
                raise NumericalError(f"QL iteration did not converge for eigenvalue {l}")
            g = (d[l + 1] - d[l]) / (2.0 * ee[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + ee[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            underflow = False
            while i >= l:
                f = s * ee[i]
                b = c * ee[i]
                r = math.hypot(f, g)
                ee[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    ee[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                zi1 = z[:, i + 1].copy()
                z[:, i + 1] = s * z[:, i] + c * zi1
                z[:, i] = c * z[:, i] - s * zi1
                i -= 1
            if underflow:
                continue
            d[l] -= p
            ee[l] = g
            ee[m] = 0.0
    return d, z


def householder_tridiagonalize(a):
    """
    Reduce a symmetric matrix to tridiagonal form, ``A = Q T Q^T``.

    Returns ``(diag, offdiag, Q)``.
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    q = np.eye(n)
    for k in range(n - 2):
        x = a[k + 1:, k]
        alpha = np.linalg.norm(x)
        if alpha == 0.0:
            continue
        v = x.copy()
        v[0] += math.copysign(alpha, x[0])
        v /= np.linalg.norm(v)
        # two-sided reflection on the trailing block
        sub = a[k + 1:, k:]
        sub -= 2.0 * np.outer(v, v @ sub)
        a[k + 1:, k:] = sub
        sub = a[k:, k + 1:]
        sub -= 2.0 * np.outer(sub @ v, v)
        a[k:, k + 1:] = sub
        q[:, k + 1:] -= 2.0 * np.outer(q[:, k + 1:] @ v, v)
    return np.diag(a).copy(), np.diag(a, -1).copy(), q


def eig_sym_tridiagonal(diag, offdiag, method: str = "lapack") -> EigenSystem:
    """
    Eigen-decomposition of a symmetric tridiagonal matrix.

    Parameters
    ----------
    diag, offdiag : array_like
        Diagonal (length n) and off-diagonal (length n-1).
    method : {"lapack", "ql"}
    """
    d = np.asarray(diag, dtype=float)
    e = np.asarray(offdiag, dtype=float)
    if d.ndim != 1 or e.ndim != 1 or e.size != max(d.size - 1, 0):
        raise ValueError("offdiag must have length len(diag) - 1")
    if d.size == 0:
        return EigenSystem(np.zeros(0), np.zeros((0, 0)))
    if d.size == 1:
        return EigenSystem(d.copy(), np.ones((1, 1)))
    if method == "ql":
        w, v = ql_implicit(d, e)
    elif method == "lapack":
        try:
            w, v = sla.eigh_tridiagonal(d, e)
        except (sla.LinAlgError, ValueError) as exc:
            raise NumericalError(f"tridiagonal eigensolver failed: {exc}") from exc
    else:
        raise ValueError(f"unknown method {method!r}")
    return _finalize(w, v)


def _symmetrize(m):
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("matrix must be square")
    scale = np.max(np.abs(m)) if m.size else 0.0
    if m.size and np.max(np.abs(m - m.T)) > 1e-10 * max(scale, np.finfo(float).tiny):
        raise ValueError("matrix is not symmetric")
    return 0.5 * (m + m.T)


def eig_sym_dense(m, method: str = "lapack") -> EigenSystem:
    """
    Eigen-decomposition of a dense symmetric matrix (symmetrized first).

    ``method="ql"`` uses the in-package Householder + QL path.
    """
    m = _symmetrize(m)
    if m.shape[0] == 0:
        return EigenSystem(np.zeros(0), np.zeros((0, 0)))
    if method == "ql":
        d, e, q = householder_tridiagonalize(m)
        w, v = ql_implicit(d, e, q)
    elif method == "lapack":
        try:
            w, v = sla.eigh(m)
        except sla.LinAlgError as exc:
            raise NumericalError(f"dense eigensolver failed: {exc}") from exc
    else:
        raise ValueError(f"unknown method {method!r}")
    return _finalize(w, v)


class Penalty(Enum):
    STANDARD = "standard"
    SOBOLEV = "sobolev"


@dataclass(frozen=True)
class TikhonovConfig:
    """Regularization parameter and penalty form."""

    mu: float
    penalty: Penalty = Penalty.STANDARD

    def __post_init__(self):
        mu = float(self.mu)
        if not mu >= 0.0 or math.isinf(mu):
            raise ConfigurationError(f"mu must be finite and >= 0, got {self.mu!r}")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "penalty", Penalty(self.penalty))


def _filter(lam, mu):
    if mu == 0.0:
        safe = np.where(np.abs(lam) > PINV_CUTOFF, lam, 1.0)
        return np.where(np.abs(lam) > PINV_CUTOFF, 1.0 / safe, 0.0)
    return lam / (lam * lam + mu * mu)


class StandardTikhonov:
    """
    Standard-form Tikhonov solver for a symmetric matrix, with the eigen-
    decomposition computed once and reused across ``mu`` values.
    """

    def __init__(self, m, eig: EigenSystem | None = None):
        self.eig = eig if eig is not None else eig_sym_dense(m)

    def filter_factors(self, mu: float) -> np.ndarray:
        return _filter(self.eig.eigenvalues, float(mu))

    def solve(self, rhs, mu: float) -> np.ndarray:
        mu = float(mu)
        if mu < 0:
            raise ConfigurationError("mu must be >= 0")
        v = self.eig.vectors
        return v @ (self.filter_factors(mu) * (v.T @ np.asarray(rhs, dtype=float)))


class SobolevTikhonov:
    """
    Tikhonov solver with penalty ``||y||^2 + ||D1 y||^2 + ||D2 y||^2``.

    The penalty Gram ``P = I + D1^T D1 + D2^T D2`` is factored as ``R^T R``
    and the problem is brought to standard form with an SVD of ``M R^-1``;
    the minimizer is that of ``[M^T M + mu^2 P] y = M^T rhs``.
    """

    def __init__(self, m, d1=None, d2=None):
        m = np.asarray(m, dtype=float)
        n = m.shape[0]
        p = np.eye(n)
        for d in (d1, d2):
            if d is not None:
                d = np.asarray(d, dtype=float)
                if d.shape != (n, n):
                    raise ValueError("penalty matrices must match the system size")
                p += d.T @ d
        try:
            self._r = sla.cholesky(p, lower=False)
        except sla.LinAlgError as exc:
            raise NumericalError(f"penalty Gram is not positive definite: {exc}") from exc
        mr = sla.solve_triangular(self._r, m.T, trans="T", lower=False).T
        try:
            self._u, self._s, vh = sla.svd(mr)
        except sla.LinAlgError as exc:
            raise NumericalError(f"SVD failed: {exc}") from exc
        self._v = vh.T

    def solve(self, rhs, mu: float) -> np.ndarray:
        mu = float(mu)
        if not mu > 0.0:
            raise NumericalError("the Sobolev system needs mu > 0 to be positive definite")
        s = self._s
        z = self._v @ (s / (s * s + mu * mu) * (self._u.T @ np.asarray(rhs, dtype=float)))
        return sla.solve_triangular(self._r, z, lower=False)


def tikhonov_standard(m, rhs, mu: float) -> np.ndarray:
    """
    ``sum_n lam_n / (lam_n^2 + mu^2) (rhs . v_n) v_n`` over the eigenpairs of ``m``.

    For ``mu = 0`` this is the pseudoinverse solution, dropping eigenvalues
    with ``|lam| <= 1e-300``.
    """
    return StandardTikhonov(m).solve(rhs, mu)


def tikhonov_sobolev(m, rhs, mu: float, d1=None, d2=None) -> np.ndarray:
    """
    Solve ``[m m + mu^2 (I + d1^T d1 + d2^T d2)] y = m rhs`` for symmetric ``m``.

    Raises
    ------
    NumericalError
        For ``mu <= 0``.
    """
    if not float(mu) > 0.0:
        raise NumericalError("the Sobolev system needs mu > 0 to be positive definite")
    return SobolevTikhonov(m, d1, d2).solve(rhs, mu)
