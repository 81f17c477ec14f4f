"""
Extrapolation of a bandlimited signal known on (-1, 1) to the whole line.

The signal is expanded as ``x(t) = sum_n y_n b_n(t)`` in a bandlimited basis;
projecting onto (-1, 1) gives ``G y = xhat`` with ``G`` the basis Gram matrix
and ``xhat_n = <x, b_n>_(-1,1)``. The system is ill-posed and is solved with
Tikhonov regularization (standard, or Sobolev for the Bessel basis).
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
import math
import os
from typing import Callable, NamedTuple

import numpy as np
from scipy.interpolate import FloaterHormannInterpolator
from scipy.special import jv

from .basis import (BasisKind, BasisTag, CoeffVector, basis_matrix, diff_matrix_bessel,
                    sinc_indices, truncation_order)
from .eigsolve import PINV_CUTOFF, Penalty, SobolevTikhonov, StandardTikhonov, TikhonovConfig
from .errors import ConfigurationError, DomainError, ProlateError
from .quadrature import QuadRule, gauss_legendre_rule, mapped
from .specfun import sinc

__all__ = [
    "KAPPA",
    "TAU",
    "signal_x1",
    "signal_x2",
    "signal_x3",
    "SIGNALS",
    "sampled_signal",
    "zero_extension",
    "relative_error",
    "ExtrapolationProblem",
    "ExtrapolationResult",
    "Extrapolator",
    "project_observed",
    "extrapolate",
    "SweepRow",
    "mu_sweep",
    "n_workers",
]

KAPPA = np.array([5.0, 8.0, 8.0, 10.0, 10.0])
TAU = np.array([0.0, -0.1, 0.2, -0.3, 0.4])

DEFAULT_N_BASIS = 400
DEFAULT_N_QUAD = 1600
ERROR_RULE_NODES = 2000


# ---------------------------------------------------------------- test signals

def _sum_terms(t, fn):
    t_arr = np.asarray(t, dtype=float)
    out = fn(t_arr[..., None]).sum(axis=-1)
    return out if t_arr.ndim else float(out)


def signal_x1(sigma: float, t):
    """``sum_j sinc[(sigma / kappa_j) sqrt(1 + kappa_j^2 (t - tau_j)^2)]``."""
    return _sum_terms(t, lambda u: sinc(sigma / KAPPA * np.sqrt(1 + KAPPA ** 2 * (u - TAU) ** 2)))


def signal_x3(sigma: float, t):
    """``sum_j sinc^2[(sigma / 2 kappa_j) sqrt(1 + kappa_j^2 (t - tau_j)^2)]``."""
    return _sum_terms(
        t, lambda u: sinc(sigma / (2 * KAPPA) * np.sqrt(1 + KAPPA ** 2 * (u - TAU) ** 2)) ** 2)


def _jv_over_z2(nu: int, z):
    """``J_nu(z) / z^2`` with the removable singularity at 0 (integer nu >= 2)."""
    z = np.asarray(z, dtype=float)
    small = np.abs(z) < 1e-4
    zs = np.where(small, 1.0, z)
    direct = jv(nu, zs) / (zs * zs)
    # leading terms of the power series of J_nu
    series = z ** (nu - 2) / (2.0 ** nu * math.factorial(nu)) * (1 - z * z / (4 * (nu + 1)))
    return np.where(small, series, direct)


def signal_x2(sigma: float, t, nu: int = 2, reading: str = "printed"):
    """
    ``sum_j J_nu(sigma u_j) / (sigma u_j^2)`` with ``u_j = t - tau_j``.

    ``reading="squared"`` uses the alternative ``J_nu(sigma u) / (sigma u)^2``.
    Both are finite at ``u = 0`` only for ``nu >= 2``; ``nu`` must be an
    integer so that negative arguments stay real.
    """
    if float(nu) != int(nu) or int(nu) < 2:
        raise DomainError("signal_x2 needs an integer order nu >= 2")
    nu = int(nu)
    if reading == "printed":
        factor = sigma
    elif reading == "squared":
        factor = 1.0
    else:
        raise ConfigurationError(f"unknown reading {reading!r}")
    return _sum_terms(t, lambda u: factor * _jv_over_z2(nu, sigma * (u - TAU)))


SIGNALS = {"x1": signal_x1, "x2": signal_x2, "x3": signal_x3}


def sampled_signal(t, values, d: int = 8) -> Callable:
    """
    Callable interpolant of samples on (-1, 1) (Floater-Hormann rational
    barycentric interpolation, suited to uniform grids).
    """
    t = np.asarray(t, dtype=float)
    values = np.asarray(values, dtype=float)
    order = np.argsort(t)
    interp = FloaterHormannInterpolator(t[order], values[order], d=min(d, t.size - 1))
    lo, hi = t.min(), t.max()

    def f(s):
        s = np.asarray(s, dtype=float)
        if np.any((s < lo - 1e-12) | (s > hi + 1e-12)):
            raise DomainError("sampled signal evaluated outside its sample range")
        return interp(s)

    return f


def zero_extension(x: Callable) -> Callable:
    """The trivial extrapolant: ``x`` on (-1, 1) and 0 outside."""
    def f(t):
        t = np.asarray(t, dtype=float)
        inside = np.abs(t) < 1.0
        out = np.zeros_like(t)
        if inside.any():
            out[inside] = x(t[inside])
        return out
    return f


def relative_error(exact: Callable, approx: Callable, omega=(-5.0, 5.0),
                   rule: QuadRule | None = None) -> float:
    """``||exact - approx||_L2(omega) / ||exact||_L2(omega)``."""
    if rule is None:
        rule = gauss_legendre_rule(ERROR_RULE_NODES)
    x, w = mapped(rule, *omega)
    ex = np.asarray(exact(x), dtype=float)
    ap = np.asarray(approx(x), dtype=float)
    den = math.sqrt(float(np.dot(w, ex * ex)))
    if den == 0.0:
        raise DomainError("exact signal has zero norm on the error interval")
    return math.sqrt(float(np.dot(w, (ex - ap) ** 2))) / den


# ---------------------------------------------------------------- problem and solver

@dataclass(frozen=True)
class ExtrapolationProblem:
    """
    Everything needed for one extrapolation.

    ``observed`` is evaluated only at quadrature nodes inside (-1, 1).
    """

    sigma: float
    observed: Callable
    basis: BasisTag = BasisTag.BESSEL
    n_basis: int = DEFAULT_N_BASIS
    config: TikhonovConfig = TikhonovConfig(0.0)
    n_quad: int = DEFAULT_N_QUAD

    def __post_init__(self):
        object.__setattr__(self, "basis", BasisTag(self.basis))
        BasisKind(BasisTag.BESSEL, self.sigma)
        if self.basis not in (BasisTag.BESSEL, BasisTag.SINC):
            raise ConfigurationError("extrapolation supports the Bessel and sinc bases")
        if self.basis is BasisTag.SINC and self.config.penalty is Penalty.SOBOLEV:
            raise ConfigurationError("the Sobolev penalty is only available in the Bessel basis")
        if self.n_quad < self.n_basis:
            raise ConfigurationError("n_quad must be at least n_basis")


@dataclass(frozen=True)
class ExtrapolationResult:
    """Solved coefficients plus diagnostics; call it to evaluate the extrapolant."""

    yhat: CoeffVector
    mu_used: float
    residual_norm: float
    solution_norm: float

    def extrapolant(self, t):
        return self.yhat(t)

    def __call__(self, t):
        return self.yhat(t)


class Extrapolator:
    """
    Pre-assembled Gram matrix and factorizations for one (sigma, basis, N).

    Reuse it across signals and ``mu`` values; ``solve`` is cheap.
    """

    def __init__(self, sigma: float, basis=BasisTag.BESSEL, n_basis: int = DEFAULT_N_BASIS,
                 n_quad: int = DEFAULT_N_QUAD):
        basis = BasisTag(basis)
        if basis not in (BasisTag.BESSEL, BasisTag.SINC):
            raise ConfigurationError("extrapolation supports the Bessel and sinc bases")
        self.kind = BasisKind(basis, sigma)
        self.sigma = self.kind.sigma
        self.n_basis = int(n_basis)
        if basis is BasisTag.BESSEL and self.n_basis < truncation_order(self.sigma, 1e-14):
            raise ConfigurationError(
                f"n_basis={self.n_basis} below the truncation order for sigma={self.sigma}")
        self.indices = np.arange(self.n_basis) if basis is BasisTag.BESSEL else sinc_indices(self.n_basis)
        self.rule = gauss_legendre_rule(int(n_quad))
        self._rows = basis_matrix(self.kind, self.indices, self.rule.nodes)
        g = (self._rows * self.rule.weights) @ self._rows.T
        g = 0.5 * (g + g.T)
        if basis is BasisTag.BESSEL:
            i = self.indices
            g[(i[:, None] + i[None, :]) % 2 == 1] = 0.0
        self.gram = g
        self.standard = StandardTikhonov(g)
        self._sobolev = None

    @property
    def sobolev(self) -> SobolevTikhonov:
        if self.kind.tag is not BasisTag.BESSEL:
            raise ConfigurationError("the Sobolev penalty is only available in the Bessel basis")
        if self._sobolev is None:
            d1 = diff_matrix_bessel(1, self.sigma, self.n_basis)
            self._sobolev = SobolevTikhonov(self.gram, d1, d1 @ d1)
        return self._sobolev

    def project(self, x: Callable) -> np.ndarray:
        """``xhat_n = <x, b_n>_(-1,1)`` by quadrature."""
        fx = np.asarray(x(self.rule.nodes), dtype=float)
        return self._rows @ (self.rule.weights * fx)

    def solve(self, xhat, config: TikhonovConfig) -> np.ndarray:
        if config.penalty is Penalty.SOBOLEV:
            return self.sobolev.solve(xhat, config.mu)
        return self.standard.solve(xhat, config.mu)

    def picard_ratios(self, xhat) -> np.ndarray:
        """
        ``|v_n . xhat| / |lambda_n|`` over the Gram eigenpairs (descending lambda).

        Modes with ``|lambda_n| <= PINV_CUTOFF`` (exact zeros from underflowed
        basis rows) are dropped, as in the ``mu = 0`` pseudoinverse.
        """
        es = self.standard.eig
        keep = np.abs(es.eigenvalues) > PINV_CUTOFF
        return np.abs(es.vectors[:, keep].T @ xhat) / np.abs(es.eigenvalues[keep])

    def run(self, x: Callable, config: TikhonovConfig, xhat=None) -> ExtrapolationResult:
        if xhat is None:
            xhat = self.project(x)
        y = self.solve(xhat, config)
        fitted = y @ self._rows
        resid = fitted - np.asarray(x(self.rule.nodes), dtype=float)
        residual = math.sqrt(float(np.dot(self.rule.weights, resid * resid)))
        coeffs = CoeffVector(self.kind, y, indices=self.indices)
        return ExtrapolationResult(coeffs, config.mu, residual, float(np.linalg.norm(y)))


def project_observed(x: Callable, basis: BasisKind, n_basis: int,
                     rule: QuadRule | None = None) -> np.ndarray:
    """Overlap coefficients ``<x, b_n>_(-1,1)`` for the first ``n_basis`` functions."""
    rule = gauss_legendre_rule(4 * int(n_basis)) if rule is None else rule
    idx = np.arange(n_basis) if basis.tag is BasisTag.BESSEL else sinc_indices(n_basis)
    rows = basis_matrix(basis, idx, rule.nodes)
    return rows @ (rule.weights * np.asarray(x(rule.nodes), dtype=float))


def extrapolate(problem: ExtrapolationProblem, extrapolator: Extrapolator | None = None
                ) -> ExtrapolationResult:
    """
    Solve the regularized system for ``problem`` and return the extrapolant.

    Raises
    ------
    ConfigurationError
        Sinc basis with the Sobolev penalty.
    NumericalError
        Sobolev penalty with ``mu = 0``.
    """
    ex = extrapolator or Extrapolator(problem.sigma, problem.basis, problem.n_basis,
                                      problem.n_quad)
    return ex.run(problem.observed, problem.config)


# ---------------------------------------------------------------- sweeps

class SweepRow(NamedTuple):
    mu: float
    e_rel: float
    residual_norm: float
    solution_norm: float
    ok: bool
    message: str = ""


def n_workers() -> int:
    """Worker count from ``PROLATE_NUM_THREADS`` (default 1)."""
    try:
        return max(1, int(os.environ.get("PROLATE_NUM_THREADS", "1")))
    except ValueError:
        return 1


def mu_sweep(extrapolator: Extrapolator, x: Callable, mus, penalty=Penalty.STANDARD,
             exact: Callable | None = None, omega=(-5.0, 5.0), workers: int | None = None):
    """
    One extrapolation per ``mu``; rows carry ``(mu, e_rel, residual, ||y||)``.

    ``e_rel`` is measured against ``exact`` on ``omega`` (``x`` itself when
    ``exact`` is None). A failing ``mu`` yields a row with ``ok=False``.
    """
    mus = [float(m) for m in np.atleast_1d(mus)]
    if not mus:
        raise ValueError("empty mu list")
    exact = x if exact is None else exact
    xhat = extrapolator.project(x)
    penalty = Penalty(penalty)
    err_rule = gauss_legendre_rule(ERROR_RULE_NODES)

    def one(mu):
        try:
            res = extrapolator.run(x, TikhonovConfig(mu, penalty), xhat)
            e = relative_error(exact, res, omega, err_rule)
            return SweepRow(mu, e, res.residual_norm, res.solution_norm, True)
        except ProlateError as exc:
            nan = float("nan")
            return SweepRow(mu, nan, nan, nan, False, str(exc))

    workers = n_workers() if workers is None else int(workers)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(one, mus))
    return [one(mu) for mu in mus]
