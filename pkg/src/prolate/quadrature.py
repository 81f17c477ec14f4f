"""
Gauss-Legendre and Legendre-Gauss-Lobatto rules on (-1, 1).

Rules are immutable: node and weight arrays are flagged read-only so a rule
can be shared freely between threads and cached.
"""

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

__all__ = [
    "RuleKind",
    "QuadRule",
    "gauss_legendre_rule",
    "lgl_rule",
    "split_gauss_rule",
    "make_rule",
    "refine_rule",
    "default_n_quad",
    "mapped",
    "inner_product",
    "integrate",
]

_NEWTON_TOL = 1e-15
_MAX_NEWTON = 100


class RuleKind(Enum):
    GAUSS_LEGENDRE = "gauss"
    LGL = "lgl"
    SPLIT_GAUSS = "split"


@dataclass(frozen=True)
class QuadRule:
    """Nodes in [-1, 1] (increasing) with positive weights."""

    nodes: np.ndarray
    weights: np.ndarray
    kind: RuleKind

    def __post_init__(self):
        for name in ("nodes", "weights"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if self.nodes.shape != self.weights.shape or self.nodes.ndim != 1:
            raise ValueError("nodes and weights must be 1-D arrays of equal length")

    @property
    def n(self) -> int:
        return self.nodes.size

    def __len__(self):
        return self.nodes.size


def _legendre_pair(n, x):
    """P_n(x) and P_{n-1}(x) by the three-term recurrence."""
    p_prev = np.ones_like(x)
    p = x.copy()
    for k in range(1, n):
        p_prev, p = p, ((2 * k + 1) * x * p - k * p_prev) / (k + 1)
    return p, p_prev


def _gauss_half(n):
    """Non-negative Gauss-Legendre nodes (descending) and their weights."""
    m = (n + 1) // 2
    i = np.arange(1, m + 1)
    x = np.cos(np.pi * (i - 0.25) / (n + 0.5))
    for _ in range(_MAX_NEWTON):
        p, p1 = _legendre_pair(n, x)
        dp = n * (x * p - p1) / (x * x - 1.0)
        dx = p / dp
        x = x - dx
        if np.max(np.abs(dx)) < _NEWTON_TOL:
            break
    p, p1 = _legendre_pair(n, x)
    dp = n * (x * p - p1) / (x * x - 1.0)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    if n % 2 == 1:
        x[-1] = 0.0
    return x, w


def _mirror(x_half, w_half, n):
    # x_half is descending and non-negative; build the increasing full rule
    nodes = np.empty(n)
    weights = np.empty(n)
    m = x_half.size
    nodes[:m] = -x_half
    weights[:m] = w_half
    nodes[n - m:] = x_half[::-1]
    weights[n - m:] = w_half[::-1]
    return nodes, weights


@lru_cache(maxsize=64)
def gauss_legendre_rule(n: int) -> QuadRule:
    """
    Gauss-Legendre rule with ``n`` nodes.

    Nodes come from Newton's method on ``P_n`` started at Chebyshev-like
    guesses; only the non-negative half is iterated and then mirrored, so
    the rule is exactly symmetric.
    """
    n = int(n)
    if n < 1:
        raise ValueError("a Gauss rule needs at least one node")
    if n == 1:
        return QuadRule(np.array([0.0]), np.array([2.0]), RuleKind.GAUSS_LEGENDRE)
    x, w = _gauss_half(n)
    nodes, weights = _mirror(x, w, n)
    return QuadRule(nodes, weights, RuleKind.GAUSS_LEGENDRE)


def _dp_and_ddp(n, x):
    """P_n, P_n' and P_n'' for |x| < 1."""
    p, p1 = _legendre_pair(n, x)
    one_m = 1.0 - x * x
    dp = n * (p1 - x * p) / one_m
    ddp = (2 * x * dp - n * (n + 1) * p) / one_m
    return p, dp, ddp


@lru_cache(maxsize=64)
def lgl_rule(n: int) -> QuadRule:
    """
    Legendre-Gauss-Lobatto rule with ``n`` nodes, endpoints included.

    Interior nodes are the roots of ``P'_{n-1}``, found by Newton's method
    kept inside brackets formed by consecutive Gauss nodes of order ``n-1``
    (the roots interlace). Weights are ``2 / (N (N+1) P_N(x)^2)``, ``N = n-1``.
    """
    n = int(n)
    if n < 2:
        raise ValueError("an LGL rule needs at least two nodes")
    N = n - 1
    if n == 2:
        return QuadRule(np.array([-1.0, 1.0]), np.array([1.0, 1.0]), RuleKind.LGL)

    # interior roots on the positive side, descending
    m = (N - 1) // 2  # number of strictly positive interior roots
    g = gauss_legendre_rule(N).nodes[::-1]  # descending Gauss nodes of P_N
    hi = g[:m]
    lo = g[1:m + 1]
    x = np.cos(np.pi * np.arange(1, m + 1) / N)
    x = np.clip(x, lo, hi)
    for _ in range(_MAX_NEWTON):
        _, q, dq = _dp_and_ddp(N, x)
        _, q_lo, _ = _dp_and_ddp(N, lo)
        same = np.sign(q) == np.sign(q_lo)
        lo = np.where(same, x, lo)
        hi = np.where(same, hi, x)
        step = q / dq
        x_new = x - step
        outside = (x_new <= lo) | (x_new >= hi)
        x_new = np.where(outside, 0.5 * (lo + hi), x_new)
        dx = np.abs(x_new - x)
        x = x_new
        if dx.size == 0 or np.max(dx) < _NEWTON_TOL:
            break
    half = np.concatenate(([1.0], x, [0.0] if N % 2 == 0 else []))
    p, _ = _legendre_pair(N, half)
    w_half = 2.0 / (N * (N + 1) * p * p)
    nodes, weights = _mirror(half, w_half, n)
    return QuadRule(nodes, weights, RuleKind.LGL)


@lru_cache(maxsize=64)
def split_gauss_rule(n: int) -> QuadRule:
    """
    Composite rule: an ``n // 2``-node Gauss rule on each of (-1, 0) and (0, 1).

    Meant for integrands with a kink at the origin.
    """
    n = int(n)
    if n < 2:
        raise ValueError("a split rule needs at least two nodes")
    half = gauss_legendre_rule(n // 2)
    right = 0.5 * (half.nodes + 1.0)
    nodes = np.concatenate((-right[::-1], right))
    weights = np.concatenate((0.5 * half.weights[::-1], 0.5 * half.weights))
    return QuadRule(nodes, weights, RuleKind.SPLIT_GAUSS)


_BUILDERS = {
    RuleKind.GAUSS_LEGENDRE: gauss_legendre_rule,
    RuleKind.LGL: lgl_rule,
    RuleKind.SPLIT_GAUSS: split_gauss_rule,
}


def make_rule(kind, n):
    """Build a rule of the given kind (``RuleKind`` or its string value)."""
    return _BUILDERS[RuleKind(kind)](n)


def refine_rule(rule: QuadRule) -> QuadRule:
    """A rule of the same kind with roughly twice as many nodes."""
    return make_rule(rule.kind, 2 * rule.n)


def default_n_quad(n_basis: int) -> int:
    """Quadrature size used when none is given: four nodes per basis function."""
    return 4 * int(n_basis)


def mapped(rule: QuadRule, a: float, b: float):
    """Nodes and weights of ``rule`` affinely mapped onto ``(a, b)``."""
    half = 0.5 * (b - a)
    return half * rule.nodes + 0.5 * (a + b), half * rule.weights


def integrate(f, rule: QuadRule, a=-1.0, b=1.0):
    """Approximate ``int_a^b f``."""
    x, w = mapped(rule, a, b)
    return float(np.dot(w, np.asarray(f(x), dtype=float)))


def inner_product(f, g, rule: QuadRule) -> float:
    """``sum_i w_i f(x_i) g(x_i)`` over (-1, 1)."""
    x = rule.nodes
    fx = np.broadcast_to(np.asarray(f(x), dtype=float), x.shape)
    gx = np.broadcast_to(np.asarray(g(x), dtype=float), x.shape)
    return float(np.sum(rule.weights * fx * gx))
