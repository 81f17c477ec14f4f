"""
Scalar special functions: spherical Bessel functions of the first kind,
Legendre polynomials, the sine integral and the (unnormalized) sinc.

All routines accept scalars or arrays and are pure.
"""

import math

import numpy as np

from .errors import DomainError

__all__ = [
    "sph_bessel_j_seq",
    "sph_bessel_j",
    "legendre_p_seq",
    "legendre_pbar_seq",
    "sine_integral",
    "sinc",
]

_SMALL_X = 1e-3
_RESCALE_AT = 1e250


def _check_finite(x, name="x"):
    if np.isnan(x).any():
        raise DomainError(f"{name} contains NaN")
    if np.isinf(x).any():
        raise DomainError(f"{name} must be finite")


def _miller_start(n_max, ax):
    # Start index for the downward recurrence. The extra cube-root term keeps
    # the start past the turning point when |x| is close to n_max.
    base = max(n_max, int(math.ceil(ax)))
    return base + int(math.ceil(15 + 2 * math.sqrt(base) + 4 * ax ** (1 / 3)))


def _series_small(n_max, x):
    """Four-term power series, used for |x| < 1e-3."""
    out = np.zeros((n_max + 1, x.size))
    lead = np.ones_like(x)  # x^n / (2n+1)!!
    h = -0.5 * x * x
    for n in range(n_max + 1):
        if n > 0:
            lead = lead * x / (2 * n + 1)
        s = np.ones_like(x)
        term = np.ones_like(x)
        for k in range(1, 4):
            term = term * h / (k * (2 * n + 2 * k + 1))
            s = s + term
        out[n] = lead * s
    return out


def _upward(n_max, x):
    out = np.empty((n_max + 1, x.size))
    s, c = np.sin(x), np.cos(x)
    out[0] = s / x
    if n_max >= 1:
        out[1] = s / (x * x) - c / x
    for n in range(1, n_max):
        out[n + 1] = (2 * n + 1) / x * out[n] - out[n - 1]
    return out


def _downward(n_max, x):
    """Miller recurrence with running rescaling, normalized by j0 or j1."""
    ax = np.abs(x)
    n_start = _miller_start(n_max, float(ax.max()))
    out = np.zeros((n_max + 1, x.size))
    f_next = np.zeros_like(x)
    f_cur = np.ones_like(x)
    for n in range(n_start, 0, -1):
        # f_cur holds f_n, f_next holds f_{n+1}
        f_prev = (2 * n + 1) / x * f_cur - f_next
        f_next, f_cur = f_cur, f_prev
        big = np.abs(f_cur) > _RESCALE_AT
        if big.any():
            f_cur[big] /= _RESCALE_AT
            f_next[big] /= _RESCALE_AT
            if n <= n_max:
                out[n:, big] /= _RESCALE_AT
        if n - 1 <= n_max:
            out[n - 1] = f_cur
    s, c = np.sin(x), np.cos(x)
    j0 = s / x
    j1 = s / (x * x) - c / x
    if n_max == 0:
        return j0[None, :]
    # j1's closed form cancels for small x; there j0 is the safe anchor.
    use0 = (np.abs(j0) >= np.abs(j1)) | (x < 1.0)
    scale = np.where(use0, j0 / out[0], j1 / out[1])
    out *= scale
    out[0] = j0
    out[1] = np.where(x < 1.0, out[1], j1)
    return out


def _hybrid(n_max, x):
    """Upward for n <= floor(x), Miller tail matched at floor(x)."""
    tail = _downward(n_max, x)
    with np.errstate(over="ignore", invalid="ignore"):
        head = _upward(n_max, x)
    n0 = np.floor(x).astype(int)
    cols = np.arange(x.size)
    ratio = head[n0, cols] / tail[n0, cols]
    rows = np.arange(n_max + 1)[:, None]
    return np.where(rows <= n0[None, :], head, tail * ratio[None, :])


def sph_bessel_j_seq(n_max, x):
    """
    Spherical Bessel functions ``j_0(x), ..., j_{n_max}(x)``.

    Parameters
    ----------
    n_max : int
        Highest order, ``n_max >= 0``.
    x : float or array_like
        Finite real argument(s). Negative values use ``j_n(-x) = (-1)^n j_n(x)``.

    Returns
    -------
    ndarray
        Shape ``(n_max + 1,) + np.shape(x)``. Values too small to represent
        underflow to zero.

    Notes
    -----
    Upward recurrence is used for ``n <= |x|`` (stable there) and a
    normalized downward (Miller) recurrence for the decaying tail
    ``n > |x|``. Near the origin a short power series avoids the
    cancellation in ``sin x / x``.
    """
    n_max = int(n_max)
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    x = np.asarray(x, dtype=float)
    _check_finite(x)
    shape = x.shape
    xf = x.ravel()
    ax = np.abs(xf)
    out = np.zeros((n_max + 1, xf.size))

    small = ax < _SMALL_X
    up = (~small) & (ax > n_max)
    down = ~(small | up)
    if small.any():
        out[:, small] = _series_small(n_max, ax[small])
    if up.any():
        out[:, up] = _upward(n_max, ax[up])
    mid = down & (ax >= 2.0)
    down &= ~mid
    if down.any():
        out[:, down] = _downward(n_max, ax[down])
    if mid.any():
        out[:, mid] = _hybrid(n_max, ax[mid])

    neg = xf < 0
    if neg.any():
        odd = np.arange(n_max + 1) % 2 == 1
        out[np.ix_(odd, neg)] *= -1.0
    return out.reshape((n_max + 1,) + shape)


def sph_bessel_j(n, x):
    """Single-order spherical Bessel function ``j_n(x)``."""
    return sph_bessel_j_seq(n, x)[int(n)]


def legendre_p_seq(n_max, x):
    """
    Legendre polynomials and their derivatives up to degree ``n_max``.

    Returns ``(values, derivatives)``, each of shape ``(n_max + 1,) + np.shape(x)``.
    Raises :class:`DomainError` if any ``|x| > 1``.
    """
    n_max = int(n_max)
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    x = np.asarray(x, dtype=float)
    _check_finite(x)
    if (np.abs(x) > 1.0).any():
        raise DomainError("Legendre polynomials are evaluated on [-1, 1] only")
    p = np.empty((n_max + 1,) + x.shape)
    dp = np.empty_like(p)
    p[0] = 1.0
    dp[0] = 0.0
    if n_max >= 1:
        p[1] = x
        dp[1] = 1.0
    for n in range(1, n_max):
        p[n + 1] = ((2 * n + 1) * x * p[n] - n * p[n - 1]) / (n + 1)
        dp[n + 1] = dp[n - 1] + (2 * n + 1) * p[n]
    return p, dp


def legendre_pbar_seq(n_max, x):
    """Normalized Legendre polynomials ``sqrt(n + 1/2) P_n(x)``."""
    p, _ = legendre_p_seq(n_max, x)
    scale = np.sqrt(np.arange(n_max + 1) + 0.5).reshape((-1,) + (1,) * np.ndim(x))
    return p * scale


def _si_series(t):
    # Alternating series; |t| <= 4 keeps the largest term below 3.
    t2 = t * t
    term = t
    total = t
    k = 0
    while True:
        k += 1
        term = -term * t2 / ((2 * k) * (2 * k + 1))
        add = term / (2 * k + 1)
        total += add
        if abs(add) < 1e-17 * max(abs(total), 1e-300):
            return total


def _si_auxiliary(t):
    # Continued fraction for E1(i t); Si = pi/2 + Im(h) with h = e^{-it} * CF.
    fpmin = 1e-300
    b = complex(1.0, t)
    c = complex(1.0 / fpmin, 0.0)
    d = h = 1.0 / b
    for i in range(2, 10000):
        a = -float((i - 1) * (i - 1))
        b += 2.0
        d = 1.0 / (a * d + b)
        c = b + a / c
        delta = c * d
        h *= delta
        if abs(delta.real - 1.0) + abs(delta.imag) < 1e-16:
            break
    h *= complex(math.cos(t), -math.sin(t))
    return 0.5 * math.pi + h.imag


def _si_scalar(t):
    t = float(t)
    if math.isnan(t) or math.isinf(t):
        raise DomainError("sine_integral needs a finite argument")
    at = abs(t)
    if at == 0.0:
        return 0.0
    val = _si_series(at) if at <= 4.0 else _si_auxiliary(at)
    return val if t > 0 else -val


def sine_integral(t):
    """Sine integral ``Si(t) = int_0^t sin(s)/s ds`` (odd in ``t``)."""
    arr = np.asarray(t, dtype=float)
    if arr.ndim == 0:
        return _si_scalar(arr)
    return np.array([_si_scalar(v) for v in arr.ravel()]).reshape(arr.shape)


def sinc(x):
    """Unnormalized sinc, ``sin(x)/x`` with ``sinc(0) = 1``."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-4
    safe = np.where(small, 1.0, x)
    x2 = x * x
    out = np.where(small, 1.0 - x2 / 6.0 + x2 * x2 / 120.0, np.sin(safe) / safe)
    return out if out.ndim else float(out)
