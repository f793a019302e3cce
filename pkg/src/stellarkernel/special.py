"""Combinatorial and integral primitives used by the kernel formulas.

All functions are pure. Complex half-integer powers use the principal branch.
"""

from __future__ import annotations

import cmath
import math
from functools import lru_cache

import numpy as np

from .exceptions import DomainError, RangeError

MAX_GAMMA_ORDER = 64
MAX_HYPERGEOMETRIC_ORDER = 32
MAX_LAGUERRE_ORDER = 64

# Factorials beyond this are handled through lgamma.
_EXACT_FACTORIAL_LIMIT = 20


def _check_finite(*values):
    for v in values:
        if not cmath.isfinite(complex(v)):
            raise DomainError(f"non-finite argument {v!r}")


@lru_cache(maxsize=None)
def log_factorial(k: int) -> float:
    return math.lgamma(k + 1)


@lru_cache(maxsize=None)
def gamma_coeff(r: int, j: int) -> float:
    """Coefficient of ``(b/sqrt(a))**j`` in the Gaussian-moment polynomial of order ``r``.

    Equals ``r! / (2**r * ((r - j)/2)! * j!)`` when ``r`` and ``j`` share parity
    and zero otherwise.
    """
    if not 0 <= r <= MAX_GAMMA_ORDER:
        raise RangeError(f"r={r} outside [0, {MAX_GAMMA_ORDER}]")
    if not 0 <= j <= r:
        raise RangeError(f"j={j} outside [0, r={r}]")
    if (r - j) % 2:
        return 0.0
    h = (r - j) // 2
    if r <= _EXACT_FACTORIAL_LIMIT:
        return math.factorial(r) / (2**r * math.factorial(h) * math.factorial(j))
    return math.exp(
        log_factorial(r) - r * math.log(2.0) - log_factorial(h) - log_factorial(j)
    )


def gaussian_poly_integral(r: int, a: complex, b: complex) -> complex:
    """Closed form of ``integral_R exp(-a x**2 + b x) x**r dx`` for ``Re(a) > 0``.

    Parameters
    ----------
    r : int
        Monomial order, ``0 <= r <= 64``.
    a, b : complex
        Quadratic and linear coefficients of the exponent.
    """
    _check_finite(a, b)
    a = complex(a)
    b = complex(b)
    if a.real <= 0:
        raise DomainError(f"Re(a)={a.real} <= 0: the integral diverges")
    if not 0 <= r <= MAX_GAMMA_ORDER:
        raise RangeError(f"r={r} outside [0, {MAX_GAMMA_ORDER}]")
    root = cmath.sqrt(a)
    w = b / root
    poly = sum(gamma_coeff(r, j) * w**j for j in range(r % 2, r + 1, 2))
    return math.sqrt(math.pi) * cmath.exp(b * b / (4 * a)) * poly / root ** (r + 1)


def pochhammer(b: float, j: int) -> float:
    out = 1.0
    for k in range(j):
        out *= b + k
    return out


def confluent_hypergeometric_poly(n: int, b: float, zeta: complex) -> complex:
    """``1F1(b + n; b; zeta)`` as an exponential times a degree-``n`` polynomial."""
    _check_finite(zeta)
    if not 0 <= n <= MAX_HYPERGEOMETRIC_ORDER:
        raise RangeError(f"n={n} outside [0, {MAX_HYPERGEOMETRIC_ORDER}]")
    if b <= 0:
        raise DomainError(f"b={b} must be positive")
    zeta = complex(zeta)
    total = sum(math.comb(n, j) * zeta**j / pochhammer(b, j) for j in range(n + 1))
    return cmath.exp(zeta) * total


def laguerre(n: int, x):
    """Laguerre polynomial ``L_n(x)`` by the three-term recurrence.

    ``x`` may be a scalar or an array; arrays are evaluated elementwise.
    """
    if not 0 <= n <= MAX_LAGUERRE_ORDER:
        raise RangeError(f"n={n} outside [0, {MAX_LAGUERRE_ORDER}]")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev if prev.ndim else float(prev)
    cur = 1.0 - x
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 - x) * cur - k * prev) / (k + 1)
    return cur if cur.ndim else float(cur)


def laguerre_coeffs(n: int) -> list[float]:
    """Power-series coefficients of ``L_n``: ``sum_j C(n,j) (-1)**j x**j / j!``."""
    return [math.comb(n, j) * (-1) ** j / math.factorial(j) for j in range(n + 1)]
