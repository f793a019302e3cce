"""Specialized kernels for displaced Fock encodings and their radial properties.

For ``x -> D(c(x1 + i x2))|n>`` the kernel depends only on
``s^2 = c^2 |x - x'|^2`` and equals ``exp(-s^2) L_n(s^2)^2``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.optimize import brentq

from .exceptions import DomainError, RangeError
from .special import confluent_hypergeometric_poly, gamma_coeff, laguerre

MAX_SIX_FOLD_RANK = 8
MAX_RADIAL_RANK = 20
MAX_FOURIER_RANK = 12
MAX_LAGUERRE_KERNEL_RANK = 64

# (sign-carrying polynomial coefficients in s^2, denominator) for |0>..|8>.
_TABLE = {
    0: ([1], 1),
    1: ([-1, 1], 1),
    2: ([2, -4, 1], 4),
    3: ([-6, 18, -9, 1], 36),
    4: ([24, -96, 72, -16, 1], 576),
    5: ([-120, 600, -600, 200, -25, 1], 14400),
    6: ([720, -4320, 5400, -2400, 450, -36, 1], 518400),
    7: ([-5040, 35280, -52920, 29400, -7350, 882, -49, 1], 25401600),
    8: ([40320, -322560, 564480, -376320, 117600, -18816, 1568, -64, 1], 1625702400),
}


def _alpha(point, c: float) -> complex:
    x1, x2 = (float(v) for v in point)
    return complex(c * x1, c * x2)


def displaced_fock_inner(x1, x2, n: int, c: float = 1.0) -> complex:
    """Inner product ``<D(alpha) n | D(beta) n>`` from the six-fold moment sum.

    Parameters
    ----------
    x1, x2 : array_like, shape (2,)
        Data points, encoded as ``alpha = c (x1[0] + i x1[1])`` and likewise ``beta``.
    n : int
        Fock level, at most 8.
    c : float
        Bandwidth.

    Notes
    -----
    The sum runs over the multinomial expansions of ``(conj z - alpha)^n`` and
    ``(z - conj beta)^n`` in ``z = x + i y`` and the Gaussian moments in ``x``
    and ``y``. It is evaluated as ``sum A_ij X_{i+k} B_kl Y_{j+l}`` with Hankel
    matrices of the moment sums; the terms are exactly those of the nested form.
    """
    if not 0 <= n <= MAX_SIX_FOLD_RANK:
        raise RangeError(f"n={n} outside [0, {MAX_SIX_FOLD_RANK}]")
    if c <= 0:
        raise DomainError("bandwidth must be positive")
    a, b = _alpha(x1, c), _alpha(x2, c)
    bx = a.conjugate() + b
    by = -1j * (a.conjugate() - b)

    A = np.zeros((n + 1, n + 1), dtype=complex)
    B = np.zeros((n + 1, n + 1), dtype=complex)
    for i in range(n + 1):
        for j in range(n + 1 - i):
            denom = math.factorial(i) * math.factorial(j) * math.factorial(n - i - j)
            A[i, j] = (-1j) ** j * (-a) ** (n - i - j) / denom
            B[i, j] = (1j) ** j * (-b.conjugate()) ** (n - i - j) / denom

    def moments(w):
        return np.array(
            [sum(gamma_coeff(r, p) * w**p for p in range(r % 2, r + 1, 2)) for r in range(2 * n + 1)]
        )

    X, Y = moments(bx), moments(by)
    idx = np.add.outer(np.arange(n + 1), np.arange(n + 1))
    total = np.sum(A * (X[idx] @ B @ Y[idx].T))
    pref = math.factorial(n) * cmath.exp(-(abs(a) ** 2 + abs(b) ** 2) / 2 + a.conjugate() * b)
    return complex(pref * total)


def displaced_fock_kernel_laguerre(s2, n: int):
    """``exp(-s2) * L_n(s2)**2``; accepts scalars or arrays."""
    if not 0 <= n <= MAX_LAGUERRE_KERNEL_RANK:
        raise RangeError(f"n={n} outside [0, {MAX_LAGUERRE_KERNEL_RANK}]")
    u = np.asarray(s2, dtype=float)
    if np.any(u < 0):
        raise DomainError("s2 must be nonnegative")
    out = np.exp(-u) * laguerre(n, u) ** 2
    return float(out) if np.ndim(out) == 0 else out


def displaced_fock_kernel(x1, x2, n: int, c: float = 1.0) -> float:
    """Kernel between two points through the radial form."""
    d = np.asarray(x1, dtype=float) - np.asarray(x2, dtype=float)
    return displaced_fock_kernel_laguerre(c * c * float(d @ d), n)


def table_reference_kernel(s2, n: int):
    """Hard-coded reference polynomials for ``n = 0..8``."""
    if n not in _TABLE:
        raise RangeError(f"n={n} outside [0, 8]")
    coeffs, denom = _TABLE[n]
    u = np.asarray(s2, dtype=float)
    poly = np.polynomial.polynomial.polyval(u, coeffs)
    out = np.exp(-u) * poly**2 / denom
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class RadialKernelPoly:
    """``k(s) = exp(-s^2) * sum_j coeffs[j] * s^(2j)``."""

    n: int
    coeffs: tuple

    def __call__(self, s2):
        u = np.asarray(s2, dtype=float)
        return np.exp(-u) * np.polynomial.polynomial.polyval(u, self.coeffs)

    def fourier(self, omega: float) -> float:
        zeta = -(float(omega) ** 2) / 4
        total = sum(
            a * math.factorial(j) / 2 * confluent_hypergeometric_poly(j, 1, zeta).real
            for j, a in enumerate(self.coeffs)
        )
        return float(total)


def _laguerre_square_exact(n: int) -> list[Fraction]:
    lag = [Fraction(math.comb(n, j) * (-1) ** j, math.factorial(j)) for j in range(n + 1)]
    out = [Fraction(0)] * (2 * n + 1)
    for i, x in enumerate(lag):
        for j, y in enumerate(lag):
            out[i + j] += x * y
    return out


def radial_poly_coeffs(n: int) -> RadialKernelPoly:
    """Coefficients of ``L_n(u)^2`` in powers of ``u = s^2``."""
    if not 0 <= n <= MAX_RADIAL_RANK:
        raise RangeError(f"n={n} outside [0, {MAX_RADIAL_RANK}]")
    return RadialKernelPoly(n, tuple(float(v) for v in _laguerre_square_exact(n)))


def fourier_radial(n: int, omega: float) -> float:
    """2-D Fourier transform ``(1/2 pi) int exp(i s.w) k(|s|) d^2 s`` at ``|w| = omega``."""
    if not 0 <= n <= MAX_FOURIER_RANK:
        raise RangeError(f"n={n} outside [0, {MAX_FOURIER_RANK}]")
    if omega < 0:
        raise DomainError("omega must be nonnegative")
    return radial_poly_coeffs(n).fourier(omega)


def kernel_integral(n: int) -> float:
    """``int k(|s|) d^2 s`` from the exact coefficient sum; always ``pi``."""
    if not 0 <= n <= MAX_RADIAL_RANK:
        raise RangeError(f"n={n} outside [0, {MAX_RADIAL_RANK}]")
    total = sum(
        (-1) ** (j + k) * math.comb(n, j) * math.comb(n, k) * math.comb(j + k, k)
        for j in range(n + 1)
        for k in range(n + 1)
    )
    assert total == 1, total
    return math.pi * total


def _rotate(v, theta):
    c, s = math.cos(theta), math.sin(theta)
    x, y = (float(t) for t in v)
    return (c * x - s * y, s * x + c * y)


def translation_rotation_check(x1, x2, h, theta: float, n: int, c: float = 1.0) -> float:
    """Largest change of the engine kernel under a shift by ``h`` or a rotation by ``theta``."""
    from .engine import kernel
    from .stellar import encode_displaced_fock

    def k(p, q):
        return kernel(encode_displaced_fock(p, n, c), encode_displaced_fock(q, n, c))

    x1 = tuple(float(v) for v in x1)
    x2 = tuple(float(v) for v in x2)
    h = tuple(float(v) for v in h)
    base = k(x1, x2)
    shifted = k(tuple(a + b for a, b in zip(x1, h)), tuple(a + b for a, b in zip(x2, h)))
    rotated = k(_rotate(x1, theta), _rotate(x2, theta))
    return max(abs(shifted - base), abs(rotated - base))


def kernel_zeros(n: int, s2_max: float = 64.0, grid: int = 4096) -> list[float]:
    """Zeros of the radial kernel in ``s^2`` on ``(0, s2_max)``.

    Sign changes of ``L_n`` on a uniform grid are refined by bisection.
    """
    u = np.linspace(0.0, s2_max, grid + 1)[1:-1]
    vals = laguerre(n, u)
    roots = []
    for k in np.nonzero(np.signbit(vals[:-1]) != np.signbit(vals[1:]))[0]:
        roots.append(brentq(lambda t: laguerre(n, t), u[k], u[k + 1], xtol=1e-14))
    return roots


__all__ = [
    "RadialKernelPoly",
    "displaced_fock_inner",
    "displaced_fock_kernel",
    "displaced_fock_kernel_laguerre",
    "fourier_radial",
    "kernel_integral",
    "kernel_zeros",
    "radial_poly_coeffs",
    "table_reference_kernel",
    "translation_rotation_check",
]
