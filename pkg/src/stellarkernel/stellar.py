"""Holomorphic (stellar) feature maps: a Gaussian times a multivariate polynomial.

A state on ``m`` bosonic modes is represented by

    F(z) = exp(-1/2 z^T A z + B^T z + C) * sum_i beta_i z^i,

where ``i`` runs over multi-indices of total degree at most the stellar rank.
"""

from __future__ import annotations

import cmath
import json
import math
import warnings
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .exceptions import (
    DegenerateStateError,
    DomainError,
    NormalizationError,
    RangeError,
    ShapeError,
    TruncationWarning,
)

MAX_DISPLACED_FOCK_RANK = 20
MAX_QUDIT_DIM = 32
MAX_CAT_ALPHA = 4.0
MAX_CAT_RANK = 40
MAX_FOCK_TRUNCATION = 200
TAIL_TOLERANCE = 1e-9


def grlex_key(idx):
    # Total degree first, then larger leading exponents first.
    return (sum(idx), tuple(-i for i in idx))


def multi_indices(m: int, max_degree: int):
    """All multi-indices of length ``m`` with total degree <= ``max_degree``, grlex ordered."""
    out = []

    def rec(prefix, remaining, depth):
        if depth == m:
            out.append(tuple(prefix))
            return
        for i in range(remaining + 1):
            rec(prefix + [i], remaining - i, depth + 1)

    rec([], max_degree, 0)
    return sorted(out, key=grlex_key)


@dataclass(frozen=True, eq=False)
class StellarFunction:
    """Immutable m-mode stellar function ``exp(-z^T A z / 2 + B^T z + C) * P(z)``.

    Parameters
    ----------
    A : array_like, shape (m, m)
        Complex quadratic coefficient matrix. Only its symmetric part matters.
    B : array_like, shape (m,)
        Complex linear coefficients.
    C : complex
        Constant in the exponent; carries normalization and global phase.
    beta : mapping
        Polynomial coefficients keyed by multi-index tuples of length ``m``.
    """

    A: np.ndarray
    B: np.ndarray
    C: complex
    beta: Mapping[tuple, complex]
    rank: int = field(init=False)

    def __post_init__(self):
        A = np.array(self.A, dtype=complex, ndmin=2)
        B = np.array(self.B, dtype=complex, ndmin=1)
        m = B.shape[0]
        if A.shape != (m, m):
            raise ShapeError(f"A has shape {A.shape}, expected {(m, m)}")
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(B)) and cmath.isfinite(self.C)):
            raise DomainError("non-finite Gaussian parameters")
        if np.any(np.diag(A).real <= -1):
            raise DomainError("Re(A_jj) <= -1: not normalizable")
        beta = {}
        for idx, coeff in self.beta.items():
            idx = tuple(int(i) for i in idx)
            if len(idx) != m or min(idx) < 0:
                raise ShapeError(f"multi-index {idx} invalid for {m} modes")
            coeff = complex(coeff)
            if not cmath.isfinite(coeff):
                raise DomainError("non-finite polynomial coefficient")
            if coeff != 0:
                beta[idx] = coeff
        if not beta:
            raise DegenerateStateError("the zero polynomial is not a state")
        beta = dict(sorted(beta.items(), key=lambda kv: grlex_key(kv[0])))
        A.setflags(write=False)
        B.setflags(write=False)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "C", complex(self.C))
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "rank", max(sum(i) for i in beta))

    @property
    def modes(self) -> int:
        return self.B.shape[0]

    def gaussian_exponent(self, z):
        """``-z^T A z / 2 + B^T z + C`` at points ``z`` of shape (..., m)."""
        z = np.asarray(z, dtype=complex)
        quad = np.einsum("...j,jk,...k->...", z, self.A, z)
        return -0.5 * quad + z @ self.B + self.C

    def polynomial(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape[:-1], dtype=complex)
        for idx, coeff in self.beta.items():
            term = np.full(z.shape[:-1], coeff, dtype=complex)
            for k, power in enumerate(idx):
                if power:
                    term = term * z[..., k] ** power
            out = out + term
        return out

    def __call__(self, z):
        return np.exp(self.gaussian_exponent(z)) * self.polynomial(z)

    def with_constant(self, C: complex) -> "StellarFunction":
        return StellarFunction(self.A, self.B, C, self.beta)

    def to_dict(self) -> dict:
        return {
            "m": self.modes,
            "A": [[v.real, v.imag] for v in self.A.ravel()],
            "B": [[v.real, v.imag] for v in self.B],
            "C": [self.C.real, self.C.imag],
            "beta": [
                {"idx": list(idx), "re": c.real, "im": c.imag} for idx, c in self.beta.items()
            ],
            "n": self.rank,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "StellarFunction":
        m = int(data["m"])
        A = np.array([complex(re, im) for re, im in data["A"]]).reshape(m, m)
        B = np.array([complex(re, im) for re, im in data["B"]])
        C = complex(*data["C"])
        beta = {tuple(e["idx"]): complex(e["re"], e["im"]) for e in data["beta"]}
        f = cls(A, B, C, beta)
        if "n" in data and int(data["n"]) != f.rank:
            raise DomainError(f"declared rank {data['n']} != polynomial degree {f.rank}")
        return f

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "StellarFunction":
        return cls.from_dict(json.loads(text))


def vacuum(m: int = 1) -> StellarFunction:
    return StellarFunction(np.zeros((m, m)), np.zeros(m), 0.0, {(0,) * m: 1.0})


def coherent(alpha: complex) -> StellarFunction:
    """Single-mode coherent state ``|alpha>``: ``exp(alpha z - |alpha|^2/2)``."""
    alpha = complex(alpha)
    return StellarFunction([[0.0]], [alpha], -abs(alpha) ** 2 / 2, {(0,): 1.0})


def _complex_point(point, bandwidth):
    x1, x2 = (float(v) for v in point)
    return complex(bandwidth * x1, bandwidth * x2)


def encode_displaced_fock(point, n: int, bandwidth: float = 1.0) -> StellarFunction:
    """Encode a 2-D point as the displaced Fock state ``D(c(x1 + i x2))|n>``."""
    if not 0 <= n <= MAX_DISPLACED_FOCK_RANK:
        raise RangeError(f"n={n} outside [0, {MAX_DISPLACED_FOCK_RANK}]")
    if bandwidth <= 0:
        raise DomainError("bandwidth must be positive")
    alpha = _complex_point(point, bandwidth)
    norm = math.sqrt(math.factorial(n))
    shift = -alpha.conjugate()
    beta = {(k,): math.comb(n, k) * shift ** (n - k) / norm for k in range(n + 1)}
    return StellarFunction([[0.0]], [alpha], -abs(alpha) ** 2 / 2, beta)


def encode_qudit(amplitudes) -> StellarFunction:
    """Encode normalized qudit amplitudes as the polynomial ``sum_j a_j z^j / sqrt(j!)``."""
    amps = np.asarray(amplitudes, dtype=complex).ravel()
    if not 1 <= amps.size <= MAX_QUDIT_DIM:
        raise RangeError(f"qudit dimension {amps.size} outside [1, {MAX_QUDIT_DIM}]")
    norm2 = float(np.vdot(amps, amps).real)
    if abs(norm2 - 1.0) > 1e-9:
        raise NormalizationError(f"sum |a_j|^2 = {norm2!r}, expected 1")
    beta = {(j,): a / math.sqrt(math.factorial(j)) for j, a in enumerate(amps) if a != 0}
    return StellarFunction([[0.0]], [0.0], 0.0, beta)


def cat_amplitudes(alpha: complex, parity: str, levels: int) -> np.ndarray:
    """Fock amplitudes 0..levels-1 of the normalized cat state ``|alpha> +/- |-alpha>``."""
    alpha = complex(alpha)
    if parity not in ("even", "odd"):
        raise ValueError("parity must be 'even' or 'odd'")
    x = abs(alpha) ** 2
    # N_+ = 2(1 + e^{-2|a|^2}), N_- = 2(1 - e^{-2|a|^2}); expm1 keeps N_- accurate near 0.
    norm2 = 2 * (1 + math.exp(-2 * x)) if parity == "even" else -2 * math.expm1(-2 * x)
    if norm2 <= 0:
        raise DegenerateStateError("odd cat state with alpha = 0 is the zero vector")
    start = 0 if parity == "even" else 1
    out = np.zeros(levels, dtype=complex)
    for k in range(start, levels, 2):
        log_mag = -x / 2 - 0.5 * math.lgamma(k + 1)
        out[k] = 2 * cmath.exp(log_mag) * alpha**k / math.sqrt(norm2)
    return out


def encode_cat_truncated(alpha: complex, rank: int, parity: str = "even"):
    """Truncate a cat state to Fock levels ``0..rank`` and renormalize.

    Returns
    -------
    f : StellarFunction
        Polynomial stellar function of the renormalized truncation.
    deficit : float
        Trace distance ``sqrt(1 - |<cat|trunc>|^2)`` to the untruncated state.
    """
    if abs(alpha) > MAX_CAT_ALPHA:
        raise RangeError(f"|alpha|={abs(alpha)} exceeds {MAX_CAT_ALPHA}")
    if not 0 <= rank <= MAX_CAT_RANK:
        raise RangeError(f"rank={rank} outside [0, {MAX_CAT_RANK}]")
    psi = cat_amplitudes(alpha, parity, rank + 1)
    kept = float(np.vdot(psi, psi).real)
    if kept == 0.0:
        raise DegenerateStateError(f"{parity} cat has no weight on levels 0..{rank}")
    psi = psi / math.sqrt(kept)
    beta = {(k,): a / math.sqrt(math.factorial(k)) for k, a in enumerate(psi) if a != 0}
    deficit = math.sqrt(max(0.0, 1.0 - kept))
    return StellarFunction([[0.0]], [0.0], 0.0, beta), deficit


@dataclass(frozen=True, eq=False)
class FockVector:
    """Fock amplitudes ``psi[i1, ..., im]`` up to total degree ``truncation``.

    Entries with total degree above the truncation are zero.
    """

    amplitudes: np.ndarray
    truncation: int
    tail_mass: float = 0.0
    truncated: bool = False

    @property
    def modes(self) -> int:
        return self.amplitudes.ndim

    def norm(self) -> float:
        return float(np.sqrt(np.vdot(self.amplitudes, self.amplitudes).real))

    def vdot(self, other: "FockVector") -> complex:
        """``<self|other>`` over the common truncation."""
        K = min(self.truncation, other.truncation)
        sl = (slice(0, K + 1),) * self.modes
        a, b = self.amplitudes[sl], other.amplitudes[sl]
        mask = _degree_grid(self.modes, K) <= K
        return complex(np.vdot(a[mask], b[mask]))

    def to_stellar(self) -> StellarFunction:
        """Polynomial stellar function ``sum_i psi_i z^i / sqrt(i!)``."""
        beta = {}
        for idx in zip(*np.nonzero(self.amplitudes)):
            idx = tuple(int(i) for i in idx)
            fact = math.prod(math.factorial(i) for i in idx)
            beta[idx] = self.amplitudes[idx] / math.sqrt(fact)
        m = self.modes
        return StellarFunction(np.zeros((m, m)), np.zeros(m), 0.0, beta)


def _degree_grid(m: int, K: int) -> np.ndarray:
    axes = np.meshgrid(*([np.arange(K + 1)] * m), indexing="ij")
    return sum(axes)


def _tail_fraction(amplitudes: np.ndarray, K: int) -> float:
    """Estimated mass beyond shell ``K`` relative to the kept mass.

    Shell masses are paired (to tolerate parity-sparse states) and the decay
    over the last four shells is extrapolated geometrically.
    """
    m = amplitudes.ndim
    deg = _degree_grid(m, K)
    weights = np.abs(amplitudes) ** 2
    total = weights[deg <= K].sum()
    if total == 0:
        return 0.0
    shells = np.bincount(deg.ravel(), weights=weights.ravel(), minlength=2 * K + 1)[: K + 1]
    last = shells[K] + shells[K - 1] if K >= 1 else shells[K]
    if last == 0:
        return 0.0
    if K < 5:
        return 1.0
    before = shells[K - 4] + shells[K - 5]
    if before == 0 or last >= before:
        return 1.0
    rho = (last / before) ** 0.25
    return float(last * rho / (1 - rho) / total)


def _gaussian_series(f: StellarFunction, K: int) -> np.ndarray:
    """``h[a] = sqrt(a!) * [z^a] exp(-z^T A z / 2 + B^T z + C)`` for ``|a| <= K``."""
    m = f.modes
    A = 0.5 * (f.A + f.A.T)
    h = np.zeros((K + 1,) * m, dtype=complex)
    h[(0,) * m] = cmath.exp(f.C)
    for idx in multi_indices(m, K)[1:]:
        k = next(i for i, v in enumerate(idx) if v)
        prev = list(idx)
        prev[k] -= 1
        val = f.B[k] * h[tuple(prev)]
        for l in range(m):
            if prev[l] == 0 or A[k, l] == 0:
                continue
            back = list(prev)
            back[l] -= 1
            val -= A[k, l] * math.sqrt(prev[l]) * h[tuple(back)]
        h[idx] = val / math.sqrt(idx[k])
    return h


def fock_coefficients(
    f: StellarFunction, truncation: int | None = None, tail_tolerance: float = TAIL_TOLERANCE
) -> FockVector:
    """Fock amplitudes ``psi_a = sqrt(a!) [z^a] F(z)`` by power-series composition.

    With ``truncation=None`` the cutoff starts at ``max(4n, 40)`` (fewer for
    several modes) and doubles up to a mode-dependent cap until the estimated
    tail mass drops below ``tail_tolerance``.
    """
    m = f.modes
    auto = truncation is None
    if auto:
        K = max(4 * f.rank, {1: 40, 2: 24}.get(m, 12))
    else:
        K = int(truncation)
    if K < f.rank:
        raise RangeError(f"truncation {K} below stellar rank {f.rank}")
    if K > MAX_FOCK_TRUNCATION:
        raise RangeError(f"truncation {K} above {MAX_FOCK_TRUNCATION}")
    polynomial_only = not (f.A.any() or f.B.any())
    while True:
        psi = _fock_at(f, K)
        # a bare polynomial has no amplitudes past its rank
        tail = 0.0 if polynomial_only else _tail_fraction(psi, K)
        if not auto or tail < tail_tolerance or K >= _auto_limit(m):
            break
        K = min(2 * K, _auto_limit(m))
    truncated = tail >= tail_tolerance
    if truncated:
        warnings.warn(
            f"Fock truncation {K} leaves estimated tail mass {tail:.3g}",
            TruncationWarning,
            stacklevel=2,
        )
    return FockVector(psi, K, tail, truncated)


def _auto_limit(m: int) -> int:
    return {1: MAX_FOCK_TRUNCATION, 2: 192}.get(m, 40)


def _fock_at(f: StellarFunction, K: int) -> np.ndarray:
    m = f.modes
    h = _gaussian_series(f, K)
    psi = np.zeros_like(h)
    grids = [np.arange(K + 1)] * m
    for idx, coeff in f.beta.items():
        if sum(idx) > K:
            continue
        factor = np.ones((1,) * m)
        for axis, g in enumerate(idx):
            a = grids[axis][g:]
            # sqrt(a! / (a - g)!) along this axis
            ff = np.exp(0.5 * (_lgamma(a + 1) - _lgamma(a - g + 1)))
            shape = [1] * m
            shape[axis] = a.size
            factor = factor * ff.reshape(shape)
        dst = tuple(slice(g, K + 1) for g in idx)
        src = tuple(slice(0, K + 1 - g) for g in idx)
        psi[dst] += coeff * factor * h[src]
    psi[_degree_grid(m, K) > K] = 0
    return psi


def _lgamma(x):
    return np.vectorize(math.lgamma, otypes=[float])(x)


def normalize(f: StellarFunction) -> StellarFunction:
    """Shift ``C`` by ``-ln<F|F>/2`` so that the self-kernel is one."""
    from .engine import inner_product

    norm2 = inner_product(f, f).real
    if not math.isfinite(norm2) or norm2 <= 0:
        raise DomainError(f"self inner product {norm2!r} is not finite and positive")
    return f.with_constant(f.C - 0.5 * math.log(norm2))


def random_stellar(
    rng: np.random.Generator,
    modes: int = 1,
    rank: int = 2,
    a_scale: float = 0.6,
    b_scale: float = 1.5,
    offdiag_scale: float | None = None,
) -> StellarFunction:
    """Random stellar function used by tests and verification suites.

    Diagonal entries of ``A`` have modulus at most ``a_scale``; off-diagonal
    entries at most ``offdiag_scale`` (default ``a_scale / (2 m)``).
    """
    m = modes
    if offdiag_scale is None:
        offdiag_scale = a_scale / (2 * m)

    def disc(scale, size):
        r = scale * np.sqrt(rng.uniform(0, 1, size))
        return r * np.exp(2j * np.pi * rng.uniform(0, 1, size))

    A = np.diag(disc(a_scale, m))
    for j in range(m):
        for k in range(j + 1, m):
            A[j, k] = A[k, j] = disc(offdiag_scale, 1)[0]
    B = disc(b_scale, m)
    idxs = multi_indices(m, rank)
    coeffs = rng.normal(size=len(idxs)) + 1j * rng.normal(size=len(idxs))
    beta = dict(zip(idxs, coeffs))
    top = [i for i in idxs if sum(i) == rank]
    beta[top[int(rng.integers(len(top)))]] = complex(1.0 + rng.uniform(0, 1))
    return StellarFunction(A, B, 0.0, beta)


__all__ = [
    "StellarFunction",
    "FockVector",
    "vacuum",
    "coherent",
    "encode_displaced_fock",
    "encode_qudit",
    "encode_cat_truncated",
    "cat_amplitudes",
    "fock_coefficients",
    "normalize",
    "random_stellar",
    "multi_indices",
]
