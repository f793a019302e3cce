"""Closed-form Segal-Bargmann inner products of m-mode stellar functions.

Writing ``z_j = x_{2j-1} + i x_{2j}``, the integrand of ``<F1|F2>`` becomes

    exp(-sum_j a_j x_j^2 + x_j (b_j + sum_{k>j} d_jk x_k)) * prod_k x_k^{r_k}

summed over monomials. The 2m real integrals are done one variable at a
time; each one is a Gaussian moment (see :func:`special.gaussian_poly_integral`)
and folds its variable into the remaining quadratic form, which gives the
recursion for ``a``, ``b``, ``d`` implemented in :func:`recursion_tables`.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .exceptions import BudgetError, DivergentIntegralError, NormalizationError, RangeError, ShapeError
from .special import gamma_coeff
from .stellar import StellarFunction

MAX_MODES = 3
MAX_RANK = {1: 8, 2: 4, 3: 3}
DEFAULT_BUDGET = 50_000_000


@dataclass(frozen=True)
class SeedParams:
    """Quadratic form ``-sum a_j x_j^2 + x_j (b_j + sum_{k>j} d_jk x_k) + const``.

    ``d`` is strictly upper triangular. ``const`` is ``conj(C1) + C2``.
    """

    a: np.ndarray
    b: np.ndarray
    d: np.ndarray
    const: complex


@dataclass(frozen=True)
class RecursionTables:
    """Pivot values after eliminating variables ``0..l-1``.

    ``a[l]``, ``b[l]`` and ``d[l, k]`` are the coefficients of variable ``l``
    at the moment it is integrated out.
    """

    a: np.ndarray
    b: np.ndarray
    d: np.ndarray


@dataclass(frozen=True)
class InnerProductResult:
    value: complex
    terms: int


def _real_embedding(m: int) -> np.ndarray:
    # z = M x with x = (Re z_1, Im z_1, Re z_2, ...)
    M = np.zeros((m, 2 * m), dtype=complex)
    for j in range(m):
        M[j, 2 * j] = 1.0
        M[j, 2 * j + 1] = 1j
    return M


def _check_modes(f1: StellarFunction, f2: StellarFunction) -> int:
    if f1.modes != f2.modes:
        raise ShapeError(f"mode mismatch: {f1.modes} vs {f2.modes}")
    if f1.modes > MAX_MODES:
        raise RangeError(f"{f1.modes} modes exceeds supported maximum {MAX_MODES}")
    return f1.modes


def seed(f1: StellarFunction, f2: StellarFunction) -> SeedParams:
    """Real-variable quadratic form of ``e^{-|z|^2} conj(G1(z)) G2(z)``.

    Raises
    ------
    DivergentIntegralError
        If some diagonal coefficient has non-positive real part.
    """
    m = _check_modes(f1, f2)
    M = _real_embedding(m)
    Mc = M.conj()

    def sym(X):
        return 0.5 * (X + X.T)

    S = (
        np.eye(2 * m)
        + 0.5 * sym(Mc.T @ f1.A.conj() @ Mc)
        + 0.5 * sym(M.T @ f2.A @ M)
    )
    a = np.diag(S).copy()
    d = np.triu(-2.0 * S, k=1)
    b = Mc.T @ f1.B.conj() + M.T @ f2.B
    if np.any(a.real <= 0):
        j = int(np.argmin(a.real))
        raise DivergentIntegralError(f"Re(a_0,{j + 1}) = {a[j].real} <= 0")
    return SeedParams(a, b, d, f1.C.conjugate() + f2.C)


def recursion_tables(params: SeedParams) -> RecursionTables:
    n = params.a.shape[0]
    a = params.a.astype(complex).copy()
    b = params.b.astype(complex).copy()
    d = params.d.astype(complex).copy()
    piv_a = np.zeros(n, dtype=complex)
    piv_b = np.zeros(n, dtype=complex)
    piv_d = np.zeros((n, n), dtype=complex)
    for l in range(n):
        if a[l].real <= 0:
            raise DivergentIntegralError(
                f"recursion drove Re(a) to {a[l].real} at level {l + 1}"
            )
        piv_a[l], piv_b[l] = a[l], b[l]
        piv_d[l, l + 1 :] = d[l, l + 1 :]
        row = d[l, l + 1 :]
        a[l + 1 :] -= row**2 / (4 * a[l])
        b[l + 1 :] += b[l] * row / (2 * a[l])
        d[l + 1 :, l + 1 :] += np.triu(np.outer(row, row) / (2 * a[l]), k=1)
    return RecursionTables(piv_a, piv_b, piv_d)


@lru_cache(maxsize=None)
def compositions(total: int, parts: int) -> tuple:
    """Weak compositions of ``total`` into ``parts`` parts, colex ordered."""
    if parts == 1:
        return ((total,),)
    out = []
    for last in range(total + 1):
        for head in compositions(total - last, parts - 1):
            out.append(head + (last,))
    return tuple(out)


class _CompensatedSum:
    """Neumaier-compensated accumulator for complex terms."""

    __slots__ = ("re", "im", "cre", "cim")

    def __init__(self):
        self.re = self.im = self.cre = self.cim = 0.0

    def add(self, z: complex):
        for part, attr, cattr in ((z.real, "re", "cre"), (z.imag, "im", "cim")):
            s = getattr(self, attr)
            t = s + part
            if abs(s) >= abs(part):
                setattr(self, cattr, getattr(self, cattr) + ((s - t) + part))
            else:
                setattr(self, cattr, getattr(self, cattr) + ((part - t) + s))
            setattr(self, attr, t)

    @property
    def value(self) -> complex:
        return complex(self.re + self.cre, self.im + self.cim)


class _NestedSum:
    """Depth-2m product of sums, memoized on (level, exponent vector)."""

    def __init__(self, tables: RecursionTables):
        self.a = [complex(v) for v in tables.a]
        self.sqrt_a = [cmath.sqrt(v) for v in tables.a]
        self.b = [complex(v) for v in tables.b]
        self.d = [[complex(v) for v in row] for row in tables.d]
        self.n = len(self.a)
        self._values = {}
        self._counts = {}

    def _terms(self, level, r):
        """Yield (weight, next exponents) pairs of the current level."""
        rl, rest = r[0], r[1:]
        b = self.b[level]
        sa = self.sqrt_a[level]
        d_row = self.d[level][level + 1 :]
        for s in range(rl % 2, rl + 1, 2):
            gam = gamma_coeff(rl, s) / sa ** (rl + s + 1)
            if level == self.n - 1:
                if s and b == 0:
                    continue
                yield gam * b**s, None
                continue
            for t in range(s + 1):
                if s - t and b == 0:
                    continue
                w_t = gam * math.factorial(s) / math.factorial(s - t) * b ** (s - t)
                for u in compositions(t, len(rest)):
                    w = w_t
                    for dk, uk in zip(d_row, u):
                        if uk:
                            if dk == 0:
                                w = 0
                                break
                            w *= dk**uk / math.factorial(uk)
                    if w == 0:
                        continue
                    yield w, tuple(x + y for x, y in zip(rest, u))

    def count(self, level, r) -> int:
        key = (level, r)
        if key not in self._counts:
            total = 0
            for _, nxt in self._terms(level, r):
                total += 1 if nxt is None else self.count(level + 1, nxt)
            self._counts[key] = total
        return self._counts[key]

    def value(self, level, r) -> complex:
        key = (level, r)
        if key not in self._values:
            acc = _CompensatedSum()
            for w, nxt in self._terms(level, r):
                acc.add(w if nxt is None else w * self.value(level + 1, nxt))
            self._values[key] = acc.value
        return self._values[key]


def _monomial_weights(f1: StellarFunction, f2: StellarFunction):
    """Collect ``conj(beta_i) beta_j g(i, j, p, q)`` by real-variable exponent vector."""
    m = f1.modes
    buckets: dict[tuple, _CompensatedSum] = {}
    for i, bi in f1.beta.items():
        for j, bj in f2.beta.items():
            base = bi.conjugate() * bj
            ranges = [range(ik + 1) for ik in i] + [range(jk + 1) for jk in j]
            for pq in _product(ranges):
                p, q = pq[:m], pq[m:]
                g = base
                r0 = []
                for k in range(m):
                    g *= math.comb(i[k], p[k]) * math.comb(j[k], q[k])
                    g *= (-1j) ** p[k] * (1j) ** q[k]
                    r0.extend((i[k] + j[k] - p[k] - q[k], p[k] + q[k]))
                buckets.setdefault(tuple(r0), _CompensatedSum()).add(g)
    return {r0: acc.value for r0, acc in buckets.items()}


def _product(ranges):
    if not ranges:
        yield ()
        return
    for v in ranges[0]:
        for rest in _product(ranges[1:]):
            yield (v,) + rest


def evaluate(
    f1: StellarFunction,
    f2: StellarFunction,
    *,
    budget: int = DEFAULT_BUDGET,
    max_rank: int | None = None,
) -> InnerProductResult:
    """Evaluate ``<F1|F2>`` and report the number of nonzero summed terms.

    Raises
    ------
    BudgetError
        If either rank exceeds the per-mode guard or the term count exceeds ``budget``.
    DivergentIntegralError
        If the Gaussian part is not integrable.
    """
    m = _check_modes(f1, f2)
    limit = MAX_RANK[m] if max_rank is None else max_rank
    if max(f1.rank, f2.rank) > limit:
        raise BudgetError(f"rank {max(f1.rank, f2.rank)} exceeds guard {limit} for m={m}")
    params = seed(f1, f2)
    tables = recursion_tables(params)
    weights = _monomial_weights(f1, f2)
    nested = _NestedSum(tables)
    terms = len(f1.beta) * len(f2.beta)
    for r0 in weights:
        terms += nested.count(0, r0)
        if terms > budget:
            raise BudgetError(f"term count exceeds budget {budget}")
    acc = _CompensatedSum()
    for r0, w in weights.items():
        if w != 0:
            acc.add(w * nested.value(0, r0))
    exponent = params.const + complex(np.sum(tables.b**2 / (4 * tables.a)))
    return InnerProductResult(cmath.exp(exponent) * acc.value, terms)


def inner_product(f1: StellarFunction, f2: StellarFunction, **kwargs) -> complex:
    """Segal-Bargmann inner product ``<F1|F2>`` in closed form."""
    return evaluate(f1, f2, **kwargs).value


def kernel(f1: StellarFunction, f2: StellarFunction, **kwargs) -> float:
    """Quantum kernel ``|<F1|F2>|^2``."""
    return abs(inner_product(f1, f2, **kwargs)) ** 2


def qudit_inner(amps1, amps2) -> complex:
    """Direct qudit overlap ``sum_j conj(a_j) a'_j``."""
    a1 = np.asarray(amps1, dtype=complex).ravel()
    a2 = np.asarray(amps2, dtype=complex).ravel()
    if a1.shape != a2.shape:
        raise ShapeError(f"length mismatch: {a1.size} vs {a2.size}")
    for a in (a1, a2):
        if abs(np.vdot(a, a).real - 1) > 1e-9:
            raise NormalizationError("qudit amplitudes must be normalized")
    return complex(np.vdot(a1, a2))
