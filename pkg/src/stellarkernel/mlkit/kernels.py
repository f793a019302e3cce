"""Data-to-state encodings and Gram matrices.

Families
--------
displaced-fock
    ``x -> D(c(x1 + i x2))|n>``; evaluated through the radial closed form.
coherent
    ``x -> |c(x1 + i x2)>``; the Gaussian kernel, evaluated by the engine.
qudit
    The coherent state ``|c(x1 + i x2)>`` cut to ``d`` levels and renormalized.
cat
    Even or odd cat state at ``c(x1 + i x2)``, cut to levels ``0..n`` and renormalized.
general
    ``exp(-squeeze z^2 / 2 + alpha z) (z - conj(alpha))^n``, normalized; a
    squeezed non-Gaussian family that exercises the full quadratic form.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass

import numpy as np
from joblib import Parallel, delayed

from ..closedforms import displaced_fock_kernel_laguerre
from ..engine import DEFAULT_BUDGET, kernel as engine_kernel
from ..exceptions import BudgetError, DomainError, RangeError
from ..stellar import (
    StellarFunction,
    coherent,
    encode_cat_truncated,
    encode_displaced_fock,
    encode_qudit,
    normalize,
)

FAMILIES = ("displaced-fock", "coherent", "qudit", "cat", "general")


@dataclass(frozen=True)
class KernelSpec:
    """Encoding family and its parameters."""

    family: str = "displaced-fock"
    n: int = 1
    bandwidth: float = 1.0
    d: int = 4
    parity: str = "even"
    squeeze: float = 0.3
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"unknown family {self.family!r}; choose from {FAMILIES}")
        if self.bandwidth <= 0:
            raise DomainError("bandwidth must be positive")
        if self.n < 0 or self.d < 1:
            raise RangeError("n must be >= 0 and d >= 1")
        if not -1 < self.squeeze < 1:
            raise DomainError("squeeze must lie in (-1, 1)")

    @property
    def digest(self) -> str:
        text = json.dumps(asdict(self), sort_keys=True)
        return hashlib.sha256(text.encode()).hexdigest()


def _alpha(point, c) -> complex:
    x1, x2 = (float(v) for v in point)
    return complex(c * x1, c * x2)


def encode_point(spec: KernelSpec, point) -> StellarFunction:
    """Stellar function of a 2-D data point under ``spec``."""
    c = spec.bandwidth
    if spec.family == "displaced-fock":
        return encode_displaced_fock(point, spec.n, c)
    alpha = _alpha(point, c)
    if spec.family == "coherent":
        return coherent(alpha)
    if spec.family == "qudit":
        k = np.arange(spec.d)
        log_mag = k * math.log(abs(alpha)) if alpha else np.where(k == 0, 0.0, -np.inf)
        amps = np.exp(log_mag - 0.5 * np.array([math.lgamma(j + 1) for j in k]))
        amps = amps * np.exp(1j * k * np.angle(alpha))
        return encode_qudit(amps / np.linalg.norm(amps))
    if spec.family == "cat":
        return encode_cat_truncated(alpha, spec.n, spec.parity)[0]
    beta = {(k,): math.comb(spec.n, k) * (-alpha.conjugate()) ** (spec.n - k) for k in range(spec.n + 1)}
    return normalize(StellarFunction([[spec.squeeze]], [alpha], 0.0, beta))


def kernel_value(spec: KernelSpec, p, q) -> float:
    if spec.family == "displaced-fock":
        d = np.asarray(p, float) - np.asarray(q, float)
        return displaced_fock_kernel_laguerre(spec.bandwidth**2 * float(d @ d), spec.n)
    return engine_kernel(encode_point(spec, p), encode_point(spec, q), budget=spec.budget)


@dataclass(frozen=True, eq=False)
class GramMatrix:
    """Kernel matrix with provenance hashes of the kernel spec and data."""

    values: np.ndarray
    kernel_digest: str
    data_digest: str

    @property
    def shape(self):
        return self.values.shape

    def min_eigenvalue(self) -> float:
        from scipy.linalg import eigvalsh

        return float(eigvalsh(self.values, subset_by_index=[0, 0])[0])

    def to_csv(self, path) -> None:
        np.savetxt(path, self.values, delimiter=",", fmt="%.17g")


def _data_digest(*arrays) -> str:
    h = hashlib.sha256()
    for a in arrays:
        h.update(np.ascontiguousarray(a, dtype="<f8").tobytes())
    return h.hexdigest()


def _radial_block(spec, X, Y):
    diff = X[:, None, :] - Y[None, :, :]
    s2 = spec.bandwidth**2 * np.einsum("ijk,ijk->ij", diff, diff)
    return displaced_fock_kernel_laguerre(s2, spec.n)


def _engine_rows(spec, fx, fy, rows, symmetric):
    out = []
    for i in rows:
        start = i if symmetric else 0
        row = np.zeros(len(fy))
        for j in range(start, len(fy)):
            try:
                row[j] = engine_kernel(fx[i], fy[j], budget=spec.budget)
            except BudgetError as exc:
                raise BudgetError(f"pair ({i}, {j}): {exc}") from exc
        out.append(row)
    return out


def gram(X, spec: KernelSpec, Y=None, n_jobs: int | None = 1) -> GramMatrix:
    """Kernel matrix ``K[i, j] = k(X[i], Y[j])`` (``Y = X`` when omitted).

    The symmetric case evaluates the upper triangle only. Engine-backed
    families are parallelized over row blocks with joblib.
    """
    X = np.asarray(X, dtype=float)
    symmetric = Y is None
    Y = X if symmetric else np.asarray(Y, dtype=float)
    if X.ndim != 2 or X.shape[1] != 2 or Y.ndim != 2 or Y.shape[1] != 2:
        raise DomainError("points must have shape (N, 2)")
    if spec.family == "displaced-fock":
        K = _radial_block(spec, X, Y)
    else:
        fx = [encode_point(spec, p) for p in X]
        fy = fx if symmetric else [encode_point(spec, p) for p in Y]
        n_rows = len(fx)
        jobs = 1 if n_jobs in (None, 1) else n_jobs
        blocks = np.array_split(np.arange(n_rows), max(1, min(n_rows, 4 * abs(jobs))))
        parts = Parallel(n_jobs=jobs)(
            delayed(_engine_rows)(spec, fx, fy, b, symmetric) for b in blocks if len(b)
        )
        K = np.array([row for part in parts for row in part]).reshape(len(fx), len(fy))
        if symmetric:
            K = np.triu(K) + np.triu(K, 1).T
    return GramMatrix(K, spec.digest, _data_digest(X, Y))
