"""Brute-force references for Segal-Bargmann inner products.

Nothing here reuses the closed-form machinery of :mod:`engine`. Quadrature
evaluates the stellar functions pointwise; the Fock route works from power
series coefficients; cat-state overlaps come from coherent-state algebra.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import AccuracyError, DomainError, PremiseError, RangeError, TruncationError
from .stellar import FockVector, StellarFunction, cat_amplitudes, fock_coefficients

QUADRATURE_MAX_MODES = 2
_CHUNK = 1 << 16


@dataclass(frozen=True)
class QuadratureGrid:
    """Tensor Gauss-Hermite rule.

    Parameters
    ----------
    points : int
        Nodes per real axis.
    tolerance : float
        Largest accepted difference between this rule and a coarser one.
    reference_points : int, optional
        Node count of the coarser rule used for the error estimate.
        Defaults to ``3 * points // 4``.
    """

    points: int = 64
    tolerance: float = 1e-9
    reference_points: int | None = None

    def __post_init__(self):
        if self.points < 2:
            raise RangeError("at least two quadrature points are required")

    @property
    def coarse(self) -> int:
        return self.reference_points or max(2, 3 * self.points // 4)


def default_grid(m: int) -> QuadratureGrid:
    return QuadratureGrid(64) if m == 1 else QuadratureGrid(32, tolerance=1e-7)


def _log_integrand(f1: StellarFunction, f2: StellarFunction, x: np.ndarray) -> np.ndarray:
    """Exponent of ``e^{-|z|^2} conj(G1) G2`` at real points ``x`` of shape (..., 2m)."""
    z = x[..., 0::2] + 1j * x[..., 1::2]
    return (
        -np.sum(np.abs(z) ** 2, axis=-1)
        + np.conj(f1.gaussian_exponent(z))
        + f2.gaussian_exponent(z)
    )


def _real_envelope(f1, f2, dim):
    """Fit ``Re(log integrand) = -x^T P x + q^T x + c`` from samples.

    The exponent is an exact quadratic, so central differences with unit step
    recover it up to rounding.
    """
    E = lambda x: _log_integrand(f1, f2, np.asarray(x, float)).real  # noqa: E731
    c = float(E(np.zeros(dim)))
    eye = np.eye(dim)
    P = np.zeros((dim, dim))
    q = np.zeros(dim)
    for i in range(dim):
        ep, em = float(E(eye[i])), float(E(-eye[i]))
        q[i] = (ep - em) / 2
        P[i, i] = -(ep + em - 2 * c) / 2
    for i in range(dim):
        for j in range(i + 1, dim):
            eij = float(E(eye[i] + eye[j]))
            # E(e_i + e_j) = c + q_i + q_j - P_ii - P_jj - 2 P_ij
            P[i, j] = P[j, i] = -(eij - c - q[i] - q[j] + P[i, i] + P[j, j]) / 2
    return P, q


def _gauss_hermite_sum(f1, f2, n_points: int) -> complex:
    m = f1.modes
    dim = 2 * m
    P, q = _real_envelope(f1, f2, dim)
    try:
        L = np.linalg.cholesky(P)
    except np.linalg.LinAlgError:
        raise DomainError("the integrand is not Gaussian-decaying") from None
    mu = np.linalg.solve(P, q) / 2
    # x = mu + L^{-T} y turns the envelope into exp(-|y|^2)
    Linv_T = np.linalg.inv(L).T
    nodes, weights = np.polynomial.hermite.hermgauss(n_points)
    grids = np.meshgrid(*([np.arange(n_points)] * dim), indexing="ij")
    flat = np.stack([g.ravel() for g in grids], axis=-1)
    total = 0j
    for start in range(0, flat.shape[0], _CHUNK):
        idx = flat[start : start + _CHUNK]
        y = nodes[idx]
        w = np.prod(weights[idx], axis=-1)
        x = mu + y @ Linv_T.T
        z = x[:, 0::2] + 1j * x[:, 1::2]
        log_g = _log_integrand(f1, f2, x) + np.sum(y**2, axis=-1)
        vals = np.exp(log_g) * np.conj(f1.polynomial(z)) * f2.polynomial(z)
        total += complex(np.sum(w * vals))
    return total / (np.prod(np.diag(L)) * math.pi**m)


def sb_inner_quadrature(
    f1: StellarFunction, f2: StellarFunction, grid: QuadratureGrid | None = None
) -> complex:
    """``<F1|F2>`` by tensor Gauss-Hermite quadrature in ``2m`` real variables.

    The Gaussian weight is the real part of the combined exponent, whitened
    numerically; the remaining phase and polynomial are sampled at the nodes.

    Raises
    ------
    AccuracyError
        If the fine and coarse rules differ by more than ``grid.tolerance``
        relative to ``max(1, |value|)``.
    """
    if f1.modes != f2.modes:
        raise DomainError("mode mismatch")
    if f1.modes > QUADRATURE_MAX_MODES:
        raise RangeError(f"quadrature supports at most {QUADRATURE_MAX_MODES} modes")
    grid = grid or default_grid(f1.modes)
    fine = _gauss_hermite_sum(f1, f2, grid.points)
    coarse = _gauss_hermite_sum(f1, f2, grid.coarse)
    err = abs(fine - coarse)
    if err > grid.tolerance * max(1.0, abs(fine)):
        raise AccuracyError(f"quadrature error estimate {err:.3g} exceeds tolerance")
    return fine


def sb_inner_fock(
    f1: StellarFunction,
    f2: StellarFunction,
    truncation: int | None = None,
    tail_tolerance: float = 1e-10,
) -> complex:
    """``<F1|F2>`` as a sum over Fock amplitudes.

    Raises
    ------
    TruncationError
        If either expansion keeps more than ``tail_tolerance`` of its mass in the top shells.
    """
    import warnings

    from .exceptions import TruncationWarning

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        psi1 = fock_coefficients(f1, truncation, tail_tolerance)
        psi2 = fock_coefficients(f2, truncation, tail_tolerance)
        K = max(psi1.truncation, psi2.truncation)
        # a shared cutoff keeps cross terms where only one tail is small
        if psi1.truncation < K:
            psi1 = fock_coefficients(f1, K, tail_tolerance)
        if psi2.truncation < K:
            psi2 = fock_coefficients(f2, K, tail_tolerance)
    for psi in (psi1, psi2):
        if psi.tail_mass > tail_tolerance:
            raise TruncationError(
                f"tail mass {psi.tail_mass:.3g} at truncation {psi.truncation}"
            )
    return psi1.vdot(psi2)


def radial_fourier_quadrature(kernel, omega: float, points: int = 160) -> float:
    """``(1/2 pi) int exp(i s.w) k(|s|^2) d^2 s`` by 2-D Gauss-Hermite quadrature.

    ``kernel`` maps ``s^2`` to the kernel value and must decay like ``exp(-s^2)``.
    """
    nodes, weights = np.polynomial.hermite.hermgauss(points)
    x, y = np.meshgrid(nodes, nodes, indexing="ij")
    w = np.outer(weights, weights)
    s2 = x**2 + y**2
    vals = np.asarray(kernel(s2), dtype=float) * np.exp(s2) * np.cos(omega * x)
    return float(np.sum(w * vals) / (2 * math.pi))


def coherent_overlap(alpha: complex, beta: complex) -> complex:
    """``<alpha|beta>`` for normalized coherent states."""
    return cmath.exp(-abs(alpha) ** 2 / 2 - abs(beta) ** 2 / 2 + alpha.conjugate() * beta)


@dataclass(frozen=True)
class CatState:
    """Normalized ``|alpha> + |-alpha>`` (even) or ``|alpha> - |-alpha>`` (odd)."""

    alpha: complex
    parity: str = "even"

    @property
    def sign(self) -> int:
        return 1 if self.parity == "even" else -1

    @property
    def norm2(self) -> float:
        x = abs(self.alpha) ** 2
        return 2 * (1 + math.exp(-2 * x)) if self.sign > 0 else -2 * math.expm1(-2 * x)

    def overlap(self, other: "CatState") -> complex:
        """Exact ``<self|other>`` from four coherent overlaps."""
        a, b = complex(self.alpha), complex(other.alpha)
        total = 0j
        for sa, ca in ((1, 1), (-1, self.sign)):
            for sb, cb in ((1, 1), (-1, other.sign)):
                total += ca * cb * coherent_overlap(sa * a, sb * b)
        return total / math.sqrt(self.norm2 * other.norm2)

    def fock_overlap(self, psi: FockVector) -> complex:
        """``<self|psi>`` for a single-mode Fock vector."""
        K = psi.truncation
        return complex(np.vdot(cat_amplitudes(self.alpha, self.parity, K + 1), psi.amplitudes))


def infinite_rank_bound_check(psi1, psi2, F1, F2, eps1: float, eps2: float):
    """Check ``| |<psi1|psi2>|^2 - |<F1|F2>|^2 | <= 4 sqrt(2) max(eps1, eps2)``.

    Parameters
    ----------
    psi1, psi2 : CatState or FockVector
        Reference states, possibly of infinite stellar rank.
    F1, F2 : StellarFunction or FockVector
        Normalized finite-rank approximations.
    eps1, eps2 : float
        Claimed infidelity radii: ``|<psi_i|F_i>|^2 >= 1 - eps_i^2``.

    Returns
    -------
    lhs, rhs : float
    holds : bool

    Raises
    ------
    PremiseError
        If a claimed fidelity does not hold.
    """
    F1v, F2v = (_as_fock(F) for F in (F1, F2))
    for psi, F, eps in ((psi1, F1v, eps1), (psi2, F2v, eps2)):
        if eps < 0:
            raise PremiseError("eps must be nonnegative")
        fid = abs(_overlap(psi, F)) ** 2
        if fid < 1 - eps**2 - 1e-12:
            raise PremiseError(f"fidelity {fid:.12g} below 1 - eps^2 = {1 - eps**2:.12g}")
    lhs = abs(abs(_overlap(psi1, psi2)) ** 2 - abs(F1v.vdot(F2v)) ** 2)
    rhs = 4 * math.sqrt(2) * max(eps1, eps2)
    return lhs, rhs, bool(lhs <= rhs + 1e-12)


def _as_fock(F) -> FockVector:
    if isinstance(F, FockVector):
        return F
    if F.modes != 1 or F.B.any() or F.A.any():
        return fock_coefficients(F)
    # Polynomial states have a finite Fock expansion.
    return fock_coefficients(F, truncation=F.rank)


def _overlap(a, b) -> complex:
    if isinstance(a, CatState) and isinstance(b, CatState):
        return a.overlap(b)
    if isinstance(a, CatState):
        return a.fock_overlap(_as_fock(b))
    if isinstance(b, CatState):
        return b.fock_overlap(_as_fock(a)).conjugate()
    return _as_fock(a).vdot(_as_fock(b))


__all__ = [
    "QuadratureGrid",
    "CatState",
    "coherent_overlap",
    "default_grid",
    "radial_fourier_quadrature",
    "infinite_rank_bound_check",
    "sb_inner_fock",
    "sb_inner_quadrature",
]
