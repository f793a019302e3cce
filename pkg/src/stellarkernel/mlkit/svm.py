"""Soft-margin kernel SVM trained by sequential minimal optimization."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigvalsh
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from ..exceptions import ConvergenceError, DegenerateLabelsError, DomainError
from .kernels import KernelSpec, gram

PSD_TOLERANCE = 1e-8
JITTER = 1e-10
_TAU = 1e-12


@dataclass
class SMOResult:
    alpha: np.ndarray
    bias: float
    iterations: int
    gap: float
    objective_history: list = field(default_factory=list)


def _dual_objective(alpha, grad):
    # with grad = Q alpha - 1:  sum(alpha) - alpha^T Q alpha / 2 = -(alpha . (grad - 1)) / 2
    return float(-0.5 * alpha @ (grad - 1.0))


def smo_solve(K, y, C: float = 1.0, tol: float = 1e-3, max_passes: int = 50) -> SMOResult:
    """Solve the SVM dual on a precomputed kernel matrix.

    Uses maximal-violating-pair working-set selection. The iteration cap is
    ``max_passes * N`` pair updates.

    Parameters
    ----------
    K : ndarray, shape (N, N)
        Symmetric positive semidefinite kernel matrix.
    y : ndarray, shape (N,)
        Labels in ``{-1, +1}``.

    Raises
    ------
    ConvergenceError
        If the cap is reached first; ``best`` holds the last iterate.
    """
    K = np.asarray(K, dtype=float)
    y = np.asarray(y, dtype=float)
    N = len(y)
    Q = K * np.outer(y, y)
    alpha = np.zeros(N)
    grad = -np.ones(N)
    history = [0.0]
    cap = max_passes * N
    it = 0
    while True:
        minus_yg = -y * grad
        up = ((y > 0) & (alpha < C)) | ((y < 0) & (alpha > 0))
        low = ((y > 0) & (alpha > 0)) | ((y < 0) & (alpha < C))
        i = int(np.flatnonzero(up)[np.argmax(minus_yg[up])])
        j = int(np.flatnonzero(low)[np.argmin(minus_yg[low])])
        gap = minus_yg[i] - minus_yg[j]
        if gap <= tol:
            break
        if it >= cap:
            result = SMOResult(alpha, _bias(alpha, grad, y, C), it, gap, history)
            raise ConvergenceError(f"SMO stopped after {it} updates with gap {gap:.3g}", best=result)
        it += 1
        eta = max(K[i, i] + K[j, j] - 2 * K[i, j], _TAU)
        # step along y_i e_i - y_j e_j, clipped to the box
        step = gap / eta
        step = min(step, C - alpha[i] if y[i] > 0 else alpha[i])
        step = min(step, alpha[j] if y[j] > 0 else C - alpha[j])
        di, dj = y[i] * step, -y[j] * step
        alpha[i] += di
        alpha[j] += dj
        grad += Q[:, i] * di + Q[:, j] * dj
        history.append(_dual_objective(alpha, grad))
    return SMOResult(alpha, _bias(alpha, grad, y, C), it, gap, history)


def _bias(alpha, grad, y, C):
    yg = y * grad
    free = (alpha > 0) & (alpha < C)
    if free.any():
        rho = float(np.mean(yg[free]))
    else:
        up = ((y > 0) & (alpha < C)) | ((y < 0) & (alpha > 0))
        low = ((y > 0) & (alpha > 0)) | ((y < 0) & (alpha < C))
        hi = np.max(-yg[up]) if up.any() else 0.0
        lo = np.min(-yg[low]) if low.any() else 0.0
        rho = -float(hi + lo) / 2
    return -rho


def prepare_gram(K: np.ndarray) -> np.ndarray:
    """Check positive semidefiniteness and add diagonal jitter if slightly negative."""
    lam = float(eigvalsh(K, subset_by_index=[0, 0])[0])
    if lam < -PSD_TOLERANCE:
        raise DomainError(f"kernel matrix has eigenvalue {lam:.3g} below -{PSD_TOLERANCE}")
    if lam < 0:
        K = K + JITTER * np.eye(len(K))
    return K


def _labels_to_signs(y):
    classes = np.unique(y)
    if len(classes) < 2:
        raise DegenerateLabelsError("training labels contain a single class")
    if len(classes) > 2:
        raise DomainError("only binary classification is supported")
    return classes, np.where(y == classes[1], 1.0, -1.0)


class StellarKernelSVC(ClassifierMixin, BaseEstimator):
    """Binary SVM on a quantum kernel built from stellar encodings.

    Parameters
    ----------
    family : str, default="displaced-fock"
        Encoding family, see :mod:`stellarkernel.mlkit.kernels`.
    n : int, default=1
        Stellar rank of the encoding (Fock level for displaced Fock states).
    bandwidth : float, default=1.0
        Scale ``c`` applied to points before encoding.
    C : float, default=1.0
        Box constraint.
    tol : float, default=1e-3
        Stopping threshold on the maximal KKT violation.
    max_passes : int, default=50
        Iteration cap in units of the training-set size.
    d, parity, squeeze
        Family-specific parameters.
    n_jobs : int or None
        Parallelism of engine-backed Gram evaluation.

    Attributes
    ----------
    support_vectors_ : ndarray
    dual_coef_ : ndarray
        ``alpha_i * y_i`` for each support vector.
    intercept_ : float
    objective_history_ : list of float
        Dual objective after each pair update.
    """

    def __init__(
        self,
        family="displaced-fock",
        n=1,
        bandwidth=1.0,
        C=1.0,
        tol=1e-3,
        max_passes=50,
        d=4,
        parity="even",
        squeeze=0.3,
        n_jobs=None,
    ):
        self.family = family
        self.n = n
        self.bandwidth = bandwidth
        self.C = C
        self.tol = tol
        self.max_passes = max_passes
        self.d = d
        self.parity = parity
        self.squeeze = squeeze
        self.n_jobs = n_jobs

    def kernel_spec(self) -> KernelSpec:
        return KernelSpec(self.family, self.n, self.bandwidth, self.d, self.parity, self.squeeze)

    def fit(self, X, y):
        X, y = check_X_y(X, y)
        if X.shape[1] != 2:
            raise DomainError("points must be two-dimensional")
        if self.C <= 0:
            raise DomainError("C must be positive")
        self.classes_, signs = _labels_to_signs(y)
        K = prepare_gram(gram(X, self.kernel_spec(), n_jobs=self.n_jobs).values)
        res = smo_solve(K, signs, self.C, self.tol, self.max_passes)
        sv = res.alpha > 0
        self.support_ = np.flatnonzero(sv)
        self.support_vectors_ = X[sv]
        self.dual_coef_ = res.alpha[sv] * signs[sv]
        self.intercept_ = res.bias
        self.n_iter_ = res.iterations
        self.objective_history_ = res.objective_history
        self.n_features_in_ = 2
        return self

    def decision_function(self, X):
        check_is_fitted(self, "dual_coef_")
        X = check_array(X)
        K = gram(X, self.kernel_spec(), Y=self.support_vectors_, n_jobs=self.n_jobs).values
        return K @ self.dual_coef_ + self.intercept_

    def predict(self, X):
        return np.where(self.decision_function(X) >= 0, self.classes_[1], self.classes_[0])

    def to_dict(self) -> dict:
        check_is_fitted(self, "dual_coef_")
        return {
            "params": self.get_params(),
            "classes": [v.item() for v in self.classes_],
            "support_vectors": self.support_vectors_.tolist(),
            "dual_coef": self.dual_coef_.tolist(),
            "intercept": self.intercept_,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "StellarKernelSVC":
        model = cls(**data["params"])
        model.classes_ = np.asarray(data["classes"])
        model.support_vectors_ = np.asarray(data["support_vectors"], dtype=float).reshape(-1, 2)
        model.dual_coef_ = np.asarray(data["dual_coef"], dtype=float)
        model.intercept_ = float(data["intercept"])
        model.n_features_in_ = 2
        return model


class StellarKernelTransformer(TransformerMixin, BaseEstimator):
    """Map points to kernel values against the fitted reference points.

    Useful for pairing with ``sklearn.svm.SVC(kernel="precomputed")``.
    """

    def __init__(self, family="displaced-fock", n=1, bandwidth=1.0, d=4, parity="even", squeeze=0.3, n_jobs=None):
        self.family = family
        self.n = n
        self.bandwidth = bandwidth
        self.d = d
        self.parity = parity
        self.squeeze = squeeze
        self.n_jobs = n_jobs

    def fit(self, X, y=None):
        self.X_fit_ = check_array(X)
        self.n_features_in_ = self.X_fit_.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "X_fit_")
        spec = KernelSpec(self.family, self.n, self.bandwidth, self.d, self.parity, self.squeeze)
        return gram(check_array(X), spec, Y=self.X_fit_, n_jobs=self.n_jobs).values
