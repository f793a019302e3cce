"""Experiment harness: dataset, split, training, evaluation, reports, decision grids."""

from __future__ import annotations

import csv
import json
import time
from dataclasses import asdict, dataclass

import numpy as np
from sklearn.model_selection import train_test_split

from ..exceptions import RangeError
from .datasets import DatasetSpec, make_annular
from .svm import StellarKernelSVC

MAX_GRID_RESOLUTION = 512
BASELINE_BANDWIDTHS = tuple(np.logspace(-1, 1, 21))


@dataclass(frozen=True)
class ExperimentReport:
    variant: int
    family: str
    n: int
    bandwidth: float
    seed: int
    train_acc: float
    test_acc: float
    support_count: int
    wall_time: float
    grid_path: str | None = None

    def to_dict(self, include_wall_time: bool = False) -> dict:
        data = asdict(self)
        if not include_wall_time:
            data.pop("wall_time")
        return data

    def to_json(self, include_wall_time: bool = False) -> str:
        return json.dumps(self.to_dict(include_wall_time), sort_keys=True, indent=2)

    def summary_line(self) -> str:
        return f"variant={self.variant} n={self.n} c={self.bandwidth!r} test_acc={self.test_acc!r}"


def split(dataset, seed: int):
    """75/25 train-test split."""
    return train_test_split(dataset.points, dataset.labels, test_size=0.25, random_state=seed)


def decision_grid(model, bounds, resolution: int) -> np.ndarray:
    """Rows ``(x1, x2, decision_value, predicted_label)`` on a uniform grid, row-major in ``x2``."""
    if not 1 <= resolution <= MAX_GRID_RESOLUTION:
        raise RangeError(f"resolution must lie in [1, {MAX_GRID_RESOLUTION}]")
    (x_lo, x_hi), (y_lo, y_hi) = bounds
    xs = np.linspace(x_lo, x_hi, resolution)
    ys = np.linspace(y_lo, y_hi, resolution)
    gx, gy = np.meshgrid(xs, ys)
    pts = np.column_stack([gx.ravel(), gy.ravel()])
    values = model.decision_function(pts)
    labels = np.where(values >= 0, model.classes_[1], model.classes_[0])
    return np.column_stack([pts, values, labels])


def write_grid_csv(rows: np.ndarray, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x1", "x2", "decision_value", "predicted_label"])
        for x1, x2, v, lab in rows:
            w.writerow([repr(float(x1)), repr(float(x2)), repr(float(v)), int(lab)])


def run_experiment(
    variant: int = 1,
    n: int = 1,
    bandwidth: float = 1.0,
    seed: int = 42,
    family: str = "displaced-fock",
    grid_path=None,
    grid_resolution: int = 128,
    model_path=None,
    n_jobs=None,
    **model_params,
) -> ExperimentReport:
    """Generate a dataset, split it, fit the SVM and report accuracies.

    A decision grid over the data bounding box (padded by 10%) is written when
    ``grid_path`` is given; the fitted model is saved as JSON to ``model_path``.
    """
    start = time.perf_counter()
    data = make_annular(DatasetSpec(variant=variant, seed=seed))
    Xtr, Xte, ytr, yte = split(data, seed)
    model = StellarKernelSVC(family=family, n=n, bandwidth=bandwidth, n_jobs=n_jobs, **model_params)
    model.fit(Xtr, ytr)
    train_acc = float(np.mean(model.predict(Xtr) == ytr))
    test_acc = float(np.mean(model.predict(Xte) == yte))
    if grid_path is not None:
        lo, hi = data.points.min(axis=0), data.points.max(axis=0)
        pad = 0.1 * (hi - lo)
        bounds = ((lo[0] - pad[0], hi[0] + pad[0]), (lo[1] - pad[1], hi[1] + pad[1]))
        write_grid_csv(decision_grid(model, bounds, grid_resolution), grid_path)
    if model_path is not None:
        with open(model_path, "w") as fh:
            json.dump(model.to_dict(), fh)
    return ExperimentReport(
        variant,
        family,
        n,
        float(bandwidth),
        seed,
        train_acc,
        test_acc,
        int(len(model.support_)),
        time.perf_counter() - start,
        None if grid_path is None else str(grid_path),
    )


def bandwidth_sweep(variant: int, n: int, bandwidths, seed: int, **kwargs) -> list[ExperimentReport]:
    return [run_experiment(variant, n, c, seed, **kwargs) for c in bandwidths]


def gaussian_baseline(variant: int, seed: int, bandwidths=BASELINE_BANDWIDTHS) -> tuple[float, float]:
    """Tune the ``n = 0`` (Gaussian) kernel bandwidth on a validation split.

    The training portion is split 80/20; the best validation bandwidth is
    refit on the full training portion.

    Returns
    -------
    bandwidth, test_accuracy : float
    """
    data = make_annular(DatasetSpec(variant=variant, seed=seed))
    Xtr, Xte, ytr, yte = split(data, seed)
    Xa, Xv, ya, yv = train_test_split(Xtr, ytr, test_size=0.2, random_state=seed)
    scores = []
    for c in bandwidths:
        m = StellarKernelSVC(n=0, bandwidth=float(c)).fit(Xa, ya)
        scores.append(np.mean(m.predict(Xv) == yv))
    best = float(bandwidths[int(np.argmax(scores))])
    model = StellarKernelSVC(n=0, bandwidth=best).fit(Xtr, ytr)
    return best, float(np.mean(model.predict(Xte) == yte))
