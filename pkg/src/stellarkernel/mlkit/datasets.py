"""Concentric-circle benchmark datasets."""

from __future__ import annotations

import csv
import hashlib
from dataclasses import asdict, dataclass, field

import numpy as np
from sklearn.datasets import make_circles

from ..exceptions import DomainError, RangeError, ShapeError

# (inner_ratio, scale) per circle set, and coordinate noise.
_GEOMETRY = {
    1: (((0.75, 1.0), (0.75, 2.0), (0.75, 3.0)), 0.05),
    2: (((0.75, 1.0), (0.75, 2.0), (0.75, 3.0)), 0.05),
    3: (((0.3, 1.0), (0.8, 2.5), (0.9, 4.0)), 0.3),
}


@dataclass(frozen=True)
class DatasetSpec:
    """Parameters of a three-set annular dataset.

    ``radii`` and ``noise`` default to the geometry of ``variant``;
    ``flip_above_y0`` defaults to ``variant == 2``.
    """

    variant: int = 1
    n_per_set: int = 500
    noise: float | None = None
    radii: tuple | None = None
    flip_above_y0: bool | None = None
    seed: int = 42

    def resolved(self) -> "DatasetSpec":
        if self.variant not in _GEOMETRY:
            raise RangeError(f"variant must be 1, 2 or 3, got {self.variant}")
        radii, noise = _GEOMETRY[self.variant]
        return DatasetSpec(
            self.variant,
            self.n_per_set,
            noise if self.noise is None else float(self.noise),
            radii if self.radii is None else tuple(tuple(map(float, r)) for r in self.radii),
            self.variant == 2 if self.flip_above_y0 is None else bool(self.flip_above_y0),
            self.seed,
        )


@dataclass(frozen=True, eq=False)
class Dataset:
    points: np.ndarray
    labels: np.ndarray
    spec: DatasetSpec | None = field(default=None)

    def __len__(self):
        return len(self.labels)

    @property
    def digest(self) -> str:
        h = hashlib.sha256()
        h.update(np.ascontiguousarray(self.points, dtype="<f8").tobytes())
        h.update(np.ascontiguousarray(self.labels, dtype="<i8").tobytes())
        return h.hexdigest()

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["x1", "x2", "label"])
            for (x1, x2), y in zip(self.points, self.labels):
                w.writerow([repr(float(x1)), repr(float(x2)), int(y)])

    @classmethod
    def from_csv(cls, path) -> "Dataset":
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
        if not rows or set(rows[0]) != {"x1", "x2", "label"}:
            raise ShapeError("expected header x1,x2,label")
        pts = np.array([[float(r["x1"]), float(r["x2"])] for r in rows])
        labels = np.array([int(r["label"]) for r in rows])
        return cls(pts, labels)

    def spec_dict(self) -> dict | None:
        return None if self.spec is None else asdict(self.spec)


def flip_upper_half(points: np.ndarray, labels: np.ndarray) -> np.ndarray:
    """Swap labels 0 and 1 for points with ``x2 > 0``; an involution."""
    return np.where(points[:, 1] > 0, 1 - labels, labels)


def make_annular(spec: DatasetSpec | None = None) -> Dataset:
    """Three sets of concentric circles with binary labels (inner 0, outer 1).

    Each set places ``n_per_set // 2`` points on each of two circles with
    radii ``ratio * scale`` and ``scale``. Gaussian noise of std ``noise`` is
    applied in the final coordinates.
    """
    spec = (spec or DatasetSpec()).resolved()
    if spec.noise < 0:
        raise DomainError("noise must be nonnegative")
    if spec.n_per_set < 2 or spec.n_per_set % 2:
        raise RangeError("n_per_set must be an even integer >= 2")
    rng = np.random.default_rng(spec.seed)
    pts, labels = [], []
    for ratio, scale in spec.radii:
        if not 0 < ratio < 1:
            raise DomainError(f"inner ratio {ratio} outside (0, 1)")
        X, y = make_circles(
            n_samples=spec.n_per_set,
            factor=ratio,
            noise=spec.noise / scale,
            random_state=int(rng.integers(2**31 - 1)),
        )
        pts.append(X * scale)
        labels.append(1 - y)  # make_circles marks the inner circle with 1
    points = np.vstack(pts)
    y = np.concatenate(labels).astype(int)
    if spec.flip_above_y0:
        y = flip_upper_half(points, y)
    return Dataset(points, y, spec)
