"""Point clouds, axis-aligned scaling transforms, and distance matrices.

Everything downstream (filtrations, persistence, bounds) consumes the types
defined here. Point clouds and transforms are immutable after construction;
distance matrices store the strict upper triangle once and mirror it on read,
so symmetry is exact by construction.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import pdist

__all__ = [
    "PointCloud",
    "ScalingTransform",
    "DistanceMatrix",
    "apply_scaling",
    "compose_scalings",
    "distance_matrix",
    "diameter",
    "k_diameter",
    "metric_perturbation",
    "generate_circle",
    "generate_hypercube",
    "generate_random_cloud",
    "load_point_cloud",
    "save_point_cloud",
]


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class PointCloud:
    """A finite ordered set of points in R^n (rows of ``points``)."""

    points: np.ndarray

    def __post_init__(self) -> None:
        pts = np.array(self.points, dtype=np.float64, copy=True)
        if pts.ndim != 2:
            raise ValueError("points must be a 2-d array of shape (count, dim)")
        if pts.shape[0] < 1:
            raise ValueError("a point cloud needs at least one point")
        if pts.shape[1] < 1:
            raise ValueError("ambient dimension must be a positive integer")
        if not np.all(np.isfinite(pts)):
            raise ValueError("point coordinates must be finite")
        object.__setattr__(self, "points", _readonly(pts))

    @property
    def count(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]


@dataclass(frozen=True)
class ScalingTransform:
    """Diagonal linear map x -> (s_1 x_1, ..., s_n x_n) with every s_i > 0."""

    factors: np.ndarray

    def __post_init__(self) -> None:
        f = np.array(self.factors, dtype=np.float64, copy=True)
        if f.ndim != 1 or f.shape[0] < 1:
            raise ValueError("factors must be a non-empty 1-d sequence")
        if not np.all(np.isfinite(f)):
            raise ValueError("scaling factors must be finite")
        if not np.all(f > 0.0):
            raise ValueError("scaling factors must be strictly positive")
        object.__setattr__(self, "factors", _readonly(f))

    @property
    def dim(self) -> int:
        return self.factors.shape[0]


@dataclass(frozen=True)
class DistanceMatrix:
    """Pairwise distances for ``size`` points.

    ``condensed`` holds the strict upper triangle in row-major order (the
    same layout scipy's ``pdist`` produces); ``entry`` mirrors it, so
    d(i, j) == d(j, i) holds exactly and the diagonal is exactly zero.
    """

    size: int
    condensed: np.ndarray

    def __post_init__(self) -> None:
        if self.size < 1:
            raise ValueError("a distance matrix describes at least one point")
        c = np.array(self.condensed, dtype=np.float64, copy=True)
        expected = self.size * (self.size - 1) // 2
        if c.ndim != 1 or c.shape[0] != expected:
            raise ValueError(
                f"condensed length {c.shape[0] if c.ndim == 1 else c.shape} "
                f"does not match size {self.size} (expected {expected})"
            )
        if not np.all(np.isfinite(c)):
            raise ValueError("distances must be finite")
        if expected and not np.all(c >= 0.0):
            raise ValueError("distances must be non-negative")
        object.__setattr__(self, "condensed", _readonly(c))

    def _index(self, i: int, j: int) -> int:
        # row-major strict upper triangle, i < j
        return self.size * i - (i * (i + 1)) // 2 + (j - i - 1)

    def entry(self, i: int, j: int) -> float:
        if not (0 <= i < self.size and 0 <= j < self.size):
            raise IndexError(f"index out of range for {self.size} points")
        if i == j:
            return 0.0
        if i > j:
            i, j = j, i
        return float(self.condensed[self._index(i, j)])

    def to_square(self) -> np.ndarray:
        """Full (size, size) matrix, mirrored from the condensed storage."""
        sq = np.zeros((self.size, self.size), dtype=np.float64)
        if self.size > 1:
            iu = np.triu_indices(self.size, k=1)
            sq[iu] = self.condensed
            sq.T[iu] = self.condensed
        return sq

    def scaled_by(self, c: float) -> "DistanceMatrix":
        """Distance matrix with every entry multiplied by c > 0."""
        if not (math.isfinite(c) and c > 0.0):
            raise ValueError("scale factor must be finite and positive")
        return DistanceMatrix(self.size, self.condensed * c)

    @classmethod
    def from_square(cls, arr: np.ndarray) -> "DistanceMatrix":
        a = np.asarray(arr, dtype=np.float64)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("expected a square matrix")
        if not np.array_equal(a, a.T):
            raise ValueError("matrix is not exactly symmetric")
        if np.any(np.diag(a) != 0.0):
            raise ValueError("diagonal entries must be exactly zero")
        n = a.shape[0]
        iu = np.triu_indices(n, k=1)
        return cls(n, a[iu])


def apply_scaling(cloud: PointCloud, transform: ScalingTransform) -> PointCloud:
    """Scale each coordinate axis of the cloud by the matching factor."""
    if cloud.dim != transform.dim:
        raise ValueError(
            f"transform dimension {transform.dim} does not match "
            f"cloud dimension {cloud.dim}"
        )
    return PointCloud(cloud.points * transform.factors)


def compose_scalings(transforms) -> ScalingTransform:
    """Compose a non-empty sequence of transforms (componentwise product)."""
    seq = list(transforms)
    if not seq:
        raise ValueError("cannot compose an empty sequence of transforms")
    dim = seq[0].dim
    for t in seq:
        if t.dim != dim:
            raise ValueError("all transforms in a composition must share a dimension")
    factors = np.multiply.reduce([t.factors for t in seq], axis=0)
    return ScalingTransform(factors)


def distance_matrix(cloud: PointCloud) -> DistanceMatrix:
    """Euclidean pairwise distances of the cloud, condensed storage."""
    if cloud.count == 1:
        return DistanceMatrix(1, np.empty(0))
    return DistanceMatrix(cloud.count, pdist(cloud.points))


def diameter(d: DistanceMatrix) -> float:
    """Largest pairwise distance (0.0 for a single point)."""
    if d.size < 2:
        return 0.0
    return float(d.condensed.max())


def k_diameter(d: DistanceMatrix, k: int) -> float:
    """Maximum over all (k+1)-point subsets of the subset's max pairwise distance.

    Computed literally by subset enumeration with an early exit once the
    global diameter is reached. For k >= 1 and size >= k+1 the result always
    equals ``diameter(d)``; for k == 0 the subsets are singletons, which have
    no point pairs, so the result is 0.0.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    if d.size < k + 1:
        raise ValueError(f"need at least {k + 1} points for k={k}, have {d.size}")
    if k == 0:
        return 0.0
    diam = diameter(d)
    sq = d.to_square()
    best = 0.0
    for subset in itertools.combinations(range(d.size), k + 1):
        local = max(sq[a][b] for a, b in itertools.combinations(subset, 2))
        if local > best:
            best = local
            if best == diam:
                break
    return float(best)


def metric_perturbation(d1: DistanceMatrix, d2: DistanceMatrix) -> float:
    """Sup-norm distance between two metrics on the same point set."""
    if d1.size != d2.size:
        raise ValueError("metric perturbation needs matrices of equal size")
    if d1.size < 2:
        return 0.0
    return float(np.abs(d1.condensed - d2.condensed).max())


def generate_circle(m: int) -> PointCloud:
    """m >= 3 points equally spaced on the unit circle, angle order."""
    if m < 3:
        raise ValueError("a circle sample needs at least 3 points")
    ang = 2.0 * np.pi * np.arange(m) / m
    return PointCloud(np.column_stack((np.cos(ang), np.sin(ang))))


def generate_hypercube(n: int) -> PointCloud:
    """All 2^n vertices of the unit hypercube in lexicographic order.

    n is capped at 16 so the vertex count stays within desk scale.
    """
    if n < 1:
        raise ValueError("hypercube dimension must be at least 1")
    if n > 16:
        raise ValueError("hypercube dimension is capped at 16 (2^n vertices)")
    pts = np.array(list(itertools.product((0.0, 1.0), repeat=n)), dtype=np.float64)
    return PointCloud(pts)


def generate_random_cloud(count: int, dim: int, seed: int) -> PointCloud:
    """Uniform sample from [0, 1]^dim, fully determined by the seed.

    Uses numpy's PCG64 generator so identical seeds give bit-identical
    clouds across platforms.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    if dim < 1:
        raise ValueError("dim must be at least 1")
    rng = np.random.default_rng(seed)
    return PointCloud(rng.random((count, dim)))


def _format_from_path(path: str, fmt: str | None) -> str:
    if fmt is not None:
        if fmt not in ("csv", "json"):
            raise ValueError(f"unknown point cloud format {fmt!r}")
        return fmt
    if str(path).endswith(".json"):
        return "json"
    return "csv"


def save_point_cloud(cloud: PointCloud, path: str, fmt: str | None = None) -> None:
    """Write a cloud as CSV (one point per row, '# dim=<n>' header) or JSON."""
    fmt = _format_from_path(path, fmt)
    try:
        with open(path, "w", encoding="utf-8") as fh:
            if fmt == "csv":
                fh.write(f"# dim={cloud.dim}\n")
                for row in cloud.points:
                    fh.write(",".join(repr(float(x)) for x in row) + "\n")
            else:
                payload = {"dim": cloud.dim, "points": cloud.points.tolist()}
                json.dump(payload, fh)
                fh.write("\n")
    except OSError as exc:
        raise OSError(f"failed to write point cloud to {path}: {exc}") from exc


def load_point_cloud(path: str, fmt: str | None = None) -> PointCloud:
    """Read a cloud written by :func:`save_point_cloud` (CSV or JSON)."""
    fmt = _format_from_path(path, fmt)
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise OSError(f"failed to read point cloud from {path}: {exc}") from exc
    if fmt == "json":
        payload = json.loads(text)
        if not isinstance(payload, dict) or "points" not in payload:
            raise ValueError(f"{path}: expected an object with a 'points' field")
        cloud = PointCloud(np.asarray(payload["points"], dtype=np.float64))
        declared = payload.get("dim")
        if declared is not None and int(declared) != cloud.dim:
            raise ValueError(
                f"{path}: declared dim {declared} does not match rows of width {cloud.dim}"
            )
        return cloud
    declared = None
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            body = stripped.lstrip("#").strip()
            if body.startswith("dim="):
                declared = int(body[len("dim="):])
            continue
        try:
            rows.append([float(tok) for tok in stripped.split(",")])
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: malformed coordinate row") from exc
    if not rows:
        raise ValueError(f"{path}: no points found")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise ValueError(f"{path}: rows have inconsistent widths {sorted(widths)}")
    cloud = PointCloud(np.asarray(rows, dtype=np.float64))
    if declared is not None and declared != cloud.dim:
        raise ValueError(
            f"{path}: declared dim {declared} does not match rows of width {cloud.dim}"
        )
    return cloud
