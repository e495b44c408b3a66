"""Point-set container and file formats.

A PointSet is a finite sample of some set in R^n together with the
resolution it claims to be sampled at: every point of the intended set
is supposed to lie within `resolution` of some sample point.  All grid
construction downstream refuses to look below that scale.

Points may optionally carry a scalar parameter per point (for curve
families this is the curve parameter), which survives CSV/JSON round
trips and map application.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptySetError, InvalidParameterError

_FMT = "%.17g"  # shortest format that round-trips float64 exactly


def _as_points_array(points, dim: int) -> np.ndarray:
    arr = np.asarray(points, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1) if dim == 1 else arr.reshape(1, -1)
    if arr.ndim != 2 or arr.shape[1] != dim:
        raise InvalidParameterError(
            f"points must be an (N, {dim}) array, got shape {arr.shape}"
        )
    if arr.size and not np.all(np.isfinite(arr)):
        raise InvalidParameterError("points must be finite")
    return arr


@dataclass(eq=False)
class PointSet:
    """Finite sample with a declared sampling resolution.

    dim: ambient dimension n >= 1.
    points: (N, n) float64 array.
    resolution: claimed sampling fineness, > 0.
    params: optional per-point scalar (N,), may contain inf for limit
        points; purely metadata, never used by the geometry itself.
    """

    dim: int
    points: np.ndarray
    resolution: float
    params: np.ndarray | None = field(default=None)

    def __post_init__(self):
        if self.dim < 1:
            raise InvalidParameterError(f"dim must be >= 1, got {self.dim}")
        if not (self.resolution > 0):
            raise InvalidParameterError(
                f"resolution must be positive, got {self.resolution}"
            )
        self.points = _as_points_array(self.points, self.dim)
        if len(self.points) == 0:
            raise EmptySetError(
                "point set is empty; use PointSet.empty() if that is intended"
            )
        if self.params is not None:
            self.params = np.asarray(self.params, dtype=np.float64).reshape(-1)
            if len(self.params) != len(self.points):
                raise InvalidParameterError("params must align with points")
        self.points.flags.writeable = False
        if self.params is not None:
            self.params.flags.writeable = False

    @classmethod
    def empty(cls, dim: int, resolution: float) -> "PointSet":
        """Explicitly empty sample (bypasses the nonempty check)."""
        ps = cls.__new__(cls)
        ps.dim = dim
        ps.points = np.empty((0, dim), dtype=np.float64)
        ps.resolution = float(resolution)
        ps.params = None
        return ps

    def __len__(self) -> int:
        return len(self.points)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PointSet):
            return NotImplemented
        if self.dim != other.dim or self.resolution != other.resolution:
            return False
        if not np.array_equal(self.points, other.points):
            return False
        if (self.params is None) != (other.params is None):
            return False
        if self.params is not None and not np.array_equal(self.params, other.params):
            return False
        return True

    def bounding_box(self) -> tuple[np.ndarray, np.ndarray]:
        if len(self) == 0:
            raise EmptySetError("empty point set has no bounding box")
        return self.points.min(axis=0), self.points.max(axis=0)

    # ---- file formats -------------------------------------------------

    def to_csv(self, path) -> None:
        """One point per row, 17 significant digits, metadata in a comment line.

        ``path`` may be a filesystem path or any object with a write method.
        """
        cols = [f"x{i}" for i in range(self.dim)]
        data = self.points
        if self.params is not None:
            cols.append("param")
            data = np.column_stack([self.points, self.params])
        if hasattr(path, "write"):
            self._write_csv(path, cols, data)
        else:
            with open(path, "w") as fh:
                self._write_csv(fh, cols, data)

    def _write_csv(self, fh, cols, data) -> None:
        fh.write(
            f"# assouad-lab dim={self.dim} resolution={_FMT % self.resolution}\n"
        )
        fh.write(",".join(cols) + "\n")
        for row in data:
            fh.write(",".join(_FMT % v for v in row) + "\n")

    @classmethod
    def from_csv(cls, path, resolution: float | None = None) -> "PointSet":
        """Parse a CSV written by to_csv, or any plain n-column numeric CSV.

        A plain CSV carries no resolution, so one must be supplied.
        """
        meta_dim = None
        meta_res = None
        rows = []
        header = None
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                if line.startswith("#"):
                    for tok in line[1:].split():
                        if tok.startswith("dim="):
                            meta_dim = int(tok[4:])
                        elif tok.startswith("resolution="):
                            meta_res = float(tok[11:])
                    continue
                first = line.split(",")[0]
                try:
                    float(first)
                except ValueError:
                    header = line.split(",")
                    continue
                rows.append([float(v) for v in line.split(",")])
        if not rows:
            raise EmptySetError(f"no points found in {path}")
        arr = np.asarray(rows, dtype=np.float64)
        params = None
        if header is not None and header[-1] == "param":
            params = arr[:, -1]
            arr = arr[:, :-1]
        dim = meta_dim if meta_dim is not None else arr.shape[1]
        res = resolution if resolution is not None else meta_res
        if res is None:
            raise InvalidParameterError(
                f"{path} carries no resolution metadata; pass resolution="
            )
        return cls(dim=dim, points=arr, resolution=float(res), params=params)

    def to_json(self, path) -> None:
        payload = {
            "schema": "assouad-lab/1",
            "dim": self.dim,
            "resolution": self.resolution,
            "points": self.points.tolist(),
        }
        if self.params is not None:
            payload["params"] = [
                None if not np.isfinite(v) else v for v in self.params
            ]
        with open(path, "w") as fh:
            json.dump(payload, fh)

    @classmethod
    def from_json(cls, path) -> "PointSet":
        with open(path) as fh:
            payload = json.load(fh)
        params = payload.get("params")
        if params is not None:
            params = [np.inf if v is None else v for v in params]
        return cls(
            dim=int(payload["dim"]),
            points=np.asarray(payload["points"], dtype=np.float64),
            resolution=float(payload["resolution"]),
            params=params,
        )


def load_points(path, resolution: float | None = None) -> PointSet:
    """Dispatch on file extension (.json or anything-CSV)."""
    path = str(path)
    if path.endswith(".json"):
        return PointSet.from_json(path)
    return PointSet.from_csv(path, resolution=resolution)


@dataclass(frozen=True)
class Cube:
    """Axes-parallel cube given by center and half-side ('radius')."""

    center: tuple
    radius: float

    def __post_init__(self):
        if not (self.radius > 0):
            raise InvalidParameterError(f"radius must be > 0, got {self.radius}")

    @property
    def side(self) -> float:
        return 2.0 * self.radius

    def low(self) -> np.ndarray:
        return np.asarray(self.center, dtype=np.float64) - self.radius

    def contains(self, pts: np.ndarray, slack: float = 0.0) -> np.ndarray:
        c = np.asarray(self.center, dtype=np.float64)
        return np.all(np.abs(pts - c) <= self.radius + slack, axis=1)


@dataclass(frozen=True)
class Ball:
    """Closed Euclidean ball."""

    center: tuple
    radius: float

    def __post_init__(self):
        if not (self.radius > 0):
            raise InvalidParameterError(f"radius must be > 0, got {self.radius}")
