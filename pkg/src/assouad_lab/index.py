"""Multiscale dyadic occupancy index.

The index stores, for every level m = 0..max_level, the set of dyadic
cells (of side root.side * 2^-m, in the root cube's grid) that contain
at least one sample point.  Cells are kept as integer lattice addresses
packed into int64 keys, so membership and parent arithmetic are plain
integer operations.  Levels shrink as they coarsen because a parent cell
is occupied exactly when one of its children is.

Queries never fabricate detail below the declared sampling resolution:
building a grid whose leaf cells would be finer than the source
resolution is refused outright.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    EmptySetError,
    InvalidParameterError,
    LevelOutOfRangeError,
    ResolutionExceededError,
    ScaleBelowResolutionError,
)
from .geometry import Cube, PointSet

MAX_AMBIENT_DIM = 8  # packed-address budget: dim * max_level must fit in an int64
_ADDRESS_BITS = 62


def _encode(addr: np.ndarray, bits: int) -> np.ndarray:
    n = addr.shape[1]
    key = addr[:, 0].astype(np.int64)
    for i in range(1, n):
        key = (key << bits) | addr[:, i].astype(np.int64)
    return key


def _decode(keys: np.ndarray, bits: int, n: int) -> np.ndarray:
    mask = (np.int64(1) << bits) - 1
    out = np.empty((len(keys), n), dtype=np.int64)
    for i in range(n - 1, -1, -1):
        out[:, i] = keys & mask
        keys = keys >> bits
    return out


@dataclass(eq=False)
class MultiScaleIndex:
    """Occupancy sets for one point sample at every dyadic level."""

    root: Cube
    max_level: int
    dim: int
    resolution: float
    level_keys: list  # list of sorted int64 arrays, index = level
    source: PointSet
    _bits: int = 0
    _low_cache: dict = field(default_factory=dict, repr=False)

    @property
    def root_side(self) -> float:
        return self.root.side

    def cell_side(self, level: int) -> float:
        return self.root.side * 2.0 ** (-level)

    def occupied_count(self, level: int) -> int:
        self._check_level(level)
        return len(self.level_keys[level])

    def cell_addresses(self, level: int) -> np.ndarray:
        """(N_m, n) integer addresses of occupied cells, sorted by key."""
        self._check_level(level)
        return _decode(self.level_keys[level], self._bits, self.dim)

    def _check_level(self, level: int) -> None:
        if not (0 <= level <= self.max_level):
            raise LevelOutOfRangeError(
                f"level {level} outside stored range 0..{self.max_level}"
            )

    def _cell_low(self, level: int) -> np.ndarray:
        """Lower corners of occupied cells at a level (cached float64)."""
        if level not in self._low_cache:
            s = self.cell_side(level)
            self._low_cache[level] = self.root.low() + self.cell_addresses(level) * s
        return self._low_cache[level]

    def cell_dist2(self, level: int, x) -> np.ndarray:
        """Squared Euclidean distance from x to every occupied cell at a level."""
        self._check_level(level)
        x = np.asarray(x, dtype=np.float64).reshape(self.dim)
        low = self._cell_low(level)
        s = self.cell_side(level)
        below = low - x
        above = x - (low + s)
        gap = np.maximum(np.maximum(below, above), 0.0)
        return np.einsum("ij,ij->i", gap, gap)

    def count_intersecting(self, level: int, x, radius: float) -> int:
        """Occupied cells at a level intersecting the closed ball B(x, radius)."""
        d2 = self.cell_dist2(level, x)
        return int(np.count_nonzero(d2 <= radius * radius))

    def count_intersecting_many(self, level: int, x, radii) -> np.ndarray:
        """Same ball-intersection count for a whole ladder of radii at once."""
        d2 = self.cell_dist2(level, x)
        radii = np.asarray(radii, dtype=np.float64)
        return np.count_nonzero(d2[None, :] <= (radii * radii)[:, None], axis=1)


def build_index(ps: PointSet, max_level: int) -> MultiScaleIndex:
    """Index a point sample down to the requested dyadic level.

    The root is the smallest cube centered at the bounding-box midpoint
    that covers the sample; a degenerate (single-point) box is widened so
    the leaf cells sit exactly at the declared resolution.  Building is
    refused when leaf cells would be finer than the resolution.
    """
    if len(ps) == 0:
        raise EmptySetError("cannot index an empty point set")
    if ps.dim > MAX_AMBIENT_DIM:
        raise InvalidParameterError(
            f"ambient dimension {ps.dim} exceeds the supported maximum {MAX_AMBIENT_DIM}"
        )
    if max_level < 0:
        raise InvalidParameterError(f"max_level must be >= 0, got {max_level}")
    bits = max(max_level, 1)
    if ps.dim * bits > _ADDRESS_BITS:
        raise InvalidParameterError(
            f"max_level {max_level} at dim {ps.dim} exceeds the packed-address budget"
        )

    lo, hi = ps.bounding_box()
    extent = float(np.max(hi - lo))
    if extent == 0.0:
        # Degenerate sample: widen so the deepest cells match the resolution.
        extent = ps.resolution * 2.0**max_level
    center = (lo + hi) / 2.0
    root = Cube(center=tuple(center), radius=extent / 2.0)

    leaf_side = extent * 2.0**-max_level
    if leaf_side < ps.resolution * (1.0 - 1e-12):
        raise ResolutionExceededError(
            f"leaf cells ({leaf_side:.3g}) would be finer than the declared "
            f"resolution ({ps.resolution:.3g}); lower max_level"
        )

    n_cells = np.int64(1) << max_level
    addr = np.floor((ps.points - root.low()) / leaf_side).astype(np.int64)
    np.clip(addr, 0, n_cells - 1, out=addr)

    level_keys = [None] * (max_level + 1)
    keys = np.unique(_encode(addr, bits))
    level_keys[max_level] = keys
    for m in range(max_level - 1, -1, -1):
        parents = _decode(level_keys[m + 1], bits, ps.dim) >> 1
        level_keys[m] = np.unique(_encode(parents, bits))
    for k in level_keys:
        k.flags.writeable = False

    return MultiScaleIndex(
        root=root,
        max_level=max_level,
        dim=ps.dim,
        resolution=ps.resolution,
        level_keys=level_keys,
        source=ps,
        _bits=bits,
    )


def deepest_level(ps: PointSet) -> int:
    """Largest level whose leaf cells are still >= the declared resolution."""
    lo, hi = ps.bounding_box()
    extent = float(np.max(hi - lo))
    if extent == 0.0:
        return 0
    level = int(math.floor(math.log2(extent / ps.resolution) + 1e-12))
    level = max(level, 0)
    bits_budget = _ADDRESS_BITS // ps.dim
    return min(level, bits_budget)


def occupied_count(idx: MultiScaleIndex, level: int) -> int:
    """Number of occupied cells at a stored level."""
    return idx.occupied_count(level)


def snap_level(idx: MultiScaleIndex, target_side: float) -> int:
    """The unique level whose cell side s satisfies s <= target < 2s."""
    if target_side <= 0:
        raise InvalidParameterError("target side must be positive")
    side = idx.root_side
    guess = int(math.ceil(math.log2(side / target_side) - 1e-9))
    for lvl in (guess - 1, guess, guess + 1):
        if lvl < 0:
            continue
        s = side * 2.0**-lvl
        if s <= target_side * (1 + 1e-12) and target_side < 2 * s * (1 + 1e-12):
            return lvl
    raise LevelOutOfRangeError(
        f"no dyadic level matches target side {target_side:.3g} "
        f"(root side {side:.3g})"
    )


def local_dyadic_count(idx: MultiScaleIndex, x, radius: float, m: int) -> int:
    """Occupied-cell count at the dyadic refinement m of the ball B(x, radius).

    The cube Q(x, radius) has side 2*radius; its level-m dyadic cells have
    side 2^-m * 2*radius.  The count is taken on the stored global grid at
    the level snapped to that cell side (global side s <= target < 2s),
    over cells intersecting the closed ball.
    """
    if m < 0:
        raise LevelOutOfRangeError(f"dyadic refinement m must be >= 0, got {m}")
    if radius <= 0:
        raise InvalidParameterError("ball radius must be positive")
    target = 2.0**-m * 2.0 * radius
    if target < idx.resolution * (1.0 - 1e-12):
        raise ScaleBelowResolutionError(
            f"requested cell side {target:.3g} is below the declared "
            f"resolution {idx.resolution:.3g}"
        )
    level = snap_level(idx, target)
    if level > idx.max_level:
        raise LevelOutOfRangeError(
            f"query needs level {level} but the index stops at {idx.max_level}"
        )
    return idx.count_intersecting(level, x, radius)
