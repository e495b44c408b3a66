"""Reference families with known dimension theory.

Four families are supported:

* poly_spiral(a):  {x^-a * (cos x, sin x) : x >= 1} plus the origin.
* log_spiral(c):   {exp(-c x) * (cos x, sin x) : x >= 1} plus the origin.
* cantor(ratio):   endpoints of the depth-d symmetric Cantor construction.
* sequence(p):     {0} union {m^-p : 1 <= m <= m_max}.

Spirals are sampled by arc length so consecutive points are at most
resolution/2 apart, which makes the sample an honest resolution-fine
cover of the truncated curve.  The closed-form box dimension, Assouad
spectrum, and phase-transition location of the polynomial spirals are
exposed as oracles for testing estimators and distortion bounds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError, TruncationTooCoarseError
from .geometry import PointSet

# The unsampled tail of a truncated family must stay within this many
# resolution units of the origin; beyond that the declared resolution
# would be a lie at scales the estimators actually probe.
TAIL_SLACK = 16.0


@dataclass(frozen=True)
class FamilySpec:
    """Parameters selecting one member of one family.

    kind: "poly_spiral" | "log_spiral" | "cantor" | "sequence".
    a, c, ratio, p: the family parameter relevant to the kind.
    x_max / depth / m_max: truncation control.
    target_resolution: declared sampling fineness of the output.
    """

    kind: str
    a: float = 1.0
    c: float = 1.0
    ratio: float = 1.0 / 3.0
    p: float = 1.0
    x_max: float = 1000.0
    depth: int = 8
    m_max: int = 1000
    target_resolution: float = 1e-3


def sample_family(spec: FamilySpec) -> PointSet:
    """Generate the sample a FamilySpec describes."""
    if spec.target_resolution <= 0:
        raise InvalidParameterError("target_resolution must be positive")
    if spec.kind == "poly_spiral":
        return _sample_poly_spiral(spec.a, spec.x_max, spec.target_resolution)
    if spec.kind == "log_spiral":
        return _sample_log_spiral(spec.c, spec.x_max, spec.target_resolution)
    if spec.kind == "cantor":
        return _sample_cantor(spec.ratio, spec.depth, spec.target_resolution)
    if spec.kind == "sequence":
        return _sample_sequence(spec.p, spec.m_max, spec.target_resolution)
    raise InvalidParameterError(f"unknown family kind {spec.kind!r}")


# ---- spirals ----------------------------------------------------------


def _arc_length_parameter(x_max: float, speed, n_dense: int) -> np.ndarray:
    """Invert cumulative arc length on a dense log grid of x in [1, x_max]."""
    x = np.geomspace(1.0, x_max, n_dense)
    v = speed(x)
    seg = 0.5 * (v[1:] + v[:-1]) * np.diff(x)
    s = np.concatenate([[0.0], np.cumsum(seg)])
    return x, s


def _curve_points(x_max: float, modulus, speed, step: float) -> tuple:
    n_dense = int(min(2e6, max(8192, 400 * np.log10(max(x_max, 10.0)) ** 2 * 4)))
    x_dense, s_dense = _arc_length_parameter(x_max, speed, n_dense)
    total = s_dense[-1]
    n_pts = int(np.floor(total / step)) + 1
    marks = np.arange(n_pts) * step
    xs = np.interp(marks, s_dense, x_dense)
    xs[0] = 1.0
    r = modulus(xs)
    pts = np.column_stack([r * np.cos(xs), r * np.sin(xs)])
    return pts, xs


def _sample_poly_spiral(a: float, x_max: float, res: float) -> PointSet:
    if a <= 0:
        raise InvalidParameterError(f"spiral exponent a must be > 0, got {a}")
    if x_max <= 1:
        raise InvalidParameterError(f"x_max must exceed 1, got {x_max}")
    tail = x_max**-a
    if tail > TAIL_SLACK * res:
        raise TruncationTooCoarseError(
            f"unsampled tail extends to modulus {tail:.3g} > "
            f"{TAIL_SLACK:g} * resolution ({res:.3g}); raise x_max or resolution"
        )

    def modulus(x):
        return x**-a

    def speed(x):
        # |d/dx (x^-a e^{ix})| = x^-a sqrt(1 + a^2/x^2)
        return x**-a * np.sqrt(1.0 + (a / x) ** 2)

    pts, xs = _curve_points(x_max, modulus, speed, 0.49 * res)
    pts = np.vstack([pts, [0.0, 0.0]])
    params = np.concatenate([xs, [np.inf]])
    return PointSet(dim=2, points=pts, resolution=res, params=params)


def _sample_log_spiral(c: float, x_max: float, res: float) -> PointSet:
    if c <= 0:
        raise InvalidParameterError(f"log-spiral rate c must be > 0, got {c}")
    if x_max <= 1:
        raise InvalidParameterError(f"x_max must exceed 1, got {x_max}")
    tail = np.exp(-c * x_max)
    if tail > TAIL_SLACK * res:
        raise TruncationTooCoarseError(
            f"unsampled tail extends to modulus {tail:.3g} > "
            f"{TAIL_SLACK:g} * resolution ({res:.3g}); raise x_max or resolution"
        )

    def modulus(x):
        return np.exp(-c * x)

    def speed(x):
        return np.exp(-c * x) * np.sqrt(1.0 + c * c)

    pts, xs = _curve_points(x_max, modulus, speed, 0.49 * res)
    pts = np.vstack([pts, [0.0, 0.0]])
    params = np.concatenate([xs, [np.inf]])
    return PointSet(dim=2, points=pts, resolution=res, params=params)


# ---- Cantor construction ----------------------------------------------


def cantor_intervals(ratio: float, depth: int) -> np.ndarray:
    """(2^depth, 2) array of [left, right] construction intervals."""
    if not (0 < ratio <= 0.5):
        raise InvalidParameterError(f"ratio must lie in (0, 1/2], got {ratio}")
    if depth < 0:
        raise InvalidParameterError(f"depth must be >= 0, got {depth}")
    ivals = np.array([[0.0, 1.0]])
    for _ in range(depth):
        left = np.column_stack(
            [ivals[:, 0], ivals[:, 0] + ratio * (ivals[:, 1] - ivals[:, 0])]
        )
        right = np.column_stack(
            [ivals[:, 1] - ratio * (ivals[:, 1] - ivals[:, 0]), ivals[:, 1]]
        )
        ivals = np.vstack([left, right])
    order = np.argsort(ivals[:, 0])
    return ivals[order]


def _sample_cantor(ratio: float, depth: int, res: float) -> PointSet:
    ivals = cantor_intervals(ratio, depth)
    width = ratio**depth
    if width > res * (1 + 1e-12):
        raise TruncationTooCoarseError(
            f"depth-{depth} intervals have width {width:.3g} > target "
            f"resolution {res:.3g}; increase depth or coarsen the resolution"
        )
    pts = np.unique(ivals.reshape(-1))
    return PointSet(dim=1, points=pts.reshape(-1, 1), resolution=res)


# ---- convergent sequence ----------------------------------------------


def _sample_sequence(p: float, m_max: int, res: float) -> PointSet:
    if p <= 0:
        raise InvalidParameterError(f"sequence exponent p must be > 0, got {p}")
    if m_max < 1:
        raise InvalidParameterError(f"m_max must be >= 1, got {m_max}")
    m = np.arange(1, m_max + 1, dtype=np.float64)
    pts = np.concatenate([[0.0], np.sort(m**-p)])
    return PointSet(dim=1, points=pts.reshape(-1, 1), resolution=res)


# ---- closed-form oracles ----------------------------------------------


def oracle_spiral_box_dim(a: float) -> float:
    """Box dimension of the polynomial spiral with exponent a > 0."""
    if a <= 0:
        raise InvalidParameterError(f"a must be > 0, got {a}")
    return max(2.0 / (1.0 + a), 1.0)


def oracle_spiral_spectrum(a: float, theta: float) -> float:
    """Assouad spectrum of the polynomial spiral at theta in (0, 1).

    Two regimes meet continuously at a = 1: a winding-dominated branch for
    a <= 1 and a curve-dominated branch for a >= 1.  Both are nondecreasing
    in theta, so the regularized spectrum coincides with this value.
    """
    if a <= 0:
        raise InvalidParameterError(f"a must be > 0, got {a}")
    if not (0 < theta < 1):
        raise InvalidParameterError(f"theta must lie in (0, 1), got {theta}")
    if a <= 1:
        return min(2.0 / ((1.0 + a) * (1.0 - theta)), 2.0)
    return min(1.0 + theta / (a * (1.0 - theta)), 2.0)


def oracle_spiral_rho(a: float) -> float:
    """Phase transition: the spectrum saturates at 2 exactly from a/(1+a) on."""
    if a <= 0:
        raise InvalidParameterError(f"a must be > 0, got {a}")
    return a / (1.0 + a)


def oracle_sequence_dims(p: float) -> tuple[float, float, float]:
    """(Hausdorff, box, Assouad) dimensions of {0} union {m^-p}."""
    if p <= 0:
        raise InvalidParameterError(f"p must be > 0, got {p}")
    return 0.0, 1.0 / (1.0 + p), 1.0
