"""Planar map algebra with dilatation bookkeeping.

Three primitive map kinds cover everything the distortion experiments need:
radial power maps (the only genuinely quasiconformal ones here), similarities,
and Moebius transformations.  A PlanarMap is a pipeline of primitives applied
left to right; its dilatation bound is the product of the primitive
dilatations, with conformal primitives contributing 1.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatchError,
    InvalidDilatationError,
    InvalidParameterError,
    PoleProximityError,
)
from .geometry import PointSet

__all__ = [
    "RadialPower",
    "Similarity",
    "Mobius",
    "PlanarMap",
    "BiHolderExponents",
    "radial_stretch",
    "identity_map",
    "compose",
    "invert",
    "apply_map",
    "bi_holder_exponents",
    "parse_map_spec",
    "format_map_spec",
]

# Moebius images blow up near the pole; points closer than this many
# resolution units are refused rather than silently distorted.
POLE_MARGIN = 10.0


@dataclass(frozen=True)
class RadialPower:
    """z -> |z|^(power-1) * z, fixing the origin.  K-quasiconformal with
    K = max(power, 1/power); power = 1/K gives the classical radial stretch."""

    power: float

    def __post_init__(self):
        if not (self.power > 0.0 and np.isfinite(self.power)):
            raise InvalidParameterError(f"radial power must be positive, got {self.power}")

    @property
    def dilatation(self) -> float:
        return max(self.power, 1.0 / self.power)

    def apply(self, z: np.ndarray) -> np.ndarray:
        out = np.zeros_like(z)
        nz = z != 0
        out[nz] = np.abs(z[nz]) ** (self.power - 1.0) * z[nz]
        return out

    def inverse(self) -> "RadialPower":
        return RadialPower(1.0 / self.power)

    def lipschitz(self, moduli_lo: float, moduli_hi: float) -> float:
        # Derivative bound sup |z|^(power-1) over the annulus of the data.
        if moduli_hi == 0.0:
            return 1.0
        p = self.power - 1.0
        return float(max(moduli_lo ** p if moduli_lo > 0 else np.inf if p < 0 else 0.0,
                         moduli_hi ** p))


@dataclass(frozen=True)
class Similarity:
    """z -> scale * z + offset, scale != 0; conformal, dilatation 1."""

    scale: complex
    offset: complex = 0j

    def __post_init__(self):
        if self.scale == 0:
            raise InvalidParameterError("similarity scale must be nonzero")

    @property
    def dilatation(self) -> float:
        return 1.0

    def apply(self, z: np.ndarray) -> np.ndarray:
        return self.scale * z + self.offset

    def inverse(self) -> "Similarity":
        return Similarity(1.0 / self.scale, -self.offset / self.scale)

    def lipschitz(self, moduli_lo: float, moduli_hi: float) -> float:
        return float(abs(self.scale))


@dataclass(frozen=True)
class Mobius:
    """z -> (a z + b) / (c z + d) with ad - bc != 0; conformal away from the pole."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        if self.a * self.d - self.b * self.c == 0:
            raise InvalidParameterError("mobius determinant ad - bc must be nonzero")

    @property
    def dilatation(self) -> float:
        return 1.0

    @property
    def pole(self) -> complex | None:
        if self.c == 0:
            return None
        return -self.d / self.c

    def apply(self, z: np.ndarray) -> np.ndarray:
        return (self.a * z + self.b) / (self.c * z + self.d)

    def inverse(self) -> "Mobius":
        return Mobius(self.d, -self.b, -self.c, self.a)

    def lipschitz(self, moduli_lo: float, moduli_hi: float,
                  denom_min: float | None = None) -> float:
        det = abs(self.a * self.d - self.b * self.c)
        if self.c == 0:
            return float(det / abs(self.d) ** 2)
        if denom_min is None or denom_min <= 0.0:
            raise InvalidParameterError("mobius lipschitz needs the minimum |cz + d|")
        return float(det / denom_min ** 2)


@dataclass(frozen=True)
class PlanarMap:
    ops: tuple

    @property
    def dilatation_bound(self) -> float:
        bound = 1.0
        for op in self.ops:
            bound *= op.dilatation
        return bound


@dataclass(frozen=True)
class BiHolderExponents:
    alpha: float
    beta: float
    constant_note: str


def identity_map() -> PlanarMap:
    return PlanarMap(ops=())


def radial_stretch(K: float) -> PlanarMap:
    """The canonical K-quasiconformal map z -> |z|^(1/K - 1) z.

    Sends the polynomial spiral with decay a onto the one with decay a/K.
    """
    if not (K >= 1.0 and np.isfinite(K)):
        raise InvalidDilatationError(f"radial stretch needs K >= 1, got {K}")
    if K == 1.0:
        return identity_map()
    return PlanarMap(ops=(RadialPower(1.0 / K),))


def compose(f: PlanarMap, g: PlanarMap) -> PlanarMap:
    """Pipeline: apply f first, then g.  Dilatation bounds multiply."""
    return PlanarMap(ops=f.ops + g.ops)


def invert(f: PlanarMap) -> PlanarMap:
    return PlanarMap(ops=tuple(op.inverse() for op in reversed(f.ops)))


def _to_complex(points: np.ndarray) -> np.ndarray:
    return points[:, 0] + 1j * points[:, 1]


def apply_map(f: PlanarMap, ps: PointSet) -> PointSet:
    """Pointwise image of a planar point set, with honest resolution scaling.

    The output resolution is the input resolution multiplied by each
    primitive's local Lipschitz bound over the annulus of moduli the data
    actually occupies at that stage of the pipeline (origin excluded; the
    radial powers fix it exactly).  Moebius stages refuse points within
    POLE_MARGIN resolution units of the pole rather than emit garbage.
    """
    if ps.dim != 2:
        raise DimensionMismatchError(f"planar maps need dim=2 point sets, got dim={ps.dim}")
    z = _to_complex(ps.points)
    resolution = ps.resolution
    for op in f.ops:
        moduli = np.abs(z)
        positive = moduli[moduli > 0]
        lo = float(positive.min()) if len(positive) else 0.0
        hi = float(positive.max()) if len(positive) else 0.0
        if isinstance(op, Mobius):
            if op.pole is not None:
                gap = float(np.min(np.abs(z - op.pole))) if len(z) else np.inf
                if gap < POLE_MARGIN * resolution:
                    raise PoleProximityError(
                        f"point at distance {gap:.3e} from mobius pole "
                        f"(need >= {POLE_MARGIN} * resolution = {POLE_MARGIN * resolution:.3e})"
                    )
                denom_min = float(np.min(np.abs(op.c * z + op.d)))
                scale = op.lipschitz(lo, hi, denom_min)
            else:
                scale = op.lipschitz(lo, hi)
        else:
            scale = op.lipschitz(lo, hi)
        z = op.apply(z)
        resolution = resolution * scale
    out = np.column_stack([z.real, z.imag])
    return PointSet(dim=2, points=out, resolution=float(resolution), params=ps.params)


def bi_holder_exponents(f: PlanarMap) -> BiHolderExponents:
    """Local bi-Hoelder exponents (1/K, K) from the dilatation bound."""
    K = f.dilatation_bound
    return BiHolderExponents(
        alpha=1.0 / K,
        beta=K,
        constant_note=(
            "exponents hold locally with constants depending on the "
            f"neighbourhood; dilatation bound K = {K:g}"
        ),
    )


_COMPLEX_RE = re.compile(r"^[0-9eE+\-.ij]+$")


def _parse_complex(text: str) -> complex:
    """Parse '1+2i', '-i', '0.5', '2i' into a complex number."""
    cleaned = text.strip().replace(" ", "")
    if not cleaned or not _COMPLEX_RE.match(cleaned):
        raise InvalidParameterError(f"cannot parse complex literal {text!r}")
    normalized = cleaned.replace("i", "j")
    # complex() rejects bare "j-less" juxtapositions like "+j1"; rely on its parser.
    try:
        return complex(normalized)
    except ValueError as exc:
        raise InvalidParameterError(f"cannot parse complex literal {text!r}") from exc


def _format_complex(value: complex) -> str:
    re_part, im_part = value.real, value.imag
    if im_part == 0:
        return f"{re_part:g}"
    if re_part == 0:
        return f"{im_part:g}i"
    sign = "+" if im_part > 0 else "-"
    return f"{re_part:g}{sign}{abs(im_part):g}i"


def parse_map_spec(text: str) -> PlanarMap:
    """Build a map from the CLI mini-language.

    Stages are joined by '|' and applied left to right:
    'radial:K=2.0', 'similarity:s=1+2i,t=0', 'mobius:a=1,b=0,c=0,d=1'.
    """
    ops = []
    for stage in text.split("|"):
        stage = stage.strip()
        if not stage:
            raise InvalidParameterError("empty stage in map spec")
        kind, _, arg_text = stage.partition(":")
        kind = kind.strip().lower()
        args = {}
        if arg_text:
            for item in arg_text.split(","):
                key, eq, value = item.partition("=")
                if not eq:
                    raise InvalidParameterError(f"malformed map argument {item!r}")
                args[key.strip().lower()] = value.strip()
        if kind == "radial":
            if set(args) != {"k"}:
                raise InvalidParameterError("radial stage takes exactly K=<real>")
            try:
                K = float(args["k"])
            except ValueError as exc:
                raise InvalidParameterError(f"cannot parse K value {args['k']!r}") from exc
            ops.extend(radial_stretch(K).ops)
        elif kind == "similarity":
            if not set(args) <= {"s", "t"} or "s" not in args:
                raise InvalidParameterError("similarity stage takes s=<complex>[,t=<complex>]")
            ops.append(Similarity(_parse_complex(args["s"]),
                                  _parse_complex(args.get("t", "0"))))
        elif kind == "mobius":
            if set(args) != {"a", "b", "c", "d"}:
                raise InvalidParameterError("mobius stage takes a=,b=,c=,d=")
            ops.append(Mobius(*(_parse_complex(args[k]) for k in "abcd")))
        else:
            raise InvalidParameterError(f"unknown map stage kind {kind!r}")
    return PlanarMap(ops=tuple(ops))


def format_map_spec(f: PlanarMap) -> str:
    parts = []
    for op in f.ops:
        if isinstance(op, RadialPower):
            if op.power > 1.0:
                # Inverse stretches fall outside the mini-language's K >= 1 form.
                raise InvalidParameterError(
                    f"radial power {op.power:g} has no 'radial:K=' form (K < 1)"
                )
            parts.append(f"radial:K={1.0 / op.power:g}")
        elif isinstance(op, Similarity):
            parts.append(f"similarity:s={_format_complex(op.scale)},t={_format_complex(op.offset)}")
        elif isinstance(op, Mobius):
            parts.append("mobius:" + ",".join(
                f"{name}={_format_complex(getattr(op, name))}" for name in "abcd"))
        else:
            raise InvalidParameterError(f"unknown primitive {op!r}")
    return "|".join(parts) if parts else "similarity:s=1,t=0"
