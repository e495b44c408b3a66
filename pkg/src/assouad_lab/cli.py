"""Command-line surface: sampling, estimation, map application, bound checks.

Exit codes: 0 success / all verdicts pass, 2 usage or parameter error,
3 numeric infeasibility (scale window too narrow, pole too close), 4
verification failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import bounds as bnd
from . import estimators as est
from . import families as fam
from . import maps as qc
from .errors import (
    DimensionMismatchError,
    EmptySetError,
    InvalidDilatationError,
    InvalidParameterError,
    LevelOutOfRangeError,
    PoleProximityError,
    ResolutionExceededError,
    ScaleBelowResolutionError,
    SpectrumUndefinedError,
    ThetaOutOfRangeError,
    TruncationTooCoarseError,
    WindowTooNarrowError,
)
from .geometry import load_points
from .index import build_index, deepest_level

SCHEMA = "assouad-lab/1"

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3
EXIT_VERIFY = 4

_USAGE_ERRORS = (
    InvalidParameterError,
    TruncationTooCoarseError,
    InvalidDilatationError,
    DimensionMismatchError,
    EmptySetError,
    ThetaOutOfRangeError,
    SpectrumUndefinedError,
    LevelOutOfRangeError,
)
_NUMERIC_ERRORS = (
    WindowTooNarrowError,
    PoleProximityError,
    ResolutionExceededError,
    ScaleBelowResolutionError,
)

_FAMILY_KINDS = {
    "spiral": "poly_spiral",
    "logspiral": "log_spiral",
    "cantor": "cantor",
    "sequence": "sequence",
}

# Levels below this make even a flat occupancy profile unfittable.
_MIN_INDEX_LEVELS = 8


def _warn(msg: str) -> None:
    print(f"warning: {msg}", file=sys.stderr)


def _num(v):
    # JSON has no inf/nan literals
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        if math.isnan(v):
            return None
    return v


def _emit(payload: dict, out_path: Optional[str]) -> None:
    text = json.dumps(payload, indent=2)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _index_for(ps):
    level = deepest_level(ps)
    if level == 0:
        lo, hi = ps.bounding_box()
        if float(np.max(hi - lo)) == 0.0:
            # degenerate extent: give the estimators some levels to fit on
            level = _MIN_INDEX_LEVELS
    return build_index(ps, level)


def _load(args):
    ps = load_points(args.input, resolution=getattr(args, "res", None))
    return ps, _index_for(ps)


def _window_from(args, idx) -> Optional[est.ScaleWindow]:
    if args.rmin is None and args.rmax is None:
        return None
    default = est.ScaleWindow.default_for(idx)
    return est.ScaleWindow(
        r_min=args.rmin if args.rmin is not None else default.r_min,
        r_max=args.rmax if args.rmax is not None else default.r_max,
    )


def _theta_grid(args, extra=()) -> tuple:
    if args.theta:
        grid = {round(v, 10) for v in args.theta}
    else:
        steps = int(round((args.theta_max - args.theta_min) / args.theta_step))
        grid = {round(args.theta_min + i * args.theta_step, 10) for i in range(steps + 1)}
    grid.update(round(v, 10) for v in extra)
    return tuple(sorted(grid))


# ---- gen ---------------------------------------------------------------


def cmd_gen(args) -> int:
    spec = fam.FamilySpec(
        kind=_FAMILY_KINDS[args.family],
        a=args.a,
        c=args.c,
        ratio=args.ratio,
        p=args.p,
        x_max=args.xmax,
        depth=args.depth,
        m_max=args.mmax,
        target_resolution=args.res,
    )
    ps = fam.sample_family(spec)
    if args.out:
        if args.out.endswith(".json"):
            ps.to_json(args.out)
        else:
            ps.to_csv(args.out)
    else:
        ps.to_csv(sys.stdout)
    return EXIT_OK


# ---- index-stats -------------------------------------------------------


def cmd_index_stats(args) -> int:
    ps, idx = _load(args)
    payload = {
        "schema": SCHEMA,
        "command": "index-stats",
        "input": args.input,
        "points": len(ps),
        "dim": ps.dim,
        "resolution": ps.resolution,
        "rootSide": idx.root_side,
        "maxLevel": idx.max_level,
        "levels": [
            {"level": m, "cellSide": idx.cell_side(m), "occupied": idx.occupied_count(m)}
            for m in range(idx.max_level + 1)
        ],
    }
    _emit(payload, args.out)
    return EXIT_OK


# ---- estimate ----------------------------------------------------------


def cmd_estimate(args) -> int:
    ps, idx = _load(args)
    window = _window_from(args, idx)
    started = time.perf_counter()

    if args.mode == "box":
        e = est.estimate_box_dim(idx, window=window)
        payload = _dim_payload(args, ps, e)
    elif args.mode == "qa":
        e = est.estimate_quasi_assouad(idx, window=window, center_budget=args.centers)
        payload = _dim_payload(args, ps, e)
    elif args.mode == "assouad":
        e = est.estimate_assouad(idx, window=window, center_budget=args.centers)
        payload = _dim_payload(args, ps, e)
    else:
        spec = est.estimate_spectrum(
            idx, theta_grid=_theta_grid(args), window=window, center_budget=args.centers
        )
        absent = [t for t, v in zip(spec.theta_grid, spec.values) if math.isnan(v)]
        if absent:
            _warn(
                "no admissible scale pair at theta = "
                + ", ".join(f"{t:g}" for t in absent)
                + "; raw value reported absent"
            )
        payload = {
            "schema": SCHEMA,
            "command": "estimate",
            "mode": "spectrum",
            "input": args.input,
            "points": len(ps),
            "rhoHat": est.estimate_rho(spec, ambient_dim=ps.dim),
            **json.loads(spec.to_json()),
        }
        if args.plot:
            with open(args.plot, "w") as fh:
                fh.write(spec.to_csv())

    payload["elapsedSeconds"] = round(time.perf_counter() - started, 3)
    _emit(payload, args.out)
    return EXIT_OK


def _dim_payload(args, ps, e: est.DimEstimate) -> dict:
    if args.plot:
        raise InvalidParameterError("--plot is only available in spectrum mode")
    return {
        "schema": SCHEMA,
        "command": "estimate",
        "mode": args.mode,
        "input": args.input,
        "points": len(ps),
        "value": e.value,
        "method": e.method,
        "window": {"rMin": e.window.r_min, "rMax": e.window.r_max},
        "diagnostics": e.slope_diagnostics,
    }


# ---- map ---------------------------------------------------------------


def cmd_map(args) -> int:
    f = qc.parse_map_spec(args.spec)
    ps = load_points(args.input, resolution=args.res)
    image = qc.apply_map(f, ps)
    if args.out:
        if args.out.endswith(".json"):
            image.to_json(args.out)
        else:
            image.to_csv(args.out)
    else:
        image.to_csv(sys.stdout)
    return EXIT_OK


# ---- bounds ------------------------------------------------------------


def _context_from(args) -> bnd.ExponentContext:
    p = args.p
    if isinstance(p, str):
        p = math.inf if p.lower() in ("inf", "+inf", "infinity") else float(p)
    return bnd.ExponentContext(n=args.n, K=args.K, p=p, lam=args.lam if args.lam else 1.0)


def _oracle_source(args) -> bnd.SpectrumFn:
    if args.source_a is not None:
        a = args.source_a
        return lambda th: fam.oracle_spiral_spectrum(a, th)
    if args.source_csv is not None:
        grid, vals = _read_curve(args.source_csv)
        return bnd.spectrum_interpolator(grid, vals)
    raise InvalidParameterError("this formula needs --source-a or --source-csv")


def _read_curve(path: str) -> tuple:
    grid, vals = [], []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            first = line.split(",")[0]
            try:
                float(first)
            except ValueError:
                continue
            t, v = line.split(",")[:2]
            grid.append(float(t))
            vals.append(float(v))
    if not grid:
        raise InvalidParameterError(f"no curve rows in {path}")
    return grid, vals


def cmd_bounds(args) -> int:
    if args.formula == "rh-exponent" and args.p is None and args.n >= 3:
        # this formula is how one finds an exponent, so don't demand one
        args.p = bnd.rh_exponent_floor(args.n, args.K, args.lam if args.lam else 1.0)
    ctx = _context_from(args)
    assumptions = []
    if ctx.K == 1.0:
        assumptions.append("conformal case: p = +inf, all coefficients collapse to 1")
    elif args.p is None and ctx.n == 2:
        assumptions.append(f"planar sharp exponent p = 2K/(K-1) = {ctx.p:.6g}")

    inputs = {
        "n": ctx.n,
        "K": ctx.K,
        "p": _num(ctx.p),
        "lambda": ctx.lam,
        "formula": args.formula,
    }
    values: dict = {}

    if args.formula == "beta-upper":
        _require(args.alpha is not None, "--alpha is required")
        values["value"] = bnd.beta_upper(args.alpha, ctx)
        inputs["alpha"] = args.alpha
    elif args.formula == "symmetric-coeff":
        values["value"] = bnd.symmetric_coeff(ctx)
    elif args.formula == "rh-exponent":
        if ctx.n == 2:
            values["planar"] = _num(bnd.planar_rh_exponent(ctx.K))
        values["floor"] = _num(bnd.rh_exponent_floor(ctx.n, ctx.K, ctx.lam))
        assumptions.append("floor = n*lambda*K/(lambda*K - 1), a lower bound in every dimension")
    elif args.formula == "assouad":
        _require(args.alpha is not None, "--alpha is required")
        inputs["alpha"] = args.alpha
        lower, upper = bnd.assouad_bounds(args.alpha, ctx, inner_p=args.inner_p)
        values["lower"], values["upper"] = lower, upper
        if args.lam:
            ll, lu = bnd.assouad_bounds_lambda(args.alpha, ctx)
            values["lambdaLower"], values["lambdaUpper"] = ll, lu
            assumptions.append("lambda form uses coefficients 1/(lambda*K) and lambda*K")
        assumptions.append(_inner_note(ctx, args.inner_p))
    elif args.formula == "spectrum":
        _require(args.t is not None, "--t is required")
        inputs["t"] = args.t
        src = _oracle_source(args)
        lower, upper = bnd.spectrum_bounds(args.t, ctx, src, inner_p=args.inner_p)
        values.update(
            lower=lower,
            upper=upper,
            thetaImage=bnd.theta_of_t(args.t),
            thetaContract=bnd.theta_of_t(args.t / ctx.K),
            thetaExpand=bnd.theta_of_t(ctx.K * args.t),
        )
        assumptions.append(_inner_note(ctx, args.inner_p))
    elif args.formula == "biholder":
        _require(args.theta is not None, "--theta is required")
        inputs["theta"] = args.theta
        if args.source_value is not None:
            src_val = args.source_value
        else:
            src_val = _oracle_source(args)(args.theta / ctx.K**2)
        inputs["sourceValue"] = src_val
        values["value"] = bnd.biholder_upper(args.theta, ctx.K, src_val)
        assumptions.append("value clamped at ambient dimension 2")
    elif args.formula == "ours":
        _require(args.t is not None, "--t is required")
        inputs["t"] = args.t
        d = args.d if args.d is not None else _oracle_source(args)(bnd.theta_of_t(args.t / ctx.K))
        inputs["d"] = d
        values["value"] = bnd.ours_upper(args.t, ctx.K, d)
    else:  # compare
        _require(args.t is not None, "--t is required")
        inputs["t"] = args.t
        cmp = bnd.compare_bounds(args.t, ctx.K, _oracle_source(args))
        values.update(
            theta=cmp.theta,
            ours=cmp.ours,
            biholder=cmp.biholder,
            hypothesesHold=cmp.hypotheses_hold,
            hypothesisFailures=list(cmp.hypothesis_failures),
            oursLeqBiholder=cmp.ours_leq_biholder,
        )

    payload = {
        "schema": SCHEMA,
        "command": "bounds",
        "inputs": {k: _num(v) for k, v in inputs.items()},
        "values": {k: _num(v) for k, v in values.items()},
        "assumptions": [a for a in assumptions if a],
    }
    _emit(payload, args.out)
    return EXIT_OK


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise InvalidParameterError(msg)


def _inner_note(ctx: bnd.ExponentContext, inner_p) -> str:
    if ctx.K == 1.0:
        return ""
    if inner_p is not None:
        return f"inner exponent p' = {inner_p:.6g} (user-supplied)"
    return f"inner exponent p' = {ctx.inner_exponent():.6g} (K^(n-1) surrogate)"


# ---- classify ----------------------------------------------------------


def cmd_classify(args) -> int:
    c = bnd.classify_spirals(args.a, args.b)
    if args.json:
        _emit(
            {
                "schema": SCHEMA,
                "command": "classify",
                "a": c.a,
                "b": c.b,
                "dilatation": c.dilatation,
                "witness": c.witness_spec(),
                "inverted": c.inverted,
            },
            args.out,
        )
    else:
        line = f"{c.dilatation}, witness {c.witness_spec()}"
        if c.inverted:
            line += " (via inverse-map symmetry)"
        print(line)
    return EXIT_OK


# ---- verify ------------------------------------------------------------


@dataclass
class VerifyReport:
    """Everything one scenario produced: estimates, oracles, bounds, verdicts."""

    scenario: dict
    source_spectrum: est.SpectrumEstimate
    image_spectrum: est.SpectrumEstimate
    bound_report: bnd.BoundReport
    oracle_curves: Optional[dict] = None
    oracle_verdicts: list = field(default_factory=list)
    eps: float = 0.2
    oracle_eps: float = 0.15
    timings: dict = field(default_factory=dict)

    @property
    def all_passed(self) -> bool:
        if not self.bound_report.all_passed:
            return False
        return all(v["passed"] for v in self.oracle_verdicts if v["passed"] is not None)

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "command": "verify",
            "scenario": self.scenario,
            "eps": self.eps,
            "oracleEps": self.oracle_eps,
            "sourceSpectrum": json.loads(self.source_spectrum.to_json()),
            "imageSpectrum": json.loads(self.image_spectrum.to_json()),
            "oracleCurves": self.oracle_curves,
            "bounds": self.bound_report.to_json(),
            "oracleVerdicts": self.oracle_verdicts,
            "allPassed": self.all_passed,
            "timings": {k: round(v, 3) for k, v in self.timings.items()},
        }


def _parse_set(text: str) -> dict:
    """Parse a scenario selector like "spiral:a=1"."""
    head, _, rest = text.partition(":")
    if head != "spiral":
        raise InvalidParameterError(
            f"unsupported scenario family {head!r}; verification covers planar spirals"
        )
    params = {}
    for piece in filter(None, rest.split(",")):
        key, _, val = piece.partition("=")
        params[key.strip()] = float(val)
    if "a" not in params:
        raise InvalidParameterError("spiral scenario needs a=<exponent>")
    return params


def _net_radial_power(f: qc.PlanarMap) -> Optional[float]:
    """Product of powers when the map is a pure radial-power chain, else None."""
    power = 1.0
    for op in f.ops:
        if isinstance(op, qc.RadialPower):
            power *= op.power
        else:
            return None
    return power


def _estimate_curve(ps, grid, centers):
    return est.estimate_spectrum(_index_for(ps), theta_grid=grid, center_budget=centers)


def cmd_verify(args) -> int:
    params = _parse_set(args.set)
    a_src = params["a"]
    f = qc.parse_map_spec(args.map) if args.map else qc.identity_map()
    K = f.dilatation_bound
    extra = (bnd.theta_of_t(args.t),) if args.t is not None else ()
    grid = _theta_grid(args, extra=extra)
    timings: dict = {}

    clock = time.perf_counter
    t0 = clock()
    src_ps = fam.sample_family(
        fam.FamilySpec(kind="poly_spiral", a=a_src, x_max=args.xmax, target_resolution=args.res)
    )
    timings["sampleSource"] = clock() - t0

    t0 = clock()
    src_est = _estimate_curve(src_ps, grid, args.centers)
    timings["estimateSource"] = clock() - t0

    net = _net_radial_power(f)
    a_img = None
    img_res_used = args.res
    if net is not None and net == 1.0:
        a_img = a_src
        img_est = src_est
        timings["sampleImage"] = 0.0
        timings["estimateImage"] = 0.0
    elif net is not None:
        # A radial power sends the spiral with exponent a onto the one with
        # exponent a*power, so estimate the image on its own honest sample
        # instead of pushing worst-case Lipschitz factors through the index.
        a_img = a_src * net
        res_img = args.image_res if args.image_res is not None else args.res
        tail_floor = args.xmax ** (-a_img) / fam.TAIL_SLACK
        if res_img < tail_floor:
            res_img = tail_floor * (1.0 + 1e-9)
            _warn(f"image resolution raised to {res_img:.3g} to keep the truncation tail honest")
        img_res_used = res_img
        t0 = clock()
        img_ps = fam.sample_family(
            fam.FamilySpec(kind="poly_spiral", a=a_img, x_max=args.xmax, target_resolution=res_img)
        )
        timings["sampleImage"] = clock() - t0
        t0 = clock()
        img_est = _estimate_curve(img_ps, grid, args.centers)
        timings["estimateImage"] = clock() - t0
    else:
        t0 = clock()
        img_ps = qc.apply_map(f, src_ps)
        timings["sampleImage"] = clock() - t0
        t0 = clock()
        img_est = _estimate_curve(img_ps, grid, args.centers)
        timings["estimateImage"] = clock() - t0

    t0 = clock()
    ctx = bnd.ExponentContext(n=2, K=K)
    src_fn = bnd.spectrum_interpolator(src_est.theta_grid, src_est.regularized_values)
    img_fn = bnd.spectrum_interpolator(img_est.theta_grid, img_est.regularized_values)
    report = bnd.spectrum_bound_report(grid, ctx, src_fn, img_fn, slack=args.eps)
    timings["bounds"] = clock() - t0

    claimed_a = args.claim_image_a if args.claim_image_a is not None else a_img
    oracle_curves = {
        "source": [fam.oracle_spiral_spectrum(a_src, th) for th in grid],
    }
    oracle_verdicts = []
    if claimed_a is not None:
        oracle_curves["image"] = [fam.oracle_spiral_spectrum(claimed_a, th) for th in grid]
        oracle_curves["imageExponent"] = claimed_a
        oracle_curves["imageClaimed"] = args.claim_image_a is not None
        # Only theta with a real (non-floor) estimate can contradict an
        # oracle; where the raw statistic is absent the regularized value
        # is a box-dimension floor, not a point estimate.
        raw_by_theta = dict(zip(img_est.theta_grid, img_est.values))
        for th, oracle_v in zip(grid, oracle_curves["image"]):
            if math.isnan(raw_by_theta.get(th, math.nan)):
                oracle_verdicts.append(
                    {"theta": th, "estimate": None, "oracle": oracle_v,
                     "gap": None, "passed": None, "reason": "raw estimate absent"}
                )
                continue
            est_v = img_fn(th)
            gap = abs(est_v - oracle_v)
            oracle_verdicts.append(
                {
                    "theta": th,
                    "estimate": est_v,
                    "oracle": oracle_v,
                    "gap": gap,
                    "passed": bool(gap <= args.oracle_eps),
                }
            )

    scenario = {
        "family": "spiral",
        "a": a_src,
        "map": args.map or "identity",
        "dilatation": K,
        "imageExponent": a_img,
        "t": args.t,
        "xmax": args.xmax,
        "res": args.res,
        "imageRes": img_res_used,
        "centers": args.centers,
        "thetaGrid": list(grid),
        "claimImageA": args.claim_image_a,
    }
    verify = VerifyReport(
        scenario=scenario,
        source_spectrum=src_est,
        image_spectrum=img_est,
        bound_report=report,
        oracle_curves=oracle_curves,
        oracle_verdicts=oracle_verdicts,
        eps=args.eps,
        oracle_eps=args.oracle_eps,
        timings=timings,
    )
    _emit(verify.to_json(), args.out)
    return EXIT_OK if verify.all_passed else EXIT_VERIFY


# ---- parser ------------------------------------------------------------


def _add_grid_flags(p) -> None:
    p.add_argument("--theta", type=float, action="append",
                   help="explicit grid value; repeatable, replaces the range flags")
    p.add_argument("--theta-min", type=float, default=0.05)
    p.add_argument("--theta-max", type=float, default=0.90)
    p.add_argument("--theta-step", type=float, default=0.05)


def _add_window_flags(p) -> None:
    p.add_argument("--rmin", type=float, default=None, help="smallest ball radius")
    p.add_argument("--rmax", type=float, default=None, help="largest ball radius")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="assouad-lab",
        description="box-counting and Assouad spectrum estimation with "
        "quasiconformal distortion checks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="sample a point family to CSV/JSON")
    g.add_argument("--family", required=True, choices=sorted(_FAMILY_KINDS))
    g.add_argument("--a", type=float, default=1.0, help="polynomial spiral exponent")
    g.add_argument("--c", type=float, default=1.0, help="logarithmic spiral rate")
    g.add_argument("--ratio", type=float, default=1.0 / 3.0, help="Cantor contraction ratio")
    g.add_argument("--p", type=float, default=1.0, help="sequence decay exponent")
    g.add_argument("--xmax", type=float, default=1000.0)
    g.add_argument("--depth", type=int, default=8)
    g.add_argument("--mmax", type=int, default=1000)
    g.add_argument("--res", type=float, default=1e-3, help="target resolution")
    g.add_argument("-o", "--out", default=None)
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("index-stats", help="per-level occupancy of the dyadic index")
    s.add_argument("input")
    s.add_argument("--res", type=float, default=None, help="resolution override for plain CSV")
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_index_stats)

    e = sub.add_parser("estimate", help="estimate a dimension or the spectrum")
    e.add_argument("input")
    e.add_argument("--mode", choices=["box", "spectrum", "assouad", "qa"], default="box")
    e.add_argument("--res", type=float, default=None, help="resolution override for plain CSV")
    e.add_argument("--centers", type=int, default=est.DEFAULT_CENTER_BUDGET)
    _add_grid_flags(e)
    _add_window_flags(e)
    e.add_argument("--out", default=None)
    e.add_argument("--plot", default=None, help="write the regularized curve as CSV")
    e.set_defaults(func=cmd_estimate)

    m = sub.add_parser("map", help="apply a planar map to a point set")
    m.add_argument("input")
    m.add_argument("--spec", required=True, help='e.g. "radial:K=2" or "radial:K=2|similarity:s=2,t=1"')
    m.add_argument("--res", type=float, default=None)
    m.add_argument("-o", "--out", default=None)
    m.set_defaults(func=cmd_map)

    b = sub.add_parser("bounds", help="evaluate a closed-form distortion bound")
    b.add_argument(
        "--formula",
        required=True,
        choices=["beta-upper", "symmetric-coeff", "rh-exponent", "assouad",
                 "spectrum", "biholder", "ours", "compare"],
    )
    b.add_argument("--n", type=int, default=2)
    b.add_argument("--K", type=float, default=1.0)
    b.add_argument("--p", default=None, help='Sobolev exponent, a float or "inf"')
    b.add_argument("--lambda", dest="lam", type=float, default=None)
    b.add_argument("--inner-p", type=float, default=None)
    b.add_argument("--alpha", type=float, default=None)
    b.add_argument("--t", type=float, default=None)
    b.add_argument("--theta", type=float, default=None)
    b.add_argument("--d", type=float, default=None)
    b.add_argument("--source-value", type=float, default=None)
    b.add_argument("--source-a", type=float, default=None, help="spiral exponent for the oracle curve")
    b.add_argument("--source-csv", default=None, help="two-column theta,value curve")
    b.add_argument("--out", default=None)
    b.set_defaults(func=cmd_bounds)

    v = sub.add_parser("verify", help="end-to-end distortion check on a sampled scenario")
    v.add_argument("--set", required=True, help='scenario, e.g. "spiral:a=1"')
    v.add_argument("--map", default=None, help="map mini-language spec; identity when omitted")
    v.add_argument("--t", type=float, default=None, help="extra grid point theta(t)")
    v.add_argument("--eps", type=float, default=0.2, help="slack for estimate-vs-bound verdicts")
    v.add_argument("--oracle-eps", type=float, default=0.15, help="slack for estimate-vs-oracle verdicts")
    v.add_argument("--xmax", type=float, default=1e4)
    v.add_argument("--res", type=float, default=1e-5)
    v.add_argument("--image-res", type=float, default=None)
    v.add_argument("--centers", type=int, default=est.DEFAULT_CENTER_BUDGET)
    v.add_argument("--claim-image-a", type=float, default=None,
                   help="assert the image spectrum equals this spiral oracle")
    _add_grid_flags(v)
    v.add_argument("--out", default=None)
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("classify", help="minimal dilatation between two spirals")
    c.add_argument("--a", type=float, required=True)
    c.add_argument("--b", type=float, required=True)
    c.add_argument("--json", action="store_true")
    c.add_argument("--out", default=None)
    c.set_defaults(func=cmd_classify)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _NUMERIC_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except _USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
