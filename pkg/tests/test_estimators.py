import json
import math

import numpy as np
import pytest

from assouad_lab.errors import InvalidParameterError, WindowTooNarrowError
from assouad_lab.estimators import (
    DEFAULT_THETA_GRID,
    ScaleWindow,
    SpectrumEstimate,
    estimate_assouad,
    estimate_box_dim,
    estimate_quasi_assouad,
    estimate_rho,
    estimate_spectrum,
)
from assouad_lab.geometry import PointSet
from assouad_lab.index import build_index, deepest_level

LOG23 = math.log(2) / math.log(3)


@pytest.fixture(scope="module")
def single_point_idx():
    ps = PointSet(dim=2, points=[(0.3, 0.7)], resolution=1e-4)
    return build_index(ps, 8)


def test_scale_window_validation():
    with pytest.raises(InvalidParameterError):
        ScaleWindow(0.5, 0.5)
    with pytest.raises(InvalidParameterError):
        ScaleWindow(-1.0, 0.5)


def test_scale_window_defaults(cantor12_idx):
    w = ScaleWindow.default_for(cantor12_idx)
    assert w.r_min == pytest.approx(4 * cantor12_idx.resolution)
    assert w.r_max == pytest.approx(cantor12_idx.root_side / 4)
    assert len(w.levels(cantor12_idx)) >= 4


# ---- single point: everything is zero ----------------------------------


def test_single_point_box(single_point_idx):
    assert estimate_box_dim(single_point_idx).value == 0.0


def test_single_point_spectrum(single_point_idx):
    spec = estimate_spectrum(single_point_idx)
    assert all(v == 0.0 for v in spec.regularized_values)


def test_single_point_qa_and_assouad(single_point_idx):
    assert estimate_quasi_assouad(single_point_idx).value == 0.0
    assert estimate_assouad(single_point_idx).value == 0.0


# ---- known sets ---------------------------------------------------------


def test_dense_square_box(dense_square_idx):
    est = estimate_box_dim(dense_square_idx)
    assert est.value == pytest.approx(2.0, abs=0.05)
    assert est.method == "box"


def test_dense_square_assouad(dense_square_idx):
    est = estimate_assouad(dense_square_idx)
    assert est.value == pytest.approx(2.0, abs=0.1)
    assert est.method == "assouadWindow"


def test_cantor_depth10_box():
    from assouad_lab.families import FamilySpec, sample_family

    ps = sample_family(FamilySpec(kind="cantor", ratio=1.0 / 3.0, depth=10,
                                  target_resolution=(1.0 / 3.0) ** 10))
    idx = build_index(ps, deepest_level(ps))
    assert estimate_box_dim(idx).value == pytest.approx(LOG23, abs=0.05)


def test_cantor_quasi_assouad(cantor12_idx):
    est = estimate_quasi_assouad(cantor12_idx)
    assert est.value == pytest.approx(LOG23, abs=0.08)
    assert est.method == "spectrumLimit"


def test_sequence_assouad_one_sided(sequence_idx):
    # finite truncation biases down, so only a floor is asserted
    assert estimate_assouad(sequence_idx).value >= 0.85


# ---- spectrum structure -------------------------------------------------


def test_regularized_is_monotone_and_clamped(cantor12_idx, sequence_idx):
    for idx in (cantor12_idx, sequence_idx):
        spec = estimate_spectrum(idx)
        reg = spec.regularized_values
        assert all(b >= a for a, b in zip(reg, reg[1:]))
        assert all(0.0 <= v <= idx.dim for v in reg)
        raw = [v for v in spec.values if not math.isnan(v)]
        assert all(0.0 <= v <= idx.dim for v in raw)


def test_dimension_chain(cantor12_idx, sequence_idx, dense_square_idx):
    for idx in (cantor12_idx, sequence_idx, dense_square_idx):
        box = estimate_box_dim(idx).value
        reg = estimate_spectrum(idx).regularized_values
        assouad = estimate_assouad(idx).value
        for r in reg:
            assert box <= r + 0.1
            assert r + 0.1 <= assouad + 0.2


def test_scale_relaxation_stability(cantor12_idx, sequence_idx):
    # coarsening every query radius by a constant moves no estimate much
    for idx in (cantor12_idx, sequence_idx):
        base = estimate_spectrum(idx).regularized_values
        w0 = ScaleWindow.default_for(idx)
        for c1 in (2.0, 4.0):
            w = ScaleWindow(w0.r_min * c1, min(w0.r_max * c1, idx.root_side))
            moved = estimate_spectrum(idx, window=w).regularized_values
            assert max(abs(a - b) for a, b in zip(base, moved)) <= 0.1


def test_finite_stability_under_union(cantor12, cantor12_idx):
    shifted = cantor12.points + 2.0
    union = PointSet(dim=1, points=np.vstack([cantor12.points, shifted]),
                     resolution=cantor12.resolution)
    union_idx = build_index(union, deepest_level(union))
    part = estimate_spectrum(cantor12_idx).regularized_values
    whole = estimate_spectrum(union_idx).regularized_values
    for p, w in zip(part, whole):
        assert w >= p - 0.05


def test_absent_theta_reported_not_fabricated(cantor12_idx):
    # theta = 0.99 needs R^(1/theta) barely below R: no admissible pair in
    # a short window, so the raw value is absent and the floor carries it
    w = ScaleWindow(0.004, 0.2)
    spec = estimate_spectrum(cantor12_idx, theta_grid=(0.99,), window=w)
    assert math.isnan(spec.values[0])
    assert spec.regularized_values[0] == pytest.approx(
        estimate_box_dim(cantor12_idx, window=w).value)


def test_no_scales_at_all_is_an_error(cantor12_idx):
    w = ScaleWindow(0.01, 0.1)  # three dyadic levels: no floor, no rays
    with pytest.raises(WindowTooNarrowError):
        estimate_spectrum(cantor12_idx, theta_grid=(0.99,), window=w)


def test_box_needs_four_levels(cantor12_idx):
    with pytest.raises(WindowTooNarrowError):
        estimate_box_dim(cantor12_idx, window=ScaleWindow(0.01, 0.1))


# ---- rho ----------------------------------------------------------------


def oracle_estimate(a, grid=tuple(round(0.05 * i, 2) for i in range(1, 20))):
    from assouad_lab.families import oracle_spiral_spectrum

    vals = [oracle_spiral_spectrum(a, th) for th in grid]
    return SpectrumEstimate(theta_grid=list(grid), values=vals,
                            regularized_values=vals, diagnostics=[None] * len(grid))


def test_rho_on_exact_oracle_curves():
    assert estimate_rho(oracle_estimate(1.0), 2, epsilon=0.01) == pytest.approx(0.5, abs=0.05)
    assert estimate_rho(oracle_estimate(2.0), 2, epsilon=0.01) == pytest.approx(2 / 3, abs=0.05)


def test_rho_of_flat_zero_spectrum():
    grid = list(DEFAULT_THETA_GRID)
    flat = SpectrumEstimate(theta_grid=grid, values=[0.0] * len(grid),
                            regularized_values=[0.0] * len(grid),
                            diagnostics=[None] * len(grid))
    assert estimate_rho(flat, 2, epsilon=0.05) == grid[0]


def test_rho_sits_at_grid_top_while_curve_still_rising():
    grid = [0.1, 0.2, 0.3]
    rising = SpectrumEstimate(theta_grid=grid, values=[0.1, 0.2, 1.0],
                              regularized_values=[0.1, 0.2, 1.0],
                              diagnostics=[None] * 3)
    # nothing before the final point comes within epsilon of the top value
    assert estimate_rho(rising, 2, epsilon=0.05) == 0.3


# ---- serialization ------------------------------------------------------


def test_spectrum_json_and_csv(cantor12_idx):
    spec = estimate_spectrum(cantor12_idx, theta_grid=(0.2, 0.5, 0.99),
                             window=ScaleWindow(0.004, 0.2))
    payload = json.loads(spec.to_json())
    assert set(payload) == {"theta", "value", "regularized", "diagnostics"}
    assert payload["value"][2] is None  # NaN must not leak into JSON
    lines = spec.to_csv().strip().splitlines()
    assert lines[0] == "theta,regularized"
    assert len(lines) == 4
