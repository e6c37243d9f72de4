"""Independent two-sided bounds: brute-force searches against certificates."""

import math

import numpy as np
import pytest

from bidisc import (
    OracleBudget,
    Problem,
    cara_lower,
    lempert_upper,
    sandwich,
    solve,
)
from bidisc.sampling import sample_extremal_params, sample_pair_with_label

ONE_SIDED_SLACK = 1e-8


def _forward_pairs(seed, count, labels=("E1", "E2", "E3", "E4")):
    rng = np.random.default_rng(seed)
    pairs = []
    while len(pairs) < count:
        params, (p, q), label = sample_extremal_params(rng)
        if label in labels:
            pairs.append((p, q, label))
    return pairs


# ---------------------------------------------------------------------------
# closed-form region: both sides coincide


def test_u_pair_short_circuits_to_exact_width():
    rng = np.random.default_rng(131)
    for _ in range(10):
        p, q, _ = sample_pair_with_label(rng, "U")
        result = sandwich(p, q)
        value = math.log(abs(p[0] * q[0]))
        # the coordinate Blaschke bound is exact; the geodesic upper bound
        # carries a defect-proportional safety margin, so the width is tiny
        # but not literally zero
        assert result.width < 1e-9
        assert result.c_lower == value
        assert value <= result.l_upper < value + 1e-9
        assert result.escalations == 0
        assert result.contains(value)


def test_sigma_u_pair_uses_second_coordinate():
    rng = np.random.default_rng(137)
    p, q, _ = sample_pair_with_label(rng, "SIGMA_U")
    result = sandwich(p, q)
    assert result.width < 1e-9
    assert result.c_lower == math.log(abs(p[1] * q[1]))


# ---------------------------------------------------------------------------
# exceptional regions: sandwich around certified values


def test_sandwich_contains_certified_value():
    for p, q, label in _forward_pairs(139, 6):
        certificate = solve(Problem(z=(0, 0), p=p, q=q))
        result = sandwich(*certificate.pair)
        assert result.width < 1e-6, f"{label} width {result.width:.3e}"
        assert result.contains(certificate.value_log), (
            f"{label}: value {certificate.value_log!r} outside "
            f"[{result.c_lower!r}, {result.l_upper!r}]"
        )


def test_bounds_are_one_sided_against_certificates():
    for p, q, label in _forward_pairs(149, 6):
        certificate = solve(Problem(z=(0, 0), p=p, q=q))
        value = certificate.value_log
        lower = cara_lower(*certificate.pair)
        upper = lempert_upper(*certificate.pair)
        assert lower.value <= value + ONE_SIDED_SLACK, f"{label} lower crosses"
        assert upper.value >= value - ONE_SIDED_SLACK, f"{label} upper crosses"
        assert lower.defect < 1e-10
        assert upper.defect < 1e-10


def test_budget_doubling_never_worsens_width():
    base = OracleBudget()
    doubled = base.doubled()
    assert doubled.t_grid == 2 * base.t_grid - 1  # nested grid keeps old slices
    assert doubled.probes == 2 * base.probes  # prefix-stable probe stream
    for p, q, _ in _forward_pairs(151, 3):
        small = sandwich(p, q, base)
        large = sandwich(p, q, doubled)
        assert large.width <= small.width + 1e-10, (
            f"doubling worsened width: {small.width:.3e} -> {large.width:.3e}"
        )


# ---------------------------------------------------------------------------
# structure of the results


def test_sandwich_fields_and_dict():
    rng = np.random.default_rng(157)
    p, q, _ = sample_pair_with_label(rng, "E2")
    result = sandwich(p, q)
    assert result.c_lower == result.lower.value
    assert result.l_upper == result.upper.value
    assert result.width == result.l_upper - result.c_lower
    payload = result.to_dict()
    assert set(payload) == {
        "c_lower", "l_upper", "width", "escalations", "lower_witness", "upper_witness",
    }
    assert payload["c_lower"] == result.c_lower
    assert payload["lower_witness"]["family"] == result.lower.family
    assert "value" in payload["upper_witness"]


def test_witness_families_are_labeled():
    rng = np.random.default_rng(163)
    p, q, _ = sample_pair_with_label(rng, "U")
    lower = cara_lower(p, q)
    upper = lempert_upper(p, q)
    assert lower.family.startswith("coordinate_blaschke")
    assert upper.family.startswith("coordinate_geodesic")
    assert isinstance(lower.data, dict) and isinstance(upper.data, dict)


def test_sandwich_deterministic():
    rng = np.random.default_rng(167)
    p, q, _ = sample_pair_with_label(rng, "E1")
    first = sandwich(p, q)
    second = sandwich(p, q)
    assert first.c_lower == second.c_lower
    assert first.l_upper == second.l_upper
