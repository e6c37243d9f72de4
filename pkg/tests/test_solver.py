"""End-to-end certification: dispatch, roundtrips, invariances, fallbacks."""

import cmath
import math

import numpy as np
import pytest

from bidisc import (
    Certificate,
    DegenerateData,
    DiagonalPoles,
    ExtremalParams,
    NoCandidate,
    NoConvergence,
    PickInterpolant,
    PoleAtBase,
    Problem,
    SolverConfig,
    automorphism_normalize,
    big_phi,
    fiber_distance,
    inversion_matrices,
    mobius_map,
    omega1_solve,
    omega2_solve,
    omega2_value,
    proposition_refine,
    solve,
    thin_set_fallback,
    verify_certificate,
)
from bidisc.regions import GENERIC_LABELS, OMEGA2_LABELS
from bidisc.sampling import (
    random_disc_point,
    sample_extremal_params,
    sample_generic_pair,
    sample_pair_with_label,
)
from bidisc.solver import FALLBACK, VALID

U_PROBLEM = Problem(z=(0, 0), p=(0.5, 0.1), q=(-0.5, 0.05))


def _value_only(problem, config=None):
    return solve(problem, config).value_log


# ---------------------------------------------------------------------------
# closed-form region


def test_u_example_value_exact():
    certificate = solve(U_PROBLEM)
    assert certificate.region == "U"
    assert certificate.status == VALID
    assert certificate.value_log == math.log(0.25)


def test_u_example_residuals():
    certificate = solve(U_PROBLEM)
    residuals = certificate.residuals
    assert max(
        residuals.interp_p, residuals.interp_q,
        residuals.vanish_p, residuals.vanish_q, residuals.value_gap,
    ) < 1e-13


def test_normalized_pair_is_involution_image():
    # the reported frame: normalization by m_z, an involution; at z = 0 it
    # negates, and applying it again recovers the original poles
    certificate = solve(U_PROBLEM)
    assert certificate.pair == ((-0.5, -0.1), (0.5, -0.05))
    recovered = automorphism_normalize(certificate.base_point, certificate.pair[0])
    assert recovered == (0.5 + 0j, 0.1 + 0j)


def test_omega1_public_wrapper():
    certificate = omega1_solve(((0.5, 0.1), (-0.5, 0.05)))
    assert certificate.value_log == math.log(0.25)
    # left inverse at the origin carries the value: |F(0,0)| = |p1 q1|
    assert abs(certificate.eval_left_inverse(0j, 0j)) == pytest.approx(0.25, abs=1e-16)
    # disc passes through the origin
    origin = certificate.eval_disc(0j)
    assert origin == (0j, 0j)


def test_omega1_rejects_exceptional_pair():
    with pytest.raises(DegenerateData):
        omega1_solve(((0.1, 0.5), (0.5, 0.1)))


def test_u_value_equals_coordinate_product_on_samples():
    rng = np.random.default_rng(61)
    for _ in range(50):
        p, q, _ = sample_pair_with_label(rng, "U")
        certificate = omega1_solve((p, q))
        assert certificate.value_log == math.log(abs(p[0] * q[0]))


# ---------------------------------------------------------------------------
# exceptional regions: forward-backward roundtrip


def test_omega2_roundtrip_mixed_regions():
    rng = np.random.default_rng(67)
    worst_param = 0.0
    worst_value = 0.0
    for _ in range(50):
        params, (p, q), label = sample_extremal_params(rng)
        assert label in OMEGA2_LABELS or label in ("U", "SIGMA_U")
        if label not in OMEGA2_LABELS:
            continue
        certificate = omega2_solve((p, q))
        assert certificate.status == VALID
        worst_value = max(worst_value, abs(certificate.value_log - omega2_value(params)))
        if label in ("E1", "E2"):
            # direct solves recover the forward parameters; E3/E4 go through
            # the sigma image, whose disc carries different parameters
            assert not certificate.sigma_conjugated
            worst_param = max(worst_param, fiber_distance(certificate.disc.params, params))
        else:
            assert certificate.sigma_conjugated
    assert worst_param < 1e-8, f"parameter drift {worst_param:.3e}"
    assert worst_value < 1e-10, f"value drift {worst_value:.3e}"


def test_omega2_rejects_closed_form_pair():
    with pytest.raises(DegenerateData):
        omega2_solve(((0.5, 0.1), (-0.5, 0.05)))


def test_omega2_pole_swap_same_value():
    rng = np.random.default_rng(71)
    for _ in range(10):
        _, (p, q), label = sample_extremal_params(rng)
        if label not in OMEGA2_LABELS:
            continue
        a = omega2_solve((p, q))
        b = omega2_solve((q, p))
        assert abs(a.value_log - b.value_log) < 1e-10


def test_solve_deterministic_across_runs():
    _, (p, q), _ = sample_extremal_params(np.random.default_rng(73))
    problem = Problem(z=(0, 0), p=p, q=q)
    first = solve(problem)
    second = solve(problem)
    assert first.value_log == second.value_log
    assert first.disc.params == second.disc.params
    assert first.iterations == second.iterations
    assert first.starts_used == second.starts_used


def test_seed_variation_agrees_on_value():
    _, (p, q), _ = sample_extremal_params(np.random.default_rng(79))
    problem = Problem(z=(0, 0), p=p, q=q)
    values = [_value_only(problem, SolverConfig(seed=s)) for s in range(3)]
    assert max(values) - min(values) < 1e-12


def test_left_inverse_unique_across_seeds():
    # the certified left inverse is canonical: seeds must agree pointwise
    rng = np.random.default_rng(83)
    _, (p, q), _ = sample_extremal_params(rng)
    problem = Problem(z=(0, 0), p=p, q=q)
    probes = [(random_disc_point(rng, 0.95), random_disc_point(rng, 0.95)) for _ in range(100)]
    evaluations = []
    for seed in (1, 2, 3):
        certificate = solve(problem, SolverConfig(seed=seed))
        evaluations.append([certificate.eval_left_inverse(*x) for x in probes])
    for other in evaluations[1:]:
        drift = max(abs(a - b) for a, b in zip(evaluations[0], other))
        assert drift < 1e-10, f"left inverses disagree by {drift:.3e}"


# ---------------------------------------------------------------------------
# invariances


def test_rotation_invariance():
    rng = np.random.default_rng(89)
    for _ in range(10):
        p, q, _ = sample_generic_pair(rng)
        u1 = complex(np.exp(1j * rng.uniform(0, 2 * np.pi)))
        u2 = complex(np.exp(1j * rng.uniform(0, 2 * np.pi)))
        base = _value_only(Problem(z=(0, 0), p=p, q=q))
        rotated = _value_only(Problem(
            z=(0, 0),
            p=(u1 * p[0], u2 * p[1]),
            q=(u1 * q[0], u2 * q[1]),
        ))
        assert abs(base - rotated) < 1e-9


def test_base_point_shift_invariance():
    rng = np.random.default_rng(97)
    for _ in range(10):
        p, q, _ = sample_generic_pair(rng)
        z = (random_disc_point(rng, 0.4), random_disc_point(rng, 0.4))
        shifted = _value_only(Problem(z=z, p=p, q=q))
        normalized = _value_only(Problem(
            z=(0, 0),
            p=automorphism_normalize(z, p),
            q=automorphism_normalize(z, q),
        ))
        assert abs(shifted - normalized) < 1e-9


# ---------------------------------------------------------------------------
# proposition refinement


def test_refine_returns_sign_pair_on_forward_instances():
    rng = np.random.default_rng(101)
    for _ in range(20):
        params, (p, q), _ = sample_extremal_params(rng)
        l_true = params.c * mobius_map(params.gamma, params.c)
        candidates = proposition_refine((p, q), l_true, params.omega)
        assert len(candidates) == 2
        plus = (params.alpha, params.beta, params.c)
        minus = tuple(-v for v in plus)
        for target in (plus, minus):
            assert any(
                max(abs(c[j] - target[j]) for j in range(3)) < 1e-9 for c in candidates
            ), f"missing {target} in {candidates}"


def test_refine_far_guess_yields_no_candidate():
    rng = np.random.default_rng(103)
    params, (p, q), _ = sample_extremal_params(rng)
    l_true = params.c * mobius_map(params.gamma, params.c)
    with pytest.raises(NoCandidate):
        proposition_refine((p, q), 2.5 * l_true, params.omega)


def test_refine_consistent_with_certificate():
    rng = np.random.default_rng(107)
    checked = 0
    while checked < 10:
        params, (p, q), label = sample_extremal_params(rng)
        if label not in ("E1", "E2"):
            continue
        checked += 1
        certificate = omega2_solve((p, q))
        got = certificate.disc.params
        l_cert = got.c * mobius_map(got.gamma, got.c)
        candidates = proposition_refine((p, q), l_cert, got.omega)
        # candidate c may come in either pole order: c or m_gamma(c)
        other = mobius_map(got.gamma, got.c)
        best = min(
            max(abs(cand[0] - got.alpha), abs(cand[1] - got.beta), abs(cand[2] - c_ref))
            for cand in _signed(candidates)
            for c_ref in (got.c, other)
        )
        assert best < 1e-7, f"refinement disagrees with certificate by {best:.3e}"


def _signed(candidates):
    for cand in candidates:
        yield cand
        yield tuple(-v for v in cand)


def test_inversion_matrices_shape_and_transfer():
    rng = np.random.default_rng(109)
    for _ in range(20):
        params, (p, q), _ = sample_extremal_params(rng)
        l_true = params.c * mobius_map(params.gamma, params.c)
        mats = inversion_matrices((p, q), l_true, params.omega)
        assert mats.M.shape == (2, 2) and mats.N.shape == (2, 2) and mats.P.shape == (2, 2)
        # at least one side invertible, and P is that side's transfer matrix
        det_m, det_n = np.linalg.det(mats.M), np.linalg.det(mats.N)
        assert max(abs(det_m), abs(det_n)) > 1e-12
        if abs(det_m) > 1e-12:
            assert np.allclose(mats.M @ mats.P, np.conjugate(mats.N), atol=1e-10)


def test_refine_rejects_zero_guess():
    with pytest.raises(DegenerateData):
        proposition_refine(((0.1, 0.5), (0.5, 0.1)), 0.0)


# ---------------------------------------------------------------------------
# degenerate input


def test_diagonal_poles_error():
    with pytest.raises(DiagonalPoles) as info:
        solve(Problem(z=(0, 0), p=(0.3, 0.4), q=(0.3, 0.4)))
    assert info.value.tag == "DIAGONAL_POLES"


def test_pole_at_base_error():
    with pytest.raises(PoleAtBase) as info:
        solve(Problem(z=(0.3, 0.4), p=(0.3, 0.4), q=(0.1, 0.2)))
    assert info.value.tag == "POLE_AT_BASE"


def test_no_convergence_with_starved_budget():
    _, (p, q), _ = sample_extremal_params(np.random.default_rng(113))
    config = SolverConfig(starts=1, max_iterations=3, auto_escalate=False)
    with pytest.raises(NoConvergence) as info:
        omega2_solve((p, q), config)
    assert info.value.tag == "NO_CONVERGENCE"


# ---------------------------------------------------------------------------
# thin-set fallback


def test_thin_pair_extrapolates_to_limit():
    # p1 = q1 = 0.5 with distinct second coordinates: the limiting value is
    # log 0.5 (continuity from nearby generic pairs)
    certificate = thin_set_fallback(Problem(z=(0, 0), p=(0.5, 0.1), q=(0.5, 0.2)))
    assert certificate.status == FALLBACK
    assert certificate.region == "THIN_A"
    assert abs(certificate.value_log - math.log(0.5)) < 1e-6
    assert certificate.fallback.spread < 1e-5
    assert certificate.residuals.value_gap <= certificate.fallback.spread + 1e-15


def test_solve_routes_thin_pairs_to_fallback():
    certificate = solve(Problem(z=(0, 0), p=(0.5, 0.1), q=(0.5, 0.2)))
    assert certificate.status == FALLBACK
    assert certificate.fallback is not None


def test_fallback_on_band_pair_matches_closed_form():
    # a pair sitting exactly on the U/E2 interface: both coordinates lie on
    # the same automorphism graph, so the closed form log|p1 q1| extends by
    # continuity and the extrapolated value must reproduce it
    psi = PickInterpolant(node=0.5, anchor=0.2 + 0.1j, eta=cmath.exp(0.7j))
    a, b = 0.5 + 0j, -0.4 + 0j
    p = (a, a * psi(a))
    q = (b, b * psi(b))
    certificate = thin_set_fallback(Problem(z=(0, 0), p=p, q=q))
    assert certificate.region == "BOUNDARY_BAND"
    assert abs(certificate.value_log - math.log(abs(a * b))) < 1e-8


def test_fallback_rejects_generic_and_degenerate_input():
    with pytest.raises(DegenerateData):
        thin_set_fallback(U_PROBLEM)
    with pytest.raises(DiagonalPoles):
        thin_set_fallback(Problem(z=(0, 0), p=(0.5, 0.1), q=(0.5, 0.1)))


# ---------------------------------------------------------------------------
# certificates


def test_monotone_sandwich_on_valid_certificates():
    rng = np.random.default_rng(127)
    for _ in range(20):
        p, q, _ = sample_generic_pair(rng)
        certificate = solve(Problem(z=(0, 0), p=p, q=q))
        assert certificate.status == VALID
        g0 = abs(certificate.eval_left_inverse(0j, 0j))
        assert math.log(g0) <= certificate.value_log + 1e-10
        a1, a2 = certificate.arguments
        assert abs(a1 * a2) >= math.exp(certificate.value_log) - 1e-10


def test_verify_certificate_reeval():
    certificate = solve(U_PROBLEM)
    checks = verify_certificate(certificate)
    assert checks["disc_origin"] == 0.0
    assert checks["disc_hits_p"] < 1e-12
    assert checks["disc_hits_q"] < 1e-12
    assert checks["vanish_p"] < 1e-12
    assert checks["vanish_q"] < 1e-12
    assert checks["value_consistency"] < 1e-12
    assert checks["disc_inside"] < 1.0
    assert checks["left_inverse_bound"] < 1.0
    assert checks["geodesic_composition"] < 1e-12


def test_certificate_to_dict_schema():
    payload = solve(U_PROBLEM).to_dict()
    expected = {
        "base_point", "normalized_pair", "region", "status", "value_log",
        "value_modulus", "arguments", "disc", "left_inverse",
        "sigma_conjugated", "residuals", "seed", "starts_used",
        "iterations", "fallback",
    }
    assert set(payload) == expected
    assert payload["disc"]["kind"] == "two_geodesic"
    assert payload["left_inverse"]["kind"] == "coordinate_blaschke"
    assert payload["fallback"] is None


def test_value_modulus_matches_log():
    certificate = solve(U_PROBLEM)
    assert certificate.value_modulus == pytest.approx(0.25, abs=1e-15)
