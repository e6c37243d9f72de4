"""Built-in invariant checks behind ``bidisc selftest``.

Each suite draws its own generator from the run seed, asserts a mathematical
invariant on random data, and reports its worst observed drift.  ``quick``
mode shrinks the sample counts to finish within a few seconds.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import regions
from .extremal import (
    automorphism_quotient,
    big_phi,
    canonical_sign,
    critical_tau,
    fiber_distance,
    gamma,
    rational_inner_eval,
    mobius_map,
    omega2_value,
    phi,
)
from .mobius import automorphism_normalize, mobius_dist
from .oracle import OracleBudget, sandwich
from .pick1d import PickDatum, pick_interpolant
from .sampling import random_disc_point, random_pair, sample_extremal_params
from .solver import DEFAULT_SEED, VALID, Problem, SolverConfig, omega2_solve, solve


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    seconds: float
    detail: str = ""


def _suite_mobius(rng, quick):
    n = 500 if quick else 5000
    worst = 0.0
    for _ in range(n):
        a = random_disc_point(rng, 0.999)
        z = random_disc_point(rng, 0.999)
        worst = max(worst, abs(mobius_map(a, mobius_map(a, z)) - z))
        base = (random_disc_point(rng, 0.95), random_disc_point(rng, 0.95))
        x = (random_disc_point(rng, 0.95), random_disc_point(rng, 0.95))
        y = (random_disc_point(rng, 0.95), random_disc_point(rng, 0.95))
        nx = automorphism_normalize(base, x)
        ny = automorphism_normalize(base, y)
        for k in range(2):
            worst = max(worst, abs(mobius_dist(nx[k], ny[k]) - mobius_dist(x[k], y[k])))
    if worst > 1e-10:
        raise AssertionError(f"involution/isometry drift {worst:.3e}")
    return f"worst drift {worst:.3e} over {n} draws"


def _suite_pick(rng, quick):
    n = 200 if quick else 2000
    worst = 0.0
    for _ in range(n):
        node1 = random_disc_point(rng, 0.9)
        node2 = random_disc_point(rng, 0.9)
        if abs(node1 - node2) < 1e-3:
            continue
        anchor = random_disc_point(rng, 0.9)
        eta = random_disc_point(rng, 1.0)
        reference = lambda lam: mobius_map(anchor, eta * mobius_map(node1, lam))
        data = PickDatum(node1, node2, reference(node1), reference(node2))
        psi = pick_interpolant(data)
        worst = max(
            worst,
            abs(psi(node1) - data.target1),
            abs(psi(node2) - data.target2),
        )
    if worst > 1e-12:
        raise AssertionError(f"interpolation residual {worst:.3e}")
    return f"worst residual {worst:.3e} over {n} problems"


def _suite_regions(rng, quick):
    n = 20_000 if quick else 100_000
    eps = 1e-6
    generic = 0
    for i in range(n):
        p, q = random_pair(rng, 0.999)
        label = regions.classify(p, q, eps)
        if label in regions.GENERIC_LABELS:
            generic += 1
        if i % 50 == 0:
            swapped = regions.classify(*regions.sigma(p, q), eps)
            expected = regions.SIGMA_PERMUTATION.get(label, label)
            if label in regions.GENERIC_LABELS and swapped != expected:
                raise AssertionError(f"sigma equivariance broken: {label} -> {swapped}")
    density = generic / n
    if density < 0.99:
        raise AssertionError(f"generic density {density:.4f} below 0.99")
    return f"generic density {density:.4f} on {n} pairs"


def _suite_extremal(rng, quick):
    n = 1000 if quick else 10_000
    worst = 0.0
    for _ in range(n):
        alpha = random_disc_point(rng, 0.98)
        beta = random_disc_point(rng, 0.98)
        if abs(alpha - beta) < 1e-3:
            continue
        omega = complex(np.exp(1j * rng.uniform(0.0, 2.0 * np.pi)))
        t = float(rng.uniform(0.02, 0.98))
        tau = critical_tau(alpha, beta)
        lam = random_disc_point(rng, 0.98)
        x1, x2 = phi(alpha, beta, omega, lam)
        lhs = rational_inner_eval(t, omega, tau, x1, x2)
        rhs = lam * mobius_map(gamma(alpha, beta, t), lam)
        worst = max(worst, abs(lhs - rhs))
    if worst > 1e-12:
        raise AssertionError(f"left-inverse identity drift {worst:.3e}")
    return f"worst identity error {worst:.3e} over {n} tuples"


def _suite_criterion(rng, quick):
    n = 50 if quick else 200
    worst_critical = 0.0
    for _ in range(n):
        alpha = random_disc_point(rng, 0.9)
        beta = random_disc_point(rng, 0.9)
        if abs(alpha - beta) < 0.05:
            continue
        t = float(rng.uniform(0.1, 0.9))
        tau_star = critical_tau(alpha, beta)
        worst_critical = max(worst_critical, abs(automorphism_quotient(alpha, beta, t, tau_star) - 1.0))
        angle = rng.uniform(0.05, 2.0 * np.pi - 0.05)
        tau = tau_star * complex(np.exp(1j * angle))
        if automorphism_quotient(alpha, beta, t, tau) >= 1.0 - 1e-12:
            raise AssertionError("non-critical twist reached quotient 1")
    if worst_critical > 1e-10:
        raise AssertionError(f"critical quotient misses 1 by {worst_critical:.3e}")
    return f"critical quotient within {worst_critical:.3e} over {n} draws"


def _suite_roundtrip(rng, quick):
    n = 3 if quick else 20
    config = SolverConfig()
    worst_param = 0.0
    worst_value = 0.0
    for i in range(n):
        region = regions.E1 if i % 2 == 0 else regions.E2
        params, (p, q), _ = sample_extremal_params(rng, region=region)
        certificate = omega2_solve((p, q), config)
        if certificate.status != VALID:
            raise AssertionError(f"roundtrip produced status {certificate.status}")
        if certificate.residuals.max() > 1e-10:
            raise AssertionError(f"roundtrip residual {certificate.residuals.max():.3e}")
        worst_value = max(worst_value, abs(certificate.value_log - omega2_value(params)))
        worst_param = max(worst_param, fiber_distance(certificate.disc.params, params))
    if worst_value > 1e-10:
        raise AssertionError(f"roundtrip value drift {worst_value:.3e}")
    if worst_param > 1e-8:
        raise AssertionError(f"roundtrip parameter drift {worst_param:.3e}")
    return f"value drift {worst_value:.3e}, parameter drift {worst_param:.3e} over {n} solves"


def _suite_sandwich(rng, quick):
    n = 2 if quick else 5
    config = SolverConfig()
    worst = 0.0
    for i in range(n):
        if i == 0:
            p, q = random_pair(rng, 0.9)
            while regions.classify(p, q) not in regions.OMEGA1_LABELS:
                p, q = random_pair(rng, 0.9)
        else:
            _, (p, q), _ = sample_extremal_params(rng)
        certificate = solve(Problem(z=(0j, 0j), p=p, q=q), config)
        result = sandwich(p, q, OracleBudget(seed=config.seed))
        if not result.contains(certificate.value_log):
            raise AssertionError(
                f"value {certificate.value_log!r} outside [{result.lower.value!r}, {result.upper.value!r}]"
            )
        worst = max(worst, result.width)
    if worst > 1e-6:
        raise AssertionError(f"sandwich width {worst:.3e} above 1e-6")
    return f"worst width {worst:.3e} over {n} problems"


_SUITES = (
    ("mobius_involution", _suite_mobius),
    ("pick_interpolation", _suite_pick),
    ("region_partition", _suite_regions),
    ("extremal_identity", _suite_extremal),
    ("automorphism_criterion", _suite_criterion),
    ("solver_roundtrip", _suite_roundtrip),
    ("oracle_sandwich", _suite_sandwich),
)


def run_selftest(quick: bool = False, seed: int = DEFAULT_SEED) -> list:
    results = []
    for index, (name, suite) in enumerate(_SUITES):
        rng = np.random.default_rng([seed, index])
        started = time.perf_counter()
        try:
            detail = suite(rng, quick) or ""
            passed = True
        except Exception as exc:  # a failing suite must not silence the others
            detail = f"{type(exc).__name__}: {exc}"
            passed = False
        results.append(SuiteResult(name=name, passed=passed, seconds=time.perf_counter() - started, detail=detail))
    return results
