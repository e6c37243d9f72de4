"""Rejection samplers shared by the test suite, the selftest, and the demos."""

from __future__ import annotations

import numpy as np

from . import regions
from .errors import DiagonalOutput
from .extremal import ExtremalParams, big_phi, mobius_map


def random_disc_point(rng: np.random.Generator, radius: float = 1.0, min_radius: float = 0.0) -> complex:
    """Uniform (area) draw from the annulus ``min_radius <= |z| <= radius``."""
    low = (min_radius / radius) ** 2 if radius > 0 else 0.0
    r = radius * np.sqrt(rng.uniform(low, 1.0))
    angle = rng.uniform(0.0, 2.0 * np.pi)
    return complex(r * np.cos(angle), r * np.sin(angle))


def random_bidisc_point(rng: np.random.Generator, radius: float = 0.95) -> tuple:
    return (random_disc_point(rng, radius), random_disc_point(rng, radius))


def random_pair(rng: np.random.Generator, radius: float = 0.95) -> tuple:
    return (random_bidisc_point(rng, radius), random_bidisc_point(rng, radius))


def sample_pair_with_label(
    rng: np.random.Generator,
    labels,
    eps: float = regions.DEFAULT_EPS,
    margin: float = 1e-3,
    radius: float = 0.95,
    max_tries: int = 200_000,
):
    """Draw pairs until one classifies into ``labels`` with at least ``margin``.

    Returns ``(p, q, label)``.
    """
    wanted = {labels} if isinstance(labels, str) else set(labels)
    for _ in range(max_tries):
        p, q = random_pair(rng, radius)
        label, got = regions.classify_with_margin(p, q, eps)
        if label in wanted and got >= margin:
            return p, q, label
    raise RuntimeError(f"no pair with label in {sorted(wanted)} after {max_tries} tries")


def sample_generic_pair(rng: np.random.Generator, margin: float = 1e-3):
    """A pair that is solvable without fallback (any generic region)."""
    return sample_pair_with_label(rng, regions.GENERIC_LABELS, margin=margin)


def sample_extremal_params(
    rng: np.random.Generator,
    region: str | None = None,
    margin: float = 1e-3,
    max_tries: int = 200_000,
):
    """Draw disc parameters whose forward image is a well-separated problem.

    The floors (moduli at most 0.9, parameter separation at least 0.05,
    ``t`` in [0.1, 0.9], clearance from the diagonal fixed point) keep the
    forward map well-conditioned so a roundtrip through the solver is a fair
    test of the solver, not of the conditioning of an extreme instance.
    Returns ``(params, (p, q), label)``.
    """
    for _ in range(max_tries):
        alpha = random_disc_point(rng, 0.9)
        beta = random_disc_point(rng, 0.9)
        if abs(alpha - beta) < 0.05:
            continue
        c = random_disc_point(rng, 0.9, min_radius=0.15)
        omega = complex(np.exp(1j * rng.uniform(0.0, 2.0 * np.pi)))
        t = float(rng.uniform(0.1, 0.9))
        params = ExtremalParams(alpha=alpha, beta=beta, c=c, omega=omega, t=t)
        other = complex(mobius_map(params.gamma, c))
        if abs(other) < 0.05 or abs(other - c) < 0.05:
            continue
        try:
            p, q = big_phi(params)
        except DiagonalOutput:
            continue
        label, got = regions.classify_with_margin(p, q)
        if got < margin:
            continue
        if region is not None and label != region:
            continue
        if region is None and label not in regions.GENERIC_LABELS:
            continue
        return params, (p, q), label
    raise RuntimeError(f"no extremal parameters for region {region!r} after {max_tries} tries")
