"""Disc automorphisms, the pseudo-hyperbolic distance, and Blaschke products.

Conventions used throughout the package:

* ``mobius_map(a, z) = (a - z) / (1 - conj(a) z)`` is the involutive disc
  automorphism exchanging ``0`` and ``a``; applying it twice is the identity.
* ``mobius_dist(x, y) = |x - y| / |1 - conj(x) y|`` is the pseudo-hyperbolic
  (Mobius) distance on the unit disc, i.e. ``abs(mobius_map(x, y))``.
* A Blaschke product is ``rotation * prod_i mobius_map(zero_i, z)``.  With no
  zeros it degenerates to the constant ``rotation``; with zeros ``[0]`` and
  rotation ``1`` it is ``z -> -z``.

The evaluation helpers are written so that plain ``complex`` scalars stay in
fast scalar arithmetic while numpy arrays broadcast elementwise; anything with
``.conjugate()`` and arithmetic works.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidPoint

# Strict-interior tolerance for disc membership: |z| < 1 - DISC_BOUNDARY_TOL.
DISC_BOUNDARY_TOL = 1e-15

# Allowed deviation of |w| from 1 for unimodular scalars.
UNIMODULAR_TOL = 1e-12


def check_disc_point(value, name: str = "point") -> complex:
    """Validate that a scalar lies strictly inside the unit disc.

    Returns the value as ``complex``.  Raises :class:`InvalidPoint` otherwise
    (also on NaN, which fails every comparison).
    """
    value = complex(value)
    if not abs(value) < 1.0 - DISC_BOUNDARY_TOL:
        raise InvalidPoint(f"{name} must lie strictly inside the unit disc, got {value!r}")
    return value


def check_bidisc_point(value, name: str = "point") -> tuple[complex, complex]:
    """Validate a pair of coordinates as a point of the open bidisc."""
    try:
        first, second = value
    except (TypeError, ValueError):
        raise InvalidPoint(f"{name} must be a pair of complex coordinates, got {value!r}") from None
    return (check_disc_point(first, f"{name}[0]"), check_disc_point(second, f"{name}[1]"))


def check_unimodular(value, name: str = "scalar") -> complex:
    """Validate that a scalar has modulus 1 within ``UNIMODULAR_TOL``."""
    value = complex(value)
    if not abs(abs(value) - 1.0) <= UNIMODULAR_TOL:
        raise InvalidPoint(f"{name} must be unimodular, got {value!r} with modulus {abs(value)!r}")
    return value


def mobius_map(a, z):
    """Evaluate the involution ``m_a`` at ``z``.

    ``m_a(0) = a``, ``m_a(a) = 0``, and ``m_a(m_a(z)) = z``.  Broadcasts over
    numpy arrays in either argument.
    """
    return (a - z) / (1.0 - a.conjugate() * z)


def mobius_dist(x, y):
    """Pseudo-hyperbolic distance ``|m_x(y)|`` between two disc points."""
    return abs((x - y) / (1.0 - x.conjugate() * y))


def automorphism_normalize(base, point):
    """Move ``base`` to the origin coordinatewise and push ``point`` along.

    Applies the involution ``m_{b_i}`` in each coordinate, so the map is its
    own inverse: to pull normalized coordinates back to the original frame,
    apply it again with the same base.  At base ``(0, 0)`` it is the antipodal
    rotation ``x -> (-x1, -x2)`` (since ``m_0(z) = -z``), which fixes every
    quantity the solver reports: region labels, distances, and values are
    invariant under coordinatewise rotations.
    """
    b1, b2 = complex(base[0]), complex(base[1])
    return (mobius_map(b1, point[0]), mobius_map(b2, point[1]))


@dataclass(frozen=True)
class BlaschkeProduct:
    """Finite Blaschke product ``rotation * prod_i m_{zeros[i]}``.

    Inner on the closed disc: modulus 1 on the unit circle, and vanishing
    exactly at the listed zeros (with multiplicity).
    """

    zeros: tuple
    rotation: complex = 1.0 + 0.0j

    def __post_init__(self):
        zeros = tuple(check_disc_point(z, "zero") for z in self.zeros)
        object.__setattr__(self, "zeros", zeros)
        object.__setattr__(self, "rotation", check_unimodular(self.rotation, "rotation"))

    @property
    def degree(self) -> int:
        return len(self.zeros)

    def __call__(self, z):
        value = self.rotation * (1.0 + 0.0 * z)  # keeps array shape for array input
        for zero in self.zeros:
            value = value * mobius_map(zero, z)
        return value


def blaschke_eval(zeros, rotation, z):
    """Functional form of :class:`BlaschkeProduct` evaluation (no validation)."""
    value = rotation * (1.0 + 0.0 * z)
    for zero in zeros:
        value = value * mobius_map(zero, z)
    return value
