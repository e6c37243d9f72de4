"""Three-point extremal discs on the bidisc and their rational inner left
inverses.

The construction revolves around three formulas.  For parameters ``alpha``,
``beta`` in the disc, a unimodular twist ``omega`` and a weight ``t`` in
``(0, 1)``:

* the analytic disc ``phi(z) = (omega z m_alpha(z), z m_beta(z))`` maps the
  disc into the bidisc, through the origin;
* the degree-(1,1) rational map

      F(x1, x2) = (t conj(omega) x1 + (1-t) x2 + tau conj(omega) x1 x2)
                  / (1 + tau ((1-t) conj(omega) x1 + t x2))

  is inner on the bidisc for every unimodular ``tau``;
* with ``gamma = t alpha + (1-t) beta`` and the critical twist
  ``tau = conj(alpha - beta) / (alpha - beta)``, the composition collapses to
  a degree-2 Blaschke product:  ``F(phi(z)) = z m_gamma(z)``.

The quotient ``|f'(0)| / (1 - |f(0)|^2)`` of ``f(z) = F(phi(z)) / z`` equals 1
exactly at the critical ``tau`` and is strictly smaller otherwise, which is
what makes the critical twist canonical.  ``big_phi`` packages the two-point
evaluation ``(phi(c), phi(m_gamma(c)))`` whose value ``log|c m_gamma(c)|`` the
solver certifies, and a shifted ``F`` is the corresponding left inverse.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateData, DiagonalOutput, InvalidPoint
from .mobius import check_disc_point, check_unimodular, mobius_map

# Parameters closer than this are treated as coinciding (degenerate twist).
PARAMETER_COLLISION_TOL = 1e-15


@dataclass(frozen=True)
class ExtremalParams:
    """Parameters (alpha, beta, c, omega, t) of a three-point extremal disc."""

    alpha: complex
    beta: complex
    c: complex
    omega: complex
    t: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", check_disc_point(self.alpha, "alpha"))
        object.__setattr__(self, "beta", check_disc_point(self.beta, "beta"))
        object.__setattr__(self, "c", check_disc_point(self.c, "c"))
        object.__setattr__(self, "omega", check_unimodular(self.omega, "omega"))
        t = float(self.t)
        if not 0.0 < t < 1.0:
            raise InvalidPoint(f"t must lie strictly between 0 and 1, got {t!r}")
        object.__setattr__(self, "t", t)
        if abs(self.c) < PARAMETER_COLLISION_TOL:
            raise DegenerateData("c must be nonzero")

    @property
    def gamma(self) -> complex:
        return gamma(self.alpha, self.beta, self.t)


def gamma(alpha, beta, t):
    """Weighted midpoint ``t alpha + (1-t) beta`` (the induced disc zero)."""
    return t * alpha + (1.0 - t) * beta


def critical_tau(alpha, beta):
    """The unique unimodular twist making the left inverse exact.

    ``conj(alpha - beta) / (alpha - beta)``; degenerate when alpha == beta.
    """
    diff = alpha - beta
    if abs(diff) < PARAMETER_COLLISION_TOL:
        raise DegenerateData("critical twist undefined for alpha == beta")
    return diff.conjugate() / diff


def phi(alpha, beta, omega, z):
    """Evaluate the extremal disc ``z -> (omega z m_alpha(z), z m_beta(z))``.

    Broadcasts over arrays of ``z`` (or of the parameters).
    """
    return omega * z * mobius_map(alpha, z), z * mobius_map(beta, z)


def rational_inner_eval(t, omega, tau, x1, x2):
    """The rational inner function ``F`` at a bidisc point ``(x1, x2)``.

    Inner for every unimodular ``tau``; equals the composition-collapsing left
    inverse when ``tau`` is critical for the disc parameters.
    """
    wbar = omega.conjugate()
    num = t * wbar * x1 + (1.0 - t) * x2 + tau * wbar * x1 * x2
    den = 1.0 + tau * ((1.0 - t) * wbar * x1 + t * x2)
    return num / den


def automorphism_quotient(alpha, beta, t, tau, method: str = "analytic", h: float = 1e-6):
    """``|f'(0)| / (1 - |f(0)|^2)`` for ``f(z) = F(phi(z)) / z``.

    Equals 1 exactly iff ``tau`` is the critical twist (then ``f = m_gamma``),
    and is strictly below 1 otherwise.  The analytic route uses

        f'(0) = t(|alpha|^2 - 1) + (1-t)(|beta|^2 - 1)
                - tau t (1-t) (alpha - beta)^2

    which is independent of omega; ``method="fd"`` cross-checks with a central
    difference of the composition (tolerance about 1e-6 at the default step).
    """
    ga = gamma(alpha, beta, t)
    if method == "analytic":
        deriv = (
            t * (abs(alpha) ** 2 - 1.0)
            + (1.0 - t) * (abs(beta) ** 2 - 1.0)
            - tau * t * (1.0 - t) * (alpha - beta) ** 2
        )
    elif method == "fd":
        def f(z):
            x1, x2 = phi(alpha, beta, 1.0, z)
            return rational_inner_eval(t, 1.0 + 0.0j, tau, x1, x2) / z

        deriv = (f(h) - f(-h)) / (2.0 * h)
    else:
        raise ValueError(f"unknown method {method!r}")
    return abs(deriv) / (1.0 - abs(ga) ** 2)


def big_phi(params: ExtremalParams):
    """The two poles ``(phi(c), phi(m_gamma(c)))`` cut out by the parameters.

    Raises :class:`DiagonalOutput` when ``c`` is a fixed point of
    ``m_gamma`` (the two arguments, hence the two poles, coincide).
    """
    ga = params.gamma
    d = mobius_map(ga, params.c)
    if abs(d - params.c) < PARAMETER_COLLISION_TOL:
        raise DiagonalOutput("c is a fixed point of m_gamma; the two poles coincide")
    p = phi(params.alpha, params.beta, params.omega, params.c)
    q = phi(params.alpha, params.beta, params.omega, d)
    return p, q


def omega2_value(params: ExtremalParams) -> float:
    """Certified value ``log |c * m_gamma(c)|`` of the three-point datum."""
    modulus = abs(params.c) * abs(mobius_map(params.gamma, params.c))
    if modulus == 0.0:
        return float("-inf")
    return math.log(modulus)


def canonical_sign(params: ExtremalParams) -> ExtremalParams:
    """Pick the representative of the two-element fiber {(a,b,c), (-a,-b,-c)}.

    Convention: ``Re(alpha) > 0``, ties broken by ``Im(alpha) > 0``.  ``omega``
    and ``t`` are fiber invariants and pass through unchanged.
    """
    a = params.alpha
    flip = a.real < 0.0 or (a.real == 0.0 and a.imag < 0.0)
    if not flip:
        return params
    return ExtremalParams(
        alpha=-params.alpha, beta=-params.beta, c=-params.c, omega=params.omega, t=params.t
    )


@dataclass(frozen=True)
class LeftInverse:
    """Certified left inverse ``G = m_shift o F`` of an extremal disc.

    ``G`` maps the bidisc to the disc, vanishes at both poles, and satisfies
    ``log |G(0, 0)| = log |shift|``, the certified value.
    """

    t: float
    omega: complex
    tau: complex
    shift: complex

    def __call__(self, x1, x2):
        return mobius_map(self.shift, rational_inner_eval(self.t, self.omega, self.tau, x1, x2))


def left_inverse_eval(inverse: LeftInverse, x) -> complex:
    """Evaluate a certified left inverse at a bidisc point ``x = (x1, x2)``."""
    return complex(inverse(x[0], x[1]))


def shifted_left_inverse(params: ExtremalParams, at) -> LeftInverse:
    """Build the left inverse for ``params``, shifted to vanish at ``at``.

    ``at`` is the first pole; since ``F`` takes the same value at both poles,
    shifting by ``F(at)`` makes ``G`` vanish at both.
    """
    tau = critical_tau(params.alpha, params.beta)
    shift = rational_inner_eval(params.t, params.omega, tau, at[0], at[1])
    return LeftInverse(t=params.t, omega=params.omega, tau=tau, shift=complex(shift))


def geodesic_parameters(params: ExtremalParams):
    """Disc arguments ``(c, m_gamma(c))`` hit by the two poles."""
    return params.c, mobius_map(params.gamma, params.c)


def fiber_distance(a: ExtremalParams, b: ExtremalParams) -> float:
    """Max parameter distance after canonical sign normalization."""
    a = canonical_sign(a)
    b = canonical_sign(b)
    return max(
        abs(a.alpha - b.alpha),
        abs(a.beta - b.beta),
        abs(a.c - b.c),
        abs(a.omega - b.omega),
        abs(a.t - b.t),
    )


def diagonal_fixed_point(ga: complex) -> complex:
    """The in-disc fixed point of ``m_gamma`` (where big_phi degenerates)."""
    if abs(ga) < PARAMETER_COLLISION_TOL:
        return 0.0 + 0.0j
    return (1.0 - math.sqrt(1.0 - abs(ga) ** 2)) / ga.conjugate()
