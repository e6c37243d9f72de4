"""Region taxonomy for a normalized two-pole configuration on the bidisc.

The solver normalizes the base point to the origin, leaving a pair of poles
``p = (p1, p2)``, ``q = (q1, q2)`` in the bidisc.  Writing ``m`` for the
pseudo-hyperbolic distance, the relevant sets are::

    U   : |p2| < |p1|, |q2| < |q1|, m(p2/p1, q2/q1) < m(p1, q1)
    F1  : |p2| > |p1|, |q2| < |q1|
    F2  : |p2| < |p1|, |q2| < |q1|, m(p2/p1, q2/q1) > m(p1, q1)
    F3  : sigma(F1),  F4 : sigma(F2)        (sigma swaps the two coordinates)
    A   : p1 = q1 or p2 = q2                (thin diagonal-alignment set)
    E_j : F_j minus A

``U`` and its sigma-image carry the closed-form value ``log|p1 q1|`` through a
2-point geodesic; the ``E_j`` carry genuinely 3-point extremal discs.  The
classifier is a decision tree with strict margins: every inequality must hold
with slack greater than ``eps``, and pairs that clear nothing are labeled
``BOUNDARY_BAND`` (handled upstream by perturbation).  Membership in the thin
set ``A`` is tested before the generic labels because the ``E_j`` exclude it;
exact pole coincidence and pole-at-origin are detected first with fixed 1e-15
tolerances.
"""

from __future__ import annotations

from .errors import InvalidPoint
from .mobius import check_bidisc_point, mobius_dist

DEFAULT_EPS = 1e-9

# Fixed tolerance for exact-degeneracy detection (independent of eps).
COINCIDENCE_TOL = 1e-15

U = "U"
SIGMA_U = "SIGMA_U"
E1 = "E1"
E2 = "E2"
E3 = "E3"
E4 = "E4"
THIN_A = "THIN_A"
DIAGONAL = "DIAGONAL"
POLE_AT_BASE = "POLE_AT_BASE"
BOUNDARY_BAND = "BOUNDARY_BAND"

OMEGA1_LABELS = frozenset({U, SIGMA_U})
OMEGA2_LABELS = frozenset({E1, E2, E3, E4})
GENERIC_LABELS = OMEGA1_LABELS | OMEGA2_LABELS
ALL_LABELS = GENERIC_LABELS | {THIN_A, DIAGONAL, POLE_AT_BASE, BOUNDARY_BAND}

# How a label transforms under sigma (coordinate swap on both poles) and under
# swapping the two poles.  Degenerate labels are invariant under both.
SIGMA_PERMUTATION = {U: SIGMA_U, SIGMA_U: U, E1: E3, E3: E1, E2: E4, E4: E2}
POLE_SWAP_PERMUTATION = {U: U, SIGMA_U: SIGMA_U, E1: E3, E3: E1, E2: E2, E4: E4}


def sigma_point(x):
    """Swap the two coordinates of a bidisc point."""
    return (x[1], x[0])


def sigma(p, q):
    """Apply the coordinate swap to both poles: ((p2,p1), (q2,q1))."""
    return sigma_point(p), sigma_point(q)


def _u_slack(p, q):
    """Smallest slack among the three inequalities defining U."""
    p1, p2 = p
    q1, q2 = q
    slack = min(abs(p1) - abs(p2), abs(q1) - abs(q2))
    if slack <= 0.0:
        return slack  # ratios may not exist; U is already excluded
    return min(slack, mobius_dist(p1, q1) - mobius_dist(p2 / p1, q2 / q1))


def _f1_slack(p, q):
    p1, p2 = p
    q1, q2 = q
    return min(abs(p2) - abs(p1), abs(q1) - abs(q2))


def _f2_slack(p, q):
    p1, p2 = p
    q1, q2 = q
    slack = min(abs(p1) - abs(p2), abs(q1) - abs(q2))
    if slack <= 0.0:
        return slack
    return min(slack, mobius_dist(p2 / p1, q2 / q1) - mobius_dist(p1, q1))


def _thin_clearance(p, q):
    return min(abs(p[0] - q[0]), abs(p[1] - q[1]))


def classify_with_margin(p, q, eps: float = DEFAULT_EPS):
    """Classify a normalized pole pair; return ``(label, margin)``.

    The margin is the smallest slack among the label's defining inequalities
    (a distance-to-boundary proxy).  For the degenerate labels it is the
    quantity that is small: the thin clearance for ``THIN_A``, the coordinate
    gap for ``DIAGONAL``, the pole modulus for ``POLE_AT_BASE``, and the best
    candidate slack for ``BOUNDARY_BAND`` (at most ``eps`` by definition).
    """
    p = check_bidisc_point(p, "p")
    q = check_bidisc_point(q, "q")
    if not eps > 0.0:
        raise InvalidPoint(f"eps must be positive, got {eps!r}")

    if abs(p[0] - q[0]) <= COINCIDENCE_TOL and abs(p[1] - q[1]) <= COINCIDENCE_TOL:
        return DIAGONAL, max(abs(p[0] - q[0]), abs(p[1] - q[1]))
    pole_size = min(max(abs(p[0]), abs(p[1])), max(abs(q[0]), abs(q[1])))
    if pole_size <= COINCIDENCE_TOL:
        return POLE_AT_BASE, pole_size

    thin = _thin_clearance(p, q)
    if thin < eps:
        return THIN_A, thin

    sp, sq = sigma(p, q)
    candidates = (
        (U, _u_slack(p, q)),
        (SIGMA_U, _u_slack(sp, sq)),
        (E1, min(_f1_slack(p, q), thin)),
        (E2, min(_f2_slack(p, q), thin)),
        (E3, min(_f1_slack(sp, sq), thin)),
        (E4, min(_f2_slack(sp, sq), thin)),
    )
    for label, slack in candidates:
        if slack > eps:
            return label, slack
    return BOUNDARY_BAND, max(slack for _, slack in candidates)


def classify(p, q, eps: float = DEFAULT_EPS) -> str:
    """Region label for a normalized pole pair.

    If nothing clears the margin on ``(p, q)``, the pair is retried with the
    poles swapped (the value is symmetric in the poles) and a generic label is
    mapped back through the pole-swap permutation; in the current taxonomy the
    retry is a mathematical no-op and exists as a robustness guard.
    """
    label, _ = classify_with_margin(p, q, eps)
    if label == BOUNDARY_BAND:
        swapped, _ = classify_with_margin(q, p, eps)
        if swapped in POLE_SWAP_PERMUTATION:
            return POLE_SWAP_PERMUTATION[swapped]
    return label
