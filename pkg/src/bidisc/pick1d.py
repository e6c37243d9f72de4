"""Two-point Nevanlinna-Pick interpolation on the unit disc.

Data: two distinct nodes ``n1, n2`` in the disc and two targets ``t1, t2`` in
the disc.  The problem asks for a holomorphic ``psi: D -> D`` with
``psi(n_j) = t_j``.  It is solvable iff the targets are no further apart than
the nodes in the pseudo-hyperbolic metric, and in that case a canonical
solution is the Schur function

    psi = m_{t1} ( eta * m_{n1}(lambda) ),    eta = m_{t1}(t2) / m_{n1}(n2).

``|eta| <= 1`` exactly encodes solvability; ``|eta| = 1`` is the extremal case
where psi is a disc automorphism (degree-1 Blaschke product), and ``eta = 0``
(coinciding targets) gives the constant interpolant.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DegenerateData, NotSolvable
from .mobius import UNIMODULAR_TOL, check_disc_point, mobius_dist, mobius_map

# Slack added to the solvability comparison so that numerically extremal data
# (equality within roundoff) still counts as solvable.
SOLVABILITY_SLACK = 1e-14

# Nodes closer than this are treated as a single node (ill-posed data).
NODE_COLLISION_TOL = 1e-15


@dataclass(frozen=True)
class PickDatum:
    """Two interpolation nodes and their targets, all inside the disc."""

    node1: complex
    node2: complex
    target1: complex
    target2: complex

    def __post_init__(self):
        object.__setattr__(self, "node1", check_disc_point(self.node1, "node1"))
        object.__setattr__(self, "node2", check_disc_point(self.node2, "node2"))
        object.__setattr__(self, "target1", check_disc_point(self.target1, "target1"))
        object.__setattr__(self, "target2", check_disc_point(self.target2, "target2"))
        if abs(self.node1 - self.node2) < NODE_COLLISION_TOL:
            raise DegenerateData(f"interpolation nodes coincide: {(self.node1, self.node2)!r}")


@dataclass(frozen=True)
class PickInterpolant:
    """Canonical interpolant ``lambda -> m_anchor(eta * m_node(lambda))``.

    ``node`` is the first interpolation node, ``anchor`` the first target.
    """

    node: complex
    anchor: complex
    eta: complex

    def __call__(self, lam):
        return mobius_map(self.anchor, self.eta * mobius_map(self.node, lam))

    @property
    def is_automorphism(self) -> bool:
        """True in the extremal case: psi is a degree-1 Blaschke product."""
        return abs(abs(self.eta) - 1.0) <= UNIMODULAR_TOL

    @property
    def is_constant(self) -> bool:
        return self.eta == 0


def pick_solvable(datum: PickDatum) -> bool:
    """Whether the two-point problem admits a holomorphic solution."""
    target_gap = mobius_dist(datum.target1, datum.target2)
    node_gap = mobius_dist(datum.node1, datum.node2)
    return target_gap <= node_gap + SOLVABILITY_SLACK


def pick_interpolant(datum: PickDatum) -> PickInterpolant:
    """Canonical solution of a solvable two-point problem.

    Raises :class:`NotSolvable` when the targets are strictly further apart
    than the nodes.
    """
    n1, n2 = datum.node1, datum.node2
    t1, t2 = datum.target1, datum.target2
    if not pick_solvable(datum):
        raise NotSolvable(
            f"targets separate by {mobius_dist(t1, t2)!r} but nodes only by {mobius_dist(n1, n2)!r}"
        )
    if t1 == t2:
        eta = 0.0 + 0.0j
    else:
        eta = mobius_map(t1, t2) / mobius_map(n1, n2)
        scale = abs(eta)
        if scale > 1.0:  # numerically extremal data: snap onto the unit circle
            eta = eta / scale
    return PickInterpolant(node=n1, anchor=t1, eta=eta)
