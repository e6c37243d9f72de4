"""Certified two-pole extremal values on the bidisc.

The solver produces a :class:`~bidisc.solver.Certificate` holding the optimal
value together with its two witnesses -- an analytic disc through the base
point and the poles, and a rational inner function vanishing at the poles --
whose agreement pins the value from both sides.  :mod:`bidisc.oracle`
re-derives two-sided bounds by independent searches for cross-checking.
"""

from .errors import (
    BidiscError,
    DegenerateData,
    DiagonalOutput,
    DiagonalPoles,
    InvalidPoint,
    NoCandidate,
    NoConvergence,
    NoFeasibleDisc,
    NotSolvable,
    PoleAtBase,
)
from .extremal import (
    ExtremalParams,
    LeftInverse,
    automorphism_quotient,
    big_phi,
    canonical_sign,
    critical_tau,
    fiber_distance,
    gamma,
    left_inverse_eval,
    omega2_value,
    phi,
    rational_inner_eval,
    shifted_left_inverse,
)
from .mobius import (
    BlaschkeProduct,
    automorphism_normalize,
    blaschke_eval,
    check_bidisc_point,
    check_disc_point,
    mobius_dist,
    mobius_map,
)
from .oracle import (
    LowerWitness,
    OracleBudget,
    Sandwich,
    UpperWitness,
    cara_lower,
    lempert_upper,
    sandwich,
)
from .pick1d import PickDatum, PickInterpolant, pick_interpolant, pick_solvable
from .regions import classify, classify_with_margin, sigma
from .solver import (
    DEFAULT_SEED,
    Certificate,
    InversionMatrices,
    Problem,
    SolverConfig,
    inversion_matrices,
    omega1_solve,
    omega2_solve,
    proposition_refine,
    solve,
    thin_set_fallback,
    verify_certificate,
)

__version__ = "0.1.0"

__all__ = [
    "BidiscError",
    "BlaschkeProduct",
    "Certificate",
    "DEFAULT_SEED",
    "DegenerateData",
    "DiagonalOutput",
    "DiagonalPoles",
    "ExtremalParams",
    "InvalidPoint",
    "InversionMatrices",
    "LeftInverse",
    "LowerWitness",
    "NoCandidate",
    "NoConvergence",
    "NoFeasibleDisc",
    "NotSolvable",
    "OracleBudget",
    "PickDatum",
    "PickInterpolant",
    "PoleAtBase",
    "Problem",
    "Sandwich",
    "SolverConfig",
    "UpperWitness",
    "automorphism_normalize",
    "automorphism_quotient",
    "big_phi",
    "blaschke_eval",
    "canonical_sign",
    "cara_lower",
    "check_bidisc_point",
    "check_disc_point",
    "classify",
    "classify_with_margin",
    "critical_tau",
    "fiber_distance",
    "gamma",
    "inversion_matrices",
    "left_inverse_eval",
    "lempert_upper",
    "mobius_dist",
    "mobius_map",
    "omega1_solve",
    "omega2_solve",
    "omega2_value",
    "phi",
    "pick_interpolant",
    "pick_solvable",
    "proposition_refine",
    "rational_inner_eval",
    "shifted_left_inverse",
    "sigma",
    "solve",
    "thin_set_fallback",
    "verify_certificate",
    "__version__",
]
