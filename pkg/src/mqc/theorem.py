"""Numeric verification that only the constant reporting strategy is leak-free.

A reporting strategy hides the basis bit perfectly iff the two per-basis
report probabilities agree for every state and photon number the sender can
choose.  Restricting to k in {0, 1, 2} and a fixed probe-state set already
pins the strategy down: the resulting linear system on the eight table
entries has, for unequal efficiencies and distinct bases, a one-dimensional
nullspace spanned by the all-ones vector -- the constant strategy.  The two
degenerate parameter loci (equal efficiencies, identical bases) produce
known larger solution families; anything else would be a counterexample and
is reported loudly.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from typing import Iterable, Iterator, Optional, Sequence, Tuple

import numpy as np

from .optics import DetectorPair, det_probs_fixed_k

__all__ = [
    "VARIABLE_ORDER",
    "ConstraintSystem",
    "SolutionClass",
    "build_constraints",
    "solution_space",
    "classify",
    "sweep",
]

logger = logging.getLogger(__name__)

# Column order of the constraint matrix over the strategy entries
# S[c0][c1][beta]: beta-major blocks, (c0, c1) in lexicographic order.
VARIABLE_ORDER = ("S000", "S010", "S100", "S110", "S001", "S011", "S101", "S111")

# Relative singular-value cutoff for rank decisions.
DEFAULT_TOL = 1e-9
# Ratio of largest to smallest retained singular value above which the rank
# decision itself is suspect.
ILL_CONDITION_LIMIT = 1e12
# Inputs closer than this to a degeneracy locus get a near-degenerate flag.
NEAR_DEGENERATE_TOL = 1e-6

# Default probe set: (k, q0, q1) as functions of c = cos2a.  One k = 0 row,
# the four k = 1 single-photon states, and three k = 2 product states (the
# fourth adds no information).
_PROBES = (
    ("k0", 0, None, None),
    ("k1_state00", 1, lambda c: 1.0, lambda c: c),
    ("k1_state10", 1, lambda c: 0.0, lambda c: 1.0 - c),
    ("k1_state01", 1, lambda c: c, lambda c: 1.0),
    ("k1_state11", 1, lambda c: 1.0 - c, lambda c: 0.0),
    ("k2_state00", 2, lambda c: 1.0, lambda c: c),
    ("k2_state01", 2, lambda c: c, lambda c: 1.0),
    ("k2_state10", 2, lambda c: 0.0, lambda c: 1.0 - c),
)


@dataclass(frozen=True)
class ConstraintSystem:
    """Linear system M s = 0 on the eight strategy entries.

    Row r expresses "both bases report equally for probe r"; the default
    probe set gives an 8x8 matrix.  Column order is :data:`VARIABLE_ORDER`.
    """

    matrix: np.ndarray
    eta0: float
    eta1: float
    cos2a: float

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[1] != 8 or m.shape[0] < 8:
            raise ValueError(f"constraint matrix must be (>=8)x8, got {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("constraint matrix has non-finite entries")
        object.__setattr__(self, "matrix", m)


@dataclass(frozen=True)
class SolutionClass:
    """Classified nullspace of a constraint system.

    ``basis_vectors`` holds an orthonormal basis as columns (shape
    (8, nullspace_dim)).
    """

    tag: str  # "trivial" | "equal-efficiency" | "identical-bases" | "other" | "unclassified"
    nullspace_dim: int
    basis_vectors: np.ndarray
    singular_values: np.ndarray
    ill_conditioned: bool = False
    near_degenerate: bool = False

    def __post_init__(self) -> None:
        if self.basis_vectors.shape != (8, self.nullspace_dim):
            raise ValueError("basis_vectors shape must be (8, nullspace_dim)")


def _row(eta0: float, eta1: float, k: int, q0: float, q1: float) -> np.ndarray:
    """Constraint row: +P(c0,c1 | beta=1) on the beta=1 block, -P(.. | beta=0)
    on the beta=0 block, both with zero dark counts."""
    det = DetectorPair.basis_independent(eta0, eta1)
    row = np.zeros(8)
    for beta, q, sign in ((0, q0, -1.0), (1, q1, 1.0)):
        events = det_probs_fixed_k(det, q, beta, k)
        for c0 in range(2):
            for c1 in range(2):
                row[4 * beta + 2 * c0 + c1] = sign * events.prob(c0, c1)
    return row


def build_constraints(eta0: float, eta1: float, cos2a: float,
                      extra_probes: Optional[Iterable[Tuple[int, float, float]]] = None,
                      ) -> ConstraintSystem:
    """Assemble the leak-free constraint system for the given parameters.

    ``extra_probes`` optionally appends rows beyond the default set; each
    entry is (k, q0, q1) with q_beta the probe state's routing probability
    under basis beta.
    """
    if not 0.0 < eta0 < 1.0 or not 0.0 < eta1 < 1.0:
        raise ValueError(f"efficiencies must be in (0, 1), got {eta0}, {eta1}")
    if not 0.0 < cos2a <= 1.0:
        raise ValueError(f"cos2a must be in (0, 1], got {cos2a}")
    rows = []
    for _name, k, f0, f1 in _PROBES:
        if k == 0:
            rows.append(_row(eta0, eta1, 0, 1.0, 1.0))
        else:
            rows.append(_row(eta0, eta1, k, f0(cos2a), f1(cos2a)))
    if extra_probes is not None:
        for k, q0, q1 in extra_probes:
            rows.append(_row(eta0, eta1, k, q0, q1))
    return ConstraintSystem(np.array(rows), float(eta0), float(eta1), float(cos2a))


def solution_space(system: ConstraintSystem, tol: float = DEFAULT_TOL) -> SolutionClass:
    """Numeric nullspace of the constraint matrix via SVD.

    The rank cut uses a threshold relative to the largest singular value;
    systems whose retained spectrum spans more than ILL_CONDITION_LIMIT are
    flagged ill-conditioned because the rank decision itself is then shaky.
    """
    if not tol > 0.0:
        raise ValueError(f"tol must be > 0, got {tol}")
    _u, sing, vt = np.linalg.svd(system.matrix)
    cutoff = tol * (sing[0] if sing.size and sing[0] > 0.0 else 1.0)
    rank = int(np.sum(sing > cutoff))
    basis = vt[rank:].T.copy()
    ill = bool(rank > 0 and sing[0] / sing[rank - 1] > ILL_CONDITION_LIMIT)
    return SolutionClass(
        tag="unclassified",
        nullspace_dim=8 - rank,
        basis_vectors=basis,
        singular_values=sing,
        ill_conditioned=ill,
    )


def _in_span(basis: np.ndarray, vector: np.ndarray, tol: float) -> bool:
    v = vector / np.linalg.norm(vector)
    residual = v - basis @ (basis.T @ v)
    return bool(np.linalg.norm(residual) < tol)


def classify(sol: SolutionClass, eta0: float, eta1: float, cos2a: float,
             span_tol: float = 1e-8) -> SolutionClass:
    """Tag a nullspace with the solution family it belongs to.

    trivial            dim 1, basis aligned with the all-ones vector
                       (constant strategy only)
    identical-bases    cos2a = 1: the two bases coincide; dim 5 with the
                       beta-paired pattern S[c0][c1][0] = S[c0][c1][1] for
                       (c0, c1) != (1, 1) and both S11 entries free
    equal-efficiency   eta0 = eta1: dim 2, spanned by the all-ones vector
                       and the no-click pair S000 = S001
    other              anything else -- a counterexample to uniqueness,
                       reported via logging.error

    Inputs within NEAR_DEGENERATE_TOL of a degeneracy locus (but not on it)
    get flagged ``near_degenerate``: the classification is discontinuous
    there and float rank decisions deserve suspicion.
    """
    basis = sol.basis_vectors
    dim = sol.nullspace_dim
    ones = np.ones(8)
    near = bool(
        (eta0 != eta1 and abs(eta0 - eta1) < NEAR_DEGENERATE_TOL)
        or (cos2a != 1.0 and 1.0 - cos2a < NEAR_DEGENERATE_TOL)
    )

    tag = "other"
    if cos2a == 1.0:
        paired = [np.zeros(8) for _ in range(5)]
        for idx, (c0, c1) in enumerate(((0, 0), (0, 1), (1, 0))):
            paired[idx][2 * c0 + c1] = 1.0
            paired[idx][4 + 2 * c0 + c1] = 1.0
        paired[3][3] = 1.0  # S110 free
        paired[4][7] = 1.0  # S111 free
        if dim == 5 and all(_in_span(basis, v, span_tol) for v in paired):
            tag = "identical-bases"
    elif eta0 == eta1:
        no_click_pair = np.zeros(8)
        no_click_pair[0] = no_click_pair[4] = 1.0
        if dim == 2 and _in_span(basis, ones, span_tol) \
                and _in_span(basis, no_click_pair, span_tol):
            tag = "equal-efficiency"
    else:
        if dim == 1 and _in_span(basis, ones, span_tol):
            tag = "trivial"

    if tag == "other":
        logger.error(
            "unexpected solution family at eta0=%g eta1=%g cos2a=%g: "
            "nullspace dim %d -- would contradict the uniqueness result",
            eta0, eta1, cos2a, dim)
    return replace(sol, tag=tag, near_degenerate=near)


def sweep(eta0_values: Sequence[float], eta1_values: Sequence[float],
          cos2a_values: Sequence[float], tol: float = DEFAULT_TOL,
          ) -> Iterator[Tuple[float, float, float, int, str, bool]]:
    """Classify the nullspace over a parameter grid.

    Yields (eta0, eta1, cos2a, nullspace_dim, tag, near_degenerate) rows,
    one per grid point.
    """
    for eta0 in eta0_values:
        for eta1 in eta1_values:
            for cos2a in cos2a_values:
                system = build_constraints(eta0, eta1, cos2a)
                sol = classify(solution_space(system, tol), eta0, eta1, cos2a)
                yield (eta0, eta1, cos2a, sol.nullspace_dim, sol.tag,
                       sol.near_degenerate)
