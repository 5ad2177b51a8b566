"""Four-detector passive-choice analyzer (setup II) and its attacks.

A 50:50 beam splitter sends each photon of a pulse to one of two polarizing
beam splitters; the transmitted arm measures in the computational basis
(detectors D0, D1), the reflected arm in a basis tilted by ``theta``
(detectors D+, D-).  The basis is therefore not chosen by Bob -- it is read
off from which detectors fire.  The 50:50 split is hard-coded at exactly
1/2: any imbalance can be absorbed into the four efficiencies.

Formulas proven only in a restricted parameter regime enforce that regime
instead of silently extrapolating.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Tuple

from .optics import QubitState, _check_unit_interval

__all__ = [
    "DETECTOR_NAMES",
    "DetectorQuad",
    "QuadReport",
    "routing_probs",
    "single_click_probs",
    "slii_strategy",
    "mpaii_guess",
    "rsdcii_report_probs",
    "attack2_setup2_guess",
    "slii_single_photon_gap",
]

# Detector order used by every 4-tuple in this module.
DETECTOR_NAMES = ("0", "1", "+", "-")

# Sum of exclusive single-click probabilities may exceed 1 only by float noise.
_QUAD_SUM_TOL = 1e-12


@dataclass(frozen=True)
class DetectorQuad:
    """Efficiencies, dark counts and basis angle of the four detectors.

    ``eta`` and ``d`` follow the order (D0, D1, D+, D-); ``theta`` in
    [0, pi/2) tilts the second basis away from the Hadamard pair
    (theta = 0 is computational/Hadamard).
    """

    eta: tuple
    d: tuple
    theta: float = 0.0

    def __post_init__(self) -> None:
        eta = tuple(float(x) for x in self.eta)
        d = tuple(float(x) for x in self.d)
        if len(eta) != 4 or len(d) != 4:
            raise ValueError("eta and d must each have four entries (D0, D1, D+, D-)")
        for name, e, dark in zip(DETECTOR_NAMES, eta, d):
            _check_unit_interval(f"eta[{name}]", e, lo_open=True, hi_open=True)
            _check_unit_interval(f"d[{name}]", dark, hi_open=True)
        if not 0.0 <= self.theta < math.pi / 2.0:
            raise ValueError(f"theta must be in [0, pi/2), got {self.theta}")
        object.__setattr__(self, "eta", eta)
        object.__setattr__(self, "d", d)

    @classmethod
    def uniform(cls, eta: float, d: float = 0.0, theta: float = 0.0) -> "DetectorQuad":
        return cls((eta,) * 4, (d,) * 4, theta)

    @property
    def eta_min(self) -> float:
        return min(self.eta)


@dataclass(frozen=True)
class QuadReport:
    """Per-basis report probabilities: p_report[beta] is the probability that
    Bob reports "measured" AND assigns basis beta."""

    p_report: tuple

    def __post_init__(self) -> None:
        pair = tuple(float(x) for x in self.p_report)
        if len(pair) != 2:
            raise ValueError("p_report must have two entries (beta = 0, 1)")
        for b, p in enumerate(pair):
            _check_unit_interval(f"p_report[{b}]", p)
        if pair[0] + pair[1] > 1.0 + _QUAD_SUM_TOL:
            raise ValueError(f"report probabilities sum to {pair[0] + pair[1]} > 1")
        object.__setattr__(self, "p_report", pair)


def routing_probs(quad: DetectorQuad, state: QubitState) -> Tuple[float, float]:
    """Born-rule arm probabilities (q_0, q_+) of one photon.

    Conditioned on its beam-splitter arm, a photon heads to D0 with
    q_0 = (1 + r_z)/2 and to D+ with
    q_+ = (1 + r_x cos(theta) + r_z sin(theta))/2.
    """
    q0 = 0.5 * (1.0 + state.r_z)
    qp = 0.5 * (1.0 + state.r_x * math.cos(quad.theta)
                + state.r_z * math.sin(quad.theta))
    return min(max(q0, 0.0), 1.0), min(max(qp, 0.0), 1.0)


def single_click_probs(quad: DetectorQuad, state: QubitState,
                       k: int) -> Tuple[float, float, float, float]:
    """Exclusive single-click probabilities (P_0, P_1, P_+, P_-) for a
    k-photon product-state pulse.

    Each is P(the three other detectors silent) - P(all four silent); the
    per-photon silence factors close over the multinomial routing, e.g.

        P_0 = (1-d_1)(1-d_+)(1-d_-) { A^k - (1-d_0) B^k }

    with A the per-photon probability of not firing D1, D+ or D- and B the
    probability of firing nothing at all.
    """
    if k < 0:
        raise ValueError(f"photon count k must be >= 0, got {k}")
    q0, qp = routing_probs(quad, state)
    eta0, eta1, etap, etam = quad.eta
    d0, d1, dp, dm = quad.d

    # Per-photon firing probability of each detector.
    hit = (0.5 * q0 * eta0, 0.5 * (1.0 - q0) * eta1,
           0.5 * qp * etap, 0.5 * (1.0 - qp) * etam)
    silent_all = (1.0 - sum(hit)) ** k
    darks = (1.0 - d0, 1.0 - d1, 1.0 - dp, 1.0 - dm)

    probs = []
    for i in range(4):
        others_dark = 1.0
        for j in range(4):
            if j != i:
                others_dark *= darks[j]
        others_silent = (1.0 - (sum(hit) - hit[i])) ** k
        probs.append(others_dark * (others_silent - darks[i] * silent_all))
    return tuple(max(p, 0.0) for p in probs)


def slii_strategy(values: Sequence[float]) -> Tuple[float, float, float, float]:
    """Single-click symmetrization factors S_i = min(values) / values[i].

    ``values`` are either the four observed single-click frequencies or the
    four efficiencies; either way S_i * values[i] is constant across
    detectors, equalizing the reported single-click rates.
    """
    vals = tuple(float(v) for v in values)
    if len(vals) != 4:
        raise ValueError("need four frequencies/efficiencies (D0, D1, D+, D-)")
    for name, v in zip(DETECTOR_NAMES, vals):
        if not (math.isfinite(v) and v > 0.0):
            raise ValueError(f"values[{name}] must be > 0, got {v}")
    v_min = min(vals)
    return tuple(v_min / v for v in vals)


def mpaii_guess(quad: DetectorQuad, k: int) -> float:
    """Attacker's basis-guessing probability against single-click-only
    symmetrized reporting, for a k-photon pulse in the first computational
    state.

    Only proven for uniform efficiencies, uniform dark counts and theta = 0
    (where all symmetrization factors are 1); those preconditions are
    enforced.  Conditioned on a report,

        P_guess = (P_0 + P_1) / (P_0 + P_1 + P_+ + P_-)

    with P_0 = (1-d)^3 [(1-eta/2)^k - (1-d)(1-eta)^k],
    P_1 = d (1-d)^3 (1-eta)^k and
    P_+ = P_- = (1-d)^3 [(1-3 eta/4)^k - (1-d)(1-eta)^k].

    Exactly 1/2 for k in {0, 1} (the defining identity of symmetrized
    reporting; returned exactly because the float ratio of the two
    algebraically equal sums can differ in the last ulp), strictly above
    1/2 for k >= 2, and approaching 1 as k grows.
    """
    if k < 0:
        raise ValueError(f"photon count k must be >= 0, got {k}")
    if len(set(quad.eta)) != 1 or len(set(quad.d)) != 1:
        raise ValueError("guessing formula requires uniform efficiencies and "
                         "uniform dark counts")
    if quad.theta != 0.0:
        raise ValueError("guessing formula requires theta = 0")
    if k <= 1:
        return 0.5
    eta = quad.eta[0]
    d = quad.d[0]
    # Ratio form: the common (1-d)^3 cancels, and dividing through by
    # (1 - eta/2)^k keeps the expression finite at photon numbers where
    # the raw click probabilities underflow.
    rb = ((1.0 - 0.75 * eta) / (1.0 - 0.5 * eta)) ** k
    rc = ((1.0 - eta) / (1.0 - 0.5 * eta)) ** k
    num = 1.0 - (1.0 - 2.0 * d) * rc
    return num / (num + 2.0 * (rb - (1.0 - d) * rc))


def rsdcii_report_probs(quad: DetectorQuad, k: int) -> QuadReport:
    """Per-basis report probabilities when single and double clicks count.

    Reporting rule: announce basis 0 if at least one of D0, D1 fired and
    neither of D+, D- did (double clicks get a random outcome within the
    basis); symmetrically for basis 1; stay silent otherwise.  For
    pair-equal efficiencies (eta_0 = eta_1, eta_+ = eta_-) the state drops
    out entirely:

        P(1, 0) = (1-d_+)(1-d_-)(1 - eta_+/2)^k
                  - prod(1-d_i) (1 - (eta_0 + eta_+)/2)^k

    and the mirror image for P(1, 1).
    """
    if k < 0:
        raise ValueError(f"photon count k must be >= 0, got {k}")
    eta0, eta1, etap, etam = quad.eta
    if eta0 != eta1 or etap != etam:
        raise ValueError("state-independent form requires eta_0 = eta_1 and "
                         "eta_+ = eta_-")
    d0, d1, dp, dm = quad.d
    pair01 = (1.0 - d0) * (1.0 - d1)
    pair_pm = (1.0 - dp) * (1.0 - dm)
    all_silent = pair01 * pair_pm * (1.0 - 0.5 * (eta0 + etap)) ** k
    p_basis0 = pair_pm * (1.0 - 0.5 * etap) ** k - all_silent
    p_basis1 = pair01 * (1.0 - 0.5 * eta0) ** k - all_silent
    return QuadReport((p_basis0, p_basis1))


def attack2_setup2_guess(a_dark: float, eta0: float, etaplus: float,
                         k: int) -> float:
    """Efficiency-mismatch attack on the report-everything rule.

    Pair-equal efficiencies with eta_0 != eta_+, and
    a_dark = (1-d_0)(1-d_1) = (1-d_+)(1-d_-).  Conditioned on a report,

        P_guess = max(P(1,0), P(1,1)) / (P(1,0) + P(1,1))

    with P(1, beta) from the reporting rule above.  Equals 1/2 at k = 0,
    exceeds 1/2 for every k >= 1, and approaches 1 as k grows.
    """
    if not 0.0 < a_dark <= 1.0:
        raise ValueError(f"a_dark must be in (0, 1], got {a_dark}")
    _check_unit_interval("eta0", eta0, lo_open=True, hi_open=True)
    _check_unit_interval("etaplus", etaplus, lo_open=True, hi_open=True)
    if eta0 == etaplus:
        raise ValueError("attack needs unequal pair efficiencies (eta0 != etaplus)")
    if k < 0:
        raise ValueError(f"photon count k must be >= 0, got {k}")
    if k == 0:
        # Both report probabilities coincide; the conditional guess is fair.
        return 0.5
    # Ratio form of max(P(1,.)) / (P(1,0) + P(1,1)): dividing the silence
    # factors x = 1 - eta_big/2, y = 1 - eta_small/2 and z = x + y - 1 by
    # y^k keeps the expression finite at photon numbers where the raw
    # report probabilities underflow.
    x = 1.0 - 0.5 * max(eta0, etaplus)
    y = 1.0 - 0.5 * min(eta0, etaplus)
    z = x + y - 1.0
    r1 = (x / y) ** k
    r2 = (z / y) ** k
    return 0.5 * (1.0 + (1.0 - r1) / (1.0 + r1 - 2.0 * a_dark * r2))


def slii_single_photon_gap(delta: float, k: int) -> float:
    """Cap on |P(1,1) - P(1,0)| under symmetrized single-click reporting,
    for pulses of at most one photon with dark counts <= delta: 6 delta."""
    _check_unit_interval("delta", delta, hi_open=True)
    if k not in (0, 1):
        raise ValueError(f"bound only holds for k in {{0, 1}}, got k = {k}")
    return 6.0 * delta
