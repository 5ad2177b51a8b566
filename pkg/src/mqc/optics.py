"""Photon-counting statistics for a two-detector polarization analyzer.

A pulse of ``k`` identically polarized photons passes a wave-plate-selected
polarizing beam splitter and hits two threshold single-photon detectors D0
and D1.  Each photon routes to D0 with the Born-rule probability ``q`` (to
D1 otherwise), a routed photon fires detector ``i`` with efficiency
``eta[i]``, and each detector also fires spontaneously with dark-count
probability ``d[i]``.  All of these are independent Bernoulli events, and
threshold detectors cannot resolve photon number, so the only observable is
the click pattern ``(c0, c1)`` of one pulse.

Everything in this module is a pure function of value inputs; there is no
shared mutable state and every operation is safe to call concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

__all__ = [
    "SUM_TOL",
    "ROUTING_SUM_TOL",
    "BLOCH_NORM_TOL",
    "QubitState",
    "BasisPair",
    "DetectorPair",
    "FixedK",
    "Coherent",
    "PulseSpec",
    "EventDistribution",
    "overlap_q",
    "det_probs_fixed_k",
    "det_probs_coherent",
    "no_click_prob_general",
    "qudit_report_prob",
]

# Absolute tolerance separating algebraic identities from float noise.
SUM_TOL = 1e-12
# Routing distributions are user-supplied; allow a looser normalization slack.
ROUTING_SUM_TOL = 1e-9
# Slack on the Bloch-ball constraint |r| <= 1 for states built from floats.
BLOCH_NORM_TOL = 1e-9
# Closed forms may produce probabilities a few ulp below zero.
_NEG_TOL = 1e-12


def _check_unit_interval(name: str, value: float, *, lo_open: bool = False,
                         hi_open: bool = False) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value}")
    if value < 0.0 or (lo_open and value == 0.0):
        raise ValueError(f"{name} must be {'>' if lo_open else '>='} 0, got {value}")
    if value > 1.0 or (hi_open and value == 1.0):
        raise ValueError(f"{name} must be {'<' if hi_open else '<='} 1, got {value}")
    return value


def _clamp01(x: float) -> float:
    """Snap float noise just outside [0, 1] back onto the interval."""
    if -_NEG_TOL < x < 0.0:
        return 0.0
    if 1.0 < x < 1.0 + _NEG_TOL:
        return 1.0
    return x


@dataclass(frozen=True)
class QubitState:
    """A single-photon polarization qubit as a Bloch vector (r_x, r_y, r_z).

    Pure states sit on the unit sphere; mixed states lie strictly inside
    the ball.  Only the projection probabilities onto the measurement bases
    are ever consumed, so this representation is complete for every
    operation in the package.
    """

    r_x: float
    r_y: float
    r_z: float

    def __post_init__(self) -> None:
        norm2 = self.r_x ** 2 + self.r_y ** 2 + self.r_z ** 2
        if not math.isfinite(norm2) or norm2 > 1.0 + BLOCH_NORM_TOL:
            raise ValueError(f"Bloch vector has norm^2 = {norm2} > 1")

    @classmethod
    def ket0(cls) -> "QubitState":
        return cls(0.0, 0.0, 1.0)

    @classmethod
    def ket1(cls) -> "QubitState":
        return cls(0.0, 0.0, -1.0)

    @classmethod
    def ket_plus(cls) -> "QubitState":
        return cls(1.0, 0.0, 0.0)

    @classmethod
    def ket_minus(cls) -> "QubitState":
        return cls(-1.0, 0.0, 0.0)


@dataclass(frozen=True)
class BasisPair:
    """The two measurement bases, parameterized by a single scalar.

    ``cos2a`` is the value cos^2(a), where 2a is the Bloch-sphere angle
    between the first vectors of the two bases.  The first basis is pinned
    to the computational basis; full generality is recovered by rotating
    the input state instead.  ``cos2a = 1/2`` reproduces the computational/
    Hadamard (BB84) pair, while ``cos2a = 1`` collapses both bases into one
    -- accepted, but flagged degenerate so callers can treat it as the
    distinct solution family it generates.
    """

    cos2a: float

    def __post_init__(self) -> None:
        _check_unit_interval("cos2a", self.cos2a, lo_open=True)

    @property
    def is_degenerate(self) -> bool:
        """True when the two bases coincide (cos2a == 1)."""
        return self.cos2a == 1.0

    @classmethod
    def bb84(cls) -> "BasisPair":
        return cls(0.5)


@dataclass(frozen=True)
class DetectorPair:
    """Efficiencies and dark-count probabilities of detectors D0 and D1.

    Both tables are indexed ``[i][beta]``: detector ``i`` under measurement
    setting ``beta``.  Efficiencies include channel transmission, so they
    must be strictly inside (0, 1); dark counts live in [0, 1).
    """

    eta: tuple
    d: tuple

    def __post_init__(self) -> None:
        eta = tuple(tuple(float(x) for x in row) for row in self.eta)
        d = tuple(tuple(float(x) for x in row) for row in self.d)
        if len(eta) != 2 or any(len(row) != 2 for row in eta):
            raise ValueError("eta must be a 2x2 table indexed [i][beta]")
        if len(d) != 2 or any(len(row) != 2 for row in d):
            raise ValueError("d must be a 2x2 table indexed [i][beta]")
        for i in range(2):
            for b in range(2):
                _check_unit_interval(f"eta[{i}][{b}]", eta[i][b],
                                     lo_open=True, hi_open=True)
                _check_unit_interval(f"d[{i}][{b}]", d[i][b], hi_open=True)
        object.__setattr__(self, "eta", eta)
        object.__setattr__(self, "d", d)

    @classmethod
    def uniform(cls, eta: float, d: float = 0.0) -> "DetectorPair":
        """Same efficiency and dark-count probability everywhere."""
        return cls(((eta, eta), (eta, eta)), ((d, d), (d, d)))

    @classmethod
    def basis_independent(cls, eta0: float, eta1: float,
                          d0: float = 0.0, d1: float = 0.0) -> "DetectorPair":
        """Per-detector parameters that do not depend on the basis setting."""
        return cls(((eta0, eta0), (eta1, eta1)), ((d0, d0), (d1, d1)))

    @property
    def eta_min(self) -> float:
        return min(self.eta[0][0], self.eta[0][1], self.eta[1][0], self.eta[1][1])

    @property
    def eta_max(self) -> float:
        return max(self.eta[0][0], self.eta[0][1], self.eta[1][0], self.eta[1][1])


@dataclass(frozen=True)
class FixedK:
    """A pulse carrying exactly ``k`` photons."""

    k: int

    def __post_init__(self) -> None:
        if not isinstance(self.k, (int, np.integer)) or self.k < 0:
            raise ValueError(f"photon count k must be a nonnegative integer, got {self.k}")


@dataclass(frozen=True)
class Coherent:
    """A weak-coherent pulse with Poissonian photon number, mean ``mu``."""

    mu: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.mu) and self.mu > 0.0):
            raise ValueError(f"mean photon number mu must be > 0, got {self.mu}")


PulseSpec = Union[FixedK, Coherent]


@dataclass(frozen=True)
class EventDistribution:
    """Normalized probabilities of the four click patterns of one pulse."""

    p00: float
    p01: float
    p10: float
    p11: float

    def __post_init__(self) -> None:
        for name in ("p00", "p01", "p10", "p11"):
            value = _clamp01(float(getattr(self, name)))
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} = {value} outside [0, 1]")
            object.__setattr__(self, name, value)
        total = self.p00 + self.p01 + self.p10 + self.p11
        if abs(total - 1.0) >= SUM_TOL:
            raise ValueError(f"event probabilities sum to {total}, not 1")

    def prob(self, c0: int, c1: int) -> float:
        return (self.p00, self.p01, self.p10, self.p11)[2 * c0 + c1]

    def as_array(self) -> np.ndarray:
        """2x2 array indexed [c0, c1]."""
        return np.array([[self.p00, self.p01], [self.p10, self.p11]])

    @classmethod
    def from_probs(cls, p: Sequence[float]) -> "EventDistribution":
        """Build from the flat order (p00, p01, p10, p11)."""
        return cls(*p)


def _check_beta(beta: int) -> int:
    if beta not in (0, 1):
        raise ValueError(f"beta must be 0 or 1, got {beta}")
    return beta


def overlap_q(state: QubitState, bases: BasisPair, beta: int) -> float:
    """Born-rule probability that one photon routes to detector D0.

    For ``beta = 0`` this is (1 + r_z) / 2.  For ``beta = 1`` the first
    vector of the second basis has Bloch direction (sin 2a, 0, cos 2a), so
    the projection reads (1 + r_x sin 2a + r_z cos 2a) / 2 with
    cos 2a = 2 cos2a - 1.
    """
    _check_beta(beta)
    if beta == 0:
        return _clamp01(0.5 * (1.0 + state.r_z))
    c = bases.cos2a
    cos_2a = 2.0 * c - 1.0
    sin_2a = 2.0 * math.sqrt(c * (1.0 - c))
    return _clamp01(0.5 * (1.0 + state.r_x * sin_2a + state.r_z * cos_2a))


def det_probs_fixed_k(det: DetectorPair, q_beta: float, beta: int,
                      k: int) -> EventDistribution:
    """Exact click-pattern distribution for a k-photon product-state pulse.

    With q = q_beta, eta_i = det.eta[i][beta], d_i = det.d[i][beta] and the
    per-photon survival factor r = q(1-eta_0) + (1-q)(1-eta_1):

        P(0,0) = (1-d_0)(1-d_1) r^k
        P(0,1) = (1-d_0)(1 - q eta_0)^k       - P(0,0)-type term
        P(1,0) = (1-d_1)(1 - (1-q) eta_1)^k   - P(0,0)-type term
        P(1,1) = 1 - P(0,0) - P(0,1) - P(1,0)

    The marginal (1 - q eta_0)^k is the probability that no photon fires
    D0; subtracting the joint no-click term isolates the exclusive events.
    """
    _check_beta(beta)
    q = _check_unit_interval("q_beta", q_beta)
    if k < 0:
        raise ValueError(f"photon count k must be >= 0, got {k}")
    eta0, eta1 = det.eta[0][beta], det.eta[1][beta]
    d0, d1 = det.d[0][beta], det.d[1][beta]
    survive = q * (1.0 - eta0) + (1.0 - q) * (1.0 - eta1)
    joint_silent = (1.0 - d0) * (1.0 - d1) * survive ** k
    silent0 = (1.0 - d0) * (1.0 - q * eta0) ** k
    silent1 = (1.0 - d1) * (1.0 - (1.0 - q) * eta1) ** k
    p00 = joint_silent
    p01 = silent0 - joint_silent
    p10 = silent1 - joint_silent
    p11 = 1.0 + joint_silent - silent0 - silent1
    return EventDistribution(p00, p01, p10, p11)


def det_probs_coherent(det: DetectorPair, q_beta: float, beta: int,
                       mu: float) -> EventDistribution:
    """Click-pattern distribution for a coherent pulse of mean ``mu``.

    Poisson-mixing the fixed-k law turns every per-photon survival factor
    (1 - x)^k into exp(-mu x), giving closed forms with no truncation.
    """
    _check_beta(beta)
    q = _check_unit_interval("q_beta", q_beta)
    if not (math.isfinite(mu) and mu > 0.0):
        raise ValueError(f"mean photon number mu must be > 0, got {mu}")
    eta0, eta1 = det.eta[0][beta], det.eta[1][beta]
    d0, d1 = det.d[0][beta], det.d[1][beta]
    joint_silent = (1.0 - d0) * (1.0 - d1) * math.exp(
        -mu * (q * eta0 + (1.0 - q) * eta1))
    silent0 = (1.0 - d0) * math.exp(-mu * q * eta0)
    silent1 = (1.0 - d1) * math.exp(-mu * (1.0 - q) * eta1)
    p00 = joint_silent
    p01 = silent0 - joint_silent
    p10 = silent1 - joint_silent
    p11 = 1.0 + joint_silent - silent0 - silent1
    return EventDistribution(p00, p01, p10, p11)


def no_click_prob_general(det: DetectorPair, routing: Sequence[float],
                          beta: int, k: int) -> float:
    """Probability that neither detector clicks, for an arbitrary k-photon state.

    Entangled or otherwise non-product pulses are fully described here by
    their routing distribution: ``routing[k0]`` is the probability that
    exactly ``k0`` of the k photons head to D0.  The no-click probability
    is linear in that distribution,

        P(0,0) = (1-d_0)(1-d_1) sum_k0 routing[k0] (1-eta_0)^k0 (1-eta_1)^(k-k0),

    so nothing else about the state can matter.
    """
    _check_beta(beta)
    if k < 0:
        raise ValueError(f"photon count k must be >= 0, got {k}")
    weights = np.asarray(routing, dtype=float)
    if weights.shape != (k + 1,):
        raise ValueError(f"routing must have length k+1 = {k + 1}, got {weights.shape}")
    if np.any(weights < -_NEG_TOL):
        raise ValueError("routing probabilities must be nonnegative")
    total = float(weights.sum())
    if abs(total - 1.0) >= ROUTING_SUM_TOL:
        raise ValueError(f"routing distribution sums to {total}, not 1")
    eta0, eta1 = det.eta[0][beta], det.eta[1][beta]
    d0, d1 = det.d[0][beta], det.d[1][beta]
    k0 = np.arange(k + 1)
    terms = weights * (1.0 - eta0) ** k0 * (1.0 - eta1) ** (k - k0)
    return float((1.0 - d0) * (1.0 - d1) * terms.sum())


def qudit_report_prob(eta: float, darks: Sequence[float], k: int) -> float:
    """At-least-one-click probability for N equal-efficiency detectors.

    Generalizes the two-detector analyzer to an N-outcome measurement: with
    equal efficiencies the routing of the k photons drops out and

        P(report) = 1 - (1-eta)^k prod_i (1 - d_i),

    independent of the basis setting and of the encoded state.
    """
    _check_unit_interval("eta", eta, lo_open=True, hi_open=True)
    if k < 0:
        raise ValueError(f"photon count k must be >= 0, got {k}")
    silent = (1.0 - eta) ** k
    for i, dark in enumerate(darks):
        _check_unit_interval(f"darks[{i}]", dark, hi_open=True)
        silent *= 1.0 - dark
    return 1.0 - silent
