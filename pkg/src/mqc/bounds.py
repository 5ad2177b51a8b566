"""Closed-form caps on basis leakage and their N-pulse compositions.

The per-pulse bounds limit |P_report(1|beta=1) - P_report(1|beta=0)| for
any pulse, any photon number and any (possibly entangled) state, given only
an envelope on the detector parameters.  The composition rules then bound
the adversary's guessing probability across a whole N-pulse session.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .optics import _check_unit_interval

__all__ = [
    "EfficiencyEnvelope",
    "BoundResult",
    "guess_bound_single",
    "bound_b_ii",
    "bound_b_iii",
    "multi_pulse_bound",
    "mixed_pulse_bound",
]


@dataclass(frozen=True)
class EfficiencyEnvelope:
    """0 < eta_low <= every efficiency <= eta_up < 1, dark counts <= delta < 1/2."""

    eta_low: float
    eta_up: float
    delta: float

    def __post_init__(self) -> None:
        _check_unit_interval("eta_low", self.eta_low, lo_open=True, hi_open=True)
        _check_unit_interval("eta_up", self.eta_up, lo_open=True, hi_open=True)
        if self.eta_low > self.eta_up:
            raise ValueError(f"eta_low = {self.eta_low} > eta_up = {self.eta_up}")
        if not 0.0 <= self.delta < 0.5:
            raise ValueError(f"delta must be in [0, 1/2), got {self.delta}")


@dataclass(frozen=True)
class BoundResult:
    """A probability bound reported verbatim; values >= 1 are vacuous.

    Clamping is left to presentation code so that vacuous regimes stay
    visible in the analysis API.
    """

    value: float

    @property
    def vacuous(self) -> bool:
        return self.value >= 1.0

    @property
    def clamped(self) -> float:
        return min(self.value, 1.0)


def guess_bound_single(eps_basis: float, delta_report: float) -> float:
    """Guessing-probability cap from a report-rate gap on one pulse.

    If Bob's basis bit is at most (1/2 + eps_basis) predictable a priori
    and the between-bases report gap is delta_report, no strategy of
    Alice's guesses the basis with probability above
    (1/2 + eps_basis)(1 + delta_report).
    """
    if eps_basis < 0.0:
        raise ValueError(f"eps_basis must be >= 0, got {eps_basis}")
    _check_unit_interval("delta_report", delta_report)
    return (0.5 + eps_basis) * (1.0 + delta_report)


def _stationary_gap(l_small: float, l_big: float, delta: float,
                    weight: float) -> float:
    """Maximum over real k >= 0 of
    weight (1-eta_small)^k - (1-2 delta)(1-eta_big)^k.

    ``l_small``/``l_big`` are log(1 - eta) for the smaller/larger
    efficiency; everything is evaluated in log space because the two logs
    cancel catastrophically as the efficiency gap closes.  When the
    stationary point falls at negative k (dark counts dominate the
    efficiency spread) the objective is decreasing on the physical domain
    and the k = 0 value is the supremum.
    """
    k_star = (math.log1p(-2.0 * delta) + math.log(l_big / (weight * l_small))) \
        / (l_small - l_big)
    if k_star <= 0.0:
        return weight - (1.0 - 2.0 * delta)
    return (1.0 - 2.0 * delta) * (l_big / l_small - 1.0) * math.exp(k_star * l_big)


def bound_b_ii(env: EfficiencyEnvelope) -> float:
    """Report-gap cap when every clicking event is reported.

    The gap at photon number k is at most
    f(k) = (1-eta_low)^k - (1-2 delta)(1-eta_up)^k; maximizing f over real
    k gives the detector term, and the k = 0 dark-count floor 2 delta is
    kept via the max.
    """
    if env.eta_low == env.eta_up:
        return 2.0 * env.delta
    l_low = math.log1p(-env.eta_low)
    l_up = math.log1p(-env.eta_up)
    b_det = _stationary_gap(l_low, l_up, env.delta, 1.0)
    return max(2.0 * env.delta, b_det)


def bound_b_iii(eta_min: float, eta_max: float, delta: float) -> float:
    """Report-gap cap under symmetrized reporting with s11 >= eta_min/eta_max.

    The gap at photon number k is at most
    g(k) = 1 - eta_min/eta_max
         + (eta_min/eta_max)(1-eta_min)^k - (1-2 delta)(1-eta_max)^k,
    maximized over real k, floored at 2 delta.
    """
    _check_unit_interval("eta_min", eta_min, lo_open=True, hi_open=True)
    _check_unit_interval("eta_max", eta_max, lo_open=True, hi_open=True)
    if eta_min > eta_max:
        raise ValueError(f"eta_min = {eta_min} > eta_max = {eta_max}")
    if not 0.0 <= delta < 0.5:
        raise ValueError(f"delta must be in [0, 1/2), got {delta}")
    if eta_min == eta_max:
        return 2.0 * delta
    ratio = eta_min / eta_max
    l_min = math.log1p(-eta_min)
    l_max = math.log1p(-eta_max)
    b_det = 1.0 - ratio + _stationary_gap(l_min, l_max, delta, ratio)
    return max(2.0 * delta, b_det)


def multi_pulse_bound(per_pulse_bounds: Sequence[float]) -> BoundResult:
    """Compose per-pulse report-gap caps: P_guess <= 1/2 + sum(B_i)/2.

    Holds for arbitrarily entangled multi-pulse attacks; the bound is
    returned verbatim even when it exceeds 1 (vacuous).
    """
    total = 0.0
    for i, b in enumerate(per_pulse_bounds):
        total += _check_unit_interval(f"per_pulse_bounds[{i}]", b)
    return BoundResult(0.5 + 0.5 * total)


def mixed_pulse_bound(n_pulses: float, eps: float, delta_empty: float,
                      delta_mult: float, b0: float, b1: float,
                      b_mult: float) -> BoundResult:
    """N-pulse cap when the photon-number mix is certified.

    With probability >= 1 - eps at least (1 - delta_empty) N pulses are
    empty and at most delta_mult N carry more than one photon; b0, b1 and
    b_mult cap the per-pulse report gap for empty, single-photon and
    multiphoton pulses respectively.  Then

        P_guess <= eps + (1 - eps) [ 1/2 + N/2 ( (1-delta_empty) b0
                   + (delta_empty - delta_mult) b1 + delta_mult b_mult ) ].

    delta_empty = 1 recovers the certified-multiphoton-fraction-only form.
    """
    if n_pulses < 0:
        raise ValueError(f"n_pulses must be >= 0, got {n_pulses}")
    eps = _check_unit_interval("eps", eps)
    delta_empty = _check_unit_interval("delta_empty", delta_empty)
    delta_mult = _check_unit_interval("delta_mult", delta_mult)
    if delta_mult > delta_empty:
        raise ValueError(
            f"need delta_mult <= delta_empty, got {delta_mult} > {delta_empty}")
    b0 = _check_unit_interval("b0", b0)
    b1 = _check_unit_interval("b1", b1)
    b_mult = _check_unit_interval("b_mult", b_mult)
    per_session = 0.5 * n_pulses * ((1.0 - delta_empty) * b0
                                    + (delta_empty - delta_mult) * b1
                                    + delta_mult * b_mult)
    return BoundResult(eps + (1.0 - eps) * (0.5 + per_session))
