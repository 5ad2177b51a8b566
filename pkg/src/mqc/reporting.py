"""Probabilistic reporting strategies and their single-photon guarantees.

After each pulse Bob holds a click pattern ``(c0, c1)`` and a basis setting
``beta``; he announces "measured" with probability ``S[c0][c1][beta]``.
This table is the whole strategy: single-clicks-only, report-anything,
loss symmetrization and the constant (trivial) rule are all special cases.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

from .optics import DetectorPair, EventDistribution, _check_beta, _check_unit_interval

__all__ = [
    "ReportingStrategy",
    "make_strategy_i",
    "make_strategy_ii",
    "make_strategy_iii",
    "make_trivial",
    "make_symmetrized",
    "report_prob",
    "strategy_iii_single_photon_bound",
    "FeasibilityVerdict",
    "trivial_feasibility",
]


@dataclass(frozen=True)
class ReportingStrategy:
    """Report-probability table ``s[c0][c1][beta]``, every entry in [0, 1]."""

    s: tuple

    def __post_init__(self) -> None:
        table = tuple(
            tuple(tuple(float(x) for x in pair) for pair in plane)
            for plane in self.s
        )
        if len(table) != 2 or any(len(p) != 2 for p in table) or any(
                len(pair) != 2 for p in table for pair in p):
            raise ValueError("strategy table must have shape [2][2][2] (c0, c1, beta)")
        for c0 in range(2):
            for c1 in range(2):
                for b in range(2):
                    _check_unit_interval(f"S[{c0}][{c1}][{b}]", table[c0][c1][b])
        object.__setattr__(self, "s", table)

    def entry(self, c0: int, c1: int, beta: int) -> float:
        return self.s[c0][c1][beta]

    def to_json(self) -> str:
        """Serialize as ``{"S": [[[...]]]}`` with axis order c0, c1, beta."""
        return json.dumps({"S": [[list(pair) for pair in plane] for plane in self.s]})

    @classmethod
    def from_json(cls, text: str) -> "ReportingStrategy":
        doc = json.loads(text)
        if not isinstance(doc, dict) or set(doc) != {"S"}:
            raise ValueError('strategy JSON must be an object with the single key "S"')
        return cls(doc["S"])


def _table(fill) -> list:
    return [[[fill(c0, c1, b) for b in range(2)] for c1 in range(2)] for c0 in range(2)]


def make_strategy_i() -> ReportingStrategy:
    """Report only single clicks: S=1 on (0,1) and (1,0), else 0."""
    return ReportingStrategy(_table(lambda c0, c1, b: 1.0 if c0 != c1 else 0.0))


def make_strategy_ii() -> ReportingStrategy:
    """Report whenever at least one detector clicks."""
    return ReportingStrategy(_table(lambda c0, c1, b: 0.0 if (c0, c1) == (0, 0) else 1.0))


def make_strategy_iii(det: DetectorPair, s11_0: float, s11_1: float) -> ReportingStrategy:
    """Loss symmetrization extended to double clicks.

    Single clicks are down-weighted by eta_min / eta of the clicking
    detector, which equalizes the single-photon report rates across both
    bases; the double-click report probabilities s11_* stay free.
    """
    _check_unit_interval("s11_0", s11_0)
    _check_unit_interval("s11_1", s11_1)
    eta_min = det.eta_min
    s11 = (float(s11_0), float(s11_1))

    def fill(c0: int, c1: int, b: int) -> float:
        if (c0, c1) == (0, 0):
            return 0.0
        if (c0, c1) == (1, 1):
            return s11[b]
        clicking = 0 if (c0, c1) == (1, 0) else 1
        return eta_min / det.eta[clicking][b]

    return ReportingStrategy(_table(fill))


def make_trivial(s: float) -> ReportingStrategy:
    """Constant strategy: every event is reported with the same probability.

    s = 0 is rejected -- it would mean never reporting a successful
    measurement at all.
    """
    _check_unit_interval("s", s, lo_open=True)
    return ReportingStrategy(_table(lambda c0, c1, b: float(s)))


def make_symmetrized(freqs: Sequence[Sequence[float]]) -> ReportingStrategy:
    """Frequency-based loss symmetrization over single clicks only.

    ``freqs[c][beta]`` is the observed frequency of the single-click event
    where detector ``c`` fired, under basis ``beta``.  Each single click is
    reported with probability F_min / freqs[c][beta], so all four reported
    single-click rates match the smallest observed one.  No-click and
    double-click events are never reported.
    """
    f = [[float(freqs[c][b]) for b in range(2)] for c in range(2)]
    for c in range(2):
        for b in range(2):
            if not (math.isfinite(f[c][b]) and f[c][b] > 0.0):
                raise ValueError(f"freqs[{c}][{b}] must be > 0, got {f[c][b]}")
    f_min = min(f[0][0], f[0][1], f[1][0], f[1][1])

    def fill(c0: int, c1: int, b: int) -> float:
        if c0 == c1:
            return 0.0
        return f_min / f[c0][b]

    return ReportingStrategy(_table(fill))


def report_prob(strategy: ReportingStrategy, events: EventDistribution,
                beta: int) -> float:
    """Probability that Bob reports "measured": sum of S * P over events."""
    _check_beta(beta)
    total = 0.0
    for c0 in range(2):
        for c1 in range(2):
            total += strategy.entry(c0, c1, beta) * events.prob(c0, c1)
    return min(total, 1.0)


def strategy_iii_single_photon_bound(delta: float, s11_max: float, k: int) -> float:
    """Cap on the between-bases report-rate gap under symmetrized reporting.

    Valid for pulses of at most one photon when every dark-count
    probability is <= delta:

        k = 0:  2 delta
        k = 1:  6 delta + 2 delta^2 + s11_max (5 delta + delta^2)
    """
    _check_unit_interval("delta", delta, hi_open=True)
    _check_unit_interval("s11_max", s11_max)
    if k == 0:
        return 2.0 * delta
    if k == 1:
        return 6.0 * delta + 2.0 * delta ** 2 + s11_max * (5.0 * delta + delta ** 2)
    raise ValueError(f"bound only holds for k in {{0, 1}}, got k = {k}")


@dataclass(frozen=True)
class FeasibilityVerdict:
    """Outcome of the trivial-strategy feasibility check, with the evaluated
    inequality sides kept for auditability."""

    first_class_ok: bool
    second_class_forces_nontrivial: bool
    error_budget_lhs: float
    error_budget_rhs: float
    det_threshold: float
    error_ceiling: float


def trivial_feasibility(delta_cc_i: Sequence[float], delta_err_equal: float,
                        delta_err_diff: float, delta_error: float,
                        delta_00_ii: float, delta_det: float) -> FeasibilityVerdict:
    """Check where the always-report strategy is compatible with correctness.

    First class (low loss, efficient detectors, double-click probabilities
    capped by ``delta_cc_i``): reporting everything keeps the error
    probability within budget iff

        (d00 + d11)(1/2 + delta_err_equal) + delta_err_diff <= delta_error.

    Second class (lossy setups where the no-click probability is at least
    1 - delta_00_ii): if the detection floor ``delta_det`` exceeds
    delta_00_ii / (5 (1 - delta_00_ii)) and the error budget satisfies
    delta_error < 1/12 - delta_err_equal / 6, then every correct strategy
    must report some clicking event more often than the no-click event --
    i.e. it cannot be trivial.
    """
    d00, d11 = (_check_unit_interval(f"delta_cc_i[{i}]", v, hi_open=True)
                for i, v in enumerate(delta_cc_i))
    delta_err_equal = _check_unit_interval("delta_err_equal", delta_err_equal, hi_open=True)
    delta_err_diff = _check_unit_interval("delta_err_diff", delta_err_diff, hi_open=True)
    delta_error = _check_unit_interval("delta_error", delta_error, hi_open=True)
    delta_00_ii = _check_unit_interval("delta_00_ii", delta_00_ii, hi_open=True)
    delta_det = _check_unit_interval("delta_det", delta_det, hi_open=True)

    lhs = (d00 + d11) * (0.5 + delta_err_equal) + delta_err_diff
    det_threshold = delta_00_ii / (5.0 * (1.0 - delta_00_ii))
    error_ceiling = 1.0 / 12.0 - delta_err_equal / 6.0
    return FeasibilityVerdict(
        first_class_ok=lhs <= delta_error,
        second_class_forces_nontrivial=(delta_det > det_threshold
                                        and delta_error < error_ceiling),
        error_budget_lhs=lhs,
        error_budget_rhs=delta_error,
        det_threshold=det_threshold,
        error_ceiling=error_ceiling,
    )
