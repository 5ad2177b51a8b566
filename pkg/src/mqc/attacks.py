"""Closed-form attack calculators for the two-detector setup.

Each calculator is deterministic: it evaluates the attacker's guessing
probability (or a Chernoff bound on her failure probability) from the
stated parameters and returns the derived intermediate quantities for
auditing.  Empirical validation lives in :mod:`mqc.montecarlo`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Sequence, Tuple

from .optics import EventDistribution, _check_unit_interval

__all__ = [
    "AttackOutcome",
    "attack1_guess_coherent",
    "attack1_guess_general",
    "attack2_chernoff",
    "double_photon_attack",
    "coinflip_attack_success",
    "coinflip_double_click_abort",
    "coinflip_double_click_success_ceiling",
]


@dataclass(frozen=True)
class AttackOutcome:
    """Result of an attack calculation.

    ``guess_prob`` is the attacker's guessing probability (a lower bound
    where the analysis is Chernoff-based), ``fail_prob_bound`` the matching
    upper bound on her failure probability, and ``intermediates`` the named
    derived quantities that produced them.
    """

    guess_prob: float
    fail_prob_bound: float
    intermediates: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        _check_unit_interval("guess_prob", self.guess_prob)
        _check_unit_interval("fail_prob_bound", self.fail_prob_bound)


def attack1_guess_coherent(eta: float, mu: float) -> float:
    """Basis-guessing probability of the bright-pulse attack on
    single-clicks-only reporting.

    Equal efficiencies eta, no dark counts, BB84 bases, every photon in the
    first computational state:

        P_guess(mu) = 1 - (2 exp(-mu eta / 2) - exp(-mu eta)) / 2.

    Monotone from 1/2 at mu = 0 toward 1 as mu grows: a wrong-basis
    measurement of a bright pulse double-clicks and is discarded, so the
    report bit itself leaks the basis.
    """
    _check_unit_interval("eta", eta, lo_open=True, hi_open=True)
    if mu < 0.0:
        raise ValueError(f"mean photon number mu must be >= 0, got {mu}")
    half = math.exp(-0.5 * mu * eta)
    return 1.0 - 0.5 * (2.0 * half - half * half)


def attack1_guess_general(events0: EventDistribution,
                          events1: EventDistribution) -> float:
    """Single-clicks-only attack from explicit event distributions.

    The attacker guesses beta = 0 on a report and beta = 1 on silence, so

        P_guess = [P(1,0|0) + P(0,1|0) + P(0,0|1) + P(1,1|1)] / 2.

    Feeding both bases the same distribution gives exactly 1/2.
    """
    return 0.5 * (events0.prob(1, 0) + events0.prob(0, 1)
                  + events1.prob(0, 0) + events1.prob(1, 1))


def attack2_chernoff(n_pulses: float, a: float, p_attack: Sequence[float],
                     p_protocol: Sequence[float]) -> AttackOutcome:
    """Report-count attack across N pulses, with a Chernoff guarantee.

    The attacker replaces a fraction ``a`` of the N pulses with crafted
    multiphoton pulses whose report probability is ``p_attack[beta]``; the
    rest report with ``p_protocol[beta]``.  The expected report count under
    basis beta is N g_beta with

        g_beta = a p_attack[beta] + (1 - a) p_protocol[beta],

    and she thresholds the observed count at G_N, the point where
    E(Z_0)(1 + delta) = E(Z_1)(1 - delta).  Two Chernoff tails then give

        P_guess >= 1 - [exp(-N g_0 delta^2 / 3) + exp(-N g_1 delta^2 / 2)] / 2.

    Requires g_1 > g_0 > 0; the attack premise fails otherwise.
    """
    if n_pulses <= 0:
        raise ValueError(f"n_pulses must be > 0, got {n_pulses}")
    if not 0.0 < a < 1.0:
        raise ValueError(f"attack fraction a must be in (0, 1), got {a}")
    pa = [_check_unit_interval(f"p_attack[{b}]", p_attack[b]) for b in range(2)]
    pp = [_check_unit_interval(f"p_protocol[{b}]", p_protocol[b]) for b in range(2)]
    g0 = a * pa[0] + (1.0 - a) * pp[0]
    g1 = a * pa[1] + (1.0 - a) * pp[1]
    if not g1 > g0 > 0.0:
        raise ValueError(
            f"attack premise violated: need g_1 > g_0 > 0, got g_0 = {g0}, g_1 = {g1}")
    delta = (g1 - g0) / (g1 + g0)
    g_n = n_pulses * g0 * (1.0 + delta)
    fail = 0.5 * (math.exp(-n_pulses * g0 * delta ** 2 / 3.0)
                  + math.exp(-n_pulses * g1 * delta ** 2 / 2.0))
    return AttackOutcome(
        guess_prob=1.0 - fail,
        fail_prob_bound=fail,
        intermediates={"g0": g0, "g1": g1, "delta": delta, "G_N": g_n,
                       "E_Z0": n_pulses * g0, "E_Z1": n_pulses * g1},
    )


def double_photon_pair_probs(d0: float, d1: float, eta0: float,
                             eta1: float) -> Tuple[float, float]:
    """Report probabilities of a two-photon pulse in the first basis state.

    Measured in the matching basis both photons hit D0; in the conjugate
    basis each photon routes 50/50:

        P_0(1) = 1 - (1-d_0)(1-d_1)(1-eta_0)^2
        P_1(1) = 1 - (1-d_0)(1-d_1)[(1-eta_0)^2 + (1-eta_1)^2
                                    + 2(1-eta_0)(1-eta_1)] / 4.
    """
    darks = (1.0 - d0) * (1.0 - d1)
    p0 = 1.0 - darks * (1.0 - eta0) ** 2
    p1 = 1.0 - 0.25 * darks * ((1.0 - eta0) ** 2 + (1.0 - eta1) ** 2
                               + 2.0 * (1.0 - eta0) * (1.0 - eta1))
    return p0, p1


def double_photon_attack(d0: float, d1: float, eta0: float, eta1: float,
                         mu: float, n_pulses: float) -> AttackOutcome:
    """Source-statistics-preserving attack using the two-photon pulses.

    The attacker follows the agreed weak-coherent protocol but tracks which
    pulses carried two photons in the first computational state (Poisson
    weight exp(-mu) mu^2 / 2, state fraction 1/4) and counts how many of
    those Bob reports.  With eta_0 > eta_1 the expected count

        E(N_rep, beta) = N exp(-mu) mu^2 P_beta(1) / 8

    is larger for beta = 0, and thresholding at G (where the two expected
    counts scaled by 1 -+ delta meet) fails with probability below

        [exp(-E_0 delta^2 / 2) + exp(-E_1 delta^2 / 3)] / 2,

    delta = (P_0(1) - P_1(1)) / (P_0(1) + P_1(1)).
    """
    _check_unit_interval("d0", d0, hi_open=True)
    _check_unit_interval("d1", d1, hi_open=True)
    _check_unit_interval("eta0", eta0, lo_open=True, hi_open=True)
    _check_unit_interval("eta1", eta1, lo_open=True, hi_open=True)
    if not eta0 > eta1:
        raise ValueError(f"attack needs eta0 > eta1, got eta0 = {eta0}, eta1 = {eta1}")
    if mu <= 0.0:
        raise ValueError(f"mean photon number mu must be > 0, got {mu}")
    if n_pulses <= 0:
        raise ValueError(f"n_pulses must be > 0, got {n_pulses}")
    p0, p1 = double_photon_pair_probs(d0, d1, eta0, eta1)
    delta = (p0 - p1) / (p0 + p1)
    two_photon_zero = n_pulses * math.exp(-mu) * mu ** 2 / 8.0
    e0 = two_photon_zero * p0
    e1 = two_photon_zero * p1
    g = n_pulses * math.exp(-mu) * mu ** 2 * p0 * p1 / (4.0 * (p0 + p1))
    fail = 0.5 * (math.exp(-e0 * delta ** 2 / 2.0)
                  + math.exp(-e1 * delta ** 2 / 3.0))
    return AttackOutcome(
        guess_prob=1.0 - fail,
        fail_prob_bound=fail,
        intermediates={"P0_1": p0, "P1_1": p1, "delta": delta, "G": g,
                       "E_rep0": e0, "E_rep1": e1},
    )


def _check_coinflip_args(s_min: float, m: int) -> None:
    _check_unit_interval("s_min", s_min, lo_open=True)
    if m != int(m) or m < 1:
        raise ValueError(f"number of bright pulses M must be an integer >= 1, got {m}")


def coinflip_attack_success(s_min: float, m: int) -> float:
    """Lower bound on forcing the coin when double clicks are discarded.

    The attacker answers M of the N slots with bright pulses; each one is
    accepted iff the measurement basis matches (probability 1/2) and the
    single click survives symmetrization (probability >= s_min), so she
    fixes the outcome with probability at least 1 - (1 - s_min/2)^M.
    """
    _check_coinflip_args(s_min, m)
    return 1.0 - (1.0 - 0.5 * s_min) ** m


def coinflip_double_click_abort(s_min: float, m: int) -> float:
    """Lower bound on the abort probability once double clicks get random
    outcomes.

    Assigning random outcomes to double clicks defeats the bright-pulse
    attack for large M: each attacked slot now triggers an abort with
    probability at least s_min / 8, so the session aborts with probability
    at least 1 - (1 - s_min/8)^M.
    """
    _check_coinflip_args(s_min, m)
    return 1.0 - (1.0 - 0.125 * s_min) ** m


def coinflip_double_click_success_ceiling(s_min: float) -> float:
    """Best single-slot (M = 1) success under random double-click outcomes:
    the attacker passes and fixes the coin with probability 7 s_min / 8."""
    _check_unit_interval("s_min", s_min, lo_open=True)
    return 0.875 * s_min
