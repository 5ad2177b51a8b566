"""Stochastic oracle and protocol harness.

Samples detection events photon-by-photon under the same independence model
the closed forms assume (binomial routing, Bernoulli clicks and dark
counts), estimates frequencies with binomial standard errors, and runs
N-pulse sender/receiver transcripts for empirical attack validation.

Reproducibility contract: every entry point takes a 64-bit seed, worker
``w`` draws from the stream ``SeedSequence(seed).spawn(workers)[w]``, and
pulse ``j`` belongs to worker ``j mod workers`` -- so identical
(seed, workers, scenario) triples give bit-identical results, while
different worker counts give statistically equivalent ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .attacks import double_photon_pair_probs
from .optics import (BasisPair, Coherent, DetectorPair, FixedK, PulseSpec,
                     QubitState, det_probs_fixed_k, overlap_q)
from .reporting import ReportingStrategy
from .setup_two import DetectorQuad, routing_probs

__all__ = [
    "Estimate",
    "ScenarioI",
    "SimConfig",
    "PulsePlan",
    "BobPolicy",
    "Transcript",
    "sample_event",
    "sample_event_quad",
    "estimate_event_probs",
    "estimate_quad_single_clicks",
    "run_protocol",
    "simulate_coinflip_attack",
    "simulate_attack2_runs",
    "simulate_double_photon_runs",
]


@dataclass(frozen=True)
class Estimate:
    """A frequency estimate with its binomial standard error
    sqrt(value (1 - value) / n)."""

    value: float
    n: int
    stderr: float = field(init=False)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"sample count n must be >= 1, got {self.n}")
        if not 0.0 <= self.value <= 1.0:
            raise ValueError(f"estimate value {self.value} outside [0, 1]")
        object.__setattr__(
            self, "stderr", math.sqrt(self.value * (1.0 - self.value) / self.n))

    @classmethod
    def from_counts(cls, count: int, n: int) -> "Estimate":
        return cls(count / n, n)

    def agrees_with(self, truth: float, n_sigma: float = 3.0) -> bool:
        """Is ``truth`` within n_sigma standard errors of the estimate?

        Uses the larger of the sample-based and truth-based standard errors
        so that estimates of 0 or 1 do not degenerate to zero width.
        """
        sigma = max(self.stderr,
                    math.sqrt(truth * (1.0 - truth) / self.n))
        return abs(self.value - truth) <= n_sigma * sigma


@dataclass(frozen=True)
class ScenarioI:
    """Fixed-basis estimation scenario on the two-detector analyzer."""

    det: DetectorPair
    bases: BasisPair
    state: QubitState
    source: PulseSpec
    beta: int

    def __post_init__(self) -> None:
        if self.beta not in (0, 1):
            raise ValueError(f"beta must be 0 or 1, got {self.beta}")


@dataclass(frozen=True)
class SimConfig:
    """Seed, pulse budget and worker count of one simulation run."""

    seed: int
    pulses: int
    workers: int = 1
    scenario: Optional[ScenarioI] = None

    def __post_init__(self) -> None:
        if self.pulses < 1:
            raise ValueError(f"pulses must be >= 1, got {self.pulses}")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")


@dataclass(frozen=True)
class PulsePlan:
    """One entry of the sender's schedule: source statistics plus the
    polarization state every photon of the pulse carries."""

    source: PulseSpec
    state: QubitState


@dataclass(frozen=True)
class BobPolicy:
    """Receiver side of a protocol run: detectors, measurement bases, basis
    policy ("random", 0 or 1 per pulse) and the reporting strategy."""

    strategy: ReportingStrategy
    bases: BasisPair
    detectors: DetectorPair
    basis: Union[str, int] = "random"

    def __post_init__(self) -> None:
        if self.basis not in ("random", 0, 1):
            raise ValueError(f'basis policy must be "random", 0 or 1, got {self.basis}')


@dataclass(frozen=True)
class Transcript:
    """Per-pulse protocol record plus aggregate report counts."""

    seed: int
    workers: int
    plan: np.ndarray
    k: np.ndarray
    beta: np.ndarray
    c0: np.ndarray
    c1: np.ndarray
    m: np.ndarray

    @property
    def pulses(self) -> int:
        return self.m.size

    def m1_count_by_beta(self) -> Tuple[int, int]:
        return (int(np.sum(self.m[self.beta == 0])),
                int(np.sum(self.m[self.beta == 1])))

    def summary(self) -> Dict[str, object]:
        by_beta = self.m1_count_by_beta()
        return {
            "pulses": int(self.pulses),
            "seed": int(self.seed),
            "workers": int(self.workers),
            "m1_fraction": float(np.mean(self.m)),
            "m1_count_by_beta": list(by_beta),
            "pulses_by_beta": [int(np.sum(self.beta == 0)),
                               int(np.sum(self.beta == 1))],
            "double_click_fraction": float(np.mean((self.c0 == 1) & (self.c1 == 1))),
        }

    def iter_rows(self):
        """Yield (pulse, plan, k, beta, c0, c1, m) tuples in pulse order."""
        for j in range(self.pulses):
            yield (j, int(self.plan[j]), int(self.k[j]), int(self.beta[j]),
                   int(self.c0[j]), int(self.c1[j]), int(self.m[j]))


def _spawn_rngs(seed: int, workers: int) -> List[np.random.Generator]:
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(workers)]


def _worker_indices(pulses: int, workers: int) -> List[np.ndarray]:
    return [np.arange(w, pulses, workers) for w in range(workers)]


def _draw_photon_counts(rng: np.random.Generator, source: PulseSpec,
                        n: int) -> np.ndarray:
    if isinstance(source, FixedK):
        return np.full(n, source.k, dtype=np.int64)
    if isinstance(source, Coherent):
        return rng.poisson(source.mu, n)
    raise TypeError(f"unknown pulse source {source!r}")


def _sample_pair_events(rng: np.random.Generator, det: DetectorPair, q: float,
                        beta: int, ks: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorized event sampling: binomial routing, then one combined
    click/dark Bernoulli per detector."""
    k0 = rng.binomial(ks, q)
    k1 = ks - k0
    silent0 = (1.0 - det.d[0][beta]) * (1.0 - det.eta[0][beta]) ** k0
    silent1 = (1.0 - det.d[1][beta]) * (1.0 - det.eta[1][beta]) ** k1
    c0 = rng.random(ks.size) >= silent0
    c1 = rng.random(ks.size) >= silent1
    return c0, c1


def sample_event(rng: np.random.Generator, det: DetectorPair, q_beta: float,
                 k: int, beta: int = 0) -> Tuple[int, int]:
    """Draw one detection event for a k-photon pulse.

    Routes k0 ~ Binomial(k, q_beta) photons to D0 and fires detector i with
    probability 1 - (1 - d_i)(1 - eta_i)^{k_i}.
    """
    c0, c1 = _sample_pair_events(rng, det, q_beta, beta,
                                 np.array([k], dtype=np.int64))
    return int(c0[0]), int(c1[0])


def sample_event_quad(rng: np.random.Generator, quad: DetectorQuad,
                      state: QubitState, k: int) -> Tuple[int, int, int, int]:
    """Draw one four-detector event: 50:50 beam-splitter branch per photon,
    Born-rule routing within each arm, then per-detector click Bernoullis."""
    c = _sample_quad_events(rng, quad, state, np.array([k], dtype=np.int64))
    return tuple(int(c[name][0]) for name in ("c0", "c1", "cp", "cm"))


def _sample_quad_events(rng: np.random.Generator, quad: DetectorQuad,
                        state: QubitState, ks: np.ndarray) -> Dict[str, np.ndarray]:
    q0, qp = routing_probs(quad, state)
    k01 = rng.binomial(ks, 0.5)
    kpm = ks - k01
    counts = (rng.binomial(k01, q0), None, rng.binomial(kpm, qp), None)
    counts = (counts[0], k01 - counts[0], counts[2], kpm - counts[2])
    out = {}
    for name, ki, eta, dark in zip(("c0", "c1", "cp", "cm"), counts,
                                   quad.eta, quad.d):
        silent = (1.0 - dark) * (1.0 - eta) ** ki
        out[name] = rng.random(ks.size) >= silent
    return out


def estimate_event_probs(cfg: SimConfig) -> Tuple[Estimate, Estimate, Estimate, Estimate]:
    """Estimate the four event probabilities (p00, p01, p10, p11) of a
    fixed-basis scenario by direct sampling."""
    sc = cfg.scenario
    if not isinstance(sc, ScenarioI):
        raise ValueError("estimate_event_probs needs cfg.scenario = ScenarioI(...)")
    q = overlap_q(sc.state, sc.bases, sc.beta)
    counts = np.zeros(4, dtype=np.int64)
    rngs = _spawn_rngs(cfg.seed, cfg.workers)
    for idx, rng in zip(_worker_indices(cfg.pulses, cfg.workers), rngs):
        if idx.size == 0:
            continue
        ks = _draw_photon_counts(rng, sc.source, idx.size)
        c0, c1 = _sample_pair_events(rng, sc.det, q, sc.beta, ks)
        event = 2 * c0.astype(np.int64) + c1.astype(np.int64)
        counts += np.bincount(event, minlength=4)
    return tuple(Estimate.from_counts(int(c), cfg.pulses) for c in counts)


def estimate_quad_single_clicks(cfg: SimConfig, quad: DetectorQuad,
                                state: QubitState, k: int,
                                ) -> Tuple[Estimate, Estimate, Estimate, Estimate]:
    """Estimate the four exclusive single-click probabilities of the
    four-detector analyzer at fixed photon number k."""
    counts = np.zeros(4, dtype=np.int64)
    rngs = _spawn_rngs(cfg.seed, cfg.workers)
    for idx, rng in zip(_worker_indices(cfg.pulses, cfg.workers), rngs):
        if idx.size == 0:
            continue
        ks = np.full(idx.size, k, dtype=np.int64)
        ev = _sample_quad_events(rng, quad, state, ks)
        clicks = np.stack([ev["c0"], ev["c1"], ev["cp"], ev["cm"]])
        exclusive = clicks.sum(axis=0) == 1
        for i in range(4):
            counts[i] += int(np.sum(clicks[i] & exclusive))
    return tuple(Estimate.from_counts(int(c), cfg.pulses) for c in counts)


def run_protocol(cfg: SimConfig, schedule: Union[PulsePlan, Sequence[PulsePlan]],
                 bob: BobPolicy) -> Transcript:
    """Run an N-pulse session and record every per-pulse outcome.

    ``schedule`` is either one plan applied to every pulse or a sequence of
    exactly ``cfg.pulses`` plans (multiphoton attack pulses included).  The
    receiver draws a basis per pulse according to ``bob.basis``, measures,
    and reports through ``bob.strategy``.
    """
    n = cfg.pulses
    if isinstance(schedule, PulsePlan):
        plans = [schedule]
        plan_of_pulse = np.zeros(n, dtype=np.int64)
    else:
        plans_seq = list(schedule)
        if len(plans_seq) != n:
            raise ValueError(
                f"schedule length {len(plans_seq)} != pulses {n}")
        plans = []
        index_of = {}
        plan_of_pulse = np.empty(n, dtype=np.int64)
        for j, plan in enumerate(plans_seq):
            if plan not in index_of:
                index_of[plan] = len(plans)
                plans.append(plan)
            plan_of_pulse[j] = index_of[plan]

    # Routing probabilities per (plan, beta).
    qs = np.array([[overlap_q(p.state, bob.bases, b) for b in range(2)]
                   for p in plans])
    strategy = np.array([[[bob.strategy.entry(c0, c1, b) for b in range(2)]
                          for c1 in range(2)] for c0 in range(2)])

    k_out = np.zeros(n, dtype=np.int64)
    beta_out = np.zeros(n, dtype=np.int8)
    c0_out = np.zeros(n, dtype=np.int8)
    c1_out = np.zeros(n, dtype=np.int8)
    m_out = np.zeros(n, dtype=np.int8)

    rngs = _spawn_rngs(cfg.seed, cfg.workers)
    for idx, rng in zip(_worker_indices(n, cfg.workers), rngs):
        if idx.size == 0:
            continue
        if bob.basis == "random":
            betas = rng.integers(0, 2, idx.size).astype(np.int8)
        else:
            betas = np.full(idx.size, bob.basis, dtype=np.int8)
        beta_out[idx] = betas
        local_plan = plan_of_pulse[idx]
        for plan_id in range(len(plans)):
            for b in (0, 1):
                mask = (local_plan == plan_id) & (betas == b)
                if not mask.any():
                    continue
                sub = idx[mask]
                ks = _draw_photon_counts(rng, plans[plan_id].source, sub.size)
                c0, c1 = _sample_pair_events(rng, bob.detectors, qs[plan_id, b],
                                             b, ks)
                accept = strategy[c0.astype(int), c1.astype(int), b]
                m = rng.random(sub.size) < accept
                k_out[sub] = ks
                c0_out[sub] = c0
                c1_out[sub] = c1
                m_out[sub] = m
    return Transcript(seed=cfg.seed, workers=cfg.workers, plan=plan_of_pulse,
                      k=k_out, beta=beta_out, c0=c0_out, c1=c1_out, m=m_out)


def simulate_coinflip_attack(seed: int, runs: int, m_slots: int, s_min: float,
                             eta: float = 0.5, k_photons: int = 200) -> Estimate:
    """Empirical success rate of the bright-pulse coin-forcing attack.

    Each run plays ``m_slots`` bright pulses (k_photons each, no dark
    counts) against single-clicks-only reporting with symmetrization factor
    ``s_min``.  A slot is reported iff it single-clicks and survives the
    s_min coin; the run succeeds iff the first reported slot was measured
    in the preparation basis, which at these photon numbers happens with
    probability essentially 1 - (1 - s_min/2)^m_slots.
    """
    if runs < 1 or m_slots < 1:
        raise ValueError("runs and m_slots must be >= 1")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    det = DetectorPair.uniform(eta)
    # Matched basis: every photon routes to the encoded detector.
    p_single_match = 1.0 - (1.0 - eta) ** k_photons
    # Mismatched basis: photons split 50/50; single click needs one whole
    # arm silent, which is astronomically unlikely for bright pulses.
    mis = det_probs_fixed_k(det, 0.5, 0, k_photons)
    p_single_mis = mis.p01 + mis.p10

    match = rng.random((runs, m_slots)) < 0.5
    u = rng.random((runs, m_slots))
    reported = np.where(match, u < p_single_match * s_min,
                        u < p_single_mis * s_min)
    any_report = reported.any(axis=1)
    first = np.argmax(reported, axis=1)
    success = any_report & match[np.arange(runs), first]
    return Estimate.from_counts(int(success.sum()), runs)


def simulate_attack2_runs(seed: int, n_pulses: int, g0: float, g1: float,
                          runs: int) -> Estimate:
    """Empirical guess rate of the report-count attack.

    Each run draws a random basis, samples the report count
    Z ~ Binomial(N, g_beta) and guesses beta = 1 iff Z reaches the
    threshold where the two scaled expectations meet.
    """
    if not g1 > g0 > 0.0:
        raise ValueError(f"need g1 > g0 > 0, got g0 = {g0}, g1 = {g1}")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    delta = (g1 - g0) / (g1 + g0)
    threshold = n_pulses * g0 * (1.0 + delta)
    betas = rng.integers(0, 2, runs)
    z = rng.binomial(n_pulses, np.where(betas == 1, g1, g0))
    guesses = (z >= threshold).astype(int)
    return Estimate.from_counts(int(np.sum(guesses == betas)), runs)


def simulate_double_photon_runs(seed: int, d0: float, d1: float, eta0: float,
                                eta1: float, mu: float, n_pulses: int,
                                runs: int) -> Estimate:
    """Empirical failure rate of the two-photon tracking attack.

    Each run draws the number of two-photon first-state pulses
    N_0 ~ Binomial(N, exp(-mu) mu^2 / 8), the reported subset
    N_rep ~ Binomial(N_0, P_beta(1)), and guesses beta = 1 iff N_rep falls
    at or below the crossing threshold G.
    """
    p0, p1 = double_photon_pair_probs(d0, d1, eta0, eta1)
    g = n_pulses * math.exp(-mu) * mu ** 2 * p0 * p1 / (4.0 * (p0 + p1))
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    betas = rng.integers(0, 2, runs)
    n_two_zero = rng.binomial(n_pulses, math.exp(-mu) * mu ** 2 / 8.0, runs)
    n_rep = rng.binomial(n_two_zero, np.where(betas == 1, p1, p0))
    guesses = (n_rep <= g).astype(int)
    return Estimate.from_counts(int(np.sum(guesses != betas)), runs)
