"""Independent brute-force oracles for the closed forms under test.

Everything here recomputes probabilities from first principles -- explicit
enumeration of photon routings and Bernoulli click combinations, truncated
Poisson mixtures, numerical maximization -- deliberately avoiding the code
paths being checked.
"""

from __future__ import annotations

import math
from itertools import product

import numpy as np


def qubit_amplitudes(cos2a: float, beta: int, outcome: int):
    """Amplitudes of the basis vector |psi_{outcome, beta}> in the
    computational basis, for the basis pair parameterized by cos2a."""
    if beta == 0:
        return (1.0, 0.0) if outcome == 0 else (0.0, 1.0)
    ca = math.sqrt(cos2a)
    sa = math.sqrt(1.0 - cos2a)
    return (ca, sa) if outcome == 0 else (sa, -ca)


def overlap_from_density_matrix(bloch, cos2a: float, beta: int) -> float:
    """<psi_{0 beta}| rho |psi_{0 beta}> via an explicit 2x2 density matrix."""
    rx, ry, rz = bloch
    rho = 0.5 * np.array([[1.0 + rz, rx - 1j * ry],
                          [rx + 1j * ry, 1.0 - rz]])
    a0, a1 = qubit_amplitudes(cos2a, beta, 0)
    psi = np.array([a0, a1], dtype=complex)
    return float(np.real(np.conj(psi) @ rho @ psi))


def enumerate_pair_events(det, q: float, beta: int, k: int):
    """Click-pattern probabilities by summing over all 2^k photon routings.

    Each photon independently goes to D0 (probability q) or D1; detector i
    holding k_i photons stays silent with probability (1-d_i)(1-eta_i)^k_i.
    Returns (p00, p01, p10, p11).
    """
    eta0, eta1 = det.eta[0][beta], det.eta[1][beta]
    d0, d1 = det.d[0][beta], det.d[1][beta]
    probs = [0.0, 0.0, 0.0, 0.0]
    for routing in product((0, 1), repeat=k):
        k0 = routing.count(0)
        weight = q ** k0 * (1.0 - q) ** (k - k0)
        silent0 = (1.0 - d0) * (1.0 - eta0) ** k0
        silent1 = (1.0 - d1) * (1.0 - eta1) ** (k - k0)
        for c0 in (0, 1):
            for c1 in (0, 1):
                p0 = 1.0 - silent0 if c0 else silent0
                p1 = 1.0 - silent1 if c1 else silent1
                probs[2 * c0 + c1] += weight * p0 * p1
    return tuple(probs)


def poisson_mixture_events(det, q: float, beta: int, mu: float, k_max: int = 200):
    """Truncated Poisson mixture of the fixed-k click-pattern law."""
    from mqc.optics import det_probs_fixed_k

    probs = np.zeros(4)
    log_w = -mu
    for k in range(k_max + 1):
        weight = math.exp(log_w)
        events = det_probs_fixed_k(det, q, beta, k)
        probs += weight * np.array([events.p00, events.p01, events.p10, events.p11])
        log_w += math.log(mu) - math.log(k + 1)
    return tuple(probs)


def enumerate_quad_patterns(quad, state, k: int):
    """Full 16-pattern distribution of the four-detector analyzer by
    enumerating all 4^k photon destination assignments."""
    from mqc.setup_two import routing_probs

    q0, qp = routing_probs(quad, state)
    dest_probs = (0.5 * q0, 0.5 * (1.0 - q0), 0.5 * qp, 0.5 * (1.0 - qp))
    patterns = {pattern: 0.0 for pattern in product((0, 1), repeat=4)}
    for assignment in product(range(4), repeat=k):
        weight = 1.0
        counts = [0, 0, 0, 0]
        for dest in assignment:
            weight *= dest_probs[dest]
            counts[dest] += 1
        silent = [(1.0 - quad.d[i]) * (1.0 - quad.eta[i]) ** counts[i]
                  for i in range(4)]
        for pattern in patterns:
            term = weight
            for i, c in enumerate(pattern):
                term *= (1.0 - silent[i]) if c else silent[i]
            patterns[pattern] += term
    return patterns


def enumerate_quad_singles(quad, state, k: int):
    """Exclusive single-click probabilities (P_0, P_1, P_+, P_-)."""
    patterns = enumerate_quad_patterns(quad, state, k)
    singles = []
    for i in range(4):
        pattern = tuple(1 if j == i else 0 for j in range(4))
        singles.append(patterns[pattern])
    return tuple(singles)


def enumerate_qudit_report(eta: float, darks, k: int, routing) -> float:
    """Report probability of the N-detector analyzer by enumerating photon
    destinations; ``routing`` gives each photon's per-detector probability."""
    n_det = len(darks)
    total_silent = 0.0
    for assignment in product(range(n_det), repeat=k):
        weight = 1.0
        counts = [0] * n_det
        for dest in assignment:
            weight *= routing[dest]
            counts[dest] += 1
        silent = 1.0
        for i in range(n_det):
            silent *= (1.0 - darks[i]) * (1.0 - eta) ** counts[i]
        total_silent += weight * silent
    return 1.0 - total_silent


def gap_ii(eta_low: float, eta_up: float, delta: float, k: float) -> float:
    """Scanned objective for the report-everything leakage cap."""
    return (1.0 - eta_low) ** k - (1.0 - 2.0 * delta) * (1.0 - eta_up) ** k


def gap_iii(eta_min: float, eta_max: float, delta: float, k: float) -> float:
    """Scanned objective for the symmetrized-reporting leakage cap."""
    ratio = eta_min / eta_max
    return (1.0 - ratio + ratio * (1.0 - eta_min) ** k
            - (1.0 - 2.0 * delta) * (1.0 - eta_max) ** k)


def integer_scan_max(objective, k_max: int = 100_000):
    """Max and argmax of an objective over integer k in [0, k_max]."""
    ks = np.arange(k_max + 1, dtype=float)
    values = objective(ks)
    idx = int(np.argmax(values))
    return float(values[idx]), idx


def ternary_max(objective, lo: float = 0.0, hi: float = 1e6,
                iters: int = 300) -> float:
    """Argmax of a unimodal objective over [lo, hi] by ternary search."""
    for _ in range(iters):
        m1 = lo + (hi - lo) / 3.0
        m2 = hi - (hi - lo) / 3.0
        if objective(m1) < objective(m2):
            lo = m1
        else:
            hi = m2
    return 0.5 * (lo + hi)
