import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mqc.optics import (BasisPair, Coherent, DetectorPair, EventDistribution,
                        FixedK, QubitState, det_probs_coherent,
                        det_probs_fixed_k, no_click_prob_general, overlap_q,
                        qudit_report_prob)
from oracles import (enumerate_pair_events, enumerate_qudit_report,
                     overlap_from_density_matrix, poisson_mixture_events)


def random_detector_pair(rng, d_max=0.05):
    eta = rng.uniform(0.02, 0.98, size=(2, 2))
    d = rng.uniform(0.0, d_max, size=(2, 2))
    return DetectorPair(tuple(map(tuple, eta)), tuple(map(tuple, d)))


class TestTypes:
    def test_qubit_state_rejects_outside_bloch_ball(self):
        with pytest.raises(ValueError):
            QubitState(1.0, 1.0, 1.0)

    def test_basis_pair_range(self):
        with pytest.raises(ValueError):
            BasisPair(0.0)
        with pytest.raises(ValueError):
            BasisPair(1.2)
        assert BasisPair(1.0).is_degenerate
        assert not BasisPair.bb84().is_degenerate

    def test_detector_pair_validation(self):
        with pytest.raises(ValueError):
            DetectorPair.uniform(0.0)
        with pytest.raises(ValueError):
            DetectorPair.uniform(1.0)
        with pytest.raises(ValueError):
            DetectorPair.uniform(0.5, d=1.0)

    def test_pulse_specs(self):
        with pytest.raises(ValueError):
            FixedK(-1)
        with pytest.raises(ValueError):
            Coherent(0.0)

    def test_event_distribution_normalization_enforced(self):
        with pytest.raises(ValueError):
            EventDistribution(0.5, 0.5, 0.5, 0.5)
        with pytest.raises(ValueError):
            EventDistribution(1.5, -0.5, 0.0, 0.0)


class TestOverlap:
    def test_bb84_reference_state(self):
        state = QubitState.ket0()
        bases = BasisPair.bb84()
        assert overlap_q(state, bases, 0) == 1.0
        assert overlap_q(state, bases, 1) == 0.5

    def test_orthogonal_state(self):
        assert overlap_q(QubitState.ket1(), BasisPair(0.8), 0) == 0.0

    def test_tilted_basis_against_density_matrix(self):
        # |+> state against cos2a = 0.8: amplitude oracle gives 0.9.
        q = overlap_q(QubitState.ket_plus(), BasisPair(0.8), 1)
        assert q == pytest.approx(0.9, abs=1e-12)
        oracle = overlap_from_density_matrix((1.0, 0.0, 0.0), 0.8, 1)
        assert q == pytest.approx(oracle, abs=1e-12)

    def test_random_states_against_density_matrix(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            vec = rng.normal(size=3)
            vec *= rng.uniform(0, 1) / np.linalg.norm(vec)
            state = QubitState(*vec)
            cos2a = rng.uniform(0.05, 1.0)
            for beta in (0, 1):
                oracle = overlap_from_density_matrix(vec, cos2a, beta)
                assert overlap_q(state, BasisPair(cos2a), beta) == pytest.approx(
                    oracle, abs=1e-12)


class TestFixedK:
    def test_empty_pulse_no_darks(self):
        det = DetectorPair.uniform(0.4)
        events = det_probs_fixed_k(det, 0.7, 0, 0)
        assert (events.p00, events.p01, events.p10, events.p11) == (1.0, 0.0, 0.0, 0.0)

    def test_single_photon_half_efficiency(self):
        det = DetectorPair.uniform(0.5)
        events = det_probs_fixed_k(det, 1.0, 0, 1)
        assert events.p10 == pytest.approx(0.5, abs=1e-15)
        assert events.p00 == pytest.approx(0.5, abs=1e-15)
        assert events.p01 == 0.0
        assert events.p11 == 0.0

    def test_matches_routing_enumeration(self):
        rng = np.random.default_rng(11)
        for _ in range(60):
            det = random_detector_pair(rng)
            q = rng.uniform(0, 1)
            beta = int(rng.integers(0, 2))
            k = int(rng.integers(0, 7))
            events = det_probs_fixed_k(det, q, beta, k)
            oracle = enumerate_pair_events(det, q, beta, k)
            for got, want in zip(
                    (events.p00, events.p01, events.p10, events.p11), oracle):
                assert got == pytest.approx(want, abs=1e-12)

    def test_normalization_over_random_draws(self):
        rng = np.random.default_rng(13)
        for _ in range(1000):
            det = random_detector_pair(rng)
            events = det_probs_fixed_k(det, rng.uniform(0, 1),
                                       int(rng.integers(0, 2)),
                                       int(rng.integers(0, 51)))
            total = events.p00 + events.p01 + events.p10 + events.p11
            assert abs(total - 1.0) < 1e-12

    def test_equal_efficiency_no_click_is_basis_free(self):
        # With eta[i][beta] = eta and d[i][beta] = d_i the no-click
        # probability cannot depend on the basis.
        rng = np.random.default_rng(17)
        for _ in range(1000):
            eta = rng.uniform(0.05, 0.95)
            d0, d1 = rng.uniform(0, 0.1, size=2)
            det = DetectorPair(((eta, eta), (eta, eta)), ((d0, d0), (d1, d1)))
            k = int(rng.integers(0, 11))
            q0, q1 = rng.uniform(0, 1, size=2)
            p_beta0 = det_probs_fixed_k(det, q0, 0, k).p00
            p_beta1 = det_probs_fixed_k(det, q1, 1, k).p00
            assert abs(p_beta0 - p_beta1) < 1e-12


class TestCoherent:
    def test_no_click_closed_form(self):
        det = DetectorPair.uniform(0.12)
        events = det_probs_coherent(det, 1.0, 0, 10.0)
        assert events.p00 == pytest.approx(math.exp(-1.2), abs=1e-15)

    def test_conjugate_basis_single_clicks(self):
        # q = 1/2, equal eta, no darks: both single-click probabilities are
        # exp(-mu eta / 2) - exp(-mu eta).
        eta, mu = 0.12, 10.0
        det = DetectorPair.uniform(eta)
        events = det_probs_coherent(det, 0.5, 1, mu)
        want = math.exp(-mu * eta / 2) - math.exp(-mu * eta)
        assert events.p01 == pytest.approx(want, abs=1e-15)
        assert events.p10 == pytest.approx(want, abs=1e-15)

    def test_vacuum_limit(self):
        det = DetectorPair.uniform(0.3)
        events = det_probs_coherent(det, 0.4, 0, 1e-12)
        assert events.p00 == pytest.approx(1.0, abs=1e-11)

    def test_matches_truncated_poisson_mixture(self):
        rng = np.random.default_rng(19)
        for mu in (0.05, 0.5, 2.0, 7.5, 20.0):
            det = random_detector_pair(rng)
            q = rng.uniform(0, 1)
            beta = int(rng.integers(0, 2))
            events = det_probs_coherent(det, q, beta, mu)
            oracle = poisson_mixture_events(det, q, beta, mu)
            for got, want in zip(
                    (events.p00, events.p01, events.p10, events.p11), oracle):
                assert got == pytest.approx(want, abs=1e-10)


class TestNoClickGeneral:
    def test_degenerate_routing(self):
        det = DetectorPair.basis_independent(0.3, 0.6)
        routing = [0.0, 0.0, 0.0, 1.0]
        assert no_click_prob_general(det, routing, 0, 3) == pytest.approx(
            (1 - 0.3) ** 3, abs=1e-15)

    def test_equal_efficiencies_routing_independent(self):
        det = DetectorPair.uniform(0.4)
        rng = np.random.default_rng(23)
        for _ in range(50):
            k = int(rng.integers(0, 12))
            routing = rng.dirichlet(np.ones(k + 1))
            got = no_click_prob_general(det, routing, 1, k)
            assert got == pytest.approx((1 - 0.4) ** k, abs=1e-12)

    def test_matches_exhaustive_sum(self):
        det = DetectorPair.basis_independent(0.25, 0.65, 0.01, 0.02)
        routing = [0.1, 0.2, 0.3, 0.4]
        want = sum(
            routing[k0] * (1 - 0.01) * (1 - 0.02)
            * (1 - 0.25) ** k0 * (1 - 0.65) ** (3 - k0)
            for k0 in range(4))
        assert no_click_prob_general(det, routing, 0, 3) == pytest.approx(
            want, abs=1e-15)

    def test_rejects_unnormalized_routing(self):
        det = DetectorPair.uniform(0.4)
        with pytest.raises(ValueError):
            no_click_prob_general(det, [0.5, 0.4], 0, 1)

    def test_sandwich_bounds(self):
        rng = np.random.default_rng(29)
        for _ in range(10_000):
            det = random_detector_pair(rng, d_max=0.2)
            beta = int(rng.integers(0, 2))
            k = int(rng.integers(0, 31))
            routing = rng.dirichlet(np.ones(k + 1))
            p = no_click_prob_general(det, routing, beta, k)
            eta_low = min(det.eta[0][beta], det.eta[1][beta])
            eta_up = max(det.eta[0][beta], det.eta[1][beta])
            delta = max(det.d[0][beta], det.d[1][beta])
            assert p <= (1 - eta_low) ** k + 1e-12
            assert p >= (1 - 2 * delta) * (1 - eta_up) ** k - 1e-12


class TestQuditReport:
    def test_empty_pulse(self):
        assert qudit_report_prob(0.5, [0.0, 0.0, 0.0], 0) == 0.0

    def test_single_photon_two_detectors(self):
        assert qudit_report_prob(0.5, [0.0, 0.0], 1) == pytest.approx(0.5, abs=1e-15)

    def test_matches_bernoulli_enumeration(self):
        eta, darks, k = 0.3, (0.01, 0.02, 0.03), 2
        got = qudit_report_prob(eta, darks, k)
        rng = np.random.default_rng(31)
        routing = rng.dirichlet(np.ones(3))
        oracle = enumerate_qudit_report(eta, darks, k, routing)
        assert got == pytest.approx(oracle, abs=1e-12)
        # Equal efficiencies: any other routing gives the same answer.
        other = enumerate_qudit_report(eta, darks, k, rng.dirichlet(np.ones(3)))
        assert got == pytest.approx(other, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(eta=st.floats(0.01, 0.99), d=st.floats(0.0, 0.3),
       q=st.floats(0.0, 1.0), k=st.integers(0, 50),
       beta=st.integers(0, 1))
def test_fixed_k_distribution_is_normalized(eta, d, q, k, beta):
    events = det_probs_fixed_k(DetectorPair.uniform(eta, d), q, beta, k)
    total = events.p00 + events.p01 + events.p10 + events.p11
    assert abs(total - 1.0) < 1e-12
    for p in (events.p00, events.p01, events.p10, events.p11):
        assert 0.0 <= p <= 1.0
