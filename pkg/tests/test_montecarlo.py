import numpy as np
import pytest

from mqc.attacks import attack1_guess_coherent
from mqc.montecarlo import (BobPolicy, Estimate, PulsePlan, ScenarioI,
                            SimConfig, estimate_event_probs,
                            estimate_quad_single_clicks, run_protocol,
                            sample_event, sample_event_quad,
                            simulate_coinflip_attack)
from mqc.optics import (BasisPair, Coherent, DetectorPair, FixedK, QubitState,
                        det_probs_fixed_k)
from mqc.reporting import make_strategy_i, make_strategy_ii, make_trivial
from mqc.setup_two import DetectorQuad, single_click_probs


class TestEstimate:
    def test_stderr_invariant(self):
        est = Estimate(0.25, 10_000)
        assert est.stderr == pytest.approx(np.sqrt(0.25 * 0.75 / 10_000))

    def test_degenerate_single_sample(self):
        assert Estimate(1.0, 1).stderr == 0.0
        assert Estimate(0.0, 1).stderr == 0.0

    def test_validation(self):
        with pytest.raises(ValueError):
            Estimate(0.5, 0)
        with pytest.raises(ValueError):
            Estimate(1.5, 10)


class TestSampleEvent:
    def test_empty_pulse_never_clicks(self):
        rng = np.random.default_rng(0)
        det = DetectorPair.uniform(0.5)
        for _ in range(100):
            assert sample_event(rng, det, 0.7, 0) == (0, 0)

    def test_fixed_seed_reproduces_sequence(self):
        det = DetectorPair.uniform(0.5, 0.01)
        rng_a, rng_b = np.random.default_rng(5), np.random.default_rng(5)
        seq_a = [sample_event(rng_a, det, 0.5, 3) for _ in range(50)]
        seq_b = [sample_event(rng_b, det, 0.5, 3) for _ in range(50)]
        assert seq_a == seq_b

    def test_quad_empty_pulse(self):
        rng = np.random.default_rng(1)
        quad = DetectorQuad.uniform(0.4)
        assert sample_event_quad(rng, quad, QubitState.ket0(), 0) == (0, 0, 0, 0)

    def test_quad_fixed_seed_determinism(self):
        quad = DetectorQuad.uniform(0.4, 0.01)
        state = QubitState.ket_plus()
        rng_a, rng_b = np.random.default_rng(9), np.random.default_rng(9)
        seq_a = [sample_event_quad(rng_a, quad, state, 4) for _ in range(50)]
        seq_b = [sample_event_quad(rng_b, quad, state, 4) for _ in range(50)]
        assert seq_a == seq_b


class TestEstimateEventProbs:
    def test_matches_fixed_k_law(self):
        det = DetectorPair.uniform(0.5)
        cfg = SimConfig(seed=42, pulses=1_000_000,
                        scenario=ScenarioI(det, BasisPair.bb84(),
                                           QubitState.ket0(), FixedK(2), 0))
        estimates = estimate_event_probs(cfg)
        truth = det_probs_fixed_k(det, 1.0, 0, 2)
        for est, want in zip(estimates, (truth.p00, truth.p01, truth.p10,
                                         truth.p11)):
            assert est.agrees_with(want)

    def test_matches_coherent_law(self):
        det = DetectorPair.uniform(0.12)
        cfg = SimConfig(seed=43, pulses=4_000_000,
                        scenario=ScenarioI(det, BasisPair.bb84(),
                                           QubitState.ket0(), Coherent(1.0), 0))
        estimates = estimate_event_probs(cfg)
        assert estimates[0].agrees_with(np.exp(-0.12))

    def test_deterministic_given_seed_and_workers(self):
        det = DetectorPair.uniform(0.3, 0.01)
        scenario = ScenarioI(det, BasisPair.bb84(), QubitState.ket_plus(),
                             Coherent(2.0), 1)
        a = estimate_event_probs(SimConfig(7, 100_000, 4, scenario))
        b = estimate_event_probs(SimConfig(7, 100_000, 4, scenario))
        assert [e.value for e in a] == [e.value for e in b]

    def test_seed_changes_estimates_within_tolerance(self):
        det = DetectorPair.uniform(0.3)
        scenario = ScenarioI(det, BasisPair.bb84(), QubitState.ket0(),
                             FixedK(1), 0)
        truth = det_probs_fixed_k(det, 1.0, 0, 1)
        values = []
        for seed in (1, 2):
            estimates = estimate_event_probs(SimConfig(seed, 500_000,
                                                       scenario=scenario))
            values.append(estimates[0].value)
            for est, want in zip(estimates, (truth.p00, truth.p01, truth.p10,
                                             truth.p11)):
                assert est.agrees_with(want)
        assert values[0] != values[1]

    def test_worker_count_does_not_bias(self):
        det = DetectorPair.uniform(0.4, 0.02)
        scenario = ScenarioI(det, BasisPair.bb84(), QubitState.ket0(),
                             FixedK(3), 1)
        truth = det_probs_fixed_k(det, 0.5, 1, 3)
        for workers in (1, 8):
            estimates = estimate_event_probs(SimConfig(11, 500_000, workers,
                                                       scenario))
            for est, want in zip(estimates, (truth.p00, truth.p01, truth.p10,
                                             truth.p11)):
                assert est.agrees_with(want)


class TestQuadEstimates:
    def test_matches_single_click_law(self):
        quad = DetectorQuad((0.5, 0.4, 0.45, 0.55), (0.01, 0.0, 0.005, 0.02))
        state = QubitState(0.6, 0.0, 0.8)
        truth = single_click_probs(quad, state, 3)
        cfg = SimConfig(seed=13, pulses=1_000_000)
        for est, want in zip(estimate_quad_single_clicks(cfg, quad, state, 3),
                             truth):
            assert est.agrees_with(want)

    def test_conditional_guess_rate_matches_mpaii(self):
        from mqc.setup_two import mpaii_guess
        quad = DetectorQuad.uniform(0.3, 1e-5)
        k = 20
        cfg = SimConfig(seed=17, pulses=1_000_000)
        singles = estimate_quad_single_clicks(cfg, quad, QubitState.ket0(), k)
        reported = sum(e.value for e in singles)
        conditional = Estimate((singles[0].value + singles[1].value) / reported,
                               int(round(reported * cfg.pulses)))
        assert conditional.agrees_with(mpaii_guess(quad, k))


class TestRunProtocol:
    def test_honest_trivial_strategy_reports_everything(self):
        det = DetectorPair.uniform(0.12)
        bob = BobPolicy(make_trivial(1.0), BasisPair.bb84(), det)
        plan = PulsePlan(Coherent(0.1), QubitState.ket0())
        transcript = run_protocol(SimConfig(3, 10_000), plan, bob)
        assert transcript.summary()["m1_fraction"] == 1.0

    def test_fixed_seed_bit_identical(self):
        det = DetectorPair.uniform(0.12, 1e-4)
        bob = BobPolicy(make_strategy_ii(), BasisPair.bb84(), det)
        plan = PulsePlan(Coherent(1.0), QubitState.ket0())
        t1 = run_protocol(SimConfig(19, 50_000, 4), plan, bob)
        t2 = run_protocol(SimConfig(19, 50_000, 4), plan, bob)
        for name in ("k", "beta", "c0", "c1", "m"):
            assert np.array_equal(getattr(t1, name), getattr(t2, name))

    def test_attack1_schedule_matches_closed_form(self):
        eta, mu = 0.12, 20.0
        det = DetectorPair.uniform(eta)
        bob = BobPolicy(make_strategy_i(), BasisPair.bb84(), det)
        plan = PulsePlan(Coherent(mu), QubitState.ket0())
        transcript = run_protocol(SimConfig(23, 1_000_000), plan, bob)
        guessed_zero = transcript.m == 1
        success = np.where(guessed_zero, transcript.beta == 0,
                           transcript.beta == 1)
        est = Estimate.from_counts(int(success.sum()), transcript.pulses)
        assert est.agrees_with(attack1_guess_coherent(eta, mu))

    def test_heterogeneous_schedule(self):
        det = DetectorPair.uniform(0.5)
        bob = BobPolicy(make_strategy_ii(), BasisPair.bb84(), det, basis=0)
        schedule = [PulsePlan(FixedK(0), QubitState.ket0()),
                    PulsePlan(FixedK(50), QubitState.ket0())] * 500
        transcript = run_protocol(SimConfig(29, 1000), schedule, bob)
        # Empty pulses never report (no darks); bright pulses always do.
        assert not transcript.m[transcript.plan == 0].any()
        assert transcript.m[transcript.plan == 1].all()

    def test_schedule_length_checked(self):
        det = DetectorPair.uniform(0.5)
        bob = BobPolicy(make_strategy_ii(), BasisPair.bb84(), det)
        with pytest.raises(ValueError):
            run_protocol(SimConfig(1, 10),
                         [PulsePlan(FixedK(1), QubitState.ket0())] * 3, bob)

    def test_transcript_rows(self):
        det = DetectorPair.uniform(0.5)
        bob = BobPolicy(make_strategy_ii(), BasisPair.bb84(), det)
        transcript = run_protocol(SimConfig(31, 5),
                                  PulsePlan(FixedK(1), QubitState.ket0()), bob)
        rows = list(transcript.iter_rows())
        assert len(rows) == 5
        assert rows[0][0] == 0 and len(rows[0]) == 7


class TestCoinflipHarness:
    def test_matches_closed_form_bound(self):
        est = simulate_coinflip_attack(seed=37, runs=20_000, m_slots=5,
                                       s_min=1.0)
        assert est.agrees_with(1 - 0.5 ** 5)

    def test_symmetrization_slows_the_attack(self):
        strong = simulate_coinflip_attack(seed=41, runs=5000, m_slots=3,
                                          s_min=1.0)
        weak = simulate_coinflip_attack(seed=41, runs=5000, m_slots=3,
                                        s_min=0.4)
        assert weak.value < strong.value
