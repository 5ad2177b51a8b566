"""Detection statistics, reporting strategies, multiphoton attacks and
security bounds for threshold-detector polarization measurements, with a
Monte Carlo engine cross-checking every closed form."""

from .optics import (BasisPair, Coherent, DetectorPair, EventDistribution,
                     FixedK, PulseSpec, QubitState, det_probs_coherent,
                     det_probs_fixed_k, no_click_prob_general, overlap_q,
                     qudit_report_prob)
from .reporting import (FeasibilityVerdict, ReportingStrategy, make_strategy_i,
                        make_strategy_ii, make_strategy_iii, make_symmetrized,
                        make_trivial, report_prob,
                        strategy_iii_single_photon_bound, trivial_feasibility)
from .bounds import (BoundResult, EfficiencyEnvelope, bound_b_ii, bound_b_iii,
                     guess_bound_single, mixed_pulse_bound, multi_pulse_bound)
from .attacks import (AttackOutcome, attack1_guess_coherent,
                      attack1_guess_general, attack2_chernoff,
                      coinflip_attack_success, coinflip_double_click_abort,
                      double_photon_attack)
from .setup_two import (DetectorQuad, QuadReport, attack2_setup2_guess,
                        mpaii_guess, rsdcii_report_probs, single_click_probs,
                        slii_single_photon_gap, slii_strategy)
from .theorem import (ConstraintSystem, SolutionClass, build_constraints,
                      classify, solution_space)
from .montecarlo import (BobPolicy, Estimate, PulsePlan, ScenarioI, SimConfig,
                         Transcript, estimate_event_probs, run_protocol,
                         sample_event, sample_event_quad)

__version__ = "0.1.0"
