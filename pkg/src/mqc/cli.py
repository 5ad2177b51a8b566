"""Command-line front end.

Sweep commands emit CSV (comma-delimited, '.' decimal, header row, LF line
endings); scalar reports emit JSON.  Every command is deterministic given
its full flag set, including ``--seed`` (default: the ``MQC_SEED``
environment variable, else 12345).  Passing ``--plot [PATH]`` additionally
renders the matching matplotlib figure next to the delimited output.

Exit status is 0 unless a precondition or scenario-schema violation was
reported, in which case it is 2 and the offending parameter is named on
stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from typing import List, Optional, Sequence

import numpy as np

from . import attacks, bounds, setup_two, theorem
from .montecarlo import (BobPolicy, Estimate, PulsePlan, ScenarioI, SimConfig,
                         estimate_event_probs, run_protocol)
from .optics import (BasisPair, Coherent, DetectorPair, FixedK, QubitState,
                     det_probs_coherent, det_probs_fixed_k, overlap_q)
from .scenario import Scenario, ScenarioError, load_scenario

__all__ = ["main"]

DEFAULT_SEED_ENV = "MQC_SEED"

# Stable, versioned CSV headers (pinned by a golden-file test).
PROBS_HEADER = ["beta", "p00", "p01", "p10", "p11"]
PROBS_MC_HEADER = ["mc_p00", "se_p00", "mc_p01", "se_p01",
                   "mc_p10", "se_p10", "mc_p11", "se_p11"]
ATTACK1_HEADER = ["mu", "p_guess"]
ATTACK1_MC_HEADER = ["mc_estimate", "mc_stderr"]
MPAII_HEADER = ["k", "p_guess"]
SETUP2_ATTACK2_HEADER = ["k", "p_guess"]
BOUNDS_HEADER = ["eta", "delta_eff", "b_ii", "b_iii"]
BOUNDS_COMPOSE_HEADER = ["composed_b_ii", "composed_b_ii_vacuous",
                         "composed_b_iii", "composed_b_iii_vacuous"]
THEOREM_HEADER = ["eta0", "eta1", "cos2a", "dim", "class", "near_degenerate"]
PROTOCOL_HEADER = ["pulse", "plan", "k", "beta", "c0", "c1", "m"]


def _default_seed() -> int:
    return int(os.environ.get(DEFAULT_SEED_ENV, "12345"))


def _write_csv(path: Optional[str], header: Sequence[str],
               rows: Sequence[dict]) -> None:
    handle = open(path, "w", newline="", encoding="utf-8") if path else sys.stdout
    try:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([row[key] for key in header])
    finally:
        if path:
            handle.close()


def _write_json(path: Optional[str], payload: dict) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True)
    if path:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text + "\n")
    else:
        print(text)


def _plot_path(args) -> Optional[str]:
    if args.plot is None:
        return None
    if args.plot != "auto":
        return args.plot
    if not args.output:
        raise ValueError("--plot without a path needs -o/--output to derive one")
    stem, _dot, _ext = args.output.rpartition(".")
    return (stem or args.output) + ".png"


def _detector_pair(args, scenario: Optional[Scenario]) -> DetectorPair:
    if scenario is not None and isinstance(scenario.detectors, DetectorPair):
        return scenario.detectors
    return DetectorPair.uniform(args.eta, args.d)


def _state(args, scenario: Optional[Scenario]) -> QubitState:
    if scenario is not None and scenario.state is not None:
        return scenario.state
    return QubitState(args.rx, args.ry, args.rz)


def _bases(args, scenario: Optional[Scenario]) -> BasisPair:
    if scenario is not None and scenario.bases is not None:
        return scenario.bases
    return BasisPair(args.cos2a)


def _mu_grid(args) -> np.ndarray:
    return np.linspace(args.mu_min, args.mu_max, args.points)


def cmd_probs(args) -> int:
    scenario = load_scenario(args.scenario) if args.scenario else None
    det = _detector_pair(args, scenario)
    state = _state(args, scenario)
    bases = _bases(args, scenario)
    betas = (0, 1) if args.beta == "both" else (int(args.beta),)

    sweep_k = args.k_max is not None
    x_name = "k" if sweep_k else "mu"
    if sweep_k:
        xs = list(range(args.k_min, args.k_max + 1))
    else:
        xs = [float(x) for x in _mu_grid(args)]

    rows: List[dict] = []
    for x in xs:
        for beta in betas:
            q = overlap_q(state, bases, beta)
            if sweep_k:
                events = det_probs_fixed_k(det, q, beta, x)
            elif x == 0.0:
                events = det_probs_fixed_k(det, q, beta, 0)
            else:
                events = det_probs_coherent(det, q, beta, x)
            row = {x_name: x, "beta": beta, "p00": events.p00,
                   "p01": events.p01, "p10": events.p10, "p11": events.p11}
            if args.mc:
                source = FixedK(x) if sweep_k else (
                    FixedK(0) if x == 0.0 else Coherent(x))
                cfg = SimConfig(seed=args.seed, pulses=args.pulses,
                                workers=args.workers,
                                scenario=ScenarioI(det, bases, state, source, beta))
                for est, name in zip(estimate_event_probs(cfg),
                                     ("p00", "p01", "p10", "p11")):
                    row[f"mc_{name}"] = est.value
                    row[f"se_{name}"] = est.stderr
            rows.append(row)

    header = [x_name] + PROBS_HEADER + (PROBS_MC_HEADER if args.mc else [])
    _write_csv(args.output, header, rows)
    plot = _plot_path(args)
    if plot:
        from . import plots
        plots.plot_event_probs(rows, x_name, plot)
    return 0


def cmd_attack1(args) -> int:
    rows: List[dict] = []
    for mu in _mu_grid(args):
        row = {"mu": float(mu),
               "p_guess": attacks.attack1_guess_coherent(args.eta, float(mu))}
        if args.mc:
            est = _attack1_mc_estimate(args.seed, args.eta, float(mu),
                                       args.pulses, args.workers)
            row["mc_estimate"] = est.value
            row["mc_stderr"] = est.stderr
        rows.append(row)
    header = ATTACK1_HEADER + (ATTACK1_MC_HEADER if args.mc else [])
    _write_csv(args.output, header, rows)
    plot = _plot_path(args)
    if plot:
        from . import plots
        plots.plot_guess_curve(rows, "mu", "p_guess", plot)
    return 0


def _attack1_mc_estimate(seed: int, eta: float, mu: float, pulses: int,
                         workers: int) -> Estimate:
    """Guess-rate estimate for the bright-pulse attack: random basis per
    pulse, single-clicks-only reporting, guess basis 0 on a report."""
    from .reporting import make_strategy_i
    det = DetectorPair.uniform(eta)
    plan = PulsePlan(source=Coherent(mu) if mu > 0 else FixedK(0),
                     state=QubitState.ket0())
    bob = BobPolicy(strategy=make_strategy_i(), bases=BasisPair.bb84(),
                    detectors=det, basis="random")
    transcript = run_protocol(SimConfig(seed=seed, pulses=pulses,
                                        workers=workers), plan, bob)
    guessed_zero = transcript.m == 1
    success = np.where(guessed_zero, transcript.beta == 0, transcript.beta == 1)
    return Estimate.from_counts(int(success.sum()), transcript.pulses)


def cmd_attack2(args) -> int:
    outcome = attacks.attack2_chernoff(args.pulses_n, args.fraction,
                                       tuple(args.p_attack),
                                       tuple(args.p_protocol))
    payload = dict(outcome.intermediates)
    payload["guess_prob_lower_bound"] = outcome.guess_prob
    payload["fail_prob_bound"] = outcome.fail_prob_bound
    _write_json(args.output, payload)
    return 0


def cmd_doublephoton(args) -> int:
    outcome = attacks.double_photon_attack(args.d0, args.d1, args.eta0,
                                           args.eta1, args.mu, args.pulses_n)
    payload = dict(outcome.intermediates)
    payload["guess_prob_lower_bound"] = outcome.guess_prob
    payload["fail_prob_bound"] = outcome.fail_prob_bound
    _write_json(args.output, payload)
    return 0


def cmd_coinflip(args) -> int:
    success = attacks.coinflip_attack_success(args.s_min, args.m)
    payload = {
        "success_lower_bound": success,
        "failure_term": 1.0 - success,
        "double_click_abort_lower_bound":
            attacks.coinflip_double_click_abort(args.s_min, args.m),
        "double_click_success_ceiling":
            attacks.coinflip_double_click_success_ceiling(args.s_min),
    }
    _write_json(args.output, payload)
    return 0


def cmd_mpaii(args) -> int:
    quad = setup_two.DetectorQuad.uniform(args.eta, args.d)
    rows = [{"k": k, "p_guess": setup_two.mpaii_guess(quad, k)}
            for k in range(args.k_max + 1)]
    _write_csv(args.output, MPAII_HEADER, rows)
    plot = _plot_path(args)
    if plot:
        from . import plots
        plots.plot_guess_curve(rows, "k", "p_guess", plot)
    return 0


def cmd_setup2_attack2(args) -> int:
    rows = [{"k": k, "p_guess": setup_two.attack2_setup2_guess(
        args.a_dark, args.eta0, args.etaplus, k)}
        for k in range(args.k_max + 1)]
    _write_csv(args.output, SETUP2_ATTACK2_HEADER, rows)
    plot = _plot_path(args)
    if plot:
        from . import plots
        plots.plot_guess_curve(rows, "k", "p_guess", plot)
    return 0


def cmd_bounds(args) -> int:
    rows: List[dict] = []
    compose = args.compose_n is not None
    for eta in args.eta:
        for delta_eff in np.linspace(0.0, args.deff_max, args.points):
            delta_eff = float(delta_eff)
            env = bounds.EfficiencyEnvelope(eta - delta_eff, eta + delta_eff,
                                            args.delta)
            b2 = bounds.bound_b_ii(env)
            b3 = bounds.bound_b_iii(eta - delta_eff, eta + delta_eff, args.delta)
            row = {"eta": eta, "delta_eff": delta_eff, "b_ii": b2, "b_iii": b3}
            if compose:
                for key, value in (("b_ii", b2), ("b_iii", b3)):
                    composed = bounds.multi_pulse_bound(
                        [min(value, 1.0)] * int(args.compose_n))
                    row[f"composed_{key}"] = composed.clamped
                    row[f"composed_{key}_vacuous"] = int(composed.vacuous)
            rows.append(row)
    header = BOUNDS_HEADER + (BOUNDS_COMPOSE_HEADER if compose else [])
    _write_csv(args.output, header, rows)
    plot = _plot_path(args)
    if plot:
        from . import plots
        plots.plot_bounds(rows, plot)
    return 0


def cmd_theorem(args) -> int:
    etas = np.linspace(args.eta_min, args.eta_max, args.eta_points)
    cos2as = np.linspace(args.cos2a_min, args.cos2a_max, args.cos2a_points)
    rows = [
        {"eta0": e0, "eta1": e1, "cos2a": c, "dim": dim, "class": tag,
         "near_degenerate": int(near)}
        for e0, e1, c, dim, tag, near in theorem.sweep(etas, etas, cos2as)
    ]
    _write_csv(args.output, THEOREM_HEADER, rows)
    return 0


def cmd_protocol(args) -> int:
    scenario = load_scenario(args.scenario)
    if scenario.setup != "I":
        raise ScenarioError("protocol runs need a setup-I scenario")
    for name, value in (("detectors", scenario.detectors),
                        ("bases", scenario.bases), ("state", scenario.state),
                        ("source", scenario.source),
                        ("strategy", scenario.strategy),
                        ("protocol.pulses", scenario.pulses)):
        if value is None:
            raise ScenarioError(f"protocol runs need scenario key {name!r}")
    seed = scenario.seed if scenario.seed is not None else args.seed
    policy = scenario.basis_policy if scenario.basis_policy is not None else "random"
    cfg = SimConfig(seed=seed, pulses=scenario.pulses, workers=scenario.workers)
    bob = BobPolicy(strategy=scenario.strategy, bases=scenario.bases,
                    detectors=scenario.detectors, basis=policy)
    transcript = run_protocol(cfg, PulsePlan(scenario.source, scenario.state), bob)

    rows = [dict(zip(PROTOCOL_HEADER, row)) for row in transcript.iter_rows()]
    _write_csv(args.out_prefix + "_pulses.csv", PROTOCOL_HEADER, rows)
    _write_json(args.out_prefix + "_summary.json", transcript.summary())
    return 0


def _add_common_output(parser: argparse.ArgumentParser, plot: bool = True) -> None:
    parser.add_argument("-o", "--output", default=None,
                        help="output file (default: stdout)")
    if plot:
        parser.add_argument("--plot", nargs="?", const="auto", default=None,
                            metavar="PNG",
                            help="also render the figure (default path: "
                                 "output with .png suffix)")


def _add_mc_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--mc", action="store_true",
                        help="add Monte Carlo estimate columns")
    parser.add_argument("--pulses", type=int, default=1_000_000,
                        help="Monte Carlo pulses per point")
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--seed", type=int, default=_default_seed())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mqc",
        description="Detection statistics, reporting strategies, multiphoton "
                    "attacks and security bounds for threshold-detector "
                    "measurements, with a Monte Carlo cross-check.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("probs", help="detection-event probabilities over a "
                                     "mu or k sweep")
    p.add_argument("--scenario", help="scenario JSON file (overrides flags)")
    p.add_argument("--eta", type=float, default=0.12)
    p.add_argument("--d", type=float, default=0.0)
    p.add_argument("--cos2a", type=float, default=0.5)
    p.add_argument("--rx", type=float, default=0.0)
    p.add_argument("--ry", type=float, default=0.0)
    p.add_argument("--rz", type=float, default=1.0)
    p.add_argument("--beta", choices=["0", "1", "both"], default="both")
    p.add_argument("--mu-min", type=float, default=0.0)
    p.add_argument("--mu-max", type=float, default=30.0)
    p.add_argument("--points", type=int, default=31)
    p.add_argument("--k-min", type=int, default=0)
    p.add_argument("--k-max", type=int, default=None,
                   help="sweep photon number instead of mu")
    _add_mc_flags(p)
    _add_common_output(p)
    p.set_defaults(func=cmd_probs)

    atk = sub.add_parser("attack", help="attack calculators")
    atk_sub = atk.add_subparsers(dest="attack_command", required=True)

    p = atk_sub.add_parser("attack1", help="bright-pulse attack on "
                                           "single-clicks-only reporting")
    p.add_argument("--eta", type=float, default=0.12)
    p.add_argument("--mu-min", type=float, default=0.0)
    p.add_argument("--mu-max", type=float, default=30.0)
    p.add_argument("--points", type=int, default=31)
    _add_mc_flags(p)
    _add_common_output(p)
    p.set_defaults(func=cmd_attack1)

    p = atk_sub.add_parser("attack2", help="report-count attack with "
                                           "Chernoff guarantee")
    p.add_argument("--pulses-n", type=float, required=True)
    p.add_argument("--fraction", type=float, required=True,
                   help="fraction of attack pulses")
    p.add_argument("--p-attack", type=float, nargs=2, required=True,
                   metavar=("P0", "P1"))
    p.add_argument("--p-protocol", type=float, nargs=2, required=True,
                   metavar=("P0", "P1"))
    _add_common_output(p, plot=False)
    p.set_defaults(func=cmd_attack2)

    p = atk_sub.add_parser("doublephoton", help="two-photon tracking attack")
    p.add_argument("--d0", type=float, default=1e-5)
    p.add_argument("--d1", type=float, default=1e-5)
    p.add_argument("--eta0", type=float, default=0.12)
    p.add_argument("--eta1", type=float, default=0.08)
    p.add_argument("--mu", type=float, default=0.05)
    p.add_argument("--pulses-n", type=float, default=2e7)
    _add_common_output(p, plot=False)
    p.set_defaults(func=cmd_doublephoton)

    p = atk_sub.add_parser("coinflip", help="bright-pulse coin-forcing attack")
    p.add_argument("--s-min", type=float, required=True)
    p.add_argument("--m", type=int, required=True,
                   help="number of bright pulses")
    _add_common_output(p, plot=False)
    p.set_defaults(func=cmd_coinflip)

    p = atk_sub.add_parser("mpaii", help="four-detector single-click attack")
    p.add_argument("--eta", type=float, default=0.1)
    p.add_argument("--d", type=float, default=1e-5)
    p.add_argument("--k-max", type=int, default=150)
    _add_common_output(p)
    p.set_defaults(func=cmd_mpaii)

    p = atk_sub.add_parser("setup2-attack2", help="four-detector "
                                                  "efficiency-mismatch attack")
    p.add_argument("--a-dark", type=float, default=(1 - 1e-5) ** 2,
                   help="(1-d0)(1-d1) = (1-d+)(1-d-)")
    p.add_argument("--eta0", type=float, required=True)
    p.add_argument("--etaplus", type=float, required=True)
    p.add_argument("--k-max", type=int, default=500)
    _add_common_output(p)
    p.set_defaults(func=cmd_setup2_attack2)

    p = sub.add_parser("bounds", help="leakage caps over an efficiency-spread "
                                      "sweep")
    p.add_argument("--delta", type=float, default=1e-5)
    p.add_argument("--eta", type=float, nargs="+",
                   default=[0.1, 0.3, 0.5, 0.7, 0.9])
    p.add_argument("--deff-max", type=float, default=0.01)
    p.add_argument("--points", type=int, default=21)
    p.add_argument("--compose-n", type=float, default=None,
                   help="also compose the per-pulse bound over N pulses")
    _add_common_output(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("theorem", help="classify the leak-free strategy space "
                                       "over a parameter grid")
    p.add_argument("--eta-min", type=float, default=0.05)
    p.add_argument("--eta-max", type=float, default=0.95)
    p.add_argument("--eta-points", type=int, default=10)
    p.add_argument("--cos2a-min", type=float, default=0.05)
    p.add_argument("--cos2a-max", type=float, default=0.95)
    p.add_argument("--cos2a-points", type=int, default=10)
    _add_common_output(p, plot=False)
    p.set_defaults(func=cmd_theorem)

    p = sub.add_parser("protocol", help="run an N-pulse session from a "
                                        "scenario file")
    p.add_argument("--scenario", required=True)
    p.add_argument("--out-prefix", required=True)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.set_defaults(func=cmd_protocol)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ScenarioError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
