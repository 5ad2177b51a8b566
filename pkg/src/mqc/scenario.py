"""Scenario-file parsing and validation.

A scenario is a JSON document describing one simulation/analysis setup:

    {
      "setup": "I",
      "detectors": {"eta": [[0.12, 0.12], [0.08, 0.08]],
                    "d":   [[1e-5, 1e-5], [1e-5, 1e-5]]},
      "bases": {"cos2a": 0.5},
      "state": {"bloch": [0.0, 0.0, 1.0]},
      "source": {"type": "coherent", "mu": 1.0},
      "strategy": {"type": "II"},
      "protocol": {"pulses": 100000, "basis_policy": "random",
                   "seed": 42, "workers": 1}
    }

For ``"setup": "II"`` the detectors block is
``{"eta": [e0, e1, ep, em], "d": [...], "theta": 0.0}`` in detector order
(D0, D1, D+, D-).  Unknown keys are rejected at every level, naming the
offending key.  Strategy objects accept types "I", "II",
"III" (+ "s11": [s110, s111]), "trivial" (+ "s"), "symmetrized"
(+ "freqs": [[F01_b0, F01_b1], [F10_b0, F10_b1]]) and
"custom" (+ "S": [[[...]]] with axis order c0, c1, beta).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional, Union

from .optics import (BasisPair, Coherent, DetectorPair, FixedK, PulseSpec,
                     QubitState)
from .reporting import (ReportingStrategy, make_strategy_i, make_strategy_ii,
                        make_strategy_iii, make_symmetrized, make_trivial)
from .setup_two import DetectorQuad

__all__ = ["ScenarioError", "Scenario", "load_scenario", "parse_scenario"]


class ScenarioError(ValueError):
    """Raised when a scenario document violates the schema."""


@dataclass(frozen=True)
class Scenario:
    """Validated scenario: typed objects ready to feed the library."""

    setup: str
    detectors: Union[DetectorPair, DetectorQuad, None] = None
    bases: Optional[BasisPair] = None
    state: Optional[QubitState] = None
    source: Optional[PulseSpec] = None
    strategy: Optional[ReportingStrategy] = None
    pulses: Optional[int] = None
    basis_policy: Union[str, int, None] = None
    seed: Optional[int] = None
    workers: int = 1


def _require_keys(obj: dict, allowed: set, required: set, where: str) -> None:
    if not isinstance(obj, dict):
        raise ScenarioError(f"{where} must be a JSON object")
    for key in obj:
        if key not in allowed:
            raise ScenarioError(f"unknown key {key!r} in {where}")
    for key in required:
        if key not in obj:
            raise ScenarioError(f"missing key {key!r} in {where}")


def _parse_detectors(doc: dict, setup: str):
    if setup == "I":
        _require_keys(doc, {"eta", "d"}, {"eta", "d"}, "detectors")
        try:
            return DetectorPair(tuple(map(tuple, doc["eta"])),
                                tuple(map(tuple, doc["d"])))
        except (TypeError, ValueError) as exc:
            raise ScenarioError(f"invalid detectors: {exc}") from exc
    _require_keys(doc, {"eta", "d", "theta"}, {"eta", "d"}, "detectors")
    try:
        return DetectorQuad(tuple(doc["eta"]), tuple(doc["d"]),
                            float(doc.get("theta", 0.0)))
    except (TypeError, ValueError) as exc:
        raise ScenarioError(f"invalid detectors: {exc}") from exc


def _parse_state(doc: dict) -> QubitState:
    _require_keys(doc, {"bloch"}, {"bloch"}, "state")
    bloch = doc["bloch"]
    if not isinstance(bloch, (list, tuple)) or len(bloch) != 3:
        raise ScenarioError('state "bloch" must be a 3-vector')
    try:
        return QubitState(*map(float, bloch))
    except (TypeError, ValueError) as exc:
        raise ScenarioError(f"invalid state: {exc}") from exc


def _parse_source(doc: dict) -> PulseSpec:
    _require_keys(doc, {"type", "k", "mu"}, {"type"}, "source")
    kind = doc["type"]
    try:
        if kind == "fixed":
            if "k" not in doc:
                raise ScenarioError('fixed source needs key "k"')
            return FixedK(int(doc["k"]))
        if kind == "coherent":
            if "mu" not in doc:
                raise ScenarioError('coherent source needs key "mu"')
            return Coherent(float(doc["mu"]))
    except (TypeError, ValueError) as exc:
        raise ScenarioError(f"invalid source: {exc}") from exc
    raise ScenarioError(f"unknown source type {kind!r}")


def _parse_strategy(doc: dict, detectors) -> ReportingStrategy:
    _require_keys(doc, {"type", "s", "s11", "S", "freqs"}, {"type"}, "strategy")
    kind = doc["type"]
    try:
        if kind == "I":
            return make_strategy_i()
        if kind == "II":
            return make_strategy_ii()
        if kind == "III":
            if not isinstance(detectors, DetectorPair):
                raise ScenarioError('strategy "III" needs setup-I detectors')
            s11 = doc.get("s11", [0.0, 0.0])
            return make_strategy_iii(detectors, s11[0], s11[1])
        if kind == "trivial":
            return make_trivial(float(doc.get("s", 1.0)))
        if kind == "symmetrized":
            if "freqs" not in doc:
                raise ScenarioError('symmetrized strategy needs key "freqs"')
            return make_symmetrized(doc["freqs"])
        if kind == "custom":
            if "S" not in doc:
                raise ScenarioError('custom strategy needs key "S"')
            return ReportingStrategy(doc["S"])
    except ScenarioError:
        raise
    except (TypeError, ValueError, IndexError) as exc:
        raise ScenarioError(f"invalid strategy: {exc}") from exc
    raise ScenarioError(f"unknown strategy type {kind!r}")


_TOP_KEYS = {"setup", "detectors", "bases", "state", "source", "strategy",
             "protocol", "attack", "sweep"}
_PROTOCOL_KEYS = {"pulses", "basis_policy", "seed", "workers"}


def parse_scenario(doc: dict) -> Scenario:
    """Validate a decoded scenario document and build typed objects."""
    _require_keys(doc, _TOP_KEYS, {"setup"}, "scenario")
    setup = doc["setup"]
    if setup not in ("I", "II"):
        raise ScenarioError(f'setup must be "I" or "II", got {setup!r}')

    detectors = _parse_detectors(doc["detectors"], setup) if "detectors" in doc else None
    bases = None
    if "bases" in doc:
        _require_keys(doc["bases"], {"cos2a"}, {"cos2a"}, "bases")
        try:
            bases = BasisPair(float(doc["bases"]["cos2a"]))
        except (TypeError, ValueError) as exc:
            raise ScenarioError(f"invalid bases: {exc}") from exc
    state = _parse_state(doc["state"]) if "state" in doc else None
    source = _parse_source(doc["source"]) if "source" in doc else None
    strategy = _parse_strategy(doc["strategy"], detectors) if "strategy" in doc else None

    pulses = basis_policy = seed = None
    workers = 1
    if "protocol" in doc:
        proto = doc["protocol"]
        _require_keys(proto, _PROTOCOL_KEYS, set(), "protocol")
        if "pulses" in proto:
            pulses = int(proto["pulses"])
        if "basis_policy" in proto:
            basis_policy = proto["basis_policy"]
            if basis_policy not in ("random", 0, 1):
                raise ScenarioError(
                    f'basis_policy must be "random", 0 or 1, got {basis_policy!r}')
        if "seed" in proto:
            seed = int(proto["seed"])
        if "workers" in proto:
            workers = int(proto["workers"])

    return Scenario(setup=setup, detectors=detectors, bases=bases, state=state,
                    source=source, strategy=strategy, pulses=pulses,
                    basis_policy=basis_policy, seed=seed, workers=workers)


def load_scenario(path: str) -> Scenario:
    """Read and validate a scenario JSON file."""
    with open(path, "r", encoding="utf-8") as handle:
        try:
            doc = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"scenario file is not valid JSON: {exc}") from exc
    return parse_scenario(doc)
