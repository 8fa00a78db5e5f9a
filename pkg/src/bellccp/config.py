"""JSON schemas for scenarios, inequalities, and strategies.

Configs round-trip exactly: integer coefficients stay integers, floats are
emitted with full repr precision, and loading a dumped config reproduces
the original objects.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from .errors import ValidationError
from .quantum import (
    CANONICAL_STRATEGY_NAMES,
    QuantumStrategy,
    canonical_strategy,
)
from .qubits import PureState, bloch_to_observable, depolarize, ghz_state
from .scenarios import (
    NAMED_INEQUALITIES,
    BellInequality,
    CausalScenario,
    make_scenario,
    named_inequality,
)


def read_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON: {exc}") from exc


def scenario_to_config(scenario: CausalScenario) -> dict:
    return {"n": scenario.n, "visibility": [list(group) for group in scenario.visibility]}


def scenario_from_config(config: dict) -> CausalScenario:
    if not isinstance(config, dict) or "n" not in config or "visibility" not in config:
        raise ValidationError('scenario config needs keys "n" and "visibility"')
    return make_scenario(config["n"], config["visibility"])


def inequality_to_config(ineq: BellInequality) -> dict:
    if ineq.name in NAMED_INEQUALITIES:
        return {"name": ineq.name}
    coeffs = [{"x": list(x), "q": q} for x, q in sorted(ineq.coeffs.items()) if q != 0]
    return {"scenario": scenario_to_config(ineq.scenario), "coeffs": coeffs}


def inequality_from_config(config: dict) -> BellInequality:
    if "name" in config:
        return named_inequality(config["name"])
    if "scenario" not in config or "coeffs" not in config:
        raise ValidationError(
            'inequality config needs "name", or "scenario" plus "coeffs"')
    scenario = scenario_from_config(config["scenario"])
    coeffs = {}
    for entry in config["coeffs"]:
        if "x" not in entry or "q" not in entry:
            raise ValidationError('each coefficient entry needs keys "x" and "q"')
        coeffs[tuple(entry["x"])] = entry["q"]
    return BellInequality(scenario=scenario, coeffs=coeffs)


def load_inequality(source) -> BellInequality:
    """Resolve a named inequality, a config dict, or a JSON file path."""
    if isinstance(source, BellInequality):
        return source
    if isinstance(source, dict):
        return inequality_from_config(source)
    name = str(source)
    if name in NAMED_INEQUALITIES:
        return named_inequality(name)
    path = Path(name)
    if path.exists():
        config = read_json(path)
        if "inequality" in config:
            config = config["inequality"]
        return inequality_from_config(config)
    raise ValidationError(
        f"{name!r} is neither a known inequality name {sorted(NAMED_INEQUALITIES)} "
        "nor an existing config file")


def _complex_pairs(values: np.ndarray) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in values]


def strategy_to_config(strategy: QuantumStrategy, visibility_v: float | None = None) -> dict:
    """Dump a strategy; mixed states are only expressible via visibility_v."""
    state = strategy.state
    config: dict = {}
    if isinstance(state, PureState):
        ghz = ghz_state(state.n)
        if np.allclose(state.amplitudes, ghz.amplitudes, atol=0, rtol=0):
            config["state"] = "ghz"
        else:
            config["state"] = {"amplitudes": _complex_pairs(state.amplitudes)}
    elif visibility_v is not None:
        config["state"] = "ghz"
    else:
        raise ValidationError(
            "cannot dump a mixed-state strategy without its visibility_v")
    config["observables"] = [
        {"party": party, "setting": list(setting), "bloch": [float(r) for r in obs.bloch]}
        for (party, setting), obs in sorted(strategy.observables.items())]
    if visibility_v is not None:
        config["visibility_v"] = float(visibility_v)
    return config


def strategy_from_config(config: dict, scenario: CausalScenario) -> QuantumStrategy:
    if "name" in config:
        return canonical_strategy(config["name"])
    if "state" not in config or "observables" not in config:
        raise ValidationError('strategy config needs "state" and "observables" (or "name")')
    if config["state"] == "ghz":
        state = ghz_state(scenario.n)
    elif isinstance(config["state"], dict) and "amplitudes" in config["state"]:
        amplitudes = [complex(re, im) for re, im in config["state"]["amplitudes"]]
        state = PureState(np.array(amplitudes))
    else:
        raise ValidationError('strategy state must be "ghz" or {"amplitudes": [[re, im], ...]}')
    observables = {}
    for entry in config["observables"]:
        for key in ("party", "setting", "bloch"):
            if key not in entry:
                raise ValidationError(f'observable entry missing key "{key}"')
        observables[(int(entry["party"]), tuple(int(v) for v in entry["setting"]))] = (
            bloch_to_observable(entry["bloch"]))
    v = config.get("visibility_v")
    if v is not None:
        if not 0.0 <= float(v) <= 1.0:
            raise ValidationError(f"visibility_v must lie in [0, 1], got {v}")
        state = depolarize(state, float(v))
    return QuantumStrategy(scenario=scenario, state=state, observables=observables)


def load_strategy(source, scenario: CausalScenario) -> QuantumStrategy:
    """Resolve a preset name, a config dict, or a JSON file path."""
    if isinstance(source, QuantumStrategy):
        return source
    if isinstance(source, dict):
        return strategy_from_config(source, scenario)
    name = str(source)
    if name in CANONICAL_STRATEGY_NAMES:
        return canonical_strategy(name)
    path = Path(name)
    if path.exists():
        config = read_json(path)
        if "strategy" in config:
            config = config["strategy"]
        return strategy_from_config(config, scenario)
    raise ValidationError(
        f"{name!r} is neither a preset strategy {CANONICAL_STRATEGY_NAMES} "
        "nor an existing config file")


def strategy_fingerprint(strategy: QuantumStrategy) -> str:
    """Stable sha256 over the strategy's full numeric content."""
    state = strategy.state
    if isinstance(state, PureState):
        state_doc = {"type": "pure", "data": _complex_pairs(state.amplitudes)}
    else:
        state_doc = {"type": "mixed",
                     "data": [_complex_pairs(row) for row in state.matrix]}
    doc = {
        "scenario": scenario_to_config(strategy.scenario),
        "state": state_doc,
        "observables": [
            {"party": party, "setting": list(setting),
             "bloch": [float(r) for r in obs.bloch]}
            for (party, setting), obs in sorted(strategy.observables.items())],
    }
    payload = json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(payload).hexdigest()
