"""Scenario files: model + initial condition + run settings as JSON.

Agent and edge indices are 1-based in files (and on the command line)
to match the usual way small networks are drawn; the Python API is
0-based throughout. Floats are serialized with 17 significant digits so
a load/save cycle is bit-exact.
"""

import json
from dataclasses import dataclass, replace

import numpy as np

from .model import make_model, validate_model

_CONTROL_TAGS = ("set_recovery", "set_reinfection", "set_infection",
                 "rewire", "vaccinate")


@dataclass(frozen=True)
class SetRecovery:
    agent: int
    value: float


@dataclass(frozen=True)
class SetReinfection:
    edge: tuple
    value: float


@dataclass(frozen=True)
class SetInfection:
    edge: tuple
    value: float


@dataclass(frozen=True)
class Rewire:
    remove: tuple
    add: tuple
    weight: float = 1.0
    beta: float = 0.0
    beta_hat: float = 0.0


@dataclass(frozen=True)
class Vaccinate:
    agents: tuple


@dataclass(frozen=True)
class StochasticSettings:
    trials: int
    seed: int
    generator: str = "pcg64"


@dataclass(frozen=True, eq=False)
class Scenario:
    n: int
    adjacency: np.ndarray
    beta: np.ndarray
    beta_hat: np.ndarray
    delta: np.ndarray
    p_s0: np.ndarray
    p_i0: np.ndarray
    t_end: float = 500.0
    dt: float = 0.01
    stride: object = None
    controls: tuple = ()
    stochastic: object = None
    provenance: str = ""

    def model(self):
        return make_model(self.adjacency, self.beta, self.beta_hat,
                          self.delta)


class ScenarioError(ValueError):
    """Scenario file failed to parse or validate."""


def _require(cond, msg):
    if not cond:
        raise ScenarioError(msg)


def _edge_from_json(raw, n, field_name):
    _require(isinstance(raw, (list, tuple)) and len(raw) == 2,
             "%s must be a pair [j, k]" % field_name)
    j, k = int(raw[0]) - 1, int(raw[1]) - 1
    _require(0 <= j < n and 0 <= k < n,
             "%s indices out of range 1..%d" % (field_name, n))
    return (j, k)


def _control_from_json(raw, n):
    _require(isinstance(raw, dict) and "type" in raw,
             "control entries must be objects with a 'type' tag")
    tag = raw["type"]
    if tag == "set_recovery":
        agent = int(raw["agent"]) - 1
        _require(0 <= agent < n, "set_recovery agent out of range")
        return SetRecovery(agent=agent, value=float(raw["value"]))
    if tag == "set_reinfection":
        return SetReinfection(edge=_edge_from_json(raw["edge"], n, "edge"),
                              value=float(raw["value"]))
    if tag == "set_infection":
        return SetInfection(edge=_edge_from_json(raw["edge"], n, "edge"),
                            value=float(raw["value"]))
    if tag == "rewire":
        return Rewire(remove=_edge_from_json(raw["remove"], n, "remove"),
                      add=_edge_from_json(raw["add"], n, "add"),
                      weight=float(raw.get("weight", 1.0)),
                      beta=float(raw["beta"]),
                      beta_hat=float(raw["beta_hat"]))
    if tag == "vaccinate":
        agents = tuple(int(a) - 1 for a in raw["agents"])
        _require(all(0 <= a < n for a in agents),
                 "vaccinate agents out of range")
        return Vaccinate(agents=agents)
    raise ScenarioError("unknown control type %r (expected one of %s)"
                        % (tag, ", ".join(_CONTROL_TAGS)))


def _control_to_json(action):
    if isinstance(action, SetRecovery):
        return {"type": "set_recovery", "agent": action.agent + 1,
                "value": action.value}
    if isinstance(action, SetReinfection):
        return {"type": "set_reinfection",
                "edge": [action.edge[0] + 1, action.edge[1] + 1],
                "value": action.value}
    if isinstance(action, SetInfection):
        return {"type": "set_infection",
                "edge": [action.edge[0] + 1, action.edge[1] + 1],
                "value": action.value}
    if isinstance(action, Rewire):
        return {"type": "rewire",
                "remove": [action.remove[0] + 1, action.remove[1] + 1],
                "add": [action.add[0] + 1, action.add[1] + 1],
                "weight": action.weight, "beta": action.beta,
                "beta_hat": action.beta_hat}
    if isinstance(action, Vaccinate):
        return {"type": "vaccinate",
                "agents": [a + 1 for a in action.agents]}
    raise TypeError("not a control action: %r" % (action,))


def scenario_from_dict(doc):
    _require(isinstance(doc, dict), "scenario document must be an object")
    missing = [k for k in ("n", "adjacency", "beta", "beta_hat", "delta",
                           "p_s0", "p_i0") if k not in doc]
    _require(not missing, "missing scenario fields: %s" % ", ".join(missing))
    n = int(doc["n"])
    _require(n >= 1, "n must be at least 1")

    def matrix(key):
        arr = np.asarray(doc[key], dtype=float)
        _require(arr.shape == (n, n), "%s must be an %dx%d matrix"
                 % (key, n, n))
        return arr

    def vector(key):
        arr = np.asarray(doc[key], dtype=float)
        _require(arr.shape == (n,), "%s must have length %d" % (key, n))
        return arr

    adjacency = matrix("adjacency")
    beta = matrix("beta")
    beta_hat = matrix("beta_hat")
    delta = vector("delta")
    p_s0 = vector("p_s0")
    p_i0 = vector("p_i0")

    violations = validate_model(make_model(adjacency, beta, beta_hat, delta))
    _require(not violations, "model invalid: " + "; ".join(violations))
    _require(np.all(p_s0 >= 0) and np.all(p_i0 >= 0),
             "initial probabilities must be nonnegative")
    _require(np.all(p_s0 + p_i0 <= 1.0 + 1e-12),
             "initial condition not on simplex: p_s0 + p_i0 > 1")

    controls = tuple(_control_from_json(c, n)
                     for c in doc.get("controls", []) or [])
    stoch = None
    raw_stoch = doc.get("stochastic")
    if raw_stoch:
        stoch = StochasticSettings(
            trials=int(raw_stoch.get("trials", 1000)),
            seed=int(raw_stoch.get("seed", 0)),
            generator=str(raw_stoch.get("generator", "pcg64")))
    stride = doc.get("stride")
    return Scenario(n=n, adjacency=adjacency, beta=beta, beta_hat=beta_hat,
                    delta=delta, p_s0=p_s0, p_i0=p_i0,
                    t_end=float(doc.get("t_end", 500.0)),
                    dt=float(doc.get("dt", 0.01)),
                    stride=None if stride is None else int(stride),
                    controls=controls, stochastic=stoch,
                    provenance=str(doc.get("provenance", "")))


def scenario_to_dict(sc):
    doc = {
        "n": sc.n,
        "adjacency": sc.adjacency.tolist(),
        "beta": sc.beta.tolist(),
        "beta_hat": sc.beta_hat.tolist(),
        "delta": sc.delta.tolist(),
        "p_s0": sc.p_s0.tolist(),
        "p_i0": sc.p_i0.tolist(),
        "t_end": sc.t_end,
        "dt": sc.dt,
        "controls": [_control_to_json(c) for c in sc.controls],
        "stochastic": None,
        "provenance": sc.provenance,
    }
    if sc.stride is not None:
        doc["stride"] = sc.stride
    if sc.stochastic is not None:
        doc["stochastic"] = {"trials": sc.stochastic.trials,
                             "seed": sc.stochastic.seed,
                             "generator": sc.stochastic.generator}
    return doc


def load_scenario(path):
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ScenarioError("parse error in %s at line %d column %d: %s"
                                % (path, exc.lineno, exc.colno, exc.msg))
    return scenario_from_dict(doc)


def _format_json(value, indent=0):
    pad = " " * indent
    if isinstance(value, dict):
        if not value:
            return "{}"
        rows = [pad + " " + json.dumps(k) + ": " + _format_json(v, indent + 1)
                for k, v in value.items()]
        return "{\n" + ",\n".join(rows) + "\n" + pad + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        inner = [_format_json(v, indent + 1) for v in value]
        flat = "[" + ", ".join(inner) + "]"
        if len(flat) <= 100 and "\n" not in flat:
            return flat
        return ("[\n" + ",\n".join(pad + " " + s for s in inner)
                + "\n" + pad + "]")
    if isinstance(value, bool) or value is None:
        return json.dumps(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        # .17g round-trips any double exactly
        return format(value, ".17g")
    return json.dumps(value)


def save_scenario(sc, path):
    text = _format_json(scenario_to_dict(sc)) + "\n"
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def apply_control(sc, action):
    """New scenario with one control applied; the input is untouched."""
    adjacency = sc.adjacency.copy()
    beta = sc.beta.copy()
    beta_hat = sc.beta_hat.copy()
    delta = sc.delta.copy()
    p_s0 = sc.p_s0.copy()

    if isinstance(action, SetRecovery):
        delta[action.agent] = action.value
    elif isinstance(action, SetReinfection):
        beta_hat[action.edge] = action.value
    elif isinstance(action, SetInfection):
        beta[action.edge] = action.value
    elif isinstance(action, Rewire):
        adjacency[action.remove] = 0.0
        beta[action.remove] = 0.0
        beta_hat[action.remove] = 0.0
        adjacency[action.add] = action.weight
        beta[action.add] = action.beta
        beta_hat[action.add] = action.beta_hat
    elif isinstance(action, Vaccinate):
        for a in action.agents:
            p_s0[a] = 0.0
    else:
        raise TypeError("not a control action: %r" % (action,))

    out = replace(sc, adjacency=adjacency, beta=beta, beta_hat=beta_hat,
                  delta=delta, p_s0=p_s0)
    violations = validate_model(out.model())
    if violations:
        raise ScenarioError("control %r invalidates the model: %s"
                            % (action, "; ".join(violations)))
    return out
