"""Experiment plans: JSON config files and their validation.

Schema (every key optional except ``type`` and one of ``S`` / ``flag``)::

    {
      "type": "A2~1",
      "S": [1],                  # or "flag": "m2-m0; m1"
      "alpha0": 0,               # affine node used with S (default: first admissible)
      "mode": "pseudo",          # or "heisenberg"
      "primitive_mode": "nilradical",   # or "full"
      "weights": [{"levi": ["1/3"], "complement": ["2/7"], "charge": "1", "degree": "0"}],
      "bounds": {"window": 3, "operator": 3, "depth": 2}
    }

Rationals are integers or ``"p/q"`` strings; floats are refused.
"""

import json
from dataclasses import dataclass, field
from fractions import Fraction

DEFAULT_BOUNDS = {"window": 3, "operator": 3, "depth": 2}
TOP_KEYS = {"type", "S", "flag", "alpha0", "mode", "primitive_mode", "weights", "bounds"}
WEIGHT_KEYS = {"levi", "complement", "charge", "degree"}


class ConfigError(ValueError):
    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("invalid config:\n  " + "\n  ".join(self.problems))


@dataclass
class Plan:
    type: str
    S: tuple = None
    flag: str = None
    alpha0: int = None
    mode: str = "pseudo"
    primitive_mode: str = "nilradical"
    weights: list = field(default_factory=list)
    window: int = DEFAULT_BOUNDS["window"]
    operator_bound: int = DEFAULT_BOUNDS["operator"]
    depth: int = DEFAULT_BOUNDS["depth"]

    def to_dict(self):
        q = lambda x: f"{x.numerator}/{x.denominator}"
        out = {"type": self.type, "mode": self.mode, "primitive_mode": self.primitive_mode,
               "bounds": {"window": self.window, "operator": self.operator_bound, "depth": self.depth},
               "weights": [{k: ([q(v) for v in w[k]] if isinstance(w[k], tuple) else q(w[k]))
                            for k in sorted(w)} for w in self.weights]}
        if self.S is not None:
            out["S"] = list(self.S)
            out["alpha0"] = self.alpha0
        else:
            out["flag"] = self.flag
        return out


def parse_rational(value, where="value"):
    """Exact rational from an int or a ``"p/q"`` string."""
    if isinstance(value, bool) or isinstance(value, float):
        raise ValueError(f"{where}: {value!r} is not an exact rational (use \"p/q\")")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        if any(ch in value for ch in ".eE"):
            raise ValueError(f"{where}: decimals are not accepted, write {value!r} as p/q")
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            bad = next((i for i, ch in enumerate(value) if not (ch.isdigit() or ch in "+-/ ")), len(value))
            raise ValueError(f"{where}: cannot parse rational {value!r} at position {bad}") from None
    raise ValueError(f"{where}: expected int or \"p/q\" string, got {type(value).__name__}")


def build_plan(data):
    """Validate a decoded config dict; all problems are reported together."""
    problems = []
    if not isinstance(data, dict):
        raise ConfigError(["top level must be an object"])
    for k in sorted(set(data) - TOP_KEYS):
        problems.append(f"unknown key {k!r}")
    if "type" not in data:
        problems.append("missing required key 'type'")
    has_s, has_flag = "S" in data, "flag" in data
    if has_s and has_flag:
        problems.append("both 'S' and 'flag' given; choose one")
    if not has_s and not has_flag:
        problems.append("one of 'S' or 'flag' is required")
    S = None
    if has_s:
        if not isinstance(data["S"], list) or not all(isinstance(i, int) and not isinstance(i, bool)
                                                      for i in data["S"]):
            problems.append("'S' must be a list of node indices")
        else:
            S = tuple(data["S"])
    if has_flag and not isinstance(data["flag"], str):
        problems.append("'flag' must be a string such as \"m2-m0; m1\"")
    alpha0 = data.get("alpha0")
    if alpha0 is not None and (not isinstance(alpha0, int) or isinstance(alpha0, bool)):
        problems.append("'alpha0' must be an integer node index")
    mode = data.get("mode", "pseudo")
    if mode not in ("pseudo", "heisenberg"):
        problems.append(f"'mode' must be 'pseudo' or 'heisenberg', got {mode!r}")
    pmode = data.get("primitive_mode", "nilradical")
    if pmode not in ("nilradical", "full"):
        problems.append(f"'primitive_mode' must be 'nilradical' or 'full', got {pmode!r}")

    bounds = dict(DEFAULT_BOUNDS)
    raw_bounds = data.get("bounds", {})
    if not isinstance(raw_bounds, dict):
        problems.append("'bounds' must be an object")
        raw_bounds = {}
    for k in sorted(set(raw_bounds) - set(DEFAULT_BOUNDS)):
        problems.append(f"unknown key 'bounds.{k}'")
    for k in DEFAULT_BOUNDS:
        if k in raw_bounds:
            v = raw_bounds[k]
            if not isinstance(v, int) or isinstance(v, bool) or v < 0:
                problems.append(f"'bounds.{k}' must be a nonnegative integer")
            else:
                bounds[k] = v
    if bounds["window"] < 1:
        problems.append("'bounds.window' must be >= 1")

    weights = []
    raw_weights = data.get("weights", [])
    if not isinstance(raw_weights, list):
        problems.append("'weights' must be a list")
        raw_weights = []
    for i, w in enumerate(raw_weights):
        where = f"weights[{i}]"
        if not isinstance(w, dict):
            problems.append(f"{where} must be an object")
            continue
        for k in sorted(set(w) - WEIGHT_KEYS):
            problems.append(f"unknown key '{where}.{k}'")
        entry = {}
        for k in ("levi", "complement"):
            vals = w.get(k, [])
            if not isinstance(vals, list):
                problems.append(f"'{where}.{k}' must be a list")
                continue
            try:
                entry[k] = tuple(parse_rational(v, f"{where}.{k}[{j}]") for j, v in enumerate(vals))
            except ValueError as e:
                problems.append(str(e))
        for k, default in (("charge", 1), ("degree", 0)):
            try:
                entry[k] = parse_rational(w.get(k, default), f"{where}.{k}")
            except ValueError as e:
                problems.append(str(e))
        if entry.get("charge") == 0:
            problems.append(f"'{where}.charge' is zero; the central element must act injectively")
        weights.append(entry)
    if problems:
        raise ConfigError(problems)
    return Plan(type=data["type"], S=S, flag=data.get("flag"), alpha0=alpha0, mode=mode,
                primitive_mode=pmode, weights=weights, window=bounds["window"],
                operator_bound=bounds["operator"], depth=bounds["depth"])


def load_config(path):
    with open(path) as fh:
        text = fh.read()
    try:
        data = json.loads(text, parse_float=_refuse_float)
    except json.JSONDecodeError as e:
        raise ConfigError([f"{path}: JSON error at line {e.lineno} column {e.colno}: {e.msg}"])
    except ValueError as e:
        raise ConfigError([f"{path}: {e}"])
    return build_plan(data)


def _refuse_float(text):
    raise ValueError(f"decimal {text} is not exact; write it as a \"p/q\" string")
