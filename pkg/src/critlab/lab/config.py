"""Experiment configuration: a small YAML grammar with strict keys.

Example::

    measure:
      kind: atomic
      atoms: [0.0, 0.5]
      weights: [0.5, 0.5]
    n_values: [100, 1000]
    trials: 20
    k_max: 4
    radii: [0.5, 0.9]
    seed: 7
    method: iterative        # iterative | dense | both
    output_dir: results

Measure sections by kind: ``uniform`` (no other keys), ``atomic``
(``atoms``, optional ``weights``), ``arc`` (``a``, ``b``) and ``mixture``
(``components``: list of measure sections, ``weights``).
"""
from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, replace

import yaml

from ..circle_measure import SEED_MASK, CircleMeasure
from ..companion import DENSE_ORDER_LIMIT
from ..exceptions import ConfigError, MeasureError

METHODS = ("iterative", "dense", "both")
FIELDS = ("measure", "n_values", "trials", "k_max", "radii", "seed", "method", "output_dir")
REQUIRED = ("measure", "n_values", "trials", "k_max", "radii", "seed")
MEASURE_KEYS = {
    "uniform": {"kind"},
    "atomic": {"kind", "atoms", "weights"},
    "arc": {"kind", "a", "b"},
    "mixture": {"kind", "components", "weights"},
}


@dataclass(frozen=True)
class ExperimentConfig:
    measure: CircleMeasure
    n_values: tuple
    trials: int
    k_max: int
    radii: tuple
    seed: int
    method: str = "iterative"
    output_dir: str = "results"

    def __post_init__(self):
        _check_config(self)

    def with_seed(self, seed: int) -> "ExperimentConfig":
        return replace(self, seed=int(seed))

    def to_dict(self) -> dict:
        return {
            "measure": measure_to_dict(self.measure),
            "n_values": list(self.n_values),
            "trials": self.trials,
            "k_max": self.k_max,
            "radii": list(self.radii),
            "seed": self.seed,
            "method": self.method,
            "output_dir": self.output_dir,
        }

    def to_yaml(self) -> str:
        return yaml.safe_dump(self.to_dict(), sort_keys=False, default_flow_style=None)


def _check_config(cfg: ExperimentConfig):
    if not cfg.n_values:
        raise ConfigError("n_values must not be empty")
    if any(n < 2 for n in cfg.n_values):
        raise ConfigError(f"n_values must be integers >= 2, got {list(cfg.n_values)}")
    if any(b <= a for a, b in zip(cfg.n_values, cfg.n_values[1:])):
        raise ConfigError(f"n_values must be strictly increasing, got {list(cfg.n_values)}")
    if cfg.trials < 1:
        raise ConfigError(f"trials must be >= 1, got {cfg.trials}")
    if cfg.k_max < 1:
        raise ConfigError(f"k_max must be >= 1, got {cfg.k_max}")
    if any(not 0 < r < 1 for r in cfg.radii):
        raise ConfigError(f"radii must lie in (0, 1), got {list(cfg.radii)}")
    if not 0 <= cfg.seed <= SEED_MASK:
        raise ConfigError(f"seed must be a 64-bit unsigned integer, got {cfg.seed}")
    if cfg.method not in METHODS:
        raise ConfigError(f"method must be one of {METHODS}, got {cfg.method!r}")
    if cfg.method != "iterative" and max(cfg.n_values) > DENSE_ORDER_LIMIT:
        raise ConfigError(f"dense oracle capped at {DENSE_ORDER_LIMIT}; "
                          f"max(n_values) = {max(cfg.n_values)} with method {cfg.method!r}")


def measure_to_dict(m: CircleMeasure) -> dict:
    if m.kind == "uniform":
        return {"kind": "uniform"}
    if m.kind == "atomic":
        return {"kind": "atomic", "atoms": list(m.atoms), "weights": list(m.weights)}
    if m.kind == "arc":
        return {"kind": "arc", "a": m.arc_bounds[0], "b": m.arc_bounds[1]}
    return {"kind": "mixture", "weights": list(m.weights),
            "components": [measure_to_dict(c) for c in m.components]}


# -- parsing -------------------------------------------------------------

def _line(node) -> int:
    return node.start_mark.line + 1


def _fail(node, msg):
    raise ConfigError(f"line {_line(node)}: {msg}")


def _scalar(node, loader, what):
    if not isinstance(node, yaml.ScalarNode):
        _fail(node, f"{what} must be a scalar")
    return loader.construct_object(node)


def _int(node, loader, what):
    v = _scalar(node, loader, what)
    if isinstance(v, bool) or not isinstance(v, int):
        _fail(node, f"{what} must be an integer, got {v!r}")
    return v


def _real(node, loader, what):
    v = _scalar(node, loader, what)
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        _fail(node, f"{what} must be a number, got {v!r}")
    return float(v)


def _seq(node, what):
    if not isinstance(node, yaml.SequenceNode):
        _fail(node, f"{what} must be a list")
    return node.value


def _mapping(node, what, allowed, strict):
    if not isinstance(node, yaml.MappingNode):
        _fail(node, f"{what} must be a mapping")
    out = {}
    for k, v in node.value:
        key = k.value
        if key in out:
            _fail(k, f"duplicate key {key!r} in {what}")
        if key not in allowed:
            if strict:
                _fail(k, f"unknown key {key!r} in {what}; allowed: {', '.join(sorted(allowed))}")
            warnings.warn(f"line {_line(k)}: ignoring unknown key {key!r} in {what}", stacklevel=4)
            continue
        out[key] = (k, v)
    return out


def _measure(node, loader, strict, depth=0) -> CircleMeasure:
    if not isinstance(node, yaml.MappingNode):
        _fail(node, "measure must be a mapping with a 'kind' key")
    kinds = [v for k, v in node.value if k.value == "kind"]
    if not kinds:
        _fail(node, "measure section needs a 'kind'")
    kind = _scalar(kinds[0], loader, "kind")
    if kind not in MEASURE_KEYS:
        _fail(kinds[0], f"unknown measure kind {kind!r}; expected one of {', '.join(MEASURE_KEYS)}")
    sec = _mapping(node, f"{kind} measure", MEASURE_KEYS[kind], strict)
    try:
        if kind == "uniform":
            return CircleMeasure.uniform()
        if kind == "atomic":
            if "atoms" not in sec:
                _fail(node, "atomic measure needs 'atoms'")
            atoms = [_real(x, loader, "atom") for x in _seq(sec["atoms"][1], "atoms")]
            weights = None
            if "weights" in sec:
                weights = [_real(x, loader, "weight") for x in _seq(sec["weights"][1], "weights")]
            return CircleMeasure.atomic(atoms, weights)
        if kind == "arc":
            for key in ("a", "b"):
                if key not in sec:
                    _fail(node, f"arc measure needs '{key}'")
            return CircleMeasure.arc(_real(sec["a"][1], loader, "a"), _real(sec["b"][1], loader, "b"))
        if depth > 0:
            _fail(node, "mixture nesting depth is capped at 1")
        for key in ("components", "weights"):
            if key not in sec:
                _fail(node, f"mixture measure needs '{key}'")
        comps = [_measure(c, loader, strict, depth + 1) for c in _seq(sec["components"][1], "components")]
        weights = [_real(x, loader, "weight") for x in _seq(sec["weights"][1], "weights")]
        return CircleMeasure.mixture(comps, weights)
    except MeasureError as exc:
        # point at the key the message is about, if any
        where = node
        for key in ("weights", "atoms", "components", "a"):
            if key in sec and re.search(rf"\b{key}\b", str(exc)):
                where = sec[key][0]
                break
        raise ConfigError(f"line {_line(where)}: {exc}") from exc


def parse_config(text: str, strict: bool = True) -> ExperimentConfig:
    """Parse and validate an experiment config.

    Raises
    ------
    ConfigError
        With the offending line number, for malformed YAML, unknown keys
        (when ``strict``), wrong types, invalid measures, or violated
        invariants.
    """
    loader = yaml.SafeLoader(text)
    try:
        root = loader.get_single_node()
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"line {mark.line + 1}: " if mark is not None else ""
        raise ConfigError(f"{where}malformed config: {getattr(exc, 'problem', exc)}") from exc
    finally:
        loader.dispose()
    if root is None:
        raise ConfigError("empty config")
    sec = _mapping(root, "config", set(FIELDS), strict)
    for key in REQUIRED:
        if key not in sec:
            _fail(root, f"missing required key {key!r}")
    kw = {
        "measure": _measure(sec["measure"][1], loader, strict),
        "n_values": tuple(_int(x, loader, "n_values entry") for x in _seq(sec["n_values"][1], "n_values")),
        "trials": _int(sec["trials"][1], loader, "trials"),
        "k_max": _int(sec["k_max"][1], loader, "k_max"),
        "radii": tuple(_real(x, loader, "radius") for x in _seq(sec["radii"][1], "radii")),
        "seed": _int(sec["seed"][1], loader, "seed"),
    }
    if "method" in sec:
        kw["method"] = str(_scalar(sec["method"][1], loader, "method"))
    if "output_dir" in sec:
        kw["output_dir"] = str(_scalar(sec["output_dir"][1], loader, "output_dir"))
    try:
        return ExperimentConfig(**kw)
    except ConfigError as exc:
        # point at the key most likely responsible
        for key in ("n_values", "method", "trials", "k_max", "radii", "seed"):
            if key in str(exc) and key in sec:
                raise ConfigError(f"line {_line(sec[key][0])}: {exc}") from exc
        raise


# -- measure tags, as printed by CircleMeasure.describe --------------------

_TAG = re.compile(r"\s*([a-z]+)\s*(?:\((.*)\))?\s*$", re.S)


def _split_top(body: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in body:
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
            continue
        depth += (ch == "(") - (ch == ")")
        cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts if p.strip()]


def parse_measure_tag(tag: str) -> CircleMeasure:
    """Inverse of :meth:`CircleMeasure.describe`.

    Accepts ``uniform``, ``atomic(0:0.5,0.5:0.5)`` (bare angles get equal
    weights), ``arc(0,0.5)`` and ``mixture(0.5*uniform,0.5*arc(0,0.25))``.
    """
    m = _TAG.match(tag)
    if not m:
        raise ConfigError(f"cannot parse measure {tag!r}")
    kind, body = m.group(1), m.group(2)
    try:
        if kind == "uniform" and not body:
            return CircleMeasure.uniform()
        if kind == "atomic" and body:
            items = [p.split(":") for p in _split_top(body)]
            atoms = [float(i[0]) for i in items]
            if all(len(i) == 1 for i in items):
                return CircleMeasure.atomic(atoms)
            if all(len(i) == 2 for i in items):
                return CircleMeasure.atomic(atoms, [float(i[1]) for i in items])
        if kind == "arc" and body:
            a, b = (float(x) for x in _split_top(body))
            return CircleMeasure.arc(a, b)
        if kind == "mixture" and body:
            weights, comps = [], []
            for part in _split_top(body):
                w, _, rest = part.partition("*")
                weights.append(float(w))
                comps.append(parse_measure_tag(rest))
            return CircleMeasure.mixture(comps, weights)
    except (ValueError, MeasureError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"invalid measure {tag!r}: {exc}") from exc
    raise ConfigError(f"cannot parse measure {tag!r}")
