"""Engine registry and the compact method-spec grammar.

A spec is `name` or `name:key=value,key=value`, e.g. `dynamic:t=2`,
`fixed-chain:U=4096,t=8`, `grid:L=8,inner=trivial`.  The same names and
keys back the CLI's per-flag form.
"""

from __future__ import annotations

from .baseline import TrivialEngine, UniqueColorEngine
from .core import EngineError, parse_number
from .engine_dynamic import DynamicEngine, EpsilonEngine
from .engine_fixed import FixedChainEngine, FixedDistinctEngine
from .grid import GridEngine
from .online import OnlineNestedEngine

__all__ = [
    "METHOD_NAMES",
    "build_engine",
    "method_label",
    "parse_method_spec",
]

_ALIASES = {"U": "universe", "universe": "universe", "t": "t", "eps": "eps",
            "L": "L", "inner": "inner"}

_INNER_FACTORIES = {
    "trivial": TrivialEngine,
    "dynamic": DynamicEngine,
    "eps": EpsilonEngine,
}

# name -> (required keys, optional keys)
_SCHEMAS = {
    "fixed-distinct": ({"universe"}, {"t"}),
    "fixed-chain": ({"universe"}, {"t"}),
    "dynamic": (set(), {"t"}),
    "eps": (set(), {"eps"}),
    "grid": ({"L"}, {"inner"}),
    "greedy-nested": (set(), set()),
    "trivial": (set(), set()),
    "unique": (set(), set()),
}

METHOD_NAMES = tuple(sorted(_SCHEMAS))


def parse_method_spec(spec: str) -> tuple[str, dict]:
    """Split `name:k=v,...` into a validated (name, params) pair."""
    name, _, tail = spec.partition(":")
    params: dict = {}
    if tail:
        for item in tail.split(","):
            key, eq, value = item.partition("=")
            if not eq or not key or not value:
                raise EngineError(f"bad method parameter {item!r} in {spec!r}")
            canon = _ALIASES.get(key)
            if canon is None:
                raise EngineError(f"unknown method parameter {key!r} in {spec!r}")
            if canon == "inner":
                params[canon] = value
            else:
                try:
                    params[canon] = parse_number(value)
                except ValueError:
                    raise EngineError(
                        f"non-numeric value for {key!r} in {spec!r}"
                    ) from None
    return validate_method(name, params)


def validate_method(name: str, params: dict) -> tuple[str, dict]:
    schema = _SCHEMAS.get(name)
    if schema is None:
        known = ", ".join(METHOD_NAMES)
        raise EngineError(f"unknown method {name!r} (known: {known})")
    required, optional = schema
    missing = required - params.keys()
    if missing:
        raise EngineError(f"method {name!r} needs {sorted(missing)}")
    extra = params.keys() - required - optional
    if extra:
        raise EngineError(f"method {name!r} does not take {sorted(extra)}")
    if params.get("inner") is not None and params["inner"] not in _INNER_FACTORIES:
        raise EngineError(
            f"inner engine must be one of {sorted(_INNER_FACTORIES)}"
        )
    return name, params


def build_engine(spec: str | tuple[str, dict]):
    """Instantiate an engine from a spec string or (name, params) pair."""
    name, params = parse_method_spec(spec) if isinstance(spec, str) else spec
    if isinstance(spec, tuple):
        name, params = validate_method(name, dict(params))
    if name == "fixed-distinct":
        return FixedDistinctEngine(int(params["universe"]), int(params.get("t", 2)))
    if name == "fixed-chain":
        return FixedChainEngine(int(params["universe"]), int(params.get("t", 2)))
    if name == "dynamic":
        return DynamicEngine(int(params.get("t", 2)))
    if name == "eps":
        return EpsilonEngine(float(params.get("eps", 0.5)))
    if name == "grid":
        return GridEngine(params["L"], _INNER_FACTORIES[params.get("inner", "trivial")])
    if name == "greedy-nested":
        return OnlineNestedEngine()
    if name == "trivial":
        return TrivialEngine()
    return UniqueColorEngine()


def method_label(name: str, params: dict) -> str:
    """Canonical `name:k=v,...` form; stable key order for report columns."""
    if not params:
        return name
    order = ("universe", "t", "eps", "L", "inner")
    shown = {"universe": "U"}
    tail = ",".join(
        f"{shown.get(k, k)}={params[k]}" for k in order if k in params
    )
    return f"{name}:{tail}"
