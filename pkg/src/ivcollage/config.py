"""JSON problem and family definitions.

Problem file (forward solve)::

    {"kernel": "affine-product", "params": [1.41, -1.0],
     "forcing": {...}, "domain": [0, 1]}

Family file (inverse solve)::

    {"kernel": "cos-arctan", "box": [[1.5, 2.5], [0.5, 1.5]],
     "forcing": {...}, "domain": [0, 1]}

Forcing specs, by ``type``:

- ``affine``: ``{"lower": [c0, c1], "upper": [d0, d1]}`` gives ``[c0 + c1 t, d0 + d1 t]``
- ``constant``: ``{"value": [lo, hi]}``
- ``csv``: ``{"path": "g.csv"}``, relative to the JSON file
- ``manufactured``: ``{"solution": "cos-half-t", "params": [p1, p2], "level": 7}``;
  the forcing for which the named solution solves the equation with the
  file's kernel at ``params``
"""
from __future__ import annotations

import json
from pathlib import Path

from .interval import Interval
from .inverse import ParamFamily, manufacture_forcing
from .ivfun import IvFun1D, read_csv
from .problems import FORCING_LEVEL, example1_solution
from .volterra import Kernel, VolterraProblem

EXACT_SOLUTIONS = {"cos-half-t": example1_solution}


class ConfigError(ValueError):
    """Malformed or inconsistent configuration."""


def _load(path) -> dict:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except FileNotFoundError:
        raise ConfigError(f"{path}: file not found") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected a JSON object")
    return data


def _domain(data) -> tuple[float, float]:
    dom = data.get("domain", [0.0, 1.0])
    if not (isinstance(dom, list) and len(dom) == 2):
        raise ConfigError(f"domain must be [a, b], got {dom!r}")
    return float(dom[0]), float(dom[1])


def forcing_from_spec(spec: dict, domain, kernel: str, base_dir: Path = Path(".")) -> IvFun1D:
    if not isinstance(spec, dict) or "type" not in spec:
        raise ConfigError(f"forcing must be an object with a 'type', got {spec!r}")
    kind = spec["type"]
    a, b = domain
    try:
        if kind == "affine":
            (c0, c1), (d0, d1) = spec["lower"], spec["upper"]
            return IvFun1D.from_grid([a, b], [c0 + c1 * a, c0 + c1 * b], [d0 + d1 * a, d0 + d1 * b])
        if kind == "constant":
            lo, hi = spec["value"]
            return IvFun1D.constant(Interval(lo, hi), domain)
        if kind == "csv":
            g = read_csv(base_dir / spec["path"])
            if g.domain != (a, b):
                raise ConfigError(f"forcing CSV covers {g.domain}, expected {(a, b)}")
            return g
        if kind == "manufactured":
            name = spec["solution"]
            if name not in EXACT_SOLUTIONS:
                raise ConfigError(f"unknown solution {name!r}; choose from {sorted(EXACT_SOLUTIONS)}")
            exact = EXACT_SOLUTIONS[name]()
            if exact.domain != (a, b):
                raise ConfigError(f"solution {name!r} is defined on {exact.domain}, not {(a, b)}")
            return manufacture_forcing(exact, Kernel(kernel, spec["params"]), int(spec.get("level", FORCING_LEVEL)))
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"incomplete {kind!r} forcing spec: {exc}") from None
    raise ConfigError(f"unknown forcing type {kind!r}")


def load_problem(path) -> VolterraProblem:
    data = _load(path)
    try:
        kernel = Kernel(data["kernel"], data["params"])
        forcing = forcing_from_spec(data["forcing"], _domain(data), kernel.name, Path(path).parent)
    except KeyError as exc:
        raise ConfigError(f"{path}: missing key {exc}") from None
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return VolterraProblem(forcing, kernel)


def load_family(path) -> ParamFamily:
    data = _load(path)
    try:
        forcing = forcing_from_spec(data["forcing"], _domain(data), data["kernel"], Path(path).parent)
        return ParamFamily(data["kernel"], data["box"], forcing)
    except KeyError as exc:
        raise ConfigError(f"{path}: missing key {exc}") from None
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from None
