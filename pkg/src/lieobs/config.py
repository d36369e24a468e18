"""Job configuration: a JSON document describing (group, field, homomorphism, options).

Any numeric entry may be a string expression over the names in ``params``,
e.g. ``"dstar": [[0, "-b"], ["b", 0]]`` with ``"params": {"b": 1}``.  Scan axes
override either a param or one of the shorthand names ``lambda``, ``alpha1`` ..
``beta3``, ``dstar11`` .. ``dstar22``, ``xi1``, ``xi2``.
"""

from __future__ import annotations

import ast
import copy
import json
import operator
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .flow import FieldSpec
from .groups import GroupClass
from .subgroups import COEFF_NAMES, HomSpec, NonCanonicalHom, UnknownTarget, make_hom
from .tolerances import DEFAULT, Tolerances


class ConfigError(ValueError):
    pass


_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}
_UNARY = {ast.UAdd: operator.pos, ast.USub: operator.neg}


def evaluate(expr, params: Dict[str, float]) -> float:
    """Arithmetic over numbers and param names; nothing else is allowed."""
    if isinstance(expr, bool):
        raise ConfigError(f"expected a number, got {expr!r}")
    if isinstance(expr, (int, float)):
        return float(expr)
    if not isinstance(expr, str):
        raise ConfigError(f"expected a number or expression, got {expr!r}")
    try:
        tree = ast.parse(expr, mode="eval").body
    except SyntaxError as exc:
        raise ConfigError(f"bad expression {expr!r}") from exc

    def walk(node):
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name):
            if node.id not in params:
                raise ConfigError(f"unknown name {node.id!r} in {expr!r}")
            return float(params[node.id])
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](walk(node.left), walk(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY:
            return _UNARY[type(node.op)](walk(node.operand))
        raise ConfigError(f"unsupported syntax in {expr!r}")

    try:
        return walk(tree)
    except ZeroDivisionError as exc:
        raise ConfigError(f"division by zero in {expr!r}") from exc


@dataclass(frozen=True)
class Options:
    t_window: Tuple[float, float] = (-10.0, 10.0)
    s_span: float = 5.0
    s_step: float = 0.01
    seed: int = 0
    tolerances: Tolerances = DEFAULT

    def to_dict(self) -> dict:
        return {"t_window": list(self.t_window), "s_grid": {"span": self.s_span, "step": self.s_step},
                "seed": self.seed}


@dataclass(frozen=True, eq=False)
class JobConfig:
    group: GroupClass
    field: FieldSpec
    hom: HomSpec
    options: Options = field(default_factory=Options)
    raw: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"group": self.group.to_dict(), "field": self.field.to_dict(),
                "hom": self.hom.to_dict(), "options": self.options.to_dict()}


def _matrix(entry, params, shape, what) -> np.ndarray:
    arr = np.asarray(entry, dtype=object)
    if arr.shape != shape:
        raise ConfigError(f"{what} must have shape {shape}, got {arr.shape}")
    return np.array([evaluate(e, params) for e in arr.ravel()]).reshape(shape)


def _pair(entry, what) -> Tuple[float, float]:
    try:
        lo, hi = (float(v) for v in entry)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{what} must be two numbers") from exc
    if not lo < hi:
        raise ConfigError(f"{what} must satisfy lo < hi")
    return lo, hi


def parse_options(raw: dict, tol_env: bool = True) -> Options:
    raw = raw or {}
    unknown = set(raw) - {"t_window", "s_grid", "tolerances", "seed"}
    if unknown:
        raise ConfigError(f"unknown option(s): {sorted(unknown)}")
    s_grid = raw.get("s_grid", {}) or {}
    try:
        tol = DEFAULT.update(raw.get("tolerances", {}) or {})
        if tol_env:
            tol = tol.with_env()
        opts = Options(t_window=_pair(raw.get("t_window", (-10.0, 10.0)), "t_window"),
                       s_span=float(s_grid.get("span", 5.0)), s_step=float(s_grid.get("step", 0.01)),
                       seed=int(raw.get("seed", 0)), tolerances=tol)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"bad options: {exc}") from exc
    if opts.s_span <= 0 or opts.s_step <= 0:
        raise ConfigError("s_grid span and step must be positive")
    return opts


def parse_config(raw: dict, allow_noncanonical: bool = False, tol_env: bool = True) -> JobConfig:
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(raw) - {"group", "field", "hom", "options", "params", "sweep"}
    if unknown:
        raise ConfigError(f"unknown top-level key(s): {sorted(unknown)}")
    params = raw.get("params", {}) or {}
    try:
        params = {str(k): float(v) for k, v in params.items()}
    except (TypeError, ValueError, AttributeError) as exc:
        raise ConfigError("params must map names to numbers") from exc
    try:
        g = raw["group"]
        lam = g.get("lambda")
        group = GroupClass.parse(g["kind"], None if lam is None else evaluate(lam, params))
        f = raw["field"]
        fld = FieldSpec(_matrix(f["dstar"], params, (2, 2), "dstar"),
                        _matrix(f.get("xi", [0, 0]), params, (2,), "xi"))
        h = raw["hom"]
        coeffs = {str(k): evaluate(v, params) for k, v in (h.get("coeffs") or {}).items()}
        hom = make_hom(group, h["target"], coeffs, h.get("family"), allow_noncanonical)
    except ConfigError:
        raise
    except KeyError as exc:
        raise ConfigError(f"missing or unknown entry: {exc}") from exc
    except (UnknownTarget, NonCanonicalHom, TypeError, ValueError, AttributeError) as exc:
        raise ConfigError(str(exc)) from exc
    return JobConfig(group, fld, hom, parse_options(raw.get("options"), tol_env), raw)


def load_config(path, **kw) -> JobConfig:
    return parse_config(read_raw(path), **kw)


def read_raw(path) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc


# ------------------------------------------------------------------ sweeps

def _slot(name: str):
    if name == "lambda":
        return ("group", "lambda")
    if name in COEFF_NAMES:
        return ("hom", "coeffs", name)
    if len(name) == 7 and name.startswith("dstar") and set(name[5:]) <= {"1", "2"}:
        return ("field", "dstar", int(name[5]) - 1, int(name[6]) - 1)
    if name in ("xi1", "xi2"):
        return ("field", "xi", int(name[2]) - 1)
    return None


def with_value(raw: dict, name: str, value: float) -> dict:
    """Copy of ``raw`` with axis ``name`` set to ``value``."""
    out = copy.deepcopy(raw)
    if name in (out.get("params") or {}):
        out["params"][name] = value
        return out
    slot = _slot(name)
    if slot is None:
        raise ConfigError(f"unknown sweep axis {name!r}: not a param or shorthand name")
    node = out
    for key in slot[:-1]:
        if isinstance(node, dict):
            node = node.setdefault(key, {})
        else:
            node = node[key]
    node[slot[-1]] = value
    return out


def parse_axis(text: str) -> Tuple[str, List[float]]:
    """``name=v1,v2,...`` or ``name=lo:hi:n``."""
    if "=" not in text:
        raise ConfigError(f"axis {text!r} must look like name=v1,v2 or name=lo:hi:n")
    name, spec = text.split("=", 1)
    name = name.strip()
    try:
        if ":" in spec:
            lo, hi, n = spec.split(":")
            values = np.linspace(float(lo), float(hi), int(n)).tolist()
        else:
            values = [float(v) for v in spec.split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad axis values in {text!r}") from exc
    if not name or not values:
        raise ConfigError(f"axis {text!r} has no name or no values")
    return name, values


def sweep_axes(raw: dict, cli_axes: Sequence[str] = ()) -> List[Tuple[str, List[float]]]:
    if cli_axes:
        axes = [parse_axis(a) for a in cli_axes]
    else:
        sweep = raw.get("sweep") or {}
        if not isinstance(sweep, dict):
            raise ConfigError("sweep must map axis names to value lists")
        try:
            axes = [(str(k), [float(v) for v in vals]) for k, vals in sweep.items()]
        except (TypeError, ValueError) as exc:
            raise ConfigError("sweep values must be numbers") from exc
    if len(axes) > 3:
        raise ConfigError("at most three sweep axes")
    names = [n for n, _ in axes]
    if len(set(names)) != len(names):
        raise ConfigError("duplicate sweep axis")
    for name, _ in axes:
        if name not in (raw.get("params") or {}) and _slot(name) is None:
            raise ConfigError(f"unknown sweep axis {name!r}: not a param or shorthand name")
    return [(n, sorted(v)) for n, v in axes]
