"""JSON experiment configuration: parsing, defaults and object construction.

A configuration is one JSON object::

    {
      "seed": 7,
      "model":   {"kind": "additive", "drift": {"type": "linear", "matrix": [[2.0]]},
                  "noise": {"family": "uniform", "low": -1, "high": 1},
                  "init":  {"family": "uniform", "low": -1, "high": 1},
                  "density_bounds": {"p_min": 0.5, "p_max": 0.5, "support": [-1, 1]}},
      "channel": {"kind": "noiseless", "size": 8},
      "policy":  {"rate_bits": 3, "gain": 2.0},
      "simulate": {...}, "ams": {...}, "bound": {...}, "entropy": {...},
      "channel_experiment": {...}, "lemmas": {...}, "noisy_demo": {...}
    }

Model drifts: ``{"type": "linear", "matrix": A}`` and ``{"type": "sqrt_decay"}``
for additive models; semilinear models give ``"matrices": {label: A(u)}`` and
an optional ``"input_matrix"``.  Channels: ``noiseless`` (``size``), ``bsc``
(``crossover``), ``dmc`` (``matrix`` or ``matrix_csv``).  Every error names
the offending key.
"""
from __future__ import annotations

import copy
import json
from pathlib import Path
from typing import Any, Optional

import numpy as np

from .ams import Box
from .channels import ChannelModel, bsc, dmc, load_matrix_csv, noiseless
from .errors import InputError, StabcapError
from .models import (Distribution, DensityBounds, SystemModel, linear_model, semilinear_model,
                     sqrt_decay_scalar)
from .policies import ZoomPolicy

SCHEMA_VERSION = "1"

VERB_SECTIONS = {
    "simulate": {"horizon": 100, "count": 10, "controls": None, "closed_loop": True},
    "ams": {"horizon": 1000, "count": 100, "sets": [{"low": [-20.0], "high": [20.0]}],
            "windows": None, "epsilon": 0.05, "moment_p": 1.0, "closed_loop": True},
    "bound": {"theorem": "linear", "matrix": None, "region": None, "q": None, "grid": 10000,
              "moment": 1.0, "p": 1.0, "kappa_max": 100.0, "profile_grid": 10000,
              "blocks": None, "n_max": 8, "budget": 1000000},
    "entropy": {"box": {"low": [-1.0], "high": [1.0]}, "horizons": [2, 3, 4, 5, 6],
                "rho": 0.0, "r": 0.0, "samples": 1000, "candidate_source": "lattice",
                "lattice_bits": 1, "control_range": [-1.0, 1.0], "sampling": "stratified"},
    "channel_experiment": {"rates": [0.25, 0.9], "blocklength": 200, "trials": 500,
                           "max_codewords": 4096, "tol": 1e-9},
    "lemmas": {"horizons": [64, 128, 256, 512], "r": 0.25, "alpha": 0.5,
               "intervals": None, "random_collections": 0, "max_intervals": 50, "length": 1.0},
    "noisy_demo": {"b": 1.0, "r_star": 0.1, "horizons": [4, 6, 8, 10], "trials": 100,
                   "alpha": 0.001, "L": 100, "noise_mode": "per_trial", "domain": None,
                   "eps_grid": [0.1, 0.01, 0.001], "tail_family": "gaussian"},
}


def _err(key: str, msg: str) -> InputError:
    return InputError(f"{key}: {msg}")


def load(path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"--config: cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"--config: invalid JSON at line {exc.lineno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise InputError("--config: top level must be a JSON object")
    return data


def set_path(cfg: dict, dotted: str, value: Any) -> None:
    """Apply an override ``a.b.c=value``; the value is parsed as JSON when possible."""
    keys = dotted.split(".")
    node = cfg
    for k in keys[:-1]:
        nxt = node.setdefault(k, {})
        if not isinstance(nxt, dict):
            raise _err(dotted, f"{k} is not an object")
        node = nxt
    node[keys[-1]] = value


def parse_value(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def resolve(cfg: dict, verb_section: Optional[str], seed: Optional[int]) -> dict:
    """Copy of ``cfg`` with the seed settled and the verb section's defaults filled in."""
    out = copy.deepcopy(cfg)
    if seed is not None:
        out["seed"] = seed
    if "seed" not in out:
        raise _err("seed", "missing (set it in the config or pass --seed)")
    if isinstance(out["seed"], bool) or not isinstance(out["seed"], int) or out["seed"] < 0:
        raise _err("seed", "must be a nonnegative integer")
    if verb_section:
        section = out.setdefault(verb_section, {})
        if not isinstance(section, dict):
            raise _err(verb_section, "must be an object")
        defaults = VERB_SECTIONS[verb_section]
        unknown = set(section) - set(defaults)
        if unknown:
            raise _err(f"{verb_section}.{sorted(unknown)[0]}", "unknown key")
        for k, v in defaults.items():
            section.setdefault(k, copy.deepcopy(v))
    if "model" in out:
        out["model"] = _normalise_model(out["model"])
    return out


def _normalise_model(spec: dict) -> dict:
    if not isinstance(spec, dict):
        raise _err("model", "must be an object")
    spec = dict(spec)
    spec.setdefault("kind", "additive")
    spec.setdefault("noise", {"family": "zero"})
    spec.setdefault("init", {"family": "zero"})
    return spec


def distribution(spec, key: str) -> Distribution:
    if not isinstance(spec, dict) or "family" not in spec:
        raise _err(key, "must be an object with a 'family' field")
    params = {k: v for k, v in spec.items() if k != "family"}
    try:
        return Distribution(spec["family"], params)
    except StabcapError as exc:
        raise type(exc)(f"{key}: {exc}") from None
    except KeyError as exc:
        raise _err(f"{key}.{exc.args[0]}", "missing") from None


def _matrix(value, key: str) -> np.ndarray:
    try:
        a = np.atleast_2d(np.asarray(value, dtype=float))
    except (TypeError, ValueError):
        raise _err(key, "must be a numeric matrix") from None
    if a.ndim != 2 or not np.all(np.isfinite(a)):
        raise _err(key, "must be a finite 2-D matrix")
    return a


def build_model(spec: dict) -> SystemModel:
    spec = _normalise_model(spec)
    noise = distribution(spec["noise"], "model.noise")
    init = distribution(spec["init"], "model.init")
    db = None
    if spec.get("density_bounds") is not None:
        d = spec["density_bounds"]
        try:
            db = DensityBounds(float(d["p_min"]), float(d["p_max"]), tuple(d["support"]))
        except KeyError as exc:
            raise _err(f"model.density_bounds.{exc.args[0]}", "missing") from None
        except InputError as exc:
            raise _err("model.density_bounds", str(exc)) from None
    kind = spec["kind"]
    if kind == "semilinear":
        if "matrices" not in spec or not isinstance(spec["matrices"], dict):
            raise _err("model.matrices", "semilinear models need a label -> matrix object")
        mats = {str(k): _matrix(v, f"model.matrices.{k}") for k, v in spec["matrices"].items()}
        B = spec.get("input_matrix")
        try:
            return semilinear_model(mats, None if B is None else _matrix(B, "model.input_matrix"),
                                    noise, init)
        except InputError as exc:
            raise _err("model.matrices", str(exc)) from None
    if kind != "additive":
        raise _err("model.kind", f"unsupported kind {kind!r} (additive or semilinear)")
    drift = spec.get("drift")
    if not isinstance(drift, dict) or "type" not in drift:
        raise _err("model.drift", "must be an object with a 'type' field")
    if drift["type"] == "linear":
        A = _matrix(drift.get("matrix"), "model.drift.matrix")
        if A.shape[0] != A.shape[1]:
            raise _err("model.drift.matrix", "must be square")
        m = linear_model(A, noise, init, db)
    elif drift["type"] == "sqrt_decay":
        m = sqrt_decay_scalar(noise, init, db)
    else:
        raise _err("model.drift.type", f"unsupported drift {drift['type']!r} (linear or sqrt_decay)")
    dim = spec.get("dimension")
    if dim is not None and dim != m.dimension:
        raise _err("model.dimension", f"{dim} does not match the drift dimension {m.dimension}")
    return m


def build_channel(spec: dict) -> ChannelModel:
    if not isinstance(spec, dict) or "kind" not in spec:
        raise _err("channel", "must be an object with a 'kind' field")
    kind = spec["kind"]
    try:
        if kind == "noiseless":
            return noiseless(int(spec.get("size", 2)))
        if kind == "bsc":
            if "crossover" not in spec:
                raise _err("channel.crossover", "missing")
            return bsc(float(spec["crossover"]))
        if kind == "dmc":
            if "matrix" in spec:
                return dmc(_matrix(spec["matrix"], "channel.matrix"))
            if "matrix_csv" in spec:
                return dmc(load_matrix_csv(spec["matrix_csv"]))
            raise _err("channel.matrix", "dmc needs 'matrix' or 'matrix_csv'")
    except OSError as exc:
        raise _err("channel.matrix_csv", f"cannot read: {exc}") from None
    except InputError as exc:
        if str(exc).startswith("channel"):
            raise
        raise _err(f"channel.{kind}", str(exc)) from None
    raise _err("channel.kind", f"unsupported kind {kind!r} (noiseless, bsc or dmc)")


def build_policy(spec: dict) -> ZoomPolicy:
    if not isinstance(spec, dict) or "rate_bits" not in spec:
        raise _err("policy.rate_bits", "missing")
    fields = set(ZoomPolicy.__dataclass_fields__)
    bad = set(spec) - fields
    if bad:
        raise _err(f"policy.{sorted(bad)[0]}", "unknown key")
    args = dict(spec)
    if isinstance(args.get("gain"), list):
        args["gain"] = tuple(args["gain"])
    try:
        return ZoomPolicy(**args)
    except InputError as exc:
        raise _err("policy", str(exc)) from None


def build_box(spec, key: str) -> Box:
    if not isinstance(spec, dict) or "low" not in spec or "high" not in spec:
        raise _err(key, "box needs 'low' and 'high'")
    try:
        return Box(tuple(np.atleast_1d(spec["low"])), tuple(np.atleast_1d(spec["high"])))
    except InputError as exc:
        raise _err(key, str(exc)) from None


def require(cfg: dict, key: str) -> Any:
    if key not in cfg or cfg[key] is None:
        raise _err(key, "missing")
    return cfg[key]
