"""Named parameter sets for the solution families and their default grids.

Each case resolves a flat dict of user overrides into a DimensionlessParams,
a WaveFrame and a WaveProfile, plus the derived constants worth recording.
"""

from __future__ import annotations

import math

from .errors import ConfigError
from .families import (
    beta0_from_A0,
    build_tan_solution,
    build_tanh_soliton,
    build_two_artanh_soliton,
    c1_case11,
    implicit_case11,
    soliton_constraints_n2,
    solve_case00,
    stationary_case11,
    train_constraints_n6,
)
from .material import DimensionlessParams
from .travelling import WaveFrame, profile_from_implicit

N2_DEFAULT = {"alpha": 1.25, "gamma": [0.08, -0.01], "beta0": 0.1, "k": 0.2, "w": 0.7, "c1": 0.0, "c2": 0.0}

CASES = {
    "n2-tanh": {
        "defaults": dict(N2_DEFAULT),
        "xi": (-0.05, 0.05, 201),
        "sim": {"x_min": -0.25, "x_max": 0.75, "travel": 0.5, "nx": 4096},
    },
    "n2-tan": {
        "defaults": {**N2_DEFAULT, "c1": -2.0},
        "xi": (-0.005, 0.005, 201),
        "sim": None,
    },
    "n6-train": {
        "defaults": {"alpha": 1.25, "k": 0.8, "w": 0.7, "b1": -1.0, "b2": 1.0, "A0": 1.0, "A2": None,
                     "gamma3": None, "beta0": None, "c1": 0.0, "c2": 0.0, "branch": None},
        "xi": (-10.0, 10.0, 401),
        "sim": {"x_min": -20.0, "x_max": 20.0, "travel": 10.0, "nx": 2048},
    },
    "case00": {
        "defaults": {"alpha": 1.0, "gamma": [1.0], "beta": [1.0], "k": 1.0, "w": 2.0, "c1": 0.0, "c2": 0.0, "sign": 1},
        "xi": (-2.0, 2.0, 101),
        "sim": None,
    },
    "case11-implicit": {
        "defaults": {"alpha": 1.2, "gamma": [0.5, 0.4], "beta": [0.3, 0.2], "k": 1.0, "w": 0.9, "c2": 0.0},
        "xi": (1.0, 5.0, 81),
        "sim": {"x_min": 2.0, "x_max": 4.0, "travel": 1.0, "nx": 128},
    },
    "case11-stationary": {
        "defaults": {"alpha": 1.25, "gamma": [0.5, 0.4], "beta": [1.0, 1.0], "k": 1.0, "c3": 1.0, "c4": 0.0,
                     "c5": None, "sign": 1},
        "xi": (-5.0, 0.45, 111),
        "sim": None,
    },
}


def resolve(case, overrides=None):
    """Merge overrides into the case defaults (None values are ignored)."""
    if case not in CASES:
        raise ConfigError(f"unknown case {case!r}; choose from {', '.join(CASES)}")
    vals = dict(CASES[case]["defaults"])
    for key, v in (overrides or {}).items():
        if v is None:
            continue
        if key not in vals and key != "beta":
            raise ConfigError(f"parameter {key!r} does not apply to case {case!r}")
        vals[key] = v
    return vals


def _train(v):
    a, k, w = v["alpha"], v["k"], v["w"]
    # c0 = gamma3/4 = 1/(w alpha) by default
    g3 = v["gamma3"] if v["gamma3"] is not None else 4.0 / (w * a)
    beta0 = v["beta0"] if v["beta0"] is not None else beta0_from_A0(v["b1"], v["b2"], g3, a, k, w, v["A0"])
    v["gamma3"], v["beta0"] = g3, beta0
    return train_constraints_n6(v["b1"], v["b2"], g3, a, k, w, beta0, A2=v["A2"])


def train_params(overrides=None):
    """TrainParams of the n6-train case."""
    return _train(resolve("n6-train", overrides))


def build(case, overrides=None):
    """(WaveProfile, DimensionlessParams, WaveFrame, resolved parameter dict)."""
    v = resolve(case, overrides)
    if case in ("n2-tanh", "n2-tan"):
        g0, g1 = v["gamma"]
        if "beta" in v:
            beta = list(v["beta"])
            strict = False
        else:
            b1, b2 = soliton_constraints_n2(g0, g1, v["alpha"], v["k"], v["w"])
            beta = [v["beta0"], b1, b2]
            strict = True
        p = DimensionlessParams(v["alpha"], beta, (g0, g1))
        f = WaveFrame(v["k"], v["w"], v["c1"], v["c2"])
        wp = (build_tanh_soliton if case == "n2-tanh" else build_tan_solution)(p, f, strict=strict)
    elif case == "n6-train":
        tp = _train(v)
        p = tp.params()
        f = WaveFrame(v["k"], v["w"], v["c1"], v["c2"])
        wp = build_two_artanh_soliton(tp, p, f, branch=v["branch"])
    elif case == "case00":
        p = DimensionlessParams(v["alpha"], v["beta"], v["gamma"])
        f = WaveFrame(v["k"], v["w"], v["c1"], v["c2"])
        wp = solve_case00(p, f, v["sign"])
    elif case == "case11-implicit":
        p = DimensionlessParams(v["alpha"], v["beta"], v["gamma"])
        c1 = c1_case11(p, v["k"], v["w"])
        f = WaveFrame(v["k"], v["w"], c1, v["c2"])
        ip = implicit_case11(p, f)
        wp = profile_from_implicit(ip, p, f, "case11-implicit")
        v["c1"] = c1
        v["u_domain"] = list(ip.domain)
        v["phi"] = ip.phi.to_dict()
    else:
        p = DimensionlessParams(v["alpha"], v["beta"], v["gamma"])
        f = WaveFrame(v["k"], 0.0)
        wp = stationary_case11(p, v["k"], v["c3"], v["c4"], v["sign"], v["c5"])
    return wp, p, f, v


def jsonable(obj):
    """Recursively convert numbers and containers into plain JSON values."""
    if isinstance(obj, dict):
        return {str(k): jsonable(x) for k, x in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(x) for x in obj]
    if hasattr(obj, "item") and not isinstance(obj, (str, bytes)):
        obj = obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    return obj


def describe(case, overrides=None):
    """Parameter dump: inputs, (alpha, beta, gamma), frame and derived constants."""
    wp, p, f, v = build(case, overrides)
    return jsonable({
        "case": case,
        "inputs": v,
        "params": p.to_dict(),
        "frame": f.to_dict(),
        "profile": {"kind": wp.kind, "family": wp.family, "domain_xi": list(wp.domain_xi),
                    "soliton": wp.soliton, "constants": wp.constants},
    })
