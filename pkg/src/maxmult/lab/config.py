"""Experiment configuration: defaults, JSON loading, fingerprints and refinement.

A config is a plain JSON object. Unknown keys are kept (and fingerprinted) so
reports always describe exactly what ran. Schema::

    schema        int, currently 1
    experiment    registry name
    grid          {"dim", "N", "L"}    operator grid
    shell_grid    {"dim", "N", "L"}    lattice for shell data (Nyquist >= 2)
    window        {"profile", "j_min", "j_max"}
    tgrid         {"t_min", "t_max", "ratio"}
    eps           m~ parameter in (0, 1/6)
    mesh          {"levels", "order", "mtilde_splits"}
    symbols       [{"family", "params"}, ...]
    corpus        {"seed", "count", "band"}  (band as fractions of Nyquist)
    sweeps        experiment-specific lists
    refined       bool, set by ``refine``
"""

from __future__ import annotations

import copy
import json
import math
from pathlib import Path

from ..dilation import TGrid
from ..dyadic import WindowFamily
from ..errors import InvalidParameter
from ..fraccalc import GradedMesh
from ..grid import Grid
from ..provenance import fingerprint

__all__ = [
    "SCHEMA",
    "BASE_DEFAULTS",
    "EXPERIMENT_DEFAULTS",
    "deep_merge",
    "default_config",
    "load_config",
    "config_fingerprint",
    "refine",
    "grid_of",
    "window_of",
    "tgrid_of",
    "mesh_of",
]

SCHEMA = 1

BASE_DEFAULTS = {
    "schema": SCHEMA,
    "grid": {"dim": 1, "N": 4096, "L": 256.0},
    "shell_grid": {"dim": 1, "N": 4096, "L": 512.0},
    "window": {"profile": "mollifier-v1", "j_min": -20, "j_max": 20},
    "tgrid": {"t_min": 2.0**-10, "t_max": 2.0**10, "ratio": 2.0 ** (1 / 16)},
    "eps": 0.05,
    "mesh": {"levels": 48, "order": 12, "mtilde_splits": 4},
    "corpus": {"seed": 12345, "count": 10, "band": [0.125, 0.5]},
    "refined": False,
}

_WINDOW = {"family": "window"}
_ANNULUS = {"family": "annulus", "params": {"r_in": 0.5, "r_out": 4.0}}
_RING_OSC = {"family": "annulus", "params": {"r_in": 0.5, "r_out": 4.0, "omega": 3.0}}
_SLOW = {"family": "slow_decay", "params": {"alpha": 0.5, "beta": 1.0, "cutoff_radius": 1.0}}
_SLOW_Q = {"family": "slow_decay", "params": {"alpha": 0.25, "beta": 1.0, "cutoff_radius": 1.0}}
_LIMITED = {"family": "limited_decay", "params": {"a": 1.0, "b": 2.0}}

EXPERIMENT_DEFAULTS = {
    "domination": {
        "symbols": [_WINDOW, _ANNULUS, _RING_OSC, _SLOW, _SLOW_Q, _LIMITED],
        "sweeps": {"tolerance": 1.05},
    },
    "embedding": {
        "symbols": [_WINDOW, _ANNULUS, _RING_OSC, _SLOW],
        "window": {"j_min": -12, "j_max": 16},
        "sweeps": {"beta": [0.0, 1.0], "band": 20.0, "stability": 0.2,
                   "hnorm_tgrid": {"t_min": 2.0**-4, "t_max": 2.0**18, "ratio": 2.0 ** (1 / 16)}},
    },
    "scaling_claim": {
        "symbols": [_WINDOW, _ANNULUS, _RING_OSC, _SLOW],
        "sweeps": {"s": [0.9, 0.99, 0.999], "trend_slack": 0.2},
    },
    "slow_decay_law": {
        "sweeps": {
            "cases": [[0.5, 1.0, 1.0], [0.5, 1.0, 0.0], [0.25, 1.0, 2.0]],
            "classify": [[0.5, 1.0], [0.25, 1.0]],
            "s_step": 0.1,
            "tolerance": 0.1,
            "fit": [7.0, 13.0],
        },
        "shell_grid": {"dim": 1, "N": 65536, "L": 8192.0},
    },
    "norm_equivalence": {
        "symbols": [_WINDOW, _ANNULUS, _RING_OSC],
        "grid": {"dim": 1, "N": 4096, "L": 128.0},
        "window": {"j_min": -12, "j_max": 12},
        "sweeps": {"orders": [1], "alphas": [0.3, 0.5], "theta": 0.0,
                   "dilation_drift": 0.02, "grid_drift": 0.1, "band": 10.0},
    },
    "theorem_ratio": {
        "symbols": [_WINDOW, _SLOW, {"family": "slow_decay", "params": {"alpha": 0.5, "beta": 0.25}}],
        "sweeps": {"p": [4.0 / 3.0, 2.0, 4.0], "s_margin": 0.1, "stability": 0.1},
    },
    "convergence": {
        "sweeps": {"alpha": 0.5, "beta": 0.75, "n_max": 12, "p": [2.0, 3.0],
                   "decay_target": 1e-3, "slope_slack": 0.05,
                   "packet": {"xi0": 1.0, "width": 8.0}},
    },
    "limited_decay": {
        "symbols": [_LIMITED],
        "shell_grid": {"dim": 1, "N": 65536, "L": 8192.0},
        "sweeps": {"s": [0.0, 1.0, 2.0], "fit": [8, 14], "tolerance": 0.1,
                   "sphere_alpha": 0.5, "sphere_grid": {"dim": 3, "N": 64, "L": 8.0},
                   "n": [2, 10], "slope_slack": 0.05, "corpus_count": 3},
    },
}


def deep_merge(base: dict, override: dict) -> dict:
    """Recursive dict merge; ``override`` wins, lists are replaced wholesale."""
    out = copy.deepcopy(base)
    for k, v in override.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = deep_merge(out[k], v)
        else:
            out[k] = copy.deepcopy(v)
    return out


def default_config(experiment: str | None = None) -> dict:
    cfg = copy.deepcopy(BASE_DEFAULTS)
    if experiment is not None:
        if experiment not in EXPERIMENT_DEFAULTS:
            raise InvalidParameter(f"unknown experiment {experiment!r}")
        cfg = deep_merge(cfg, EXPERIMENT_DEFAULTS[experiment])
        cfg["experiment"] = experiment
    return cfg


def load_config(path, experiment: str | None = None) -> dict:
    """Defaults for ``experiment`` overlaid with the JSON file at ``path``."""
    user = json.loads(Path(path).read_text())
    if not isinstance(user, dict):
        raise InvalidParameter("config must be a JSON object")
    name = experiment or user.get("experiment")
    cfg = deep_merge(default_config(name), user)
    if name is not None:
        cfg["experiment"] = name
    _validate(cfg)
    return cfg


def _validate(cfg: dict) -> None:
    if cfg.get("schema", SCHEMA) != SCHEMA:
        raise InvalidParameter(f"unsupported config schema {cfg.get('schema')}")
    grid_of(cfg)
    grid_of(cfg, "shell_grid")
    window_of(cfg)
    tgrid_of(cfg)
    if not 0 < float(cfg["eps"]) < 1 / 6:
        raise InvalidParameter("eps must lie in (0, 1/6)")
    for key, val in cfg.get("sweeps", {}).items():
        if isinstance(val, list) and not val:
            raise InvalidParameter(f"sweep {key!r} is empty")


def config_fingerprint(cfg: dict) -> str:
    """Content hash of everything that affects results (output location excluded)."""
    return fingerprint({k: v for k, v in cfg.items() if k != "out"})


def refine(cfg: dict) -> dict:
    """Doubled resolution: operator grid ``N -> 2N`` at fixed box, shell grid
    ``(N, L) -> (2N, 2L)``, dilation ratio square-rooted. The corpus band stays
    pinned to the unrefined grid."""
    out = copy.deepcopy(cfg)
    out["corpus"] = dict(out.get("corpus", {}))
    out["corpus"].setdefault("base_grid", dict(cfg["grid"]))
    out["grid"] = dict(cfg["grid"], N=2 * int(cfg["grid"]["N"]))
    sg = cfg["shell_grid"]
    out["shell_grid"] = dict(sg, N=2 * int(sg["N"]), L=2.0 * float(sg["L"]))
    out["tgrid"] = dict(cfg["tgrid"], ratio=math.sqrt(float(cfg["tgrid"]["ratio"])))
    out["refined"] = True
    return out


def grid_of(cfg: dict, key: str = "grid") -> Grid:
    g = cfg[key]
    return Grid(int(g["dim"]), int(g["N"]), float(g["L"]))


def window_of(cfg: dict) -> WindowFamily:
    w = cfg["window"]
    return WindowFamily(int(w["j_min"]), int(w["j_max"]), w.get("profile", "mollifier-v1"))


def tgrid_of(cfg: dict, spec: dict | None = None) -> TGrid:
    t = spec if spec is not None else cfg["tgrid"]
    return TGrid(float(t["t_min"]), float(t["t_max"]), float(t["ratio"]))


def mesh_of(cfg: dict) -> GradedMesh:
    m = cfg.get("mesh", {})
    return GradedMesh(levels=int(m.get("levels", 48)), order=int(m.get("order", 12)),
                      mtilde_splits=int(m.get("mtilde_splits", 4)))
