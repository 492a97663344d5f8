"""Flat key-value scenario configuration.

Format: one `section.key = value` per line, `#` starts a comment.  Values are
parsed as float/int/bool/string; comma-separated lists are allowed for the
`envelopes` key.  The same text round-trips through `render_config`, which is
what the provenance echo in reports uses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConfigError
from .measures import (
    PotentialSpec,
    ProbabilityMeasure1D,
    build_measure,
    eigen_perturbation,
    shifted_gaussian_density,
    step_density,
    tabulated_density,
    tail_ratio_density,
)
from .simulate import SimConfig

_KNOWN_SECTIONS = ("potential", "grid", "initial", "sim", "psi",
                   "envelope", "envelopes", "analysis", "compare")


def parse_config_text(text: str) -> dict:
    """Parse flat `section.key = value` lines into an ordered dict."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        key = key.strip()
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        section = key.split(".", 1)[0]
        if section not in _KNOWN_SECTIONS:
            raise ConfigError(f"line {lineno}: unknown section {section!r} in key {key!r}")
        out[key] = value.strip()
    return out


def load_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return parse_config_text(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc


def render_config(cfg: dict) -> str:
    return "\n".join(f"{k} = {v}" for k, v in sorted(cfg.items())) + "\n"


def _get(cfg: dict, key: str, default=None, required: bool = False) -> Optional[str]:
    if key in cfg and cfg[key] != "":
        return cfg[key]
    if required:
        raise ConfigError(f"missing required key {key!r}")
    return default


def _get_float(cfg, key, default=None, required=False) -> Optional[float]:
    raw = _get(cfg, key, None, required)
    if raw is None:
        return default
    try:
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"key {key!r}: expected a number, got {raw!r}") from exc


def _get_int(cfg, key, default=None, required=False) -> Optional[int]:
    raw = _get(cfg, key, None, required)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError as exc:
        raise ConfigError(f"key {key!r}: expected an integer, got {raw!r}") from exc


def _get_bool(cfg, key, default=False) -> bool:
    raw = _get(cfg, key, None)
    if raw is None:
        return default
    if raw.lower() in ("true", "1", "yes", "on"):
        return True
    if raw.lower() in ("false", "0", "no", "off"):
        return False
    raise ConfigError(f"key {key!r}: expected a boolean, got {raw!r}")


@dataclass
class Scenario:
    """A fully resolved scenario; `build` materializes measure and h0."""

    config: dict
    potential: PotentialSpec
    n_points: int
    tail_tol: float
    initial_family: str
    initial_params: dict
    sim: SimConfig
    psi_name: str
    psi_a: Optional[float]
    envelope_names: list
    calibrate: bool
    clipped_mass: float = 0.0
    seed: int = 0

    def build_measure(self) -> ProbabilityMeasure1D:
        return build_measure(self.potential, self.n_points, self.tail_tol)

    def build_initial(self, mu: ProbabilityMeasure1D) -> np.ndarray:
        fam = self.initial_family
        p = self.initial_params
        if fam == "eigen_perturbation":
            return eigen_perturbation(mu, p["epsilon"])
        if fam == "step":
            return step_density(mu)
        if fam == "shifted_gaussian":
            return shifted_gaussian_density(mu, p["shift"])
        if fam == "tail_ratio":
            h, clipped = tail_ratio_density(mu, p["p"], cap=p.get("cap", 50.0))
            self.clipped_mass = clipped
            return h
        if fam == "tabulated":
            data = np.loadtxt(p["path"], delimiter=",", skiprows=1)
            return tabulated_density(mu, data[:, 0], data[:, 1])
        raise ConfigError(f"unknown initial density family {fam!r}")


def scenario_from_config(cfg: dict) -> Scenario:
    fam = _get(cfg, "potential.family", required=True)
    if fam == "gaussian":
        potential = PotentialSpec.gaussian(_get_float(cfg, "potential.sigma",
                                                      math.sqrt(0.5)))
    elif fam == "power":
        potential = PotentialSpec.power(_get_float(cfg, "potential.alpha", required=True),
                                        _get_float(cfg, "potential.scale", 1.0))
    elif fam == "power_log":
        potential = PotentialSpec.power_log(_get_float(cfg, "potential.alpha", required=True))
    elif fam == "tabulated":
        data = np.loadtxt(_get(cfg, "potential.path", required=True),
                          delimiter=",", skiprows=1)
        potential = PotentialSpec.tabulated(data[:, 0], data[:, 1])
    else:
        raise ConfigError(f"unknown potential family {fam!r}")

    init_fam = _get(cfg, "initial.family", "eigen_perturbation")
    init_params = {
        "epsilon": _get_float(cfg, "initial.epsilon", 0.2),
        "shift": _get_float(cfg, "initial.shift", 0.5),
        "p": _get_float(cfg, "initial.p", 1.0),
        "cap": _get_float(cfg, "initial.cap", 50.0),
        "path": _get(cfg, "initial.path", ""),
    }
    sim = SimConfig(
        dt=_get_float(cfg, "sim.dt", 1e-3),
        t_end=_get_float(cfg, "sim.t_end", 3.0),
        scheme=_get(cfg, "sim.scheme", "implicit_euler"),
        save_every=_get_int(cfg, "sim.save_every", 50),
        positivity_floor=_get_float(cfg, "sim.positivity_floor", 0.0),
    )
    env_raw = _get(cfg, "envelopes", "")
    names = [e.strip() for e in env_raw.split(",") if e.strip()]
    return Scenario(
        config=dict(cfg),
        potential=potential,
        n_points=_get_int(cfg, "grid.n_points", 4001),
        tail_tol=_get_float(cfg, "grid.tail_tol", 1e-16),
        initial_family=init_fam,
        initial_params=init_params,
        sim=sim,
        psi_name=_get(cfg, "psi.eta", "quadratic"),
        psi_a=_get_float(cfg, "psi.a", None),
        envelope_names=names,
        calibrate=_get_bool(cfg, "envelopes.calibrate", True),
    )


def load_scenario(path: str) -> Scenario:
    return scenario_from_config(load_config(path))
