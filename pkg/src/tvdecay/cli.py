"""Scenario-driven command line: analyze | bounds | simulate | compare.

Outputs are deterministic: identical configs produce byte-identical CSV/JSON
(17 significant digits, sorted JSON keys, no wall-clock anywhere).  Exit
codes: 0 success, 2 configuration error, 3 numeric failure (the failing
operation is named on stderr).  TVDECAY_THREADS caps the thread pool used to
evaluate envelopes in parallel.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .config import Scenario, load_scenario, render_config
from .envelopes import (
    DecayEnvelope,
    envelope_curvature,
    envelope_hellinger,
    envelope_ipsi,
    envelope_logsob,
    envelope_orlicz,
    envelope_poincare_l2,
    envelope_restricted_logsob,
    envelope_truncation_logsob,
    envelope_truncation_poincare,
    envelope_weak_logsob,
    envelope_weak_poincare,
)
from .errors import ConfigError, TvDecayError
from .inequalities import (
    BetaFunction,
    bakry_emery,
    capacity_condition_check,
    muckenhoupt_poincare,
)
from .measures import integrate
from .psi import (
    build_psi_from_eta,
    eta_entropy,
    eta_power,
    eta_quadratic,
    psi_entropy_classical,
)
from .simulate import evolve
from ._numerics import fit_log_slope


def _fmt(x) -> str:
    if isinstance(x, float) and math.isnan(x):
        return "nan"
    return format(float(x), ".17g")


def write_csv(path: Path, header: list, columns: list) -> None:
    rows = len(columns[0])
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for i in range(rows):
            fh.write(",".join(_fmt(col[i]) for col in columns) + "\n")


def write_json(path: Path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True, allow_nan=True)
        fh.write("\n")


def _jsonable(x):
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


# ---------------------------------------------------------------------------
# analysis assembly
# ---------------------------------------------------------------------------

def _eta_from_name(name: str):
    if name == "quadratic":
        return eta_quadratic()
    if name == "entropy":
        return eta_entropy()
    if name.startswith("power(") and name.endswith(")"):
        return eta_power(float(name[6:-1]))
    raise ConfigError(f"unknown psi.eta selection {name!r}")


def _psi_from_scenario(scn: Scenario):
    return build_psi_from_eta(_eta_from_name(scn.psi_name), scn.psi_a)


def analyze_scenario(scn: Scenario, mu) -> dict:
    cfg = scn.config
    bracket = muckenhoupt_poincare(mu)
    w_osc = float(cfg.get("analysis.w_osc", 0.0) or 0.0)
    be = bakry_emery(mu, w_osc=w_osc)
    c_p_override = cfg.get("analysis.c_p_override", "")
    c_p = float(c_p_override) if c_p_override else bracket.C_P_interval[1]
    rho_override = cfg.get("analysis.rho_override", "")
    rho = float(rho_override) if rho_override else be.rho
    c_ls_override = cfg.get("analysis.c_ls_override", "")
    c_ls = float(c_ls_override) if c_ls_override else be.C_LS
    capacity = None
    if scn.config.get("analysis.capacity_rho", ""):
        eta = _eta_from_name(scn.psi_name)
        rho_cap = float(cfg["analysis.capacity_rho"])
        a = scn.psi_a if scn.psi_a is not None else max(2.1, eta.b + 0.1)
        f_const = float(cfg.get("analysis.capacity_f_const", 1.0))
        chk = capacity_condition_check(
            mu, lambda u: np.full_like(np.asarray(u, float), f_const),
            eta, a, rho_cap)
        capacity = {
            "HprimeF_sup_right": chk.HprimeF_sup_right,
            "HprimeF_sup_left": chk.HprimeF_sup_left,
            "C_cap": chk.C_cap,
            "C_eta_bound": chk.C_eta_bound,
            "alt_remark_ratio_sup": chk.alt_remark_ratio_sup,
            "alt_remark_flag": chk.alt_remark_flag,
        }
    return {
        "poincare": {
            "B_plus": bracket.B_plus,
            "B_minus": bracket.B_minus,
            "B": bracket.B,
            "C_P_interval": list(bracket.C_P_interval),
        },
        "bakry_emery": {"rho": be.rho, "C_LS": be.C_LS, "w_osc": w_osc},
        "effective": {"C_P": c_p, "C_LS": c_ls, "rho": rho},
        "capacity": capacity,
    }


# ---------------------------------------------------------------------------
# envelope assembly
# ---------------------------------------------------------------------------

def _phi_from_config(cfg: dict, name: str, default_family: str, default_param: float):
    fam = cfg.get(f"envelope.{name}.phi", default_family)
    if fam == "power":
        q = float(cfg.get(f"envelope.{name}.q", default_param))
        return (lambda u: np.asarray(u, float) ** (q - 1.0)), {"phi": "power", "q": q}
    if fam == "logbeta":
        b = float(cfg.get(f"envelope.{name}.beta_exp", default_param))
        return (lambda u: np.maximum(np.log(np.maximum(np.asarray(u, float), 1e-300)),
                                     0.0) ** b), {"phi": "logbeta", "beta_exp": b}
    if fam == "linear":
        return (lambda u: np.asarray(u, float)), {"phi": "linear"}
    if fam == "loglog":
        return (lambda u: np.log1p(np.maximum(np.log(np.maximum(
            np.asarray(u, float), 1.0)), 0.0))), {"phi": "loglog"}
    raise ConfigError(f"unknown phi family {fam!r} for envelope {name!r}")


def _beta_from_config(cfg: dict, name: str, default: BetaFunction) -> BetaFunction:
    form = cfg.get(f"envelope.{name}.beta_form", "")
    if not form:
        return default
    if form == "constant":
        return BetaFunction.constant(float(cfg.get(f"envelope.{name}.beta_c", 1.0)))
    if form == "power":
        return BetaFunction.power(float(cfg.get(f"envelope.{name}.beta_c", 1.0)),
                                  float(cfg.get(f"envelope.{name}.beta_q", 1.0)))
    if form == "logpower":
        return BetaFunction.logpower(float(cfg.get(f"envelope.{name}.beta_d", 1.0)),
                                     float(cfg.get(f"envelope.{name}.beta_r", 1.0)),
                                     float(cfg.get(f"envelope.{name}.beta_s0", 2.0)))
    raise ConfigError(f"unknown beta_form {form!r} for envelope {name!r}")


def build_envelope(name: str, scn: Scenario, mu, h0, constants: dict) -> DecayEnvelope:
    cfg = scn.config
    c_p = constants["effective"]["C_P"]
    c_ls = constants["effective"]["C_LS"]
    rho = constants["effective"]["rho"]

    def moment_of(phi):
        return integrate(mu, h0 * phi(h0))

    if name == "poincare_l2":
        l2 = math.sqrt(integrate(mu, (h0 - 1.0) ** 2))
        return envelope_poincare_l2(c_p, l2)
    if name == "truncation_poincare":
        phi, meta = _phi_from_config(cfg, name, "power", 1.5)
        env = envelope_truncation_poincare(c_p, phi, moment_of(phi))
        env.params.update(meta)
        return env
    if name == "weak_poincare":
        phi, meta = _phi_from_config(cfg, name, "power", 1.5)
        beta = _beta_from_config(cfg, name, BetaFunction.constant(c_p))
        env = envelope_weak_poincare(beta, phi, moment_of(phi))
        env.params.update(meta)
        return env
    if name == "orlicz":
        phi, meta = _phi_from_config(cfg, name, "power", 3.0)
        beta = _beta_from_config(cfg, name, BetaFunction.constant(c_p))
        env = envelope_orlicz(beta, phi, moment_of(phi),
                              C=float(cfg.get("envelope.orlicz.C", 1.0)))
        env.params.update(meta)
        return env
    if name == "logsob":
        if c_ls is None:
            raise TvDecayError("logsob envelope needs a positive C_LS "
                               "(rho <= 0 and no override)")
        ent = integrate(mu, np.where(h0 > 0, h0 * np.log(np.maximum(h0, 1e-300)), 0.0))
        return envelope_logsob(c_ls, ent)
    if name == "truncation_logsob":
        if c_ls is None:
            raise TvDecayError("truncation_logsob envelope needs a positive C_LS")
        phi, meta = _phi_from_config(cfg, name, "logbeta", 1.0)
        env = envelope_truncation_logsob(c_ls, phi, moment_of(phi))
        env.params.update(meta)
        return env
    if name == "weak_logsob":
        phi, meta = _phi_from_config(cfg, name, "power", 1.5)
        default = BetaFunction.constant(c_ls if c_ls else 1.0)
        beta = _beta_from_config(cfg, name, default)
        env = envelope_weak_logsob(beta, phi, moment_of(phi),
                                   eps=float(cfg.get("envelope.weak_logsob.eps",
                                                     1.0 / math.e)))
        env.params.update(meta)
        return env
    if name == "restricted_logsob":
        phi, meta = _phi_from_config(cfg, name, "power", 1.5)
        default = BetaFunction.power(c_ls if c_ls else 1.0, 1.0)
        beta = _beta_from_config(cfg, name, default)
        env = envelope_restricted_logsob(c_p, beta, phi, moment_of(phi))
        env.params.update(meta)
        return env
    if name == "ipsi":
        c_eta = float(cfg.get("envelope.ipsi.C_eta", 0.0) or 0.0)
        if c_eta <= 0 and constants.get("capacity"):
            c_eta = constants["capacity"]["C_eta_bound"]
        if c_eta <= 0:
            raise TvDecayError("ipsi envelope needs C_eta (config or capacity check)")
        eta = _eta_from_name(scn.psi_name)
        eta_moment = integrate(mu, np.asarray(eta.eta(h0), float))
        return envelope_ipsi(c_eta, float(cfg.get("envelope.ipsi.M_eta", 1.0)),
                             eta_moment)
    if name == "hellinger":
        phi, meta = _phi_from_config(cfg, name, "linear", 0.0)
        beta = _beta_from_config(cfg, name, BetaFunction.power(c_p, 1.0))
        env = envelope_hellinger(beta, phi, moment_of(phi), h_sup=float(h0.max()))
        env.params.update(meta)
        return env
    if name == "curvature":
        if rho is None or rho < 0:
            raise TvDecayError("curvature envelope needs rho >= 0")
        beta = _beta_from_config(cfg, name, BetaFunction.constant(c_p))
        return envelope_curvature(rho, beta)
    raise ConfigError(f"unknown envelope name {name!r}")


def _eval_envelopes(envelopes: dict, times: np.ndarray) -> dict:
    threads = int(os.environ.get("TVDECAY_THREADS", "1") or "1")
    names = list(envelopes)

    def one(name):
        env = envelopes[name]
        return name, np.array([env.eval(t) for t in times])

    if threads > 1 and len(names) > 1:
        with ThreadPoolExecutor(max_workers=min(threads, len(names))) as pool:
            results = dict(pool.map(one, names))
    else:
        results = dict(one(n) for n in names)
    return {n: results[n] for n in names}  # request order preserved


def _provenance(scn: Scenario, mu) -> dict:
    return {
        "tool_version": __version__,
        "config_echo": render_config(scn.config),
        "grid": {
            "n_points": int(len(mu.grid)),
            "x_min": float(mu.grid[0]),
            "x_max": float(mu.grid[-1]),
            "dx": float(mu.dx),
            "log_partition": float(mu.log_partition),
            "median": float(mu.median),
        },
        "clipped_mass": scn.clipped_mass,
        "seed": scn.seed,
    }


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_analyze(scn: Scenario, out: Path, t_grid: int) -> None:
    mu = scn.build_measure()
    constants = analyze_scenario(scn, mu)
    payload = {"constants": _jsonable(constants), "provenance": _provenance(scn, mu)}
    write_json(out / "constants.json", payload)


def _t_grid(scn: Scenario, n: int) -> np.ndarray:
    return np.geomspace(max(scn.sim.dt, 1e-3), scn.sim.t_end, n)


def cmd_bounds(scn: Scenario, out: Path, t_grid: int) -> None:
    mu = scn.build_measure()
    h0 = scn.build_initial(mu)
    constants = analyze_scenario(scn, mu)
    ts = _t_grid(scn, t_grid)
    envs = {name: build_envelope(name, scn, mu, h0, constants)
            for name in scn.envelope_names}
    if scn.calibrate:
        from .measures import tv_distance
        tv0 = tv_distance(mu, h0)
        envs = {n: e.calibrate(tv0) for n, e in envs.items()}
    curves = _eval_envelopes(envs, ts)
    header = ["t"] + [f"bound_{n}" for n in curves]
    write_csv(out / "curves.csv", header, [ts] + list(curves.values()))


def _simulate(scn: Scenario, mu, h0):
    psi = _psi_from_scenario(scn)
    return evolve(mu, h0, scn.sim, psi=psi)


def cmd_simulate(scn: Scenario, out: Path, t_grid: int) -> None:
    mu = scn.build_measure()
    h0 = scn.build_initial(mu)
    series = _simulate(scn, mu, h0)
    header = ["t", "tv", "hellinger", "variance", "entropy", "i_psi",
              "v_reverse", "e_reverse"]
    cols = [series.times, series.tv, series.hellinger, series.variance,
            series.entropy, series.i_psi, series.v_reverse, series.e_reverse]
    write_csv(out / "curves.csv", header, cols)


def cmd_compare(scn: Scenario, out: Path, t_grid: int) -> None:
    mu = scn.build_measure()
    h0 = scn.build_initial(mu)
    constants = analyze_scenario(scn, mu)
    series = _simulate(scn, mu, h0)
    envs = {name: build_envelope(name, scn, mu, h0, constants)
            for name in scn.envelope_names}
    if scn.calibrate:
        envs = {n: e.calibrate(series.tv[0]) for n, e in envs.items()}
    curves = _eval_envelopes(envs, series.times)
    header = (["t", "tv", "hellinger", "variance", "entropy", "i_psi",
               "v_reverse", "e_reverse"]
              + [f"bound_{n}" for n in curves])
    cols = [series.times, series.tv, series.hellinger, series.variance,
            series.entropy, series.i_psi, series.v_reverse, series.e_reverse]
    cols += list(curves.values())
    write_csv(out / "curves.csv", header, cols)

    half = series.times >= 0.5 * series.times[-1]
    tv_slope = fit_log_slope(series.times[half],
                             np.maximum(series.tv[half], 1e-300))
    summary = {"envelopes": {}, "tv_fitted_slope": tv_slope}
    for name, bound in curves.items():
        dominated = bound >= series.tv - 1e-12
        summary["envelopes"][name] = {
            "domination_fraction": float(np.mean(dominated)),
            "fitted_slope": fit_log_slope(series.times[half],
                                          np.maximum(bound[half], 1e-300)),
            "valid_from": envs[name].valid_from,
            "calibration_scale": envs[name].scale,
        }
    summary["provenance"] = _provenance(scn, mu)
    write_json(out / "summary.json", _jsonable(summary))


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="tvdecay",
        description="Total-variation decay envelopes and Fokker-Planck "
                    "verification for 1-D ergodic diffusions.")
    parser.add_argument("command",
                        choices=["analyze", "bounds", "simulate", "compare"])
    parser.add_argument("config", help="scenario configuration file")
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument("--t-grid", type=int, default=200,
                        help="number of t samples for bounds")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed echoed into provenance (commands are "
                             "deterministic)")
    args = parser.parse_args(argv)

    try:
        scn = load_scenario(args.config)
        scn.seed = args.seed
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        dispatch = {"analyze": cmd_analyze, "bounds": cmd_bounds,
                    "simulate": cmd_simulate, "compare": cmd_compare}
        dispatch[args.command](scn, out, args.t_grid)
        return 0
    except ConfigError as exc:
        print(f"tvdecay: config error: {exc}", file=sys.stderr)
        return 2
    except TvDecayError as exc:
        print(f"tvdecay: {args.command}: {type(exc).__name__}: {exc}",
              file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
