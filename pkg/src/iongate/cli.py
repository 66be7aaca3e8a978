"""Command line front end.

Six modes: solve-gate, evolve, sweep, entangle, validate-rwa,
scan-integers.  Every run writes into --out:

    results.csv   12-significant-digit values, unit-annotated header
    summary.json  sorted keys, resolved config echo + its sha256, version
    plots/*.svg   self-contained line plots

Outputs carry no timestamps and use fixed formatting, so identical inputs
give byte-identical files; summary.json doubles as a --config for a
repeat run (the "config" key is re-ingested).  Exit codes: 0 success,
2 configuration problem, 3 solver failure (partial results are written),
4 truncation failure.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import hashlib
import json
import sys
from pathlib import Path

import numpy as np

from .design import (GateSolution, ResonanceIntegers, condition_probabilities,
                     convert_physical, robustness_sweep, scan_integers,
                     solve_gate, success_probability)
from .entangle import bell_recipe, concurrence, epr_fidelity, prepare_entangled
from .errors import (EXIT_CONFIG, EXIT_SOLVER, EXIT_TRUNCATION,
                     BusEntangledError, ConfigError, SolverError,
                     TruncationError)
from .hilbert import HilbertGeometry, default_geometry, make_basis_state
from .oracle import Drive, IntegratorConfig, evolve_effective, evolve_full, integrate
from .propagator import FORMULA_MODES, compute_coefficients
from .svgplot import save_plot

__version__ = "0.1.0"

DEFAULTS: dict[str, dict] = {
    "gate": {
        "k1": 1, "p": 1, "q_plus": 2, "q_minus": 1,
        "seed_eta1": 2.0, "seed_eta2": 1.8,
        "phi1": 0.0, "phi2": 0.0, "mode": "auto",
    },
    "evolve": {
        "m": 0, "spin1": "e", "spin2": "g",
        "omega_nu": 0.01, "route": "closed", "method": "cf4",
        "dt": 0.0, "n_times": 160, "m_max_buffer": 20,
        "leak_tolerance": 1e-8,
    },
    "sweep": {"parameter": "eta2", "rel_span": 0.01, "n_points": 41},
    "entangle": {"target": "psi_minus"},
    "rwa": {"ratios": [0.005, 0.01, 0.05, 0.1, 0.2], "m_max": 22},
    "scan": {
        "k1_values": [1, 2, 3], "p_max": 6, "q_max": 6,
        "grid_n": 140, "eta_hi": 3.2, "max_rows": 0,
    },
    "physical": {"rabi_hz": 0.0, "trap_hz": 0.0},
}


# ---------------------------------------------------------------- config

def _coerce(section: str, key: str, value, default):
    where = f"{section}.{key}"
    if isinstance(default, list):
        if isinstance(value, str):
            parts = [p.strip() for p in value.split(",") if p.strip()]
        elif isinstance(value, (list, tuple)):
            parts = list(value)
        else:
            raise ConfigError(f"{where} must be a list")
        kind = type(default[0])
        try:
            return [kind(p) for p in parts]
        except (TypeError, ValueError):
            raise ConfigError(f"{where}: cannot read list of {kind.__name__}")
    if isinstance(default, int) and not isinstance(default, bool):
        try:
            if isinstance(value, float) and value != int(value):
                raise ValueError
            return int(value)
        except (TypeError, ValueError):
            raise ConfigError(f"{where} must be an integer")
    if isinstance(default, float):
        try:
            return float(value)
        except (TypeError, ValueError):
            raise ConfigError(f"{where} must be a number")
    return str(value)


def _overlay(config: dict, incoming: dict) -> None:
    for section, entries in incoming.items():
        if section not in config:
            raise ConfigError(f"unknown config section [{section}]")
        if not isinstance(entries, dict):
            raise ConfigError(f"section [{section}] must hold key = value entries")
        for key, value in entries.items():
            if key not in config[section]:
                raise ConfigError(f"unknown config key {section}.{key}")
            config[section][key] = _coerce(section, key, value, DEFAULTS[section][key])


def load_config(path: str | None) -> dict:
    """DEFAULTS overlaid with an INI or JSON file (or a prior summary.json)."""
    config = {s: dict(e) for s, e in DEFAULTS.items()}
    if path is None:
        return config
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file not found: {path}")
    text = p.read_text(encoding="utf-8")
    if p.suffix.lower() == ".json" or text.lstrip().startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"bad JSON config: {exc}")
        if not isinstance(obj, dict):
            raise ConfigError("JSON config must be an object")
        if "config" in obj and isinstance(obj["config"], dict):
            obj = obj["config"]  # summary.json round trip
        _overlay(config, obj)
    else:
        parser = configparser.ConfigParser()
        try:
            parser.read_string(text)
        except configparser.Error as exc:
            raise ConfigError(f"bad INI config: {exc}")
        _overlay(config, {s: dict(parser.items(s)) for s in parser.sections()})
    return config


def config_digest(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


# ---------------------------------------------------------------- output

def _fnum(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".12g")


def write_csv(path: Path, columns: list[tuple[str, str]], rows: list) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([f"{name} [{unit}]" for name, unit in columns])
        for row in rows:
            writer.writerow([_fnum(v) for v in row])


def write_summary(out: Path, command: str, config: dict, results: dict,
                  error: str | None = None) -> None:
    doc = {
        "command": command,
        "config": config,
        "config_sha256": config_digest(config),
        "results": results,
        "version": __version__,
    }
    if error is not None:
        doc["error"] = error
    with open(out / "summary.json", "w", encoding="utf-8") as fh:
        json.dump(doc, fh, sort_keys=True, indent=2)
        fh.write("\n")


def _prepare_out(out_dir: str) -> Path:
    out = Path(out_dir)
    (out / "plots").mkdir(parents=True, exist_ok=True)
    return out


def _sol_dict(sol: GateSolution) -> dict:
    return {
        "k1": sol.k1,
        "p": sol.integers.p, "q_plus": sol.integers.q_plus,
        "q_minus": sol.integers.q_minus,
        "eta1": sol.eta1, "eta2": sol.eta2, "omega_tau": sol.omega_tau,
        "residuals": list(sol.residuals),
        "probability": success_probability(sol.k1, sol.eta1, sol.eta2, sol.omega_tau),
    }


def _solve_from_config(config: dict, out: Path, command: str) -> GateSolution:
    g = config["gate"]
    if g["mode"] not in FORMULA_MODES:
        raise ConfigError(f"gate.mode must be one of {FORMULA_MODES}")
    integers = ResonanceIntegers(g["p"], g["q_plus"], g["q_minus"])
    try:
        return solve_gate(g["k1"], integers, g["seed_eta1"], g["seed_eta2"])
    except SolverError as exc:
        write_summary(out, command, config, {}, error=str(exc))
        raise


# ---------------------------------------------------------------- commands

def cmd_solve_gate(config: dict, out: Path, jobs: int) -> None:
    sol = _solve_from_config(config, out, "solve-gate")
    prob = success_probability(sol.k1, sol.eta1, sol.eta2, sol.omega_tau)
    columns = [("eta1", "1"), ("eta2", "1"), ("omega_tau", "rad"),
               ("residual_carrier", "1"), ("residual_plus", "1"),
               ("residual_minus", "1"), ("probability", "1")]
    row = [sol.eta1, sol.eta2, sol.omega_tau, *sol.residuals, prob]
    results = _sol_dict(sol)
    phys = config["physical"]
    if phys["rabi_hz"] > 0 and phys["trap_hz"] > 0:
        pp = convert_physical(phys["rabi_hz"], phys["trap_hz"], sol.omega_tau)
        columns += [("rabi_ratio", "1"), ("tau", "s")]
        row += [pp.rabi_ratio, pp.tau_seconds]
        results["rabi_ratio"] = pp.rabi_ratio
        results["tau_seconds"] = pp.tau_seconds
    write_csv(out / "results.csv", columns, [row])
    # how sharply the three conditions peak around the solution
    ts = np.linspace(0.9 * sol.omega_tau, 1.1 * sol.omega_tau, 401)
    cond = np.array([condition_probabilities(sol.k1, sol.eta1, sol.eta2, float(t))
                     for t in ts])
    save_plot(out / "plots" / "conditions.svg", ts,
              [cond[:, 0], cond[:, 1], cond[:, 2], cond.min(axis=1)],
              ["carrier", "fast pair", "slow pair", "min probability"],
              "resonance conditions near the solution",
              "pulse area (rad)", "condition probability")
    pulses = sol.pulses(phi1=config["gate"]["phi1"], phi2=config["gate"]["phi2"])
    coeffs = compute_coefficients(pulses, 0, sol.omega_tau, mode=config["gate"]["mode"])
    results["formula_mode_used"] = coeffs.mode_used
    results["unitarity_defect"] = coeffs.unitarity_defect
    results["block_leak"] = float(np.sum(np.abs(coeffs.e_coeffs[:2]) ** 2))
    write_summary(out, "solve-gate", config, results)


def cmd_evolve(config: dict, out: Path, jobs: int) -> None:
    sol = _solve_from_config(config, out, "evolve")
    e = config["evolve"]
    g = config["gate"]
    if e["spin1"] not in ("g", "e") or e["spin2"] not in ("g", "e"):
        raise ConfigError("evolve.spin1/spin2 must be 'g' or 'e'")
    if e["route"] not in ("closed", "stepper"):
        raise ConfigError("evolve.route must be 'closed' or 'stepper'")
    if e["m"] >= abs(sol.k1):
        raise ConfigError(
            f"evolve.m={e['m']} is outside the closed form (needs m < |k1|={abs(sol.k1)})")
    geometry = default_geometry(e["m"], sol.k1, buffer=e["m_max_buffer"])
    state0 = make_basis_state(geometry, e["m"], e["spin1"], e["spin2"])
    pulses = sol.pulses(phi1=g["phi1"], phi2=g["phi2"])
    from .propagator import evolve as evolve_closed

    times = np.linspace(0.0, sol.omega_tau, e["n_times"])
    kets = [(e["m"], 0, 0), (e["m"], 0, 1), (e["m"], 1, 0), (e["m"], 1, 1),
            (e["m"] + abs(sol.k1), 1 - (sol.k1 > 0), 0),
            (e["m"] + abs(sol.k1), 1 - (sol.k1 > 0), 1)]
    names = ["p_gg", "p_ge", "p_eg", "p_ee", "p_bus_g", "p_bus_e"]
    table = np.empty((len(times), len(kets)))
    for ti, t in enumerate(times):
        st = evolve_closed(state0, pulses, float(t), mode=g["mode"])
        for ki, (m, s1, s2) in enumerate(kets):
            table[ti, ki] = abs(st.amplitudes[geometry.index(m, s1, s2)]) ** 2
    columns = [("omega_t", "rad")] + [(n, "1") for n in names]
    rows = [[times[ti], *table[ti]] for ti in range(len(times))]
    write_csv(out / "results.csv", columns, rows)
    save_plot(out / "plots" / "populations.svg", times,
              [table[:, i] for i in range(len(kets))], names,
              "closed-form populations over the pulse",
              "pulse area (rad)", "population")
    final_closed = evolve_closed(state0, pulses, sol.omega_tau, mode=g["mode"])
    results = _sol_dict(sol)
    results["initial_ket"] = f"|{e['m']},{e['spin1']},{e['spin2']}>"
    results["final_populations"] = {n: float(table[-1, i]) for i, n in enumerate(names)}
    # independent numeric check of the end point
    drives = [Drive(1, sol.k1, 1.0, sol.eta1, g["phi1"]),
              Drive(2, 0, 1.0, sol.eta2, g["phi2"])]
    final_eff = evolve_effective(state0, drives, sol.omega_tau)
    results["closed_vs_effective_infidelity"] = float(
        1.0 - abs(final_closed.overlap(final_eff)) ** 2)
    if e["route"] == "stepper":
        omega = e["omega_nu"]  # nu = 1 units
        drives_nu = [Drive(1, sol.k1, omega, sol.eta1, g["phi1"]),
                     Drive(2, 0, omega, sol.eta2, g["phi2"])]
        cfg = IntegratorConfig(dt=e["dt"] or None, method=e["method"],
                               leak_tolerance=e["leak_tolerance"])
        final_num = integrate(state0, drives_nu, 1.0, sol.omega_tau / omega, cfg)
        results["closed_vs_stepper_infidelity"] = float(
            1.0 - abs(final_closed.overlap(final_num)) ** 2)
        results["integrator"] = {"method": e["method"],
                                 "dt": cfg.dt if cfg.dt is not None else 0.0,
                                 "omega_nu": omega}
    write_summary(out, "evolve", config, results)


def cmd_sweep(config: dict, out: Path, jobs: int) -> None:
    sol = _solve_from_config(config, out, "sweep")
    s = config["sweep"]
    sweep = robustness_sweep(sol, parameter=s["parameter"],
                             rel_span=s["rel_span"], n_points=s["n_points"])
    columns = [("rel_offset", "1"), ("probability", "1")]
    rows = [[sweep.rel_offsets[i], sweep.probabilities[i]]
            for i in range(len(sweep.rel_offsets))]
    write_csv(out / "results.csv", columns, rows)
    save_plot(out / "plots" / "robustness.svg", sweep.rel_offsets,
              [sweep.probabilities], [s["parameter"]],
              f"success probability vs {s['parameter']} detuning",
              "relative offset", "probability")
    results = _sol_dict(sol)
    results["sweep"] = {
        "parameter": s["parameter"],
        "baseline": sweep.baseline,
        "min_probability": float(sweep.probabilities.min()),
        "max_probability": float(sweep.probabilities.max()),
    }
    write_summary(out, "sweep", config, results)


def cmd_entangle(config: dict, out: Path, jobs: int) -> None:
    sol = _solve_from_config(config, out, "entangle")
    target = config["entangle"]["target"]
    if target not in ("psi_plus", "psi_minus"):
        raise ConfigError("entangle.target must be psi_plus or psi_minus")
    recipe = bell_recipe(sol, which=target)
    try:
        pair = prepare_entangled(recipe, mode=config["gate"]["mode"])
    except BusEntangledError as exc:
        write_summary(out, "entangle", config, _sol_dict(sol), error=str(exc))
        raise
    amps = pair.spin_amplitudes
    fid = epr_fidelity(amps, which=target)
    conc = concurrence(amps)
    columns = ([(f"{n}_{part}", "1") for n in ("a_gg", "a_ge", "a_eg", "a_ee")
                for part in ("re", "im")]
               + [("fidelity", "1"), ("concurrence", "1"), ("schmidt_weight", "1")])
    row = []
    for a in amps:
        row += [a.real, a.imag]
    row += [fid, conc, pair.schmidt_weight]
    write_csv(out / "results.csv", columns, [row])
    # concurrence over the carrier duration family
    from .entangle import carrier_rate
    a1 = carrier_rate(sol)
    t1s = np.linspace(0.0, np.pi / a1, 241)
    save_plot(out / "plots" / "concurrence.svg", a1 * t1s,
              [np.abs(np.sin(2.0 * a1 * t1s))], ["concurrence"],
              "entanglement vs carrier pulse area",
              "carrier area (rad)", "concurrence")
    results = _sol_dict(sol)
    results["entangle"] = {
        "target": target, "t1": recipe.t1,
        "phi1": recipe.phi1, "phi2": recipe.phi2,
        "fidelity": fid, "concurrence": conc,
        "schmidt_weight": pair.schmidt_weight,
    }
    write_summary(out, "entangle", config, results)


def cmd_validate_rwa(config: dict, out: Path, jobs: int) -> None:
    sol = _solve_from_config(config, out, "validate-rwa")
    r = config["rwa"]
    if not r["ratios"]:
        raise ConfigError("rwa.ratios must not be empty")
    geometry = HilbertGeometry(m_max=r["m_max"])
    state0 = make_basis_state(geometry, 0, "e", "g")
    rows = []
    infids = []
    for ratio in r["ratios"]:
        if ratio <= 0:
            raise ConfigError("rwa.ratios must be positive")
        omega = ratio  # nu = 1
        tau = sol.omega_tau / omega
        drives = [Drive(1, sol.k1, omega, sol.eta1, 0.0),
                  Drive(2, 0, omega, sol.eta2, 0.0)]
        eff = evolve_effective(state0, drives, tau)
        full = evolve_full(state0, drives, 1.0, tau, leak_tolerance=None)
        infid = float(1.0 - abs(eff.overlap(full)) ** 2)
        rows.append([ratio, infid])
        infids.append(infid)
    write_csv(out / "results.csv", [("omega_over_nu", "1"), ("infidelity", "1")], rows)
    save_plot(out / "plots" / "rwa.svg", [row[0] for row in rows], [infids],
              ["infidelity"], "vibrational-RWA error vs drive strength",
              "Omega / nu", "infidelity")
    results = _sol_dict(sol)
    results["rwa"] = {
        "ratios": list(r["ratios"]),
        "infidelities": infids,
        "monotone": bool(np.all(np.diff(infids) > 0)),
    }
    write_summary(out, "validate-rwa", config, results)


def cmd_scan_integers(config: dict, out: Path, jobs: int) -> None:
    s = config["scan"]
    if not s["k1_values"] or s["p_max"] < 1 or s["q_max"] < 1:
        raise ConfigError("scan grid is empty (need k1_values, p_max >= 1, q_max >= 1)")
    if s["grid_n"] < 8 or s["eta_hi"] <= 0.1:
        raise ConfigError("scan.grid_n must be >= 8 and scan.eta_hi > 0.1")
    sols = scan_integers(k1_values=tuple(s["k1_values"]), p_max=s["p_max"],
                         q_max=s["q_max"], grid_n=s["grid_n"],
                         eta_hi=s["eta_hi"], jobs=max(jobs, 1))
    if s["max_rows"] > 0:
        sols = sols[: s["max_rows"]]
    columns = [("k1", "1"), ("p", "1"), ("q_plus", "1"), ("q_minus", "1"),
               ("eta1", "1"), ("eta2", "1"), ("omega_tau", "rad"),
               ("probability", "1")]
    rows = []
    for sol in sols:
        rows.append([sol.k1, sol.integers.p, sol.integers.q_plus,
                     sol.integers.q_minus, sol.eta1, sol.eta2, sol.omega_tau,
                     success_probability(sol.k1, sol.eta1, sol.eta2, sol.omega_tau)])
    write_csv(out / "results.csv", columns, rows)
    if sols:
        save_plot(out / "plots" / "durations.svg",
                  np.arange(1, len(sols) + 1),
                  [np.array([sol.omega_tau for sol in sols])], ["duration"],
                  "gate durations across integer triples",
                  "solution rank", "pulse area (rad)")
    results = {
        "n_solutions": len(sols),
        "shortest": [_sol_dict(sol) for sol in sols[:5]],
    }
    write_summary(out, "scan-integers", config, results)


COMMANDS = {
    "solve-gate": cmd_solve_gate,
    "evolve": cmd_evolve,
    "sweep": cmd_sweep,
    "entangle": cmd_entangle,
    "validate-rwa": cmd_validate_rwa,
    "scan-integers": cmd_scan_integers,
}


# ---------------------------------------------------------------- driver

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None, help="INI or JSON config file")
    common.add_argument("--out", default="iongate-out", help="output directory")
    common.add_argument("--jobs", type=int, default=1, help="worker processes (scan)")
    common.add_argument("--seed-eta1", type=float, default=None,
                        help="override gate.seed_eta1")
    common.add_argument("--seed-eta2", type=float, default=None,
                        help="override gate.seed_eta2")
    parser = argparse.ArgumentParser(
        prog="iongate",
        description="design and simulate the two-pulse trapped-ion gate")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        if args.seed_eta1 is not None:
            config["gate"]["seed_eta1"] = float(args.seed_eta1)
        if args.seed_eta2 is not None:
            config["gate"]["seed_eta2"] = float(args.seed_eta2)
        if args.jobs < 1:
            raise ConfigError("--jobs must be >= 1")
        out = _prepare_out(args.out)
        COMMANDS[args.command](config, out, args.jobs)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SolverError, BusEntangledError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except TruncationError as exc:
        print(f"truncation failure: {exc}", file=sys.stderr)
        return EXIT_TRUNCATION
    return 0


if __name__ == "__main__":
    sys.exit(main())
