import json

import numpy as np
import pytest

from iongate import ConfigError
from iongate.cli import DEFAULTS, config_digest, load_config, main


def run_cli(tmp_path, command, tag, config=None, extra=()):
    out = tmp_path / tag
    argv = [command, "--out", str(out)]
    if config is not None:
        cfg = tmp_path / f"{tag}-config.json"
        cfg.write_text(json.dumps(config), encoding="utf-8")
        argv += ["--config", str(cfg)]
    argv += list(extra)
    return main(argv), out


def read_summary(out):
    return json.loads((out / "summary.json").read_text(encoding="utf-8"))


def test_solve_gate_defaults_and_rerun_byte_identical(tmp_path):
    code1, out1 = run_cli(tmp_path, "solve-gate", "a")
    code2, out2 = run_cli(tmp_path, "solve-gate", "b")
    assert code1 == code2 == 0
    for name in ("results.csv", "summary.json", "plots/conditions.svg"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()
    doc = read_summary(out1)
    res = doc["results"]
    assert res["eta1"] == pytest.approx(2.184028815863716, abs=1e-9)
    assert res["eta2"] == pytest.approx(np.sqrt(3.0), abs=1e-9)
    assert res["probability"] == pytest.approx(1.0, abs=1e-12)
    # the closed-form table is self-consistent here even though the block
    # dynamics leaks; both facts are part of the record
    assert res["formula_mode_used"] == "legacy"
    assert res["unitarity_defect"] < 1e-12
    assert res["block_leak"] < 1e-12
    assert doc["config_sha256"] == config_digest(doc["config"])
    assert doc["version"]


def test_summary_round_trips_as_config(tmp_path):
    _, out1 = run_cli(tmp_path, "solve-gate", "first")
    code, out2 = run_cli(tmp_path, "solve-gate", "second",
                         extra=["--config", str(out1 / "summary.json")])
    assert code == 0
    assert (out1 / "results.csv").read_bytes() == (out2 / "results.csv").read_bytes()
    assert read_summary(out1)["config_sha256"] == read_summary(out2)["config_sha256"]


def test_csv_number_format(tmp_path):
    _, out = run_cli(tmp_path, "solve-gate", "fmt")
    lines = (out / "results.csv").read_text(encoding="utf-8").splitlines()
    assert lines[0].split(",")[:3] == ["eta1 [1]", "eta2 [1]", "omega_tau [rad]"]
    first = lines[1].split(",")[0]
    assert first == format(2.184028815863716, ".12g")


def test_seed_flag_reaches_the_second_root(tmp_path):
    code, out = run_cli(tmp_path, "solve-gate", "root2",
                        extra=["--seed-eta1", "0.25"])
    assert code == 0
    res = read_summary(out)["results"]
    assert res["eta1"] == pytest.approx(0.205415200447, abs=1e-9)
    assert res["omega_tau"] == pytest.approx(4 * np.pi * np.exp(1.5), abs=1e-7)


def test_ini_config(tmp_path):
    ini = tmp_path / "run.ini"
    ini.write_text("[gate]\nseed_eta1 = 0.25\n\n[physical]\n"
                   "rabi_hz = 225e3\ntrap_hz = 7e6\n", encoding="utf-8")
    code, out = run_cli(tmp_path, "solve-gate", "ini",
                        extra=["--config", str(ini)])
    assert code == 0
    res = read_summary(out)["results"]
    assert res["eta1"] == pytest.approx(0.205415200447, abs=1e-9)
    assert res["tau_seconds"] == pytest.approx(3.9837e-5, rel=1e-3)
    header = (out / "results.csv").read_text(encoding="utf-8").splitlines()[0]
    assert header.endswith("rabi_ratio [1],tau [s]")


def test_unknown_key_and_section_exit_config(tmp_path):
    code, _ = run_cli(tmp_path, "solve-gate", "badkey",
                      config={"gate": {"bogus": 1}})
    assert code == 2
    code, _ = run_cli(tmp_path, "solve-gate", "badsec", config={"nope": {}})
    assert code == 2
    code, _ = run_cli(tmp_path, "solve-gate", "badk1", config={"gate": {"k1": 0}})
    assert code == 2


def test_solver_failure_exit_and_partial_summary(tmp_path):
    code, out = run_cli(tmp_path, "solve-gate", "stuck",
                        config={"gate": {"q_plus": 6, "q_minus": 5}})
    assert code == 3
    doc = read_summary(out)
    assert "error" in doc and doc["results"] == {}


def test_stepper_truncation_exit(tmp_path):
    cfg = {"evolve": {"route": "stepper", "dt": 0.5, "omega_nu": 0.2,
                      "m_max_buffer": 2}}
    code, _ = run_cli(tmp_path, "evolve", "leaky", config=cfg)
    assert code == 4


def test_evolve_records_the_route_disagreement(tmp_path):
    code, out = run_cli(tmp_path, "evolve", "ev")
    assert code == 0
    res = read_summary(out)["results"]
    # closed form (tabulated branch) claims a perfect flip; integrating the
    # sideband Hamiltonian instead leaves 13/49 on the displaced bus level
    assert res["final_populations"]["p_ee"] == pytest.approx(1.0, abs=1e-9)
    assert res["closed_vs_effective_infidelity"] == pytest.approx(13 / 49, abs=1e-9)
    rows = (out / "results.csv").read_text(encoding="utf-8").splitlines()
    assert len(rows) == 1 + DEFAULTS["evolve"]["n_times"]
    assert rows[0].startswith("omega_t [rad],p_gg [1],")
    assert (out / "plots" / "populations.svg").is_file()


def test_sweep_window_edges(tmp_path):
    code, out = run_cli(tmp_path, "sweep", "sw",
                        config={"sweep": {"n_points": 5}})
    assert code == 0
    rows = (out / "results.csv").read_text(encoding="utf-8").splitlines()[1:]
    assert len(rows) == 5
    first = float(rows[0].split(",")[1])
    last = float(rows[-1].split(",")[1])
    assert first == pytest.approx(0.964191, abs=1e-5)
    assert last == pytest.approx(0.965579, abs=1e-5)


def test_entangle_auto_vs_exact(tmp_path):
    code, out = run_cli(tmp_path, "entangle", "auto")
    assert code == 0
    res = read_summary(out)["results"]["entangle"]
    assert res["fidelity"] == pytest.approx(1.0, abs=1e-9)
    assert res["concurrence"] == pytest.approx(1.0, abs=1e-9)
    code, out = run_cli(tmp_path, "entangle", "exact",
                        config={"gate": {"mode": "exact"}})
    assert code == 3
    assert "Schmidt" in read_summary(out)["error"]


def test_validate_rwa_restricted_ratios(tmp_path):
    cfg = {"rwa": {"ratios": [0.01, 0.2]}}
    code, out = run_cli(tmp_path, "validate-rwa", "rwa", config=cfg)
    assert code == 0
    res = read_summary(out)["results"]["rwa"]
    assert res["monotone"] is True
    assert res["infidelities"][0] == pytest.approx(3.4745e-4, rel=1e-3)
    assert res["infidelities"][1] == pytest.approx(0.11238, rel=1e-3)


def test_scan_jobs_do_not_change_output(tmp_path):
    cfg = {"scan": {"k1_values": [1], "p_max": 1, "q_max": 2, "grid_n": 100}}
    code1, out1 = run_cli(tmp_path, "scan-integers", "j1", config=cfg)
    code2, out2 = run_cli(tmp_path, "scan-integers", "j2", config=cfg,
                          extra=["--jobs", "2"])
    assert code1 == code2 == 0
    assert (out1 / "results.csv").read_bytes() == (out2 / "results.csv").read_bytes()
    doc = read_summary(out1)
    assert doc["results"]["n_solutions"] >= 2
    triples = {(s["p"], s["q_plus"], s["q_minus"])
               for s in doc["results"]["shortest"]}
    assert (1, 1, 0) in triples


def test_scan_rejects_empty_grid(tmp_path):
    code, _ = run_cli(tmp_path, "scan-integers", "empty",
                      config={"scan": {"k1_values": []}})
    assert code == 2


def test_load_config_basics(tmp_path):
    assert load_config(None) == DEFAULTS
    assert load_config(None) is not DEFAULTS
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / "missing.json"))
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_config(str(bad))
    listy = tmp_path / "list.ini"
    listy.write_text("[scan]\nk1_values = 1, 2\n", encoding="utf-8")
    assert load_config(str(listy))["scan"]["k1_values"] == [1, 2]
    d1 = config_digest(load_config(None))
    cfg = load_config(None)
    cfg["gate"]["k1"] = 2
    assert config_digest(cfg) != d1
