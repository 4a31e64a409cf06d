"""Scenario files, the deterministic runner, and the CLI surface."""
import copy
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from qdotsim.errors import SchemaError
from qdotsim.report import canonical_json, dumps_report, format_float, stream
from qdotsim.scenario import (
    build_material,
    load_scenario,
    run_scenario,
    validate_scenario,
    write_report,
)

BELL = load_scenario("bell.scenario")
PAPER_NUMBERS = load_scenario("paper_numbers.scenario")
TELEPORT = load_scenario("teleport.scenario")


def run_cli(*args):
    proc = subprocess.run(
        [sys.executable, "-m", "qdotsim.cli", *args],
        capture_output=True,
        text=True,
    )
    return proc


# ---------------------------------------------------------------------------
# canonical serialization
# ---------------------------------------------------------------------------

def test_float_formatting_17_digits():
    assert format_float(1e-6) == "9.9999999999999995e-07"
    assert float(format_float(0.1)) == 0.1
    assert format_float(1.0) == "1"
    with pytest.raises(ValueError):
        format_float(float("nan"))


def test_canonical_json_sorted_and_stable():
    payload = {"b": [1.5, {"z": True, "a": None}], "a": "text"}
    first = canonical_json(payload)
    second = canonical_json(json.loads(json.dumps(payload)))
    assert first == second
    assert first.index('"a"') < first.index('"b"')


def test_canonical_json_round_trips_through_json():
    payload = {"x": 0.1 + 0.2, "y": [1e-300, 12345678901234567.0]}
    parsed = json.loads(canonical_json(payload))
    assert parsed["x"] == 0.1 + 0.2
    assert parsed["y"] == [1e-300, 12345678901234567.0]


def test_stream_splitting_is_stable_and_independent():
    a1 = stream(7, 0, 3).random(4)
    a2 = stream(7, 0, 3).random(4)
    b = stream(7, 0, 4).random(4)
    assert np.array_equal(a1, a2)
    assert not np.array_equal(a1, b)


# ---------------------------------------------------------------------------
# scenario loading and validation
# ---------------------------------------------------------------------------

def test_bundled_scenarios_load_and_validate():
    for scenario in (BELL, PAPER_NUMBERS, TELEPORT):
        validate_scenario(scenario)


def test_missing_scenario_is_schema_error():
    with pytest.raises(SchemaError):
        load_scenario("no_such_file.scenario")


def test_invalid_json_is_schema_error(tmp_path):
    bad = tmp_path / "bad.scenario"
    bad.write_text("{not json")
    with pytest.raises(SchemaError):
        load_scenario(str(bad))


@pytest.mark.parametrize(
    "mutate",
    [
        lambda s: s.pop("seed"),
        lambda s: s.update(schema_version=99),
        lambda s: s["program"].append({"op": "fly", "pos": [0, 0]}),
        lambda s: s["program"].append({"op": "init", "pos": [9, 9]}),
        lambda s: s["program"].append({"op": "idle", "t": -1.0}),
        lambda s: s["program"].append(
            {"op": "gate", "kind": "Rot", "targets": [[0, 0]],
             "axis": [0, 0, 0], "angle": 1.0}
        ),
        lambda s: s["program"].append(
            {"op": "gate", "kind": "Rot", "targets": [[0, 0]],
             "axis": [1, 0], "angle": 1.0}
        ),
        lambda s: s["array"].pop("width"),
        lambda s: s.update(material="unobtainium"),
    ],
)
def test_validation_rejects_bad_scenarios(mutate):
    scenario = copy.deepcopy(BELL)
    mutate(scenario)
    with pytest.raises(SchemaError):
        validate_scenario(scenario)


def test_material_overrides():
    material = build_material({"preset": "inas", "J_on": 1e-5})
    assert material.J_on == pytest.approx(1e-5)
    with pytest.raises(SchemaError):
        build_material({"preset": "si"})  # si needs an explicit T2
    si = build_material({"preset": "si", "noise": {"T2": 1.0}})
    assert si.g_factor == 2.0


# ---------------------------------------------------------------------------
# the runner
# ---------------------------------------------------------------------------

def test_bell_outcomes_fully_correlated():
    report = run_scenario(BELL, shots=400)
    counts = report["measurement_counts"]
    assert set(counts) <= {"00", "11"}
    assert sum(counts.values()) == 400


def test_bell_ten_thousand_shots_statistics():
    report = run_scenario(BELL, shots=10_000)
    counts = report["measurement_counts"]
    total = sum(counts.values())
    correlated = counts.get("00", 0) + counts.get("11", 0)
    assert correlated / total == 1.0  # Z-correlation of the Bell pair
    # the two correlated outcomes split evenly within 3 sigma
    sigma = math.sqrt(0.25 / total)
    assert abs(counts.get("00", 0) / total - 0.5) < 3 * sigma


def test_bell_event_log_structure():
    report = run_scenario(BELL, shots=1)
    events = report["events"]
    assert [e["event"] for e in events] == ["init", "init", "epr",
                                            "readout", "readout"]
    epr_checks = [e["fidelity_checks"] for e in events if e["fidelity_checks"]]
    assert epr_checks and epr_checks[0]["bell_fidelity"] > 1 - 1e-12
    assert all(e["clock_after"] >= e["clock_before"] for e in events)
    assert all(
        a["clock_before"] == b["clock_after"]
        for a, b in zip(events[1:], events)
    )


def test_replay_is_byte_identical(tmp_path):
    r1 = run_scenario(BELL, shots=64)
    r2 = run_scenario(BELL, shots=64)
    assert dumps_report(r1) == dumps_report(r2)
    p1, _ = write_report(r1, tmp_path / "a")
    p2, _ = write_report(r2, tmp_path / "b")
    assert p1.read_bytes() == p2.read_bytes()


def test_seed_changes_sampling():
    r1 = run_scenario(BELL, shots=64, seed_override=1)
    r2 = run_scenario(BELL, shots=64, seed_override=2)
    assert r1["measurement_records"] != r2["measurement_records"]


def test_teleport_scenario_reports_fidelity():
    report = run_scenario(TELEPORT, shots=8)
    teleport_events = [e for e in report["events"] if e["event"] == "teleport"]
    assert teleport_events
    fid = teleport_events[0]["fidelity_checks"]["payload_fidelity"]
    assert fid > 1 - 1e-9
    assert len(teleport_events[0]["measurements"]) == 2


def test_paper_numbers_analytics_values():
    report = run_scenario(PAPER_NUMBERS)
    by_kind = {}
    for entry in report["analytics"]:
        by_kind.setdefault(entry["kind"], []).append(entry)
    drive = by_kind["resources"][0]["drive"]
    assert drive["b_ac_tesla"] == pytest.approx(71e-6, rel=0.01)
    assert drive["i_ac_ampere"] == pytest.approx(36e-6, rel=0.02)
    assert drive["v_ac_volt"] == pytest.approx(1.8e-3, rel=0.02)
    assert drive["power_watt"] == pytest.approx(46e-9, rel=0.03)
    assert by_kind["lambda"][0]["lambda"] == 1e-6
    headline = by_kind["swap_channel"][0]["report"]
    assert headline["latency_s"] == pytest.approx(1e-9, rel=1e-9)
    assert headline["true_bandwidth_bits_per_s"] == pytest.approx(9.9999e8, rel=1e-6)
    distances = by_kind["max_distance"][0]["distances"]
    assert distances["0.0001"] == pytest.approx(100.0, rel=1e-3)
    assert distances["1e-05"] == pytest.approx(10.0, rel=1e-3)
    assert by_kind["pulse_budget"][0]["report"]["cycles_in_T2"] == 10_000
    assert by_kind["zeeman_ratio"][0]["field_ratio"] == pytest.approx(34.09, rel=1e-3)


def test_strict_mode_propagates():
    scenario = copy.deepcopy(BELL)
    scenario["program"].append({"op": "epr", "a": [0, 0], "b": [1, 0]})
    # building an EPR pair on already-used qubits must fail under strict mode
    from qdotsim.errors import ProtocolError

    with pytest.raises(ProtocolError):
        run_scenario(scenario, strict=True)
    run_scenario(scenario, strict=False)  # lenient mode lets it through


def test_route_move_coupling_events():
    scenario = {
        "schema_version": 1,
        "material": "inas",
        "seed": 21,
        "array": {"width": 4, "height": 2},
        "program": [
            {"op": "init", "pos": [0, 0]},
            {"op": "init", "pos": [0, 1]},
            {"op": "gate", "kind": "X", "targets": [[0, 1]]},
            {"op": "coupling_window", "a": [0, 0], "b": [0, 1], "theta": math.pi},
            {"op": "move", "src": [0, 1], "dst": [1, 1]},
            {"op": "route", "src": [1, 1], "dst": [3, 1]},
            {"op": "idle", "t": 1e-9},
        ],
    }
    report = run_scenario(scenario)
    route = [e for e in report["events"] if e["event"] == "route"][0]
    assert route["path"] == [[1, 1], [2, 1], [3, 1]]
    # the swap put the excited spin on qubit 0; after transport it is at (3,1)
    assert report["final_clock_s"] > 0


def test_vector_noise_runs_are_seed_deterministic():
    # pure dephasing (huge T1): Z-jumps randomize the Bell phase but the
    # Z-correlation survives, so outcomes stay paired
    scenario = {
        "schema_version": 1,
        "material": {
            "preset": "inas",
            "noise": {"T1": 1e3, "T2": 1e-7, "enabled": True},
        },
        "seed": 33,
        "array": {
            "width": 2, "height": 2,
            "dots": [{"pos": [0, 1], "role": "readout"},
                     {"pos": [1, 1], "role": "readout"}],
        },
        "program": [
            {"op": "init", "pos": [0, 0]},
            {"op": "init", "pos": [1, 0]},
            {"op": "epr", "a": [0, 0], "b": [1, 0]},
            {"op": "idle", "t": 1e-6},
            {"op": "readout", "qubit": [0, 0], "readout": [0, 1]},
            {"op": "readout", "qubit": [1, 0], "readout": [1, 1]},
        ],
    }
    r1 = run_scenario(scenario, shots=200)
    r2 = run_scenario(scenario, shots=200)
    assert r1["measurement_records"] == r2["measurement_records"]
    counts = r1["measurement_counts"]
    assert set(counts) == {"00", "11"}
    assert counts["00"] > 50 and counts["11"] > 50


def test_qec_cycle_event():
    scenario = {
        "schema_version": 1,
        "material": "inas",
        "seed": 5,
        "array": {"width": 5, "height": 1},
        "program": [
            {"op": "init", "pos": [0, 0]},
            {"op": "init", "pos": [1, 0]},
            {"op": "init", "pos": [2, 0]},
            {"op": "init", "pos": [3, 0]},
            {"op": "init", "pos": [4, 0]},
            {"op": "gate", "kind": "H", "targets": [[0, 0]]},
            {
                "op": "qec_cycle",
                "principal": [0, 0],
                "syndromes": [[1, 0], [2, 0], [3, 0], [4, 0]],
                "inject": [["X", 2]],
            },
        ],
    }
    report = run_scenario(scenario)
    cycle = [e for e in report["events"] if e["event"] == "qec_cycle"][0]
    assert cycle["fidelity_checks"]["post_cycle_fidelity"] > 1 - 1e-9
    assert not cycle["fidelity_checks"]["possible_logical_error"]


# ---------------------------------------------------------------------------
# CLI surface
# ---------------------------------------------------------------------------

def test_cli_resources_emits_json():
    proc = run_cli("resources", "--preset", "inas")
    assert proc.returncode == 0
    payload = json.loads(proc.stdout)
    assert payload["drive"]["b_ac_tesla"] == pytest.approx(71e-6, rel=0.01)


def test_cli_channel_swap():
    proc = run_cli("channel", "--kind", "swap", "--length-qubits", "10",
                   "--t-hop", "1e-10")
    assert proc.returncode == 0
    payload = json.loads(proc.stdout)
    assert payload["report"]["physical_bandwidth_bits_per_s"] == pytest.approx(1e9)


def test_cli_channel_teleport_kind():
    proc = run_cli("channel", "--kind", "teleport", "--distance-m", "0.01")
    assert proc.returncode == 0
    payload = json.loads(proc.stdout)
    bw = payload["report"]["true_bandwidth_bits_per_s"]
    assert 1.65e8 / 3 <= bw <= 1.65e8 * 3


def test_cli_unknown_subcommand_exits_64():
    proc = run_cli("frobnicate")
    assert proc.returncode == 64


def test_cli_malformed_scenario_exits_2_no_outputs(tmp_path):
    bad = tmp_path / "broken.scenario"
    bad.write_text(json.dumps({"schema_version": 1}))  # no seed, no array
    out_dir = tmp_path / "results"
    proc = run_cli("simulate", "--scenario", str(bad), "--out", str(out_dir))
    assert proc.returncode == 2
    assert not out_dir.exists()


def test_cli_physics_violation_exits_3(tmp_path):
    scenario = {
        "schema_version": 1,
        "material": "inas",
        "seed": 3,
        "array": {"width": 2, "height": 1},
        "program": [
            {"op": "init", "pos": [0, 0]},
            {"op": "init", "pos": [0, 0]},
        ],
    }
    path = tmp_path / "blockade.scenario"
    path.write_text(json.dumps(scenario))
    proc = run_cli("simulate", "--scenario", str(path), "--out",
                   str(tmp_path / "o"))
    assert proc.returncode == 3


def test_cli_si_preset_requires_t2():
    proc = run_cli("resources", "--preset", "si")
    assert proc.returncode == 2
    proc = run_cli("resources", "--preset", "si", "--t2", "1.0")
    assert proc.returncode == 0


def test_cli_simulate_writes_reports(tmp_path):
    out_dir = tmp_path / "bell_out"
    proc = run_cli("simulate", "--scenario", "bell.scenario", "--shots", "32",
                   "--out", str(out_dir))
    assert proc.returncode == 0
    report = json.loads((out_dir / "report.json").read_text())
    assert set(report["measurement_counts"]) <= {"00", "11"}
    assert (out_dir / "events.json").exists()


def test_cli_simulate_deterministic_bytes(tmp_path):
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    for out in (out_a, out_b):
        proc = run_cli("simulate", "--scenario", "bell.scenario", "--shots",
                       "64", "--out", str(out))
        assert proc.returncode == 0
    assert (out_a / "report.json").read_bytes() == (out_b / "report.json").read_bytes()


def test_cli_teleport_reports_branches():
    proc = run_cli("teleport", "--shots", "2")
    assert proc.returncode == 0
    payload = json.loads(proc.stdout)
    branches = payload["branch_verification"]["branches"]
    assert len(branches) == 4
    assert payload["branch_verification"]["min_fidelity"] > 1 - 1e-9


def test_cli_qec_noiseless():
    proc = run_cli("qec", "--cycles", "20", "--p", "0")
    assert proc.returncode == 0
    payload = json.loads(proc.stdout)
    assert payload["logical_error_rate"] == 0
    assert payload["syndrome_histogram"] == {"0000": 20}
    assert payload["budget"]["cycles_in_T2"] == 10_000


def test_cli_qec_with_errors():
    proc = run_cli("qec", "--cycles", "30", "--p", "0.002", "--seed", "9")
    assert proc.returncode == 0
    payload = json.loads(proc.stdout)
    assert 0.0 <= payload["logical_error_rate"] <= 1.0
    assert sum(payload["syndrome_histogram"].values()) == 30
