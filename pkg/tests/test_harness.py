import json
import os

import numpy as np
import pytest

from projdiff.errors import ConfigError
from projdiff.harness import (ExperimentConfig, convergence_study,
                              run_experiment, write_spectrum_csv)


def test_config_validation_field_paths():
    with pytest.raises(ConfigError, match="config.bogus"):
        ExperimentConfig.from_dict({"bogus": 1})
    with pytest.raises(ConfigError, match="eps_ladder"):
        ExperimentConfig.from_dict({"eps_ladder": [0.1, 0.2]})
    with pytest.raises(ConfigError, match="eps_ladder"):
        ExperimentConfig.from_dict({"eps_ladder": [0.1, -0.2]})
    with pytest.raises(ConfigError, match="probes"):
        ExperimentConfig.from_dict({"probes": ["x"]})
    with pytest.raises(ConfigError, match="jobs"):
        ExperimentConfig.from_dict({"jobs": 0})


def test_config_from_json_error(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(ConfigError, match="invalid JSON"):
        ExperimentConfig.from_json(str(path))


def test_empty_probe_list_is_fine():
    cfg = ExperimentConfig(model="finite:random", probes=(), seed=3,
                           eps_ladder=(0.1, 0.05))
    report = run_experiment(cfg)
    assert report.body["probes"] == []
    assert report.body["schema"] == 1


def test_report_deterministic_for_fixed_seed():
    cfg = ExperimentConfig(model="finite:random", probes=(0.0,), seed=7,
                           eps_ladder=(0.1, 0.05, 0.02))
    a = run_experiment(cfg).to_json()
    b = run_experiment(cfg).to_json()
    assert a == b


def test_report_payload_and_outputs(tmp_path):
    cfg = ExperimentConfig(model="finite:random", probes=(0.0,), seed=11,
                           eps_ladder=(0.1, 0.05, 0.02), out_dir=str(tmp_path))
    report = run_experiment(cfg)
    payload = report.body["probes"][0]
    assert payload["n"] == 24
    assert "difference" in payload and "scattering" in payload
    assert len(payload["scattering"]["rungs"]) == 3
    for rung in payload["scattering"]["rungs"]:
        assert rung["unitarity_defect"] <= 1e-10
    data = json.loads((tmp_path / "report.json").read_text())
    assert data["schema"] == 1
    csv = (tmp_path / "difference_spectrum_0.csv").read_text().splitlines()
    assert csv[0] == "index,value"
    assert csv[1].startswith("0,")


def test_probe_errors_captured_not_fatal():
    # probe sitting on an eigenvalue is reported, not raised
    cfg = ExperimentConfig(model="finite:random", probes=(0.0,), seed=5,
                           eps_ladder=(0.1, 0.05))
    pair = cfg.build_pair()
    bad_probe = float(pair.eigensystems()[0].eigenvalues[3])
    cfg = ExperimentConfig(model="finite:random", probes=(bad_probe,), seed=5,
                           eps_ladder=(0.1, 0.05))
    report = run_experiment(cfg)
    payload = report.body["probes"][0]
    assert "difference_error" in payload
    assert "scattering" in payload  # smoothing regularizes the bundle


def test_parallel_jobs_match_serial():
    serial = ExperimentConfig(model="krein", model_params={"n": 64, "L": 20.0},
                              probes=(0.4, 0.6), eps_ladder=(0.1, 0.05))
    parallel = ExperimentConfig(model="krein", model_params={"n": 64, "L": 20.0},
                                probes=(0.4, 0.6), eps_ladder=(0.1, 0.05), jobs=2)
    a = run_experiment(serial).body["probes"]
    b = run_experiment(parallel).body["probes"]
    assert json.dumps(a, sort_keys=True, default=repr) \
        == json.dumps(b, sort_keys=True, default=repr)


def test_study_eps_axis():
    cfg = ExperimentConfig(model="finite:random", probes=(0.0,), seed=19,
                           eps_ladder=(0.2, 0.1, 0.05, 0.025))
    table = convergence_study(cfg, "eps").body
    assert table["axis"] == "eps"
    peaks = np.array(table["metrics"]["density_peak"]["values"])
    flags = table["metrics"]["density_peak"]
    assert flags["monotone_decreasing"] == bool(np.all(np.diff(peaks) < 0))
    assert np.all(np.array(table["metrics"]["identity_residual"]["values"]) <= 1e-9)


def test_scalar_lorentzian_peak_law():
    # with the spectrum sitting exactly at the probe, the density peak is
    # 1/(pi*eps) at every smoothing level
    from projdiff.models import build_finite_pair
    from projdiff.scattering import smoothed_density
    pair = build_finite_pair(np.zeros((1, 1), dtype=complex),
                             np.array([[1.0]]), np.array([[1.0]]))
    for eps in (0.2, 0.1, 0.05):
        f0, _ = smoothed_density(pair, 0.0, eps)
        assert f0[0, 0].real == pytest.approx(1.0 / (np.pi * eps), rel=1e-12)


def test_study_trule_axis_plateau():
    cfg = ExperimentConfig(model="finite:random", probes=(0.0,), seed=23,
                           eps_ladder=(0.1, 0.05), sizes=(40, 80, 160))
    table = convergence_study(cfg, "trule").body
    direct = np.array(table["metrics"]["residual_direct"]["values"])
    oracle = np.array(table["metrics"]["residual_oracle"]["values"])
    # quadrature route decreases (or sits at the oracle floor) and never
    # beats the oracle by more than roundoff
    assert direct[-1] <= direct[0] * (1.0 + 1e-9)
    assert np.all(oracle <= 1e-9)


def test_study_n_axis_shapes():
    cfg = ExperimentConfig(model="krein", probes=(0.5,),
                           eps_ladder=(0.1, 0.05), sizes=(48, 64, 96))
    table = convergence_study(cfg, "n").body
    assert table["points"] == [48, 64, 96]
    for metric in table["metrics"].values():
        assert len(metric["values"]) == 3
        assert len(metric["first_differences"]) == 2


def test_study_needs_three_points():
    cfg = ExperimentConfig(model="krein", probes=(0.5,), sizes=(48, 64))
    with pytest.raises(ConfigError):
        convergence_study(cfg, "n")
    with pytest.raises(ConfigError):
        convergence_study(cfg, "bogus")


def test_write_spectrum_csv_roundtrip(tmp_path):
    path = tmp_path / "spec.csv"
    write_spectrum_csv(str(path), np.array([0.5, -0.25]))
    lines = path.read_text().splitlines()
    assert lines == ["index,value", "0,0.5", "1,-0.25"]


def test_krein_run_reproduces_known_facts():
    # end-to-end report for the rank-one resolvent preset: counting shift
    # near 1/2, retained phase near pi, difference spectrum symmetric in
    # [-1, 1]
    cfg = ExperimentConfig(model="krein", model_params={"n": 200, "L": 40.0},
                           probes=(0.5,), eps_ladder=(0.2, 0.15, 0.1, 0.05))
    payload = run_experiment(cfg).body["probes"][0]
    assert abs(payload["birman_krein"]["counting_shift"] - 0.5) <= 0.1
    phases = payload["scattering"]["phases_extrapolated"]
    assert len(phases) == 1
    assert abs(np.exp(1j * phases[0]) + 1.0) <= 0.05
    spec = np.asarray(payload["difference"]["spectrum"])
    assert spec.min() >= -1.0 - 1e-10 and spec.max() <= 1.0 + 1e-10
    assert payload["difference"]["pairing_defect"] <= 1e-6
    assert payload["product_identity"]["residual_oracle"] <= 1e-8 * payload["n"]
