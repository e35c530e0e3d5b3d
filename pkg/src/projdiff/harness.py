"""Experiment driver: configs, reports, convergence studies.

A config names a model preset, the probes, and the epsilon ladder; a run
produces a JSON-able report whose numeric entries carry the
discretization size and smoothing they were computed at.  Reports are
bit-for-bit reproducible for a fixed (config, seed): nothing
time-dependent is stored in them.
"""

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, asdict

import numpy as np

from .errors import ConfigError, ProjdiffError
from .models import preset_pair, thresholds
from .projections import projection_difference, dsquared_block_check
from .scattering import (birman_krein_extrapolated, extrapolated_phases,
                         phase_ladder, scattering_bundle)
from .zops import product_representation_check

__all__ = ["ExperimentConfig", "Report", "run_experiment", "convergence_study",
           "write_spectrum_csv"]

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a run needs; validate() raises ConfigError with the
    offending field path."""

    model: str = "krein"
    model_params: dict = field(default_factory=dict)
    probes: tuple = (0.5,)
    eps_ladder: tuple = (0.2, 0.15, 0.1, 0.05)
    sizes: tuple = ()
    tolerances: dict = field(default_factory=dict)
    out_dir: str = ""
    seed: int = 0
    jobs: int = 1

    @staticmethod
    def from_dict(data):
        if not isinstance(data, dict):
            raise ConfigError("config: expected an object")
        known = {"model", "model_params", "probes", "eps_ladder", "sizes",
                 "tolerances", "out_dir", "seed", "jobs"}
        for key in data:
            if key not in known:
                raise ConfigError(f"config.{key}: unknown field")
        for key in ("seed", "jobs"):
            if key in data and (not isinstance(data[key], int) or isinstance(data[key], bool)):
                raise ConfigError(f"config.{key}: must be an integer")
        cfg = ExperimentConfig(
            model=data.get("model", "krein"),
            model_params=dict(data.get("model_params", {})),
            probes=tuple(data.get("probes", (0.5,))),
            eps_ladder=tuple(data.get("eps_ladder", (0.2, 0.15, 0.1, 0.05))),
            sizes=tuple(data.get("sizes", ())),
            tolerances=dict(data.get("tolerances", {})),
            out_dir=data.get("out_dir", ""),
            seed=int(data.get("seed", 0)),
            jobs=int(data.get("jobs", 1)),
        )
        cfg.validate()
        return cfg

    @staticmethod
    def from_json(path):
        try:
            with open(path) as fh:
                data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config: invalid JSON ({exc})") from exc
        return ExperimentConfig.from_dict(data)

    def validate(self):
        if not isinstance(self.model, str) or not self.model:
            raise ConfigError("config.model: must be a nonempty string")
        for i, p in enumerate(self.probes):
            if not isinstance(p, (int, float)):
                raise ConfigError(f"config.probes[{i}]: must be a number")
        lad = list(self.eps_ladder)
        if any(e <= 0 for e in lad):
            raise ConfigError("config.eps_ladder: entries must be positive")
        if any(b >= a for a, b in zip(lad, lad[1:])):
            raise ConfigError("config.eps_ladder: must be strictly decreasing")
        for i, s in enumerate(self.sizes):
            if int(s) < 16:
                raise ConfigError(f"config.sizes[{i}]: must be at least 16")
        if self.jobs < 1:
            raise ConfigError("config.jobs: must be >= 1")
        return self

    def build_pair(self, **overrides):
        params = dict(self.model_params)
        params.update(overrides)
        name = self.model
        if name == "finite:random":
            name = f"finite:random({self.seed})"
        return preset_pair(name, **params)


@dataclass
class Report:
    """JSON-able payload; ``schema`` pins the layout version."""

    body: dict

    def to_json(self):
        return json.dumps(self.body, sort_keys=True, indent=2, default=_jsonable)

    def write(self, path):
        with open(path, "w") as fh:
            fh.write(self.to_json())
            fh.write("\n")


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    raise TypeError(f"not JSON-serializable: {type(obj)}")


def write_spectrum_csv(path, values):
    with open(path, "w") as fh:
        fh.write("index,value\n")
        for i, v in enumerate(np.asarray(values).ravel()):
            fh.write(f"{i},{float(v)!r}\n")


_CAPTURED = (ProjdiffError, ArithmeticError, ValueError, np.linalg.LinAlgError)


def _probe_payload(pair, probe, ladder, phase_floor):
    """Everything computed at one probe; module errors are captured."""
    out = {"probe": probe, "n": pair.dim, "eps_ladder": list(ladder)}
    try:
        rep = projection_difference(pair, probe)
        out["difference"] = {
            "spectrum": rep.spectrum, "extremes": rep.extremes,
            "dim_plus": rep.dim_plus, "dim_minus": rep.dim_minus,
            "pairing_defect": rep.pairing_defect,
            "max_gap": rep.max_gap, "coverage_distance": rep.coverage_distance,
            "gap_h0": rep.gap_h0, "gap_h": rep.gap_h,
        }
        out["dsquared_residual"] = dsquared_block_check(pair, probe)
    except _CAPTURED as exc:
        out["difference_error"] = str(exc)
    try:
        rungs = []
        for b in phase_ladder(pair, probe, ladder, phase_floor):
            rungs.append({
                "eps": b.eps, "phases": b.phases,
                "unitarity_defect": b.unitarity_defect,
                "identity_residual": b.identity_residual,
                "factor_residual": b.factor_residual,
                "prediction_a": b.prediction_a,
            })
        out["scattering"] = {"rungs": rungs}
        phases, _ = extrapolated_phases(pair, probe, ladder, phase_floor)
        out["scattering"]["phases_extrapolated"] = phases
        out["scattering"]["band_edges"] = np.sort(np.sin(phases / 2.0))[::-1]
        out["scattering"]["a_extrapolated"] = (
            float(np.max(np.sin(phases / 2.0))) if len(phases) else 0.0)
        det_s, xi, defect = birman_krein_extrapolated(pair, probe, ladder,
                                                      phase_floor=phase_floor)
        out["birman_krein"] = {"det_s": det_s, "counting_shift": xi,
                               "defect": defect}
    except _CAPTURED as exc:
        out["scattering_error"] = str(exc)
    if pair.dim <= 600:
        try:
            from .models import shift_pair
            chk = product_representation_check(shift_pair(pair, probe))
            out["product_identity"] = {"residual_direct": chk.residual_direct,
                                       "residual_oracle": chk.residual_oracle,
                                       "gap": chk.gap, "n_t": chk.n_t}
        except _CAPTURED as exc:
            out["product_identity_error"] = str(exc)
    return out


def _probe_worker(args):
    model, params, seed, probe, ladder, floor = args
    name = f"finite:random({seed})" if model == "finite:random" else model
    pair = preset_pair(name, **params)
    return _probe_payload(pair, probe, ladder, floor)


def run_experiment(config):
    """Run every probe of a config through the ladder and assemble a report."""
    config.validate()
    floor = float(config.tolerances.get("phase_floor", thresholds()["phase_floor"]))
    body = {
        "schema": SCHEMA_VERSION,
        "config": {k: v for k, v in asdict(config).items() if k != "out_dir"},
        "probes": [],
    }
    if config.jobs > 1 and len(config.probes) > 1:
        args = [(config.model, config.model_params, config.seed, p,
                 list(config.eps_ladder), floor) for p in config.probes]
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            body["probes"] = list(pool.map(_probe_worker, args))
    else:
        pair = config.build_pair()
        for probe in config.probes:
            body["probes"].append(
                _probe_payload(pair, probe, list(config.eps_ladder), floor))
    report = Report(body)
    if config.out_dir:
        os.makedirs(config.out_dir, exist_ok=True)
        report.write(os.path.join(config.out_dir, "report.json"))
        for i, payload in enumerate(body["probes"]):
            if "difference" in payload:
                write_spectrum_csv(
                    os.path.join(config.out_dir, f"difference_spectrum_{i}.csv"),
                    payload["difference"]["spectrum"])
    return report


def _first_differences(values):
    v = np.asarray(values, dtype=float)
    return np.diff(v)


def convergence_study(config, axis):
    """Vary one axis of a config and tabulate the metrics along it.

    ``axis`` is "n" (discretization sizes), "eps" (ladder rungs one at a
    time) or "trule" (time-rule sizes for the product identity).  Needs
    at least 3 points.  Each metric row carries its first differences
    and a monotone-decrease flag.
    """
    config.validate()
    floor = float(config.tolerances.get("phase_floor", thresholds()["phase_floor"]))
    probe = config.probes[0]
    table = {"schema": SCHEMA_VERSION, "axis": axis, "points": [], "metrics": {}}
    metrics = {}

    if axis == "n":
        points = [int(s) for s in config.sizes]
        if len(points) < 3:
            raise ConfigError("config.sizes: need >= 3 points for a study")
        for n in points:
            pair = config.build_pair(n=n)
            rep = projection_difference(pair, probe)
            metrics.setdefault("max_gap", []).append(rep.max_gap)
            metrics.setdefault("coverage_distance", []).append(rep.coverage_distance)
            metrics.setdefault("edge_deficit", []).append(
                max(abs(rep.extremes[0] + 1.0), abs(rep.extremes[1] - 1.0)))
    elif axis == "eps":
        points = list(config.eps_ladder)
        if len(points) < 3:
            raise ConfigError("config.eps_ladder: need >= 3 rungs for a study")
        pair = config.build_pair()
        for eps in points:
            b = scattering_bundle(pair, probe, eps, floor)
            metrics.setdefault("prediction_a", []).append(b.prediction_a)
            metrics.setdefault("unitarity_defect", []).append(b.unitarity_defect)
            metrics.setdefault("identity_residual", []).append(b.identity_residual)
            metrics.setdefault("density_peak", []).append(
                float(np.max(np.linalg.eigvalsh(b.f0prime))))
    elif axis == "trule":
        points = [int(s) for s in config.sizes]
        if len(points) < 3:
            raise ConfigError("config.sizes: need >= 3 points for a study")
        from .models import shift_pair
        from .zops import default_time_rule
        pair = shift_pair(config.build_pair(), probe)
        e0, e1 = pair.eigensystems()
        gap = min(np.min(np.abs(e0.eigenvalues)), np.min(np.abs(e1.eigenvalues)))
        for n_t in points:
            chk = product_representation_check(pair, default_time_rule(gap, n_t=n_t))
            metrics.setdefault("residual_direct", []).append(chk.residual_direct)
            metrics.setdefault("residual_oracle", []).append(chk.residual_oracle)
    else:
        raise ConfigError(f"study axis must be one of n|eps|trule, got {axis!r}")

    table["points"] = points
    for name, values in metrics.items():
        diffs = _first_differences(values)
        table["metrics"][name] = {
            "values": values,
            "first_differences": diffs,
            "monotone_decreasing": bool(np.all(diffs < 0)),
        }
    report = Report(table)
    if config.out_dir:
        os.makedirs(config.out_dir, exist_ok=True)
        report.write(os.path.join(config.out_dir, f"study_{axis}.json"))
    return report
