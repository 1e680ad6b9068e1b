"""Run orchestration: layered configuration, run directories, manifests,
history logs, and report files.

Every optimization run writes a self-describing directory; re-running from
its manifest reproduces byte-identical front exports.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from .economics import load_scenario
from .environment import DesignEvaluator, SampleTable
from .errors import ConfigError
from .metrics import default_reference, export_front, render_scatter
from .nsga2 import GaConfig, run_nsga2
from .pearl import PearlConfig, run_multi

STATUS_CLEAN = "clean"
STATUS_PARTIAL = "partial"
STATUS_FAILED = "failed"


@dataclass
class RunConfig:
    """One optimization experiment, fully describing its own rerun."""

    scenario: str = "scenario-3"
    evaluator: str = "proxy"          # "proxy" or "tabular:<path>"
    optimizer: str = "pearl"          # "pearl" or "nsga2"
    pearl: dict = field(default_factory=dict)
    nsga2: dict = field(default_factory=dict)
    out_dir: str = "run"
    max_seconds: float | None = None

    def __post_init__(self):
        if self.optimizer not in ("pearl", "nsga2"):
            raise ConfigError(f"unknown optimizer {self.optimizer!r}")
        if self.evaluator != "proxy" and not self.evaluator.startswith("tabular:"):
            raise ConfigError(f"unknown evaluator {self.evaluator!r}")

    def to_manifest(self) -> dict:
        record = dataclasses.asdict(self)
        record.pop("out_dir")  # ambient, not part of the experiment
        return {
            "config": record,
            "versions": {
                "hpmropt": __version__,
                "numpy": np.__version__,
                "scipy": scipy.__version__,
            },
        }

    @classmethod
    def from_manifest(cls, manifest: dict, out_dir: str) -> "RunConfig":
        config = dict(manifest.get("config", manifest))
        config["out_dir"] = out_dir
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(config) - known
        if unknown:
            raise ConfigError(f"unknown manifest keys: {sorted(unknown)}")
        return cls(**config)


def build_evaluator(config: RunConfig) -> DesignEvaluator:
    scenario = load_scenario(config.scenario)
    if config.evaluator == "proxy":
        return DesignEvaluator(scenario, model="proxy")
    table_path = config.evaluator.split(":", 1)[1]
    if not Path(table_path).exists():
        raise ConfigError(f"sample table not found: {table_path}")
    return DesignEvaluator(scenario, model=SampleTable.from_file(table_path))


def write_history(path, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, delimiter="\t")
        writer.writerow(["step", "reward", "feasible", "objective_0",
                         "objective_1", "penalty"])
        for row in rows:
            writer.writerow([
                row.step, repr(float(row.reward)), int(row.feasible),
                repr(float(row.objective_0)), repr(float(row.objective_1)),
                repr(float(row.penalty)),
            ])


def _write_json(path, payload) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def run_optimize(config: RunConfig) -> dict:
    """Execute one experiment and populate its run directory.

    Returns a summary dict with a status of clean / partial / failed.
    """
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    evaluator = build_evaluator(config)
    deadline = None if config.max_seconds is None else time.time() + config.max_seconds

    if config.optimizer == "pearl":
        pearl_config = PearlConfig(**config.pearl)
        # manifests carry the resolved per-agent seeds explicitly
        config.pearl = {**config.pearl, "seeds": pearl_config.agent_seeds()}
        _write_json(out / "manifest.json", config.to_manifest())
        checkpoint_dir = out if pearl_config.checkpoint_interval else None
        result = run_multi(evaluator, pearl_config, deadline=deadline,
                           checkpoint_dir=checkpoint_dir)
        report = result.front_report(label=f"pearl:{config.scenario}")
        for agent in result.agents:
            write_history(out / f"history-agent{agent.seed}.tsv", agent.history)
            agent.buffer.export(out / f"buffer-agent{agent.seed}.tsv")
        failures = result.failures
        truncated = any(agent.truncated for agent in result.agents)
        status = (
            STATUS_FAILED if not result.agents
            else STATUS_PARTIAL if failures or truncated
            else STATUS_CLEAN
        )
    else:
        _write_json(out / "manifest.json", config.to_manifest())
        ga_config = GaConfig(**config.nsga2)
        ga = run_nsga2(evaluator, ga_config)
        report = ga.front_report(label=f"nsga2:{config.scenario}")
        with open(out / "history-generations.tsv", "w", newline="") as fh:
            writer = csv.writer(fh, delimiter="\t")
            writer.writerow(["generation", "feasible", "front_size"])
            for row in ga.history:
                writer.writerow([row["generation"], row["feasible"], row["front_size"]])
        failures = []
        status = STATUS_CLEAN

    summary = {"status": status, "failures": failures,
               "front_size": len(report.points),
               "feasible_count": report.feasible_count}
    if report.points:
        export_front(report, out / "front.tsv")
        objectives = report.objectives(feasible_only=True)
        if len(objectives):
            reference = default_reference([objectives])
            report.reference_point = reference
            summary["reference_point"] = reference.tolist()
            summary["hypervolume"] = report.hypervolume()
        render_scatter(report, out / "front.svg")
    _write_json(out / "report.json", summary)
    return summary
