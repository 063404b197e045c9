"""Experiment reports: verdicts, metrics, JSON and CSV output.

``report.json`` layout (schema ``maxmult.report/1``)::

    {"schema", "experiment", "config_fingerprint", "config", "verdict",
     "cases": [{"name", "verdict", "metrics", "tolerances", "notes"}],
     "wall_clock_s", "artifacts"}

``metrics.csv`` has one row per (case, metric): ``case, verdict, metric, value``.
Experiments with shell data also write ``shells.csv`` with columns
``case, space, j, norm``.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

from ..provenance import canonical

__all__ = ["PASS", "FAIL", "VACUOUS", "NOT_APPLICABLE", "OK_VERDICTS", "Case", "ExperimentReport",
           "REPORT_SCHEMA"]

REPORT_SCHEMA = "maxmult.report/1"
PASS = "PASS"
FAIL = "FAIL"
VACUOUS = "VACUOUS"
NOT_APPLICABLE = "NOT-APPLICABLE"
OK_VERDICTS = (PASS, VACUOUS, NOT_APPLICABLE)


@dataclass
class Case:
    """One checked statement: named metrics, the verdict and the tolerances behind it."""

    name: str
    verdict: str
    metrics: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    notes: str = ""
    headline: str | None = None

    @property
    def ok(self) -> bool:
        return self.verdict in OK_VERDICTS

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "verdict": self.verdict,
            "metrics": canonical(self.metrics),
            "tolerances": canonical(self.tolerances),
            "notes": self.notes,
            "headline": self.headline,
        }


@dataclass
class ExperimentReport:
    experiment: str
    config_fingerprint: str
    config: dict
    cases: list = field(default_factory=list)
    wall_clock_s: float = 0.0
    artifacts: list = field(default_factory=list)
    shells: list = field(default_factory=list)  # rows (case, space, j, norm)

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.cases)

    @property
    def verdict(self) -> str:
        return PASS if self.passed else FAIL

    def case(self, name: str) -> Case:
        for c in self.cases:
            if c.name == name:
                return c
        raise KeyError(name)

    def headlines(self) -> dict:
        """``{case: value}`` for the metric each case names as its headline."""
        return {c.name: c.metrics[c.headline] for c in self.cases if c.headline is not None}

    def to_dict(self) -> dict:
        return {
            "schema": REPORT_SCHEMA,
            "experiment": self.experiment,
            "config_fingerprint": self.config_fingerprint,
            "config": canonical(self.config),
            "verdict": self.verdict,
            "cases": [c.to_dict() for c in self.cases],
            "wall_clock_s": self.wall_clock_s,
            "artifacts": list(self.artifacts),
        }

    def metric_rows(self) -> list:
        rows = []
        for c in self.cases:
            for k in sorted(c.metrics):
                v = c.metrics[k]
                if isinstance(v, (list, tuple, dict)):
                    v = json.dumps(canonical(v), sort_keys=True)
                elif isinstance(v, float):
                    v = repr(v)
                rows.append([c.name, c.verdict, k, v])
        return rows

    def write(self, out_dir) -> list:
        """Write report.json, metrics.csv and (when present) shells.csv; returns the paths."""
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        paths = [out / "metrics.csv"]
        with open(paths[0], "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow(["case", "verdict", "metric", "value"])
            wr.writerows(self.metric_rows())
        if self.shells:
            paths.append(out / "shells.csv")
            with open(paths[-1], "w", newline="") as fh:
                wr = csv.writer(fh)
                wr.writerow(["case", "space", "j", "norm"])
                for case, space, j, v in self.shells:
                    wr.writerow([case, space, j, repr(float(v))])
        paths.append(out / "report.json")
        self.artifacts = [p.name for p in paths]
        paths[-1].write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True))
        return paths
