"""Append-only run log: line-delimited JSON records plus CSV renderings.

Workers funnel their records through one lock, so a log file stays valid
JSONL under concurrency. The CSV exports reshape a finished log into
scatter-plot tables: tuning-cube costs per strategy, validation-cube costs
under the default and learned strategies, and final-phase per-cube costs.
"""

from __future__ import annotations

import csv
import io
import json
import threading
from pathlib import Path
from typing import Optional


class RunLog:
    """Collects records in memory and optionally appends them to a file."""

    def __init__(self, path: Optional[str | Path] = None):
        self.path = Path(path) if path else None
        self.entries: list[dict] = []
        self._lock = threading.Lock()
        self._fh = open(self.path, "a") if self.path else None

    def __call__(self, record: dict):
        with self._lock:
            self.entries.append(record)
            if self._fh is not None:
                self._fh.write(json.dumps(record, sort_keys=True) + "\n")
                self._fh.flush()

    def close(self):
        with self._lock:
            if self._fh is not None:
                self._fh.close()
                self._fh = None

    @staticmethod
    def load(path: str | Path) -> list[dict]:
        with open(path) as fh:
            return [json.loads(line) for line in fh if line.strip()]


def _write_csv(rows: list[dict], fieldnames: list[str]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fieldnames, extrasaction="ignore")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def tuning_costs_csv(entries: list[dict]) -> str:
    """Tuning-phase per-cube check costs: (cube_id, strategy, status, cost)."""
    rows = []
    for e in entries:
        if e.get("event") == "collect_check" and e.get("phase") == "tuning":
            rows.append({
                "cube_id": " ".join(str(l) for l in e["cube"]),
                "status": e["status"],
                "cost": e["cost"],
                "budget": e["budget"],
            })
    return _write_csv(rows, ["cube_id", "status", "cost", "budget"])


def validation_costs_csv(entries: list[dict]) -> str:
    """Validation cubes under both strategies: (cube_id, cost_default, cost_learned)."""
    rows = []
    for e in entries:
        if e.get("event") == "validate_cube":
            rows.append({
                "cube_id": " ".join(str(l) for l in e["cube"]),
                "cost_default": e["cost_default"],
                "cost_learned": e["cost_learned"],
            })
    return _write_csv(rows, ["cube_id", "cost_default", "cost_learned"])


def solving_costs_csv(entries: list[dict]) -> str:
    """Final-phase per-cube costs: (cube_id, strategy, status, cost)."""
    rows = []
    for e in entries:
        if e.get("event") == "solve_cube":
            rows.append({
                "cube_id": " ".join(str(l) for l in e["cube"]),
                "strategy": e.get("strategy", ""),
                "status": e["status"],
                "cost": e["cost"],
            })
    return _write_csv(rows, ["cube_id", "strategy", "status", "cost"])


def render_csv_panels(entries: list[dict], out_dir: str | Path) -> list[Path]:
    """Write the three scatter tables next to each other; returns the paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    panels = {
        "tuning_cubes.csv": tuning_costs_csv(entries),
        "validation_cubes.csv": validation_costs_csv(entries),
        "solving_cubes.csv": solving_costs_csv(entries),
    }
    paths = []
    for name, content in panels.items():
        path = out / name
        path.write_text(content)
        paths.append(path)
    return paths
