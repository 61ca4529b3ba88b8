"""Batch experiment runner: attempt tables for scenario cells and their files.

An experiment plan names a scenario preset and a (population, authorities)
cell; attempts run independently with seeds base_seed + index, optionally in
parallel across processes (EGRESS_SIM_THREADS caps the worker count).
Reports are a pure function of the plan, so identical plans produce
byte-identical files.
"""
from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from pathlib import Path
from typing import NamedTuple, Optional

from .engine import EngineError, SimConfig, run_to_completion
from .scenarios import load_preset
from .world import NoExit, WorldError

REPORT_FORMATS = ("csv", "jsonl", "table")

TABLE_HEADERS = (
    "Simulation Attempts",
    "Successful Evacuations",
    "Failed Evacuations",
    "Emotional Contagions",
    "Evacuation Duration",
)


class ExperimentError(Exception):
    pass


@dataclass(frozen=True)
class ExperimentPlan:
    preset: str
    population: int = 15
    authorities: int = 0
    attempts: int = 10
    base_seed: int = 0
    deadline: int = 1000
    # None means: spawn the exit authority only in cells that have
    # authorities at all, matching the no-authorities cell labels
    spawn_exit_authority: Optional[bool] = None

    def __post_init__(self) -> None:
        if self.attempts < 1:
            raise ValueError("attempts must be >= 1")

    @property
    def exit_authority(self) -> bool:
        if self.spawn_exit_authority is None:
            return self.authorities > 0
        return self.spawn_exit_authority

    def config_for_attempt(self, index: int) -> SimConfig:
        preset = load_preset(self.preset)
        return SimConfig(
            world=preset.world,
            initial_population=self.population,
            initial_authorities=self.authorities,
            spawn_exit_authority=self.exit_authority,
            deadline=self.deadline,
            seed=self.base_seed + index,
        )


class AttemptRow(NamedTuple):
    attempt: int
    successful: int
    failed: int
    contagions: int
    duration: int


@dataclass
class ExperimentReport:
    plan: ExperimentPlan
    rows: list[AttemptRow]
    # per-attempt (pct_panicked, pct_alerted, pct_calm) series; figure fodder,
    # not part of report identity
    histories: list[list[tuple[float, float, float]]] = field(
        default_factory=list, compare=False
    )

    @property
    def mean_successful(self) -> float:
        return sum(r.successful for r in self.rows) / len(self.rows)

    @property
    def mean_failed(self) -> float:
        return sum(r.failed for r in self.rows) / len(self.rows)

    @property
    def mean_contagions(self) -> float:
        return sum(r.contagions for r in self.rows) / len(self.rows)

    @property
    def mean_duration(self) -> float:
        return sum(r.duration for r in self.rows) / len(self.rows)

    @property
    def success_percentage(self) -> float:
        """Mean successful over mean attempted citizens, in percent."""
        attempted = self.mean_successful + self.mean_failed
        if attempted == 0:
            return 100.0  # vacuous: nobody needed to evacuate
        return 100.0 * self.mean_successful / attempted


def _worker_count() -> int:
    env = os.environ.get("EGRESS_SIM_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def _run_attempt(plan: ExperimentPlan, index: int):
    try:
        stats = run_to_completion(plan.config_for_attempt(index))
    except (EngineError, WorldError, NoExit) as exc:
        raise ExperimentError(f"attempt {index + 1} failed: {exc}") from exc
    row = AttemptRow(
        attempt=index + 1,
        successful=stats.successful_escapes,
        failed=stats.failed_evacuations,
        contagions=stats.total_contagions,
        duration=stats.duration,
    )
    return row, stats.history


def run_experiment(plan: ExperimentPlan) -> ExperimentReport:
    """Run all attempts (in parallel when workers allow) and aggregate."""
    load_preset(plan.preset)  # fail fast on unknown presets
    workers = min(_worker_count(), plan.attempts)
    if workers <= 1:
        results = [_run_attempt(plan, i) for i in range(plan.attempts)]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(partial(_run_attempt, plan), range(plan.attempts)))
    return ExperimentReport(
        plan=plan,
        rows=[row for row, _ in results],
        histories=[history for _, history in results],
    )


def _fmt(value: float) -> str:
    # integers print bare; means keep their short decimal form
    if value == int(value):
        return str(int(value))
    return format(value, ".10g")


def render_csv(report: ExperimentReport) -> str:
    lines = ["attempt,successful,failed,contagions,duration"]
    for r in report.rows:
        lines.append(f"{r.attempt},{r.successful},{r.failed},{r.contagions},{r.duration}")
    lines.append(
        "mean,"
        f"{_fmt(report.mean_successful)},{_fmt(report.mean_failed)},"
        f"{_fmt(report.mean_contagions)},{_fmt(report.mean_duration)}"
    )
    lines.append(f"success_pct,{report.success_percentage:.2f},,,")
    return "\n".join(lines) + "\n"


def render_jsonl(report: ExperimentReport) -> str:
    plan = report.plan
    lines = [
        json.dumps(
            {
                "type": "plan",
                "preset": plan.preset,
                "population": plan.population,
                "authorities": plan.authorities,
                "attempts": plan.attempts,
                "base_seed": plan.base_seed,
                "deadline": plan.deadline,
                "spawn_exit_authority": plan.spawn_exit_authority,
            },
            sort_keys=True,
        )
    ]
    for r in report.rows:
        lines.append(
            json.dumps(
                {
                    "type": "attempt",
                    "attempt": r.attempt,
                    "successful": r.successful,
                    "failed": r.failed,
                    "contagions": r.contagions,
                    "duration": r.duration,
                },
                sort_keys=True,
            )
        )
    lines.append(
        json.dumps(
            {
                "type": "mean",
                "successful": report.mean_successful,
                "failed": report.mean_failed,
                "contagions": report.mean_contagions,
                "duration": report.mean_duration,
            },
            sort_keys=True,
        )
    )
    lines.append(
        json.dumps(
            {"type": "success_pct", "value": round(report.success_percentage, 2)},
            sort_keys=True,
        )
    )
    return "\n".join(lines) + "\n"


def read_report_jsonl(text: str) -> ExperimentReport:
    """Rebuild a report from its json-lines form (inverse of render_jsonl)."""
    plan = None
    rows = []
    for line in text.splitlines():
        if not line.strip():
            continue
        obj = json.loads(line)
        if obj["type"] == "plan":
            plan = ExperimentPlan(
                preset=obj["preset"],
                population=obj["population"],
                authorities=obj["authorities"],
                attempts=obj["attempts"],
                base_seed=obj["base_seed"],
                deadline=obj["deadline"],
                spawn_exit_authority=obj["spawn_exit_authority"],
            )
        elif obj["type"] == "attempt":
            rows.append(
                AttemptRow(
                    attempt=obj["attempt"],
                    successful=obj["successful"],
                    failed=obj["failed"],
                    contagions=obj["contagions"],
                    duration=obj["duration"],
                )
            )
    if plan is None:
        raise ExperimentError("jsonl report is missing its plan line")
    return ExperimentReport(plan=plan, rows=rows)


def render_table(report: ExperimentReport) -> str:
    """Human-readable attempt table with a mean row and success line."""
    rows = [
        (f"#{r.attempt}", str(r.successful), str(r.failed), str(r.contagions), str(r.duration))
        for r in report.rows
    ]
    rows.append(
        (
            "Average (mean)",
            _fmt(report.mean_successful),
            _fmt(report.mean_failed),
            _fmt(report.mean_contagions),
            _fmt(report.mean_duration),
        )
    )
    widths = [
        max(len(TABLE_HEADERS[col]), max(len(row[col]) for row in rows))
        for col in range(5)
    ]
    lines = [
        "  ".join(h.ljust(w) for h, w in zip(TABLE_HEADERS, widths)).rstrip()
    ]
    for row in rows:
        lines.append("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip())
    lines.append(f"{report.success_percentage:.2f}% of Citizens")
    return "\n".join(lines) + "\n"


RENDERERS = {"csv": render_csv, "jsonl": render_jsonl, "table": render_table}


def write_report(report: ExperimentReport, path: str | Path, format: str = "csv") -> Path:
    if format not in RENDERERS:
        raise ValueError(f"unknown report format {format!r}; expected {REPORT_FORMATS}")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(RENDERERS[format](report), encoding="utf-8")
    return path
