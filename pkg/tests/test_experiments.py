from __future__ import annotations

from pathlib import Path

import pytest

from egress_sim.experiments import (
    AttemptRow,
    ExperimentError,
    ExperimentPlan,
    ExperimentReport,
    read_report_jsonl,
    render_csv,
    render_jsonl,
    render_table,
    run_experiment,
    write_report,
)

GOLDEN_DIR = Path(__file__).parent / "goldens"

FAST_PLAN = ExperimentPlan(
    preset="open_field",
    population=8,
    authorities=1,
    attempts=3,
    base_seed=424242,
    deadline=160,
)


@pytest.fixture(autouse=True)
def serial_runs(monkeypatch):
    monkeypatch.setenv("EGRESS_SIM_THREADS", "1")


def test_exit_authority_follows_table_labels():
    assert ExperimentPlan(preset="open_field", authorities=0).exit_authority is False
    assert ExperimentPlan(preset="open_field", authorities=4).exit_authority is True
    assert (
        ExperimentPlan(
            preset="open_field", authorities=4, spawn_exit_authority=False
        ).exit_authority
        is False
    )


def test_rows_conserve_population():
    report = run_experiment(FAST_PLAN)
    assert len(report.rows) == 3
    for row in report.rows:
        assert row.successful + row.failed == FAST_PLAN.population
        assert 1 <= row.duration <= FAST_PLAN.deadline


def test_single_attempt_mean_equals_row():
    plan = ExperimentPlan(
        preset="open_field", population=5, attempts=1, base_seed=7, deadline=80
    )
    report = run_experiment(plan)
    row = report.rows[0]
    assert report.mean_successful == row.successful
    assert report.mean_failed == row.failed
    assert report.mean_contagions == row.contagions
    assert report.mean_duration == row.duration


def test_attempt_seeds_are_base_plus_index():
    plan = FAST_PLAN
    report = run_experiment(plan)
    for i, row in enumerate(report.rows):
        single = run_experiment(
            ExperimentPlan(
                preset=plan.preset,
                population=plan.population,
                authorities=plan.authorities,
                attempts=1,
                base_seed=plan.base_seed + i,
                deadline=plan.deadline,
            )
        )
        assert single.rows[0][1:] == row[1:]


def test_reports_are_reproducible():
    a = run_experiment(FAST_PLAN)
    b = run_experiment(FAST_PLAN)
    assert a == b
    assert render_csv(a) == render_csv(b)


def test_parallel_equals_serial(monkeypatch):
    monkeypatch.setenv("EGRESS_SIM_THREADS", "1")
    serial = run_experiment(FAST_PLAN)
    monkeypatch.setenv("EGRESS_SIM_THREADS", "2")
    parallel = run_experiment(FAST_PLAN)
    assert serial == parallel


def test_csv_golden_bytes():
    report = run_experiment(FAST_PLAN)
    golden = (GOLDEN_DIR / "open_field_pop8_auth1_seed424242.csv").read_text()
    assert render_csv(report) == golden


def test_csv_row_count_for_ten_attempts():
    plan = ExperimentPlan(
        preset="open_field", population=3, attempts=10, base_seed=11, deadline=40
    )
    text = render_csv(run_experiment(plan))
    lines = text.strip().splitlines()
    assert lines[0] == "attempt,successful,failed,contagions,duration"
    assert len(lines) == 1 + 12  # header + 10 attempts + mean + success_pct
    assert lines[-2].startswith("mean,")
    assert lines[-1].startswith("success_pct,")


def test_jsonl_roundtrip():
    report = run_experiment(FAST_PLAN)
    again = read_report_jsonl(render_jsonl(report))
    assert again == report
    assert again.success_percentage == report.success_percentage


def test_table_mirrors_paper_header_order():
    report = run_experiment(FAST_PLAN)
    text = render_table(report)
    header = text.splitlines()[0]
    assert header.index("Successful Evacuations") < header.index("Failed Evacuations")
    assert header.index("Failed Evacuations") < header.index("Emotional Contagions")
    assert header.index("Emotional Contagions") < header.index("Evacuation Duration")
    assert "#1" in text
    assert "Average (mean)" in text
    assert "% of Citizens" in text


def test_write_report_formats(tmp_path):
    report = run_experiment(FAST_PLAN)
    for fmt, name in (("csv", "r.csv"), ("jsonl", "r.jsonl"), ("table", "r.txt")):
        path = write_report(report, tmp_path / name, fmt)
        assert path.read_text(encoding="utf-8")
    with pytest.raises(ValueError):
        write_report(report, tmp_path / "r.xml", "xml")


def test_unknown_preset_aborts():
    with pytest.raises(Exception):
        run_experiment(ExperimentPlan(preset="nowhere", attempts=1))


def test_success_percentage_definition():
    plan = ExperimentPlan(preset="open_field", attempts=2)
    report = ExperimentReport(
        plan=plan,
        rows=[AttemptRow(1, 13, 2, 10, 50), AttemptRow(2, 11, 4, 20, 60)],
    )
    # mean successful 12, mean failed 3
    assert report.success_percentage == 100.0 * 12 / 15


def test_figure_renders_next_to_report(tmp_path):
    from egress_sim.figures import render_report_figure

    report = run_experiment(FAST_PLAN)
    path = render_report_figure(report, tmp_path / "report.png")
    assert path.exists()
    assert path.stat().st_size > 1000
