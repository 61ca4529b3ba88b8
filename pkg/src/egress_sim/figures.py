"""Report figures rendered next to the delimited output files."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .experiments import ExperimentReport

STATE_SERIES = (
    ("panicked", "tab:red", 0),
    ("alerted", "gold", 1),
    ("calm", "tab:green", 2),
)


def render_report_figure(report: ExperimentReport, path: str | Path) -> Path:
    """Four panels: outcomes, contagions, durations, state-share curves."""
    plan = report.plan
    attempts = [r.attempt for r in report.rows]
    fig, axes = plt.subplots(2, 2, figsize=(11, 7.5))
    (ax_out, ax_cont), (ax_dur, ax_hist) = axes

    ax_out.bar(attempts, [r.successful for r in report.rows], color="tab:green",
               label="successful")
    ax_out.bar(attempts, [r.failed for r in report.rows],
               bottom=[r.successful for r in report.rows], color="tab:red",
               label="failed")
    ax_out.axhline(report.mean_successful, color="tab:green", ls="--", lw=1)
    ax_out.set_title(f"evacuations per attempt ({report.success_percentage:.2f}% success)")
    ax_out.set_xlabel("attempt")
    ax_out.legend(fontsize=8)

    ax_cont.bar(attempts, [r.contagions for r in report.rows], color="tab:purple")
    ax_cont.axhline(report.mean_contagions, color="tab:purple", ls="--", lw=1,
                    label=f"mean {report.mean_contagions:.1f}")
    ax_cont.set_title("emotional contagions per attempt")
    ax_cont.set_xlabel("attempt")
    ax_cont.legend(fontsize=8)

    ax_dur.bar(attempts, [r.duration for r in report.rows], color="tab:blue")
    ax_dur.axhline(report.mean_duration, color="tab:blue", ls="--", lw=1,
                   label=f"mean {report.mean_duration:.1f}")
    ax_dur.set_title("evacuation duration (s) per attempt")
    ax_dur.set_xlabel("attempt")
    ax_dur.legend(fontsize=8)

    for history in report.histories:
        ticks = range(len(history))
        for name, color, idx in STATE_SERIES:
            ax_hist.plot(ticks, [h[idx] for h in history], color=color, alpha=0.35,
                         lw=0.8)
    for name, color, _ in STATE_SERIES:
        ax_hist.plot([], [], color=color, label=name)
    ax_hist.set_title("% of active citizens by state")
    ax_hist.set_xlabel("tick")
    ax_hist.set_ylim(0, 100)
    ax_hist.legend(fontsize=8)

    fig.suptitle(
        f"{plan.preset}  population={plan.population}  authorities={plan.authorities}"
        f"  attempts={plan.attempts}  seed={plan.base_seed}"
    )
    fig.tight_layout()
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=110)
    plt.close(fig)
    return path
