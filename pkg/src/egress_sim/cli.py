"""Command line interface: run experiment cells, sweep the standard
scenario grid, validate world files, and serve interactive sessions."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .engine import EngineError
from .experiments import (
    REPORT_FORMATS,
    ExperimentError,
    ExperimentPlan,
    render_table,
    run_experiment,
    write_report,
)
from .scenarios import PRESET_NAMES, UnknownPreset
from .world import WorldError, parse_world, validate

# standard grid cells; the low-population cell runs without authorities
GRID_CELLS = ((15, 0), (75, 4), (75, 0), (150, 4), (150, 0))

EXT = {"csv": "csv", "jsonl": "jsonl", "table": "txt"}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="egress-sim",
        description="Deterministic mood-driven evacuation simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one experiment cell")
    run.add_argument("--preset", required=True, choices=PRESET_NAMES)
    run.add_argument("--population", type=int, default=15)
    run.add_argument("--authorities", type=int, default=0)
    run.add_argument(
        "--no-exit-authority",
        action="store_true",
        help="never spawn the extra authority on an exit patch",
    )
    run.add_argument("--attempts", type=int, default=10)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--deadline", type=int, default=1000)
    run.add_argument("--out", type=Path, default=None)
    run.add_argument("--format", choices=REPORT_FORMATS, default="table")
    run.add_argument("--no-figure", action="store_true")
    run.set_defaults(func=cmd_run)

    grid = sub.add_parser("grid", help="run the standard scenario/population grid")
    grid.add_argument("--attempts", type=int, default=10)
    grid.add_argument("--seed", type=int, default=0)
    grid.add_argument("--deadline", type=int, default=1000)
    grid.add_argument("--out", type=Path, default=Path("grid_reports"))
    grid.add_argument("--format", choices=REPORT_FORMATS, default="csv")
    grid.add_argument("--no-figure", action="store_true")
    grid.set_defaults(func=cmd_grid)

    val = sub.add_parser("validate", help="check a .world file for runnability")
    val.add_argument("world_file", type=Path)
    val.set_defaults(func=cmd_validate)

    serve = sub.add_parser("serve", help="serve interactive sessions")
    serve.add_argument("--bind", default="127.0.0.1:8787", help="WebSocket addr:port")
    serve.add_argument(
        "--tcp-bind", default=None, help="optional newline-JSON TCP addr:port"
    )
    serve.add_argument("--tick-rate", type=float, default=20.0)
    serve.add_argument("--idle-timeout", type=float, default=1800.0)
    serve.set_defaults(func=cmd_serve)
    return parser


def _emit(report, out: Path | None, format: str, with_figure: bool) -> None:
    if out is None:
        sys.stdout.write(render_table(report))
        return
    write_report(report, out, format)
    print(f"wrote {out}")
    if with_figure:
        from .figures import render_report_figure

        figure_path = out.with_suffix(".png")
        render_report_figure(report, figure_path)
        print(f"wrote {figure_path}")


def cmd_run(args) -> int:
    plan = ExperimentPlan(
        preset=args.preset,
        population=args.population,
        authorities=args.authorities,
        attempts=args.attempts,
        base_seed=args.seed,
        deadline=args.deadline,
        spawn_exit_authority=False if args.no_exit_authority else None,
    )
    report = run_experiment(plan)
    _emit(report, args.out, args.format, not args.no_figure)
    return 0


def cmd_grid(args) -> int:
    out_dir: Path = args.out
    out_dir.mkdir(parents=True, exist_ok=True)
    summary = []
    for preset in PRESET_NAMES:
        for population, authorities in GRID_CELLS:
            plan = ExperimentPlan(
                preset=preset,
                population=population,
                authorities=authorities,
                attempts=args.attempts,
                base_seed=args.seed,
                deadline=args.deadline,
            )
            report = run_experiment(plan)
            name = f"{preset}_pop{population}_auth{authorities}"
            path = out_dir / f"{name}.{EXT[args.format]}"
            write_report(report, path, args.format)
            if not args.no_figure:
                from .figures import render_report_figure

                render_report_figure(report, out_dir / f"{name}.png")
            summary.append((name, report))
            print(
                f"{name}: success={report.success_percentage:.2f}% "
                f"contagions={report.mean_contagions:.1f} "
                f"duration={report.mean_duration:.1f}s"
            )
    print(f"wrote {len(summary)} reports to {out_dir}")
    return 0


def cmd_validate(args) -> int:
    text = args.world_file.read_text(encoding="utf-8")
    world = parse_world(text)
    violations = validate(world)
    if violations:
        for violation in violations:
            print(f"{args.world_file}: {violation}")
        return 2
    print(f"{args.world_file}: ok ({world.width}x{world.height})")
    return 0


def cmd_serve(args) -> int:
    import asyncio

    from .service import run_server

    host, _, port = args.bind.rpartition(":")
    tcp = None
    if args.tcp_bind:
        tcp_host, _, tcp_port = args.tcp_bind.rpartition(":")
        tcp = (tcp_host or "127.0.0.1", int(tcp_port))
    try:
        asyncio.run(
            run_server(
                host or "127.0.0.1",
                int(port),
                tick_rate=args.tick_rate,
                tcp_bind=tcp,
                idle_timeout=args.idle_timeout,
            )
        )
    except KeyboardInterrupt:
        pass
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (WorldError, EngineError, ExperimentError, UnknownPreset, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
