"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 data error, 3 infeasible model,
4 solver limit reached. All diagnostics go to stderr; results go to files
or stdout.
"""

from __future__ import annotations

import dataclasses
import json
import sys
from pathlib import Path

import click

from . import __version__
from .disruption import ScenarioError, Scenario, apply_scenario
from .documents import (
    DocumentError,
    load_model,
    load_scenario,
    save_results,
    sweep_to_rows,
    scenario_to_dict,
)
from .formulation import BuildError, build, dimensions_of
from .milp import MilpError, SolveOptions, export_lp_text, export_mps_with_map, solve
from .network import validate
from .runner import (
    KpiReport,
    roll as run_roll,
    run,
    stitched_residuals,
    sweep_characterization,
    sweep_penalties,
)

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INFEASIBLE, EXIT_LIMIT = 0, 1, 2, 3, 4


class _DataError(Exception):
    pass


class _Infeasible(Exception):
    pass


class _SolverLimit(Exception):
    pass


def _axis(spec: str):
    """Parse 'start:stop:count' into an inclusive linear grid."""
    try:
        start_s, stop_s, count_s = spec.split(":")
        start, stop, count = float(start_s), float(stop_s), int(count_s)
    except ValueError:
        raise click.UsageError(f"axis spec {spec!r} is not start:stop:count")
    if count < 1:
        raise click.UsageError("axis count must be at least 1")
    if count == 1:
        return [start]
    step = (stop - start) / (count - 1)
    return [start + k * step for k in range(count)]


def _load(model_path, scenario_path):
    model = load_model(model_path)
    if scenario_path is None:
        return model, Scenario(), None, SolveOptions()
    scenario, config, options = load_scenario(scenario_path)
    return model, scenario, config, options


def _kpi_line(kpi: KpiReport) -> str:
    return " ".join(f"{c}={getattr(kpi, c):g}" for c in KpiReport.COLUMNS)


@click.group()
@click.version_option(__version__, prog_name="rechain")
def cli():
    """Reactive replanning for disrupted supply chains."""


@cli.command("validate")
@click.option("--model", "model_path", required=True, type=click.Path())
def cmd_validate(model_path):
    """Check a model document; exit 2 when it has errors."""
    model = load_model(model_path)
    report = validate(model)
    click.echo(report.summary())
    if not report.ok:
        raise _DataError("validation failed")


@cli.command("solve")
@click.option("--model", "model_path", required=True, type=click.Path())
@click.option("--scenario", "scenario_path", type=click.Path(), default=None)
@click.option("--out", "out_dir", type=click.Path(), default=None)
@click.option("--format", "out_format", type=click.Choice(["tabular", "structured"]),
              default="structured")
@click.option("--gap", type=float, default=None, help="relative MIP gap override")
@click.option("--time-limit", type=float, default=None, help="seconds")
@click.option("--export-mps", "mps_path", type=click.Path(), default=None)
@click.option("--no-timestamps", is_flag=True, default=False)
def cmd_solve(model_path, scenario_path, out_dir, out_format, gap, time_limit,
              mps_path, no_timestamps):
    """Solve one scenario and print the KPI line."""
    model, scenario, config, options = _load(model_path, scenario_path)
    if gap is not None:
        options = dataclasses.replace(options, mip_gap=gap)
    if time_limit is not None:
        options = dataclasses.replace(options, time_limit=time_limit)
    result = run(model, scenario, config, options)
    status = result.solution.status
    dims = result.dimensions
    click.echo(
        f"status={status} columns={dims.continuous_count + dims.binary_count} "
        f"binaries={dims.binary_count} rows={dims.constraint_count} "
        f"wall={result.wall_time:.3f}s",
        err=True,
    )
    if mps_path:
        disrupted = apply_scenario(model, scenario)
        instance, _ = build(disrupted, config)
        text, name_map = export_mps_with_map(instance)
        Path(mps_path).write_text(text)
        if name_map:
            Path(str(mps_path) + ".names.json").write_text(json.dumps(name_map, indent=2) + "\n")
    if status == "infeasible":
        for change in result.changes:
            click.echo(f"changed {change.path} [{change.start},{change.end}) "
                       f"{change.old} -> {change.new}", err=True)
        raise _Infeasible("scenario is infeasible")
    if status in ("limit", "unbounded"):
        raise _SolverLimit(f"solver ended with status {status}")
    click.echo(_kpi_line(result.kpis))
    if out_dir:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        target = out / ("results.json" if out_format == "structured" else "tables")
        save_results(result.schedule, result.kpis, target,
                     format=out_format, timestamps=not no_timestamps)


@cli.command("sweep")
@click.option("--model", "model_path", required=True, type=click.Path())
@click.option("--scenario", "scenario_path", required=True, type=click.Path())
@click.option("--axis1", required=True, help="start:stop:count")
@click.option("--axis2", required=True, help="start:stop:count")
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--workers", type=int, default=1)
@click.option("--kind", type=click.Choice(["characterization", "penalties"]),
              default="characterization")
@click.option("--no-timestamps", is_flag=True, default=False)
def cmd_sweep(model_path, scenario_path, axis1, axis2, out_dir, workers, kind, no_timestamps):
    """Run a scenario grid and write one KPI row per cell."""
    model, scenario, config, options = _load(model_path, scenario_path)
    v1, v2 = _axis(axis1), _axis(axis2)
    if kind == "penalties":
        grid = sweep_penalties(model, scenario, v1, v2, config, options, workers=workers)
    else:
        if not scenario.events:
            raise _DataError("characterization sweeps need a base event in the scenario")
        grid = sweep_characterization(model, scenario.events[0], v1, v2, config, options,
                                      template=scenario, workers=workers)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "grid.csv").write_text(sweep_to_rows(grid))
    cells = {
        f"{i},{j}": scenario_to_dict(grid.scenarios[i][j])
        for i in range(len(grid.axis1))
        for j in range(len(grid.axis2))
        if grid.scenarios[i][j] is not None
    }
    (out / "cells.json").write_text(json.dumps(cells, indent=2, sort_keys=True) + "\n")
    bad = [s for row in grid.statuses for s in row if s not in ("optimal", "feasible", "infeasible")]
    click.echo(f"cells={len(v1) * len(v2)} failed={len(bad)}")
    if bad:
        raise _SolverLimit(f"{len(bad)} cells did not solve")


@cli.command("roll")
@click.option("--model", "model_path", required=True, type=click.Path())
@click.option("--scenario", "scenario_path", type=click.Path(), default=None)
@click.option("--window", type=int, required=True)
@click.option("--steps", type=int, required=True)
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--no-timestamps", is_flag=True, default=False)
def cmd_roll(model_path, scenario_path, window, steps, out_dir, no_timestamps):
    """Rolling-horizon re-solves committing one period per step."""
    model, scenario, config, options = _load(model_path, scenario_path)
    result = run_roll(model, scenario, window=window, steps=steps, config=config, options=options)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    payload = {
        "window": window,
        "steps": len(result.steps),
        "halted": result.halted,
        "diagnostic": result.diagnostic,
        "stitched_residual": stitched_residuals(model, scenario, result),
        "per_step": [
            {
                "offset": s.offset,
                "status": s.solution.status,
                "objective": s.solution.objective,
                "kpis": {c: getattr(s.kpis, c) for c in KpiReport.COLUMNS},
            }
            for s in result.steps
        ],
        "committed": {
            family: {"|".join(map(str, k)): list(v) for k, v in table.items()}
            for family, table in result.committed.items()
            if family != "cancellations"
        },
        "cancellations": [list(c) for c in result.committed["cancellations"]],
    }
    (out / "roll.json").write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    click.echo(f"steps={len(result.steps)} halted={result.halted}")
    if result.halted:
        raise _Infeasible(result.diagnostic)


@cli.command("export")
@click.option("--model", "model_path", required=True, type=click.Path())
@click.option("--scenario", "scenario_path", type=click.Path(), default=None)
@click.option("--format", "fmt", type=click.Choice(["mps", "lp"]), required=True)
@click.option("--out", "out_path", required=True, type=click.Path())
def cmd_export(model_path, scenario_path, fmt, out_path):
    """Write the compiled instance in MPS or LP text format."""
    model, scenario, config, _options = _load(model_path, scenario_path)
    disrupted = apply_scenario(model, scenario)
    instance, _ = build(disrupted, config)
    if fmt == "mps":
        text, name_map = export_mps_with_map(instance)
        Path(out_path).write_text(text)
        if name_map:
            Path(str(out_path) + ".names.json").write_text(json.dumps(name_map, indent=2) + "\n")
    else:
        Path(out_path).write_text(export_lp_text(instance))
    dims = dimensions_of(instance)
    click.echo(f"columns={dims.continuous_count + dims.binary_count} rows={dims.constraint_count}")


@cli.command("serve")
@click.option("--port", type=int, default=8080)
@click.option("--model-dir", "model_dir", required=True, type=click.Path())
@click.option("--workers", type=int, default=2)
@click.option("--queue-cap", type=int, default=16)
def cmd_serve(port, model_dir, workers, queue_cap):
    """Start the what-if HTTP service."""
    import uvicorn

    from .service import create_app

    app = create_app(model_dir, workers=workers, queue_cap=queue_cap)
    uvicorn.run(app, host="127.0.0.1", port=port, log_level="warning")


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
        return EXIT_OK
    except click.UsageError as exc:
        click.echo(f"usage error: {exc.format_message()}", err=True)
        return EXIT_USAGE
    except click.ClickException as exc:
        exc.show()
        return EXIT_USAGE
    except click.exceptions.Abort:
        return EXIT_USAGE
    except _Infeasible as exc:
        click.echo(f"infeasible: {exc}", err=True)
        return EXIT_INFEASIBLE
    except _SolverLimit as exc:
        click.echo(f"solver limit: {exc}", err=True)
        return EXIT_LIMIT
    except (_DataError, DocumentError, BuildError, ScenarioError, MilpError, ValueError) as exc:
        click.echo(f"data error: {exc}", err=True)
        return EXIT_DATA
    except OSError as exc:
        click.echo(f"i/o error: {exc}", err=True)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
