"""Command-line client.

Each subcommand is a thin wrapper around the same handlers the HTTP
service exposes: parse arguments, build the request model, call the core,
write artifacts.  Exit codes: 0 success, 1 acceptance/threshold failure,
2 usage or runtime error.
"""

from __future__ import annotations

import csv
import functools
import io
import json
import sys
from pathlib import Path

import click

from . import harness
from .harness import ExperimentSpec, load_spec_file
from .service import ChannelRequest
from .spectrum import build_superoperator, spectrum_of
from .shapes import SystemShape
from .theory import CURVE_KINDS, TheoryCurve

EXIT_OK = 0
EXIT_ACCEPTANCE_FAIL = 1
EXIT_ERROR = 2


def _catch_errors(fn):
    """Uniform error handling: anything unexpected exits with code 2."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except SystemExit:
            raise
        except Exception as exc:  # noqa: BLE001 - single CLI error boundary
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_ERROR)

    return wrapper


def _parse_params(pairs: tuple[str, ...]) -> dict[str, float]:
    params: dict[str, float] = {}
    for pair in pairs:
        if "=" not in pair:
            raise click.UsageError(f"expected key=value, got {pair!r}")
        key, value = pair.split("=", 1)
        params[key.strip()] = float(value)
    return params


def _load_experiment(path: str, seed: int | None) -> ExperimentSpec:
    cfg = load_spec_file(path)
    cfg = cfg.get("experiment", cfg)
    if seed is not None:
        cfg["seed"] = seed
    return ExperimentSpec(**cfg)


def _emit_series(series: harness.QmiSeries, spec, out: str | None, name: str) -> None:
    if out is not None:
        csv_path, json_path = harness.save_series(series, out, name, spec)
        click.echo(str(csv_path))
        click.echo(str(json_path))
        return
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(harness.CSV_HEADER)
    for t, mean, err in zip(series.t, series.mean, series.stderr):
        writer.writerow([t, repr(mean), repr(err), series.n_traj, series.entropy_kind])
    click.echo(buf.getvalue(), nl=False)


@click.group()
@click.version_option()
def main() -> None:
    """Quantum-information lifetime lab: simulate, compare, analyze."""


@main.command()
@click.argument("spec_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", type=click.Path(file_okay=False), default=None,
              help="Directory for the CSV/JSON artifacts (stdout if omitted).")
@click.option("--seed", type=int, default=None, help="Override the spec seed.")
@_catch_errors
def simulate(spec_file: str, out: str | None, seed: int | None) -> None:
    """Run the experiment described by SPEC_FILE (TOML or JSON)."""
    spec = _load_experiment(spec_file, seed)
    series = harness.run(spec)
    _emit_series(series, spec, out, spec.name)


@main.command()
@click.argument("curve_kind", type=click.Choice(CURVE_KINDS))
@click.option("--params", "-p", multiple=True,
              help="Curve parameter as key=value (repeatable).")
@click.option("--t-max", type=int, default=32, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="CSV output path (stdout if omitted).")
@click.option("--seed", type=int, default=None, hidden=True)  # accepted, unused
@_catch_errors
def theory(curve_kind: str, params: tuple[str, ...], t_max: int,
           out: str | None, seed: int | None) -> None:
    """Evaluate a closed-form curve on t = 0..t_max."""
    times = list(range(t_max + 1))
    curve = TheoryCurve.evaluate(curve_kind, _parse_params(params), times)
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["t", "qmi_bits", "valid"])
    for t in times:
        writer.writerow([t, repr(curve.values[t]), int(curve.valid[t])])
    if out is not None:
        Path(out).write_text(buf.getvalue())
        click.echo(out)
    else:
        click.echo(buf.getvalue(), nl=False)


@main.command()
@click.argument("channel_spec", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", type=click.Path(file_okay=False), default=None,
              help="Directory for eigenvalue CSV + summary JSON.")
@click.option("--seed", type=int, default=None, help="Override the channel seed.")
@_catch_errors
def spectrum(channel_spec: str, out: str | None, seed: int | None) -> None:
    """Diagonalize the one-step channel described by CHANNEL_SPEC."""
    cfg = load_spec_file(channel_spec)
    cfg = cfg.get("channel", cfg)
    if seed is not None:
        cfg["seed"] = seed
    req = ChannelRequest(**cfg)
    shape = SystemShape(0, req.n_a, req.n_b)
    result = spectrum_of(build_superoperator(req.draw_unitary(), shape, req.reset))
    if out is not None:
        name = cfg.get("name", "channel")
        csv_path, json_path = harness.save_spectrum(
            result, out, name, {"channel": req.model_dump()}
        )
        click.echo(str(csv_path))
        click.echo(str(json_path))
    else:
        click.echo(json.dumps({
            "lambda1_modulus": abs(result.lambda1),
            "tau_eig": result.tau_eig if result.tau_eig != float("inf") else None,
            "bulk_radius_estimate": result.bulk_radius_estimate,
        }, indent=2, sort_keys=True))


@main.command()
@click.argument("spec_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--mode", type=click.Choice(["conditioned", "unconditioned"]),
              default="conditioned", show_default=True)
@click.option("--source", type=click.Choice(["exact-distribution", "sampled"]),
              default="exact-distribution", show_default=True)
@click.option("--shots", type=int, default=1024, show_default=True)
@click.option("--out", type=click.Path(file_okay=False), default=None)
@click.option("--seed", type=int, default=None, help="Override the spec seed.")
@_catch_errors
def q2c(spec_file: str, mode: str, source: str, shots: int,
        out: str | None, seed: int | None) -> None:
    """Classical readout mutual information for the experiment in SPEC_FILE."""
    spec = _load_experiment(spec_file, seed)
    series = harness.q2c_mutual_info(spec, mode=mode, source=source, shots=shots)
    _emit_series(series, spec, out, f"{spec.name}-q2c-{mode}")


@main.command()
@click.argument("config", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", type=click.Path(file_okay=False), default=None,
              help="Output directory (overrides the config).")
@click.option("--seed", type=int, default=None, help="Override the suite seed.")
@_catch_errors
def suite(config: str, out: str | None, seed: int | None) -> None:
    """Run a batch of experiments with closed-form comparisons."""
    result = harness.run_suite(config, out_dir=out, seed_override=seed)
    for row in result.report:
        status = "PASS" if row.get("passed", True) else "FAIL"
        click.echo(f"{status} {row['name']}")
    click.echo(str(result.out_dir / "acceptance_report.json"))
    if not result.passed:
        sys.exit(EXIT_ACCEPTANCE_FAIL)


@main.command()
@click.argument("series_csv", type=click.Path(exists=True, dir_okay=False))
@click.option("--epsilon", type=float, default=0.25, show_default=True,
              help="Lifetime threshold as a fraction of QMI(0).")
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Write the estimate as JSON instead of plain text.")
@click.option("--seed", type=int, default=None, hidden=True)  # accepted, unused
@_catch_errors
def lifetime(series_csv: str, epsilon: float, out: str | None, seed: int | None) -> None:
    """First time the mean QMI drops below epsilon times its initial value."""
    series = harness.load_series(series_csv)
    est = harness.estimate_lifetime(series, epsilon)
    if out is not None:
        Path(out).write_text(json.dumps({
            "tau": est.tau, "censored": est.censored, "horizon": est.horizon,
        }, indent=2, sort_keys=True) + "\n")
        click.echo(out)
    else:
        click.echo(str(est))


if __name__ == "__main__":
    main()
