"""Command line front end.

Five subcommands:

* ``measure``   closed-form measures for one parameter set
* ``fit``       estimates from a CSV of observed income pairs
* ``simulate``  seeded draws from the model plus a simulation report
* ``sweep``     measures over a one- or two-parameter grid
* ``plot``      scatter figure with identity and fitted lines (SVG)

Exit codes: 0 on success, 2 for usage problems (bad flags, out-of-domain
parameters), 3 for data problems (malformed CSV, non-positive incomes,
missing columns, too few rows), 4 for numerically meaningless requests
(a gap distribution that is a point mass at zero).  Setting the NO_COLOR
environment variable disables the only color this tool emits, the red
error prefix.
"""

from __future__ import annotations

import functools
import itertools
import math
import os
from pathlib import Path
from typing import Callable

import click

from . import __version__
from .datasets import DatasetSpec, IncomeScale, load_csv, write_sample_csv
from .errors import DataError, DegenerateGapError, InvalidParamsError
from .estimate import (
    IncomeSample,
    empirical_absolute_mobility,
    fit_params,
    log_transform,
    ols_fit,
)
from .model import (
    MeasureSource,
    MobilityReport,
    ModelParams,
    analytic_report,
)
from .reports import ReportDocument, fmt_float, json_bytes, standard_metadata, write_report
from .simulate import SimConfig, mc_report_values, sample_pairs

_PARAM_NAMES = ("mu_p", "sigma_p", "mu_c", "sigma_c", "rho")
_MAX_SEED = 2**64 - 1


class _DataFailure(click.ClickException):
    exit_code = 3

    def show(self, file=None) -> None:
        _error_line(self.format_message())


class _NumericFailure(click.ClickException):
    exit_code = 4

    def show(self, file=None) -> None:
        _error_line(self.format_message())


def _error_line(message: str) -> None:
    if os.environ.get("NO_COLOR"):
        click.echo(f"error: {message}", err=True)
    else:
        click.secho(f"error: {message}", err=True, fg="red")


def _surface_errors(f: Callable) -> Callable:
    """Map library exceptions onto the documented exit codes."""

    @functools.wraps(f)
    def wrapper(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except DataError as exc:
            raise _DataFailure(str(exc)) from exc
        except DegenerateGapError as exc:
            raise _NumericFailure(str(exc)) from exc
        except InvalidParamsError as exc:
            raise click.UsageError(str(exc)) from exc

    return wrapper


def _model_options(required: bool) -> Callable:
    # An explicit default (even None) stops click from enforcing
    # ``required``, so pass one only for the optional variant.
    extra = {} if required else {"default": None}

    def deco(f: Callable) -> Callable:
        for opt in (
            click.option(
                "--rho",
                type=click.FloatRange(-1.0, 1.0),
                required=required,
                help="Correlation between parent and child log-incomes, in [-1, 1].",
                **extra,
            ),
            click.option(
                "--sigma-c",
                type=click.FloatRange(0.0, min_open=True),
                required=required,
                help="Standard deviation of child log-income (> 0).",
                **extra,
            ),
            click.option(
                "--mu-c",
                type=float,
                required=required,
                help="Mean of child log-income.",
                **extra,
            ),
            click.option(
                "--sigma-p",
                type=click.FloatRange(0.0, min_open=True),
                required=required,
                help="Standard deviation of parent log-income (> 0).",
                **extra,
            ),
            click.option(
                "--mu-p",
                type=float,
                required=required,
                help="Mean of parent log-income.",
                **extra,
            ),
        ):
            f = opt(f)
        return f

    return deco


def _report_options(default_format: str = "json") -> Callable:
    def deco(f: Callable) -> Callable:
        f = click.option(
            "--output",
            "-o",
            default="-",
            show_default=True,
            metavar="PATH",
            help="Destination file, or - for stdout.",
        )(f)
        f = click.option(
            "--format",
            "-f",
            "fmt",
            type=click.Choice(["json", "csv"]),
            default=default_format,
            show_default=True,
            help="Report encoding.",
        )(f)
        return f

    return deco


def _dataset_options(required: bool) -> Callable:
    def deco(f: Callable) -> Callable:
        f = click.option(
            "--scale",
            type=click.Choice([s.value for s in IncomeScale]),
            default=IncomeScale.RAW_MONEY.value,
            show_default=True,
            help="Whether the file holds money amounts or natural-log incomes.",
        )(f)
        f = click.option(
            "--header/--no-header",
            "has_header",
            default=True,
            help="Whether the first row names the columns.  [default: header]",
        )(f)
        f = click.option(
            "--child-col",
            default="child",
            show_default=True,
            metavar="NAME|INDEX",
            help="Child income column; digits mean a 0-based index.",
        )(f)
        f = click.option(
            "--parent-col",
            default="parent",
            show_default=True,
            metavar="NAME|INDEX",
            help="Parent income column; digits mean a 0-based index.",
        )(f)
        f = click.option(
            "--data",
            required=required,
            default=None,
            type=click.Path(exists=True, dir_okay=False, path_type=Path),
            help="CSV file of income pairs.",
        )(f)
        return f

    return deco


def _column(text: str) -> int | str:
    text = text.strip()
    return int(text) if text.isdigit() else text


def _build_params(mu_p, sigma_p, mu_c, sigma_c, rho) -> ModelParams:
    given = {"mu_p": mu_p, "sigma_p": sigma_p, "mu_c": mu_c, "sigma_c": sigma_c, "rho": rho}
    missing = [name for name in _PARAM_NAMES if given[name] is None]
    if missing:
        flags = ", ".join("--" + name.replace("_", "-") for name in missing)
        raise click.UsageError(f"missing model parameters: {flags}")
    return ModelParams(**given)


def _write_output(data: bytes, output: str) -> None:
    if output == "-":
        click.echo(data, nl=False)
    else:
        Path(output).write_bytes(data)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(version=__version__, prog_name="mobnorm")
def main() -> None:
    """Intergenerational income mobility: analytic, fitted, and simulated."""


@main.command()
@_model_options(required=True)
@_report_options()
@_surface_errors
def measure(mu_p, sigma_p, mu_c, sigma_c, rho, fmt, output) -> None:
    """Closed-form mobility measures for one parameter set."""
    params = ModelParams(mu_p=mu_p, sigma_p=sigma_p, mu_c=mu_c, sigma_c=sigma_c, rho=rho)
    doc = ReportDocument(
        measures=(analytic_report(params),),
        params=params,
        metadata=standard_metadata(),
    )
    _write_output(write_report(doc, fmt), output)


@main.command()
@_dataset_options(required=True)
@_report_options()
@click.option(
    "--figure",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    metavar="PATH",
    help="Also render the scatter/fit figure (SVG) to this file.",
)
@_surface_errors
def fit(data, parent_col, child_col, has_header, scale, fmt, output, figure) -> None:
    """Estimate parameters and measures from a CSV of income pairs."""
    spec = DatasetSpec(
        path=data,
        parent_column=_column(parent_col),
        child_column=_column(child_col),
        has_header=has_header,
        income_scale=IncomeScale(scale),
    )
    sample = load_csv(spec)
    logs = log_transform(sample) if isinstance(sample, IncomeSample) else sample
    ols = ols_fit(logs)
    params = fit_params(logs)
    empirical = MobilityReport.assemble(
        beta=ols.beta,
        alpha=ols.alpha,
        absolute_mobility=empirical_absolute_mobility(logs),
        source=MeasureSource.EMPIRICAL,
    )
    doc = ReportDocument(
        measures=(empirical, analytic_report(params)),
        params=params,
        fit=ols,
        metadata=standard_metadata(n=logs.n),
    )
    _write_output(write_report(doc, fmt), output)
    if figure is not None:
        from .figures import render_figure

        Path(figure).write_bytes(render_figure(logs, ols))


@main.command()
@_model_options(required=True)
@click.option("--n", type=click.IntRange(min=1), required=True, help="Number of simulated pairs (at least 2, so the regression is defined).")
@click.option("--seed", type=click.IntRange(min=0, max=_MAX_SEED), required=True, help="Random seed; same seed, same bytes.")
@click.option(
    "--sample-out",
    type=click.Path(dir_okay=False, path_type=Path),
    required=True,
    metavar="PATH",
    help="Write the simulated log-income pairs here (CSV).",
)
@_report_options()
@click.option(
    "--figure",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    metavar="PATH",
    help="Also render the scatter/fit figure (SVG) to this file.",
)
@_surface_errors
def simulate(mu_p, sigma_p, mu_c, sigma_c, rho, n, seed, sample_out, fmt, output, figure) -> None:
    """Draw pairs from the model; write the sample and a simulation report.

    The report carries the Monte Carlo measures next to the closed-form
    ones at the same parameters, so sampling error is visible at a glance.
    """
    params = ModelParams(mu_p=mu_p, sigma_p=sigma_p, mu_c=mu_c, sigma_c=sigma_c, rho=rho)
    if n < 2:
        raise click.UsageError("--n must be at least 2 so the report's regression part is defined")
    sample, ols, est = mc_report_values(SimConfig(params=params, n_draws=n, seed=seed))
    write_sample_csv(sample, sample_out)
    mc = MobilityReport.assemble(
        beta=ols.beta,
        alpha=ols.alpha,
        absolute_mobility=est.value,
        source=MeasureSource.MONTE_CARLO,
    )
    doc = ReportDocument(
        measures=(mc, analytic_report(params)),
        params=params,
        fit=ols,
        metadata=standard_metadata(seed=seed, n=n, mc_std_error=est.std_error),
    )
    _write_output(write_report(doc, fmt), output)
    if figure is not None:
        from .figures import render_figure

        Path(figure).write_bytes(render_figure(sample, ols))


def _parse_sweep(text: str) -> tuple[str, list[float]]:
    name, sep, rng = text.partition("=")
    if not sep:
        raise click.UsageError(f"sweep {text!r} must look like PARAM=START:STOP:STEP")
    name = name.strip().replace("-", "_")
    if name not in _PARAM_NAMES:
        raise click.UsageError(
            f"unknown sweep parameter {name!r}; choose from {', '.join(_PARAM_NAMES)}"
        )
    parts = rng.split(":")
    if len(parts) != 3:
        raise click.UsageError(f"sweep range {rng!r} must look like START:STOP:STEP")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError:
        raise click.UsageError(f"sweep range {rng!r} has a non-numeric part") from None
    if not all(math.isfinite(v) for v in (start, stop, step)):
        raise click.UsageError(f"sweep range {rng!r} must be finite")
    if step == 0.0:
        raise click.UsageError("sweep step must be nonzero")
    if (stop - start) * step < 0.0:
        raise click.UsageError(f"sweep step {step} points away from stop {stop}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return name, [start + k * step for k in range(count)]


@main.command()
@_model_options(required=False)
@click.option(
    "--sweep",
    "sweeps",
    multiple=True,
    required=True,
    metavar="PARAM=START:STOP:STEP",
    help="Grid over one parameter (stop inclusive when hit exactly); repeat for a 2-D grid. "
    "PARAM is one of mu_p, sigma_p, mu_c, sigma_c, rho; dashes work too.",
)
@_report_options(default_format="csv")
@click.option(
    "--figure",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    metavar="PATH",
    help="Render mobility-versus-parameter curves (single-parameter sweeps only).",
)
@_surface_errors
def sweep(mu_p, sigma_p, mu_c, sigma_c, rho, sweeps, fmt, output, figure) -> None:
    """Closed-form measures over a parameter grid.

    Parameters not swept must be fixed with their flags; a parameter cannot
    be both fixed and swept.
    """
    base = {"mu_p": mu_p, "sigma_p": sigma_p, "mu_c": mu_c, "sigma_c": sigma_c, "rho": rho}
    if len(sweeps) > 2:
        raise click.UsageError("at most two --sweep ranges are supported")
    parsed = [_parse_sweep(s) for s in sweeps]
    names = [name for name, _ in parsed]
    if len(set(names)) != len(names):
        raise click.UsageError(f"parameter {names[0]!r} is swept twice")
    for name in names:
        if base[name] is not None:
            raise click.UsageError(f"--{name.replace('_', '-')} is both fixed and swept")
    missing = [name for name in _PARAM_NAMES if name not in names and base[name] is None]
    if missing:
        flags = ", ".join("--" + name.replace("_", "-") for name in missing)
        raise click.UsageError(f"missing fixed values for parameters not swept: {flags}")
    if figure is not None and len(parsed) != 1:
        raise click.UsageError("--figure needs a single-parameter sweep")

    rows: list[tuple[tuple[float, ...], MobilityReport]] = []
    for combo in itertools.product(*(values for _, values in parsed)):
        point = dict(base)
        point.update(zip(names, combo))
        where = ", ".join(f"{name}={value:g}" for name, value in zip(names, combo))
        try:
            params = ModelParams(**point)
        except InvalidParamsError as exc:
            raise click.UsageError(f"grid point ({where}): {exc}") from exc
        try:
            rows.append((combo, analytic_report(params)))
        except DegenerateGapError as exc:
            raise _NumericFailure(f"grid point ({where}): {exc}") from exc

    if fmt == "csv":
        header = names + ["beta", "relative_mobility", "absolute_mobility"]
        lines = [",".join(header)]
        for combo, report in rows:
            cells = [fmt_float(v) for v in combo]
            cells += [fmt_float(report.beta), fmt_float(report.relative_mobility), fmt_float(report.absolute_mobility)]
            lines.append(",".join(cells))
        payload = ("\r\n".join(lines) + "\r\n").encode("utf-8")
    else:
        grid = []
        for combo, report in rows:
            entry: dict[str, object] = dict(zip(names, combo))
            entry["beta"] = report.beta
            entry["relative_mobility"] = report.relative_mobility
            entry["absolute_mobility"] = report.absolute_mobility
            grid.append(entry)
        payload = json_bytes(
            {
                "schema_version": 1,
                "swept": names,
                "grid": grid,
                "metadata": standard_metadata(),
            }
        )
    _write_output(payload, output)

    if figure is not None:
        from .figures import render_sweep_figure

        name, values = parsed[0]
        Path(figure).write_bytes(render_sweep_figure(name, values, [report for _, report in rows]))


@main.command()
@_model_options(required=False)
@click.option("--n", type=click.IntRange(min=2), default=None, help="Number of simulated pairs when plotting from the model.")
@click.option("--seed", type=click.IntRange(min=0, max=_MAX_SEED), default=None, help="Random seed when plotting from the model.")
@_dataset_options(required=False)
@click.option(
    "--output",
    "-o",
    required=True,
    type=click.Path(dir_okay=False, path_type=Path),
    metavar="PATH",
    help="SVG destination.",
)
@_surface_errors
def plot(mu_p, sigma_p, mu_c, sigma_c, rho, n, seed, data, parent_col, child_col, has_header, scale, output) -> None:
    """Scatter of log-income pairs with identity and fitted lines.

    Give either --data (plot a file) or the five model parameters with
    --n and --seed (plot a fresh simulated sample).
    """
    model_flags_given = any(v is not None for v in (mu_p, sigma_p, mu_c, sigma_c, rho, n, seed))
    if data is not None:
        if model_flags_given:
            raise click.UsageError("give either --data or model parameters, not both")
        spec = DatasetSpec(
            path=data,
            parent_column=_column(parent_col),
            child_column=_column(child_col),
            has_header=has_header,
            income_scale=IncomeScale(scale),
        )
        sample = load_csv(spec)
        logs = log_transform(sample) if isinstance(sample, IncomeSample) else sample
    else:
        params = _build_params(mu_p, sigma_p, mu_c, sigma_c, rho)
        if n is None or seed is None:
            raise click.UsageError("--n and --seed are required when plotting from the model")
        logs = sample_pairs(SimConfig(params=params, n_draws=n, seed=seed))
    ols = ols_fit(logs)
    from .figures import render_figure

    Path(output).write_bytes(render_figure(logs, ols))


if __name__ == "__main__":
    main()
