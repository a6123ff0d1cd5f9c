# Command shell: bounds, crosscov, corr, divergence and selftest over CSV columns
from dataclasses import asdict
from pathlib import Path
import sys
from typing import Any, Optional

import typer
from loguru import logger

from .config import is_log_level, settings_from_env
from .core import Series, d_function, extremal_bounds
from .density import BasisFamily, DomainMap, estimate_divergence
from .errors import CSSharpError, ParseError, UndefinedDivergence, require_same_length
from .ingest import parse_column_selector, parse_projection, parse_range, read_column, read_labels
from .report import build_report, dumps_report, render_table, series_summary
from .selftest import ensure_passed, run_selftest
from .stats import (
    best_split,
    conditional_corr,
    cross_cov_bound,
    lag_split_bound,
    measurable_cov_bound,
    p_correlation,
    quantile_partition,
)
from .summation import mean, squared_norm

LOG_FORMAT = "<green>{time:HH:mm:ss}</green> | <level>{level: <8}</level> | {name}:{function} - {message}"

app = typer.Typer(
    name="cs-sharp",
    help="Projection-refined Cauchy-Schwarz bounds, correlations and divergences.",
    no_args_is_help=True,
    add_completion=False,
)


def configure_logging(level: str) -> None:
    logger.remove()
    logger.add(sys.stderr, level=level.upper(), format=LOG_FORMAT)


@app.callback()
def main(
    log_level: Optional[str] = typer.Option(
        None, "--log-level", help="Diagnostics on stderr: DEBUG, INFO, WARNING or ERROR. Env: CS_SHARP_LOG_LEVEL."
    ),
) -> None:
    if log_level is not None and not is_log_level(log_level.strip().upper()):
        raise typer.BadParameter(f"unknown level {log_level!r}", param_hint="--log-level")
    configure_logging((log_level or settings_from_env().log_level).strip())


def _emit(report: dict[str, Any], pretty: bool) -> None:
    typer.echo(render_table(report) if pretty else dumps_report(report))


def _fail(exc: CSSharpError) -> typer.Exit:
    logger.error("{}: {}", type(exc).__name__, exc)
    typer.echo(f"error: {exc}", err=True)
    return typer.Exit(code=exc.exit_code)


def _read(path: Path, column: str) -> Series:
    return read_column(path, parse_column_selector(column))


def _read_pair(x_path: Path, y_path: Path, x_col: str, y_col: str) -> tuple[Series, Series]:
    x = _read(x_path, x_col)
    y = _read(y_path, y_col)
    require_same_length(x, y, "x and y")
    return x, y


def _inputs(x: Series, y: Series, x_path: Path, y_path: Path, x_col: str, y_col: str) -> dict[str, Any]:
    return {
        "x": series_summary(x, path=str(x_path), column=x_col),
        "y": series_summary(y, path=str(y_path), column=y_col),
    }


X_PATH = typer.Argument(..., help="CSV file holding the x sample.")
Y_PATH = typer.Argument(..., help="CSV file holding the y sample.")
X_COL = typer.Option("0", "--x-col", help="Column of the x file: 0-based index or header name.")
Y_COL = typer.Option("0", "--y-col", help="Column of the y file: 0-based index or header name.")
PRETTY = typer.Option(False, "--pretty", help="Print a key/value table instead of JSON.")


@app.command()
def bounds(
    x_path: Path = X_PATH,
    y_path: Path = Y_PATH,
    projection: str = typer.Option(
        "mean", "--projection", "-p", help="identity | zero | prefix:k | mask:i,j | mean | span-x | basis:FILE"
    ),
    x_col: str = X_COL,
    y_col: str = Y_COL,
    pretty: bool = PRETTY,
) -> None:
    """|<x, y>| <= D(x, y | P) <= ||x|| ||y|| for one projection, with the extremal values."""
    try:
        x, y = _read_pair(x_path, y_path, x_col, y_col)
        spec = parse_projection(projection, len(x), anchor=x)
        report = d_function(x, y, spec)
        extremes = extremal_bounds(x, y)
    except CSSharpError as exc:
        raise _fail(exc) from exc
    results = {
        "inner": report.inner,
        "abs_inner": report.abs_inner,
        "d_value": report.d_value,
        "cs_value": report.cs_value,
        "p_norm_x": report.p_norm_x,
        "p_norm_y": report.p_norm_y,
        "residual_x": report.residual_x,
        "residual_y": report.residual_y,
        "d_over_cs": report.d_over_cs,
        "inner_over_d": report.inner_over_d,
        "chain_holds": report.chain_holds(),
        "extremal": {"lower": extremes.lower, "upper": extremes.upper},
    }
    args = {"projection": projection}
    _emit(build_report("bounds", args, _inputs(x, y, x_path, y_path, x_col, y_col), results), pretty)


def _resolve_split(split: str | None, x: Series, y: Series, h: int, center: bool) -> tuple[int, str]:
    n = len(x)
    mode = (split or ("h" if 2 * h <= n else "auto")).strip().lower()
    if mode == "auto":
        return best_split(x, y, h, center).k_star, "auto"
    if mode == "h":
        return h, "h"
    try:
        return int(mode), "fixed"
    except ValueError as exc:
        raise ParseError(f"split must be an integer, 'h' or 'auto', got {split!r}") from exc


@app.command()
def crosscov(
    x_path: Path = X_PATH,
    y_path: Path = Y_PATH,
    lag: int = typer.Option(..., "--lag", help="Lag h, 1 <= h <= n - 1."),
    split: Optional[str] = typer.Option(
        None, "--split", help="Split k, 'h' or 'auto'. Default: h when 2h <= n, else auto."
    ),
    center: bool = typer.Option(True, "--center/--no-center", help="Subtract sample means first."),
    x_col: str = X_COL,
    y_col: str = Y_COL,
    pretty: bool = PRETTY,
) -> None:
    """Lag-h sample cross-covariance with its prefix-split D bound."""
    try:
        x, y = _read_pair(x_path, y_path, x_col, y_col)
        k, mode = _resolve_split(split, x, y, lag, center)
        bound = cross_cov_bound(x, y, lag, k, center)
        extra = lag_split_bound(x, y, lag, center) if k == lag and 2 * lag <= len(x) else None
    except CSSharpError as exc:
        raise _fail(exc) from exc
    results = {
        "h": bound.h,
        "k": bound.k,
        "split_mode": mode,
        "r_bar": bound.r_bar,
        "d_bound": bound.d_bound,
        "cs_bound": bound.cs_bound,
        "chain_holds": bound.chain_holds(),
        "block_moment_bound": extra,
    }
    args = {"lag": lag, "split": split, "center": center}
    _emit(build_report("crosscov", args, _inputs(x, y, x_path, y_path, x_col, y_col), results), pretty)


@app.command()
def corr(
    x_path: Path = X_PATH,
    y_path: Path = Y_PATH,
    partition: Optional[Path] = typer.Option(None, "--partition", help="CSV column of integer group labels."),
    partition_col: str = typer.Option("0", "--partition-col", help="Column of the partition file."),
    projection: Optional[str] = typer.Option(None, "--projection", "-p", help="Projection applied to centered data."),
    y_bins: Optional[int] = typer.Option(None, "--y-bins", help="Condition on equal-count quantile bins of y."),
    x_col: str = X_COL,
    y_col: str = Y_COL,
    pretty: bool = PRETTY,
) -> None:
    """Classical correlation next to its conditioned or projection-refined version."""
    chosen = [opt for opt in (partition, projection, y_bins) if opt is not None]
    try:
        if len(chosen) != 1:
            raise ParseError("give exactly one of --partition, --projection or --y-bins")
        x, y = _read_pair(x_path, y_path, x_col, y_col)
        conditioning: dict[str, Any]
        if projection is not None:
            centered = x - mean(x)
            anchor = centered if squared_norm(centered) > 0 else x
            report = p_correlation(x, y, parse_projection(projection, len(x), anchor=anchor))
            conditioning = {"kind": "projection", "projection": projection}
        else:
            if partition is not None:
                groups = read_labels(partition, parse_column_selector(partition_col))
                require_same_length(groups.labels, x, "partition and x")
                conditioning = {"kind": "partition", "path": str(partition), "groups": groups.group_count}
            else:
                groups = quantile_partition(y, int(y_bins))
                conditioning = {"kind": "y_bins", "bins": int(y_bins), "groups": groups.group_count}
            report = conditional_corr(x, y, groups)
            measurable = measurable_cov_bound(x, y, groups)
            conditioning["measurable_cov_bound"] = measurable
    except CSSharpError as exc:
        raise _fail(exc) from exc
    results = {
        "rho": report.rho,
        "rho_p": report.rho_p,
        "d_denominator": report.d_denominator,
        "cov": report.cov,
        "sigma_x": report.sigma_x,
        "sigma_y": report.sigma_y,
        "rho_dominated": report.rho_dominated,
        "rho_p_bounded": report.rho_p_bounded,
        "conditioning": conditioning,
    }
    args = {"partition": partition, "projection": projection, "y_bins": y_bins}
    _emit(build_report("corr", args, _inputs(x, y, x_path, y_path, x_col, y_col), results), pretty)


@app.command()
def divergence(
    f_path: Path = typer.Argument(..., help="CSV file holding the sample from f."),
    g_path: Path = typer.Argument(..., help="CSV file holding the sample from g."),
    n_coeffs: int = typer.Option(8, "--n-coeffs", "-N", help="Projection order N; 2N coefficients are estimated."),
    domain: str = typer.Option("auto", "--range", help="Support 'a,b', or 'auto' for the padded pooled range."),
    basis: str = typer.Option("cosine", "--basis", help="cosine or trigonometric."),
    f_col: str = typer.Option("0", "--f-col", help="Column of the f file."),
    g_col: str = typer.Option("0", "--g-col", help="Column of the g file."),
    pretty: bool = PRETTY,
) -> None:
    """Projection estimate of the Cauchy-Schwarz P_N-divergence between two samples."""
    args = {"n_coeffs": n_coeffs, "range": domain, "basis": basis}
    try:
        f = _read(f_path, f_col)
        g = _read(g_path, g_col)
        bounds_ab = parse_range(domain)
        dmap = DomainMap.auto(f, g) if bounds_ab is None else DomainMap(*bounds_ab)
        family = BasisFamily(kind=basis.strip().lower(), domain=dmap)
        inputs = {
            "f": series_summary(f, path=str(f_path), column=f_col),
            "g": series_summary(g, path=str(g_path), column=g_col),
            "range": [dmap.a, dmap.b],
        }
        estimate = estimate_divergence(f, g, family, n_coeffs)
    except UndefinedDivergence as exc:
        results = {"defined": False, "reason": str(exc), "diagnostics": exc.details}
        _emit(build_report("divergence", args, inputs, results), pretty)
        raise _fail(exc) from exc
    except CSSharpError as exc:
        raise _fail(exc) from exc
    results = {"defined": True, **asdict(estimate)}
    _emit(build_report("divergence", args, inputs, results), pretty)


@app.command()
def selftest(
    seed: Optional[int] = typer.Option(None, "--seed", help="Generator seed. Env: CS_SHARP_SEED."),
    cases: Optional[int] = typer.Option(None, "--cases", help="Cases per suite. Env: CS_SHARP_SELFTEST_CASES."),
    max_dim: int = typer.Option(32, "--max-dim", help="Largest dimension drawn."),
    pretty: bool = PRETTY,
) -> None:
    """Randomized check of every inequality and identity; exits 6 on any failure."""
    settings = settings_from_env()
    seed = settings.seed if seed is None else seed
    cases = settings.selftest_cases if cases is None else cases
    try:
        report = run_selftest(seed=seed, cases=cases, max_dim=max_dim)
    except CSSharpError as exc:
        raise _fail(exc) from exc
    _emit(build_report("selftest", {"seed": seed, "cases": cases, "max_dim": max_dim}, {}, report.as_dict()), pretty)
    try:
        ensure_passed(report)
    except CSSharpError as exc:
        raise _fail(exc) from exc
