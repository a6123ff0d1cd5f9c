import json
import math
import sys

import numpy as np
import pytest
from loguru import logger
from typer.testing import CliRunner

from cs_sharp import shell
from cs_sharp.density import Linear, Uniform
from cs_sharp.selftest import SelfTestReport, SuiteResult
from cs_sharp.shell import app


@pytest.fixture
def runner():
    yield CliRunner()
    # the shell swaps the loguru sink for the runner's stderr
    logger.remove()
    logger.add(sys.stderr, level="WARNING")


def _report(result):
    text = result.stdout
    return json.loads(text[text.index("{") : text.rindex("}") + 1])


def _invoke(runner, *args):
    return runner.invoke(app, [str(a) for a in args])


def test_bounds_prefix_example(runner, write_column):
    x = write_column("x.csv", [1, 2])
    y = write_column("y.csv", [3, 4])
    result = _invoke(runner, "bounds", x, y, "--projection", "prefix:1")
    assert result.exit_code == 0
    report = _report(result)
    assert report["command"]["name"] == "bounds"
    assert report["inputs"]["x"]["length"] == 2
    assert report["results"]["inner"] == 11.0
    assert report["results"]["d_value"] == 11.0
    assert report["results"]["cs_value"] == pytest.approx(11.1803, abs=1e-4)
    assert report["results"]["chain_holds"] is True


def test_bounds_attainment(runner, write_column, rng):
    x = write_column("x.csv", rng.standard_normal(12))
    y = write_column("y.csv", rng.standard_normal(12))
    top = _report(_invoke(runner, "bounds", x, y, "-p", "identity"))["results"]
    assert top["d_value"] == top["cs_value"]
    low = _report(_invoke(runner, "bounds", x, y, "-p", "span-x"))["results"]
    assert low["d_value"] == pytest.approx(low["abs_inner"], rel=1e-9)
    assert low["extremal"]["lower"] == pytest.approx(low["abs_inner"], rel=1e-9)


def test_bounds_default_projection_and_determinism(runner, write_column, rng):
    x = write_column("x.csv", rng.standard_normal(50))
    y = write_column("y.csv", rng.standard_normal(50))
    first = _invoke(runner, "bounds", x, y)
    second = _invoke(runner, "bounds", x, y)
    assert first.exit_code == 0
    assert _report(first)["command"]["args"]["projection"] == "mean"
    assert first.stdout == second.stdout


def test_bounds_pretty_table(runner, write_column):
    x = write_column("x.csv", [1, 2])
    y = write_column("y.csv", [3, 4])
    result = _invoke(runner, "bounds", x, y, "-p", "prefix:1", "--pretty")
    assert result.exit_code == 0
    assert "results.d_value" in result.stdout
    assert format(math.sqrt(5) * 5, ".17g")[:12] in result.stdout


@pytest.mark.parametrize(
    ("xs", "ys", "projection", "code"),
    [
        ([1, 2, 3], [1, 2], "mean", 3),
        ([1, 2], [3, 4], "rotate", 2),
        ([1, 2], [3, 4], "prefix:3", 3),
        ([1, 2], [3, 4], "prefix:0", 4),
        ([0, 0], [3, 4], "span-x", 4),
    ],
)
def test_bounds_exit_codes(runner, write_column, xs, ys, projection, code):
    x = write_column("x.csv", xs)
    y = write_column("y.csv", ys)
    result = _invoke(runner, "bounds", x, y, "-p", projection)
    assert result.exit_code == code


def test_bounds_parse_error_exit_code(runner, tmp_path, write_column):
    bad = tmp_path / "bad.csv"
    bad.write_text("1\nfoo\n")
    result = _invoke(runner, "bounds", bad, write_column("y.csv", [1, 2]))
    assert result.exit_code == 2


def test_crosscov_split_modes(runner, write_column, rng):
    x = write_column("x.csv", rng.standard_normal(40))
    y = write_column("y.csv", rng.standard_normal(40))

    by_h = _report(_invoke(runner, "crosscov", x, y, "--lag", 3))["results"]
    assert by_h["split_mode"] == "h"
    assert by_h["k"] == 3
    assert by_h["block_moment_bound"] == pytest.approx(by_h["d_bound"], rel=1e-9)
    assert abs(by_h["r_bar"]) <= by_h["d_bound"] <= by_h["cs_bound"]

    auto = _report(_invoke(runner, "crosscov", x, y, "--lag", 3, "--split", "auto"))["results"]
    assert auto["split_mode"] == "auto"
    for k in (1, 5, 20, 37):
        fixed = _report(_invoke(runner, "crosscov", x, y, "--lag", 3, "--split", k))["results"]
        assert auto["d_bound"] <= fixed["d_bound"] * (1 + 1e-12)


def test_crosscov_long_lag_defaults_to_auto(runner, write_column, rng):
    x = write_column("x.csv", rng.standard_normal(10))
    y = write_column("y.csv", rng.standard_normal(10))
    result = _report(_invoke(runner, "crosscov", x, y, "--lag", 7, "--no-center"))["results"]
    assert result["split_mode"] == "auto"
    assert result["block_moment_bound"] is None


@pytest.mark.parametrize(("lag", "split"), [(5, "1"), (0, "1"), (2, "4"), (2, "sideways")])
def test_crosscov_precondition_errors(runner, write_column, lag, split):
    x = write_column("x.csv", [1, 2, 3, 4, 5])
    y = write_column("y.csv", [5, 4, 3, 2, 1])
    result = _invoke(runner, "crosscov", x, y, "--lag", lag, "--split", split)
    assert result.exit_code == 2


def test_corr_trivial_and_singleton_partitions(runner, write_column, rng):
    n = 30
    x = write_column("x.csv", rng.standard_normal(n))
    y = write_column("y.csv", rng.standard_normal(n))
    for labels in (np.zeros(n), np.arange(n)):
        groups = write_column("g.csv", labels, header="group")
        results = _report(_invoke(runner, "corr", x, y, "--partition", groups))["results"]
        assert results["rho_p"] == results["rho"]
        assert results["conditioning"]["kind"] == "partition"


def test_corr_quantile_bins_dominate(runner, write_column, rng):
    xy = rng.multivariate_normal([0.0, 0.0], [[1.0, 0.6], [0.6, 1.0]], size=5000)
    x = write_column("x.csv", xy[:, 0])
    y = write_column("y.csv", xy[:, 1])
    results = _report(_invoke(runner, "corr", x, y, "--y-bins", 32))["results"]
    assert abs(results["rho_p"]) >= abs(results["rho"])
    assert results["rho_dominated"] is True
    assert results["rho_p_bounded"] is True
    bound = results["conditioning"]["measurable_cov_bound"]
    assert bound["lhs"] <= bound["mid"] * (1 + 1e-9)


def test_corr_projection(runner, write_column, rng):
    x = write_column("x.csv", rng.standard_normal(20))
    y = write_column("y.csv", rng.standard_normal(20))
    results = _report(_invoke(runner, "corr", x, y, "--projection", "identity"))["results"]
    assert results["rho_p"] == results["rho"]
    results = _report(_invoke(runner, "corr", x, y, "--projection", "span-x"))["results"]
    assert abs(results["rho_p"]) == pytest.approx(1.0)


def test_corr_needs_exactly_one_source(runner, write_column):
    x = write_column("x.csv", [1, 2, 3])
    y = write_column("y.csv", [3, 1, 2])
    assert _invoke(runner, "corr", x, y).exit_code == 2
    assert _invoke(runner, "corr", x, y, "--projection", "mean", "--y-bins", 2).exit_code == 2


def test_corr_partition_length_mismatch(runner, write_column):
    x = write_column("x.csv", [1, 2, 3])
    y = write_column("y.csv", [3, 1, 2])
    groups = write_column("g.csv", [0, 1])
    assert _invoke(runner, "corr", x, y, "--partition", groups).exit_code == 3


def test_divergence_identical_files_is_zero(runner, write_column, rng):
    sample = rng.normal(size=400)
    f = write_column("f.csv", sample)
    g = write_column("g.csv", sample)
    report = _report(_invoke(runner, "divergence", f, g, "--n-coeffs", 6))
    assert report["results"]["value"] == 0.0
    assert report["results"]["defined"] is True
    a, b = report["inputs"]["range"]
    assert a < sample.min() and b > sample.max()


def test_divergence_uniform_against_linear(runner, write_column, rng):
    f = write_column("f.csv", Uniform().sample(100_000, rng))
    g = write_column("g.csv", Linear().sample(100_000, rng))
    result = _invoke(runner, "divergence", f, g, "--n-coeffs", 8, "--range", "0,1")
    assert result.exit_code == 0
    results = _report(result)["results"]
    assert results["value"] == pytest.approx(0.5 * math.log(4 / 3), abs=0.03)
    assert results["n_f"] == results["n_g"] == 100_000


def test_divergence_undefined_exits_with_diagnostics(runner, write_column):
    f = write_column("f.csv", [0.0, 0.1])
    g = write_column("g.csv", [0.9, 1.0])
    result = _invoke(runner, "divergence", f, g, "--n-coeffs", 1, "--range", "0,1")
    assert result.exit_code == 5
    report = _report(result)
    assert report["results"]["defined"] is False
    assert report["results"]["diagnostics"]["denom"] < 0


@pytest.mark.parametrize(
    "args",
    [("--range", "1,0"), ("--range", "0.5,1"), ("--basis", "legendre"), ("--n-coeffs", 0), ("--range", "x")],
)
def test_divergence_precondition_errors(runner, write_column, args):
    f = write_column("f.csv", [0.2, 0.4])
    g = write_column("g.csv", [0.3, 0.6])
    assert _invoke(runner, "divergence", f, g, *args).exit_code == 2


def test_selftest_seeded_runs_repeat(runner):
    first = _invoke(runner, "selftest", "--seed", 7, "--cases", 40)
    second = _invoke(runner, "selftest", "--seed", 7, "--cases", 40)
    assert first.exit_code == 0
    assert first.stdout == second.stdout
    results = _report(first)["results"]
    assert results["passed"] is True
    assert results["suites"]["squaring"]["max_defect"] <= 1e-12


def test_selftest_reads_defaults_from_env(runner, monkeypatch):
    monkeypatch.setenv("CS_SHARP_SEED", "11")
    monkeypatch.setenv("CS_SHARP_SELFTEST_CASES", "5")
    results = _report(_invoke(runner, "selftest"))["results"]
    assert results["seed"] == 11
    assert results["cases"] == 5


def test_selftest_failure_exits_six(runner, monkeypatch):
    failing = SelfTestReport(seed=0, cases=1, max_dim=1, suites=(SuiteResult("chain", 1, 1.0, 1e-9),))
    monkeypatch.setattr(shell, "run_selftest", lambda **_: failing)
    result = _invoke(runner, "selftest", "--cases", 1)
    assert result.exit_code == 6
    assert _report(result)["results"]["passed"] is False


def test_unknown_log_level_from_env_falls_back(runner, monkeypatch):
    monkeypatch.setenv("CS_SHARP_LOG_LEVEL", "verbose")
    result = _invoke(runner, "selftest", "--cases", 1)
    assert result.exit_code == 0
    assert _report(result)["results"]["passed"] is True


@pytest.mark.parametrize(("level", "code"), [("loud", 2), ("debug", 0), ("ERROR", 0)])
def test_log_level_flag_is_validated(runner, level, code):
    result = _invoke(runner, "--log-level", level, "selftest", "--cases", 1)
    assert result.exit_code == code
