# Writes demo CSV inputs for every cs-sharp command.
#   python -m scripts.examples.make_samples out/
#   cs-sharp crosscov out/x.csv out/y.csv --lag 3 --split auto
from pathlib import Path

import numpy as np
import pandas as pd
import typer
from loguru import logger

from cs_sharp.density import Linear, TruncatedNormal, Uniform

app = typer.Typer(add_completion=False)

MODELS = {"uniform": Uniform(), "linear": Linear(), "normal": TruncatedNormal()}


def _ar1(rng: np.random.Generator, n: int, phi: float) -> np.ndarray:
    noise = rng.standard_normal(n)
    out = np.empty(n)
    out[0] = noise[0] / np.sqrt(1.0 - phi * phi)
    for t in range(1, n):
        out[t] = phi * out[t - 1] + noise[t]
    return out


@app.command()
def main(
    out_dir: Path = typer.Argument(Path("samples")),
    n: int = typer.Option(2000, "--n"),
    phi: float = typer.Option(0.8, "--phi", help="AR(1) coefficient of the x/y pair."),
    rho: float = typer.Option(0.6, "--rho", help="Correlation of the x/y innovations."),
    f_model: str = typer.Option("uniform", "--f"),
    g_model: str = typer.Option("linear", "--g"),
    seed: int = typer.Option(0, "--seed"),
) -> None:
    rng = np.random.default_rng(seed)
    out_dir.mkdir(parents=True, exist_ok=True)

    x = _ar1(rng, n, phi)
    y = rho * x + np.sqrt(1.0 - rho * rho) * _ar1(rng, n, phi)
    pd.DataFrame({"x": x}).to_csv(out_dir / "x.csv", index=False, float_format="%.17g")
    pd.DataFrame({"y": y}).to_csv(out_dir / "y.csv", index=False, float_format="%.17g")
    groups = np.digitize(y, np.quantile(y, [0.25, 0.5, 0.75]))
    pd.DataFrame({"group": groups}).to_csv(out_dir / "groups.csv", index=False)

    for name, model in (("f", f_model), ("g", g_model)):
        if model not in MODELS:
            raise typer.BadParameter(f"unknown model {model!r}; choose from {', '.join(MODELS)}")
        sample = MODELS[model].sample(n, rng)
        pd.DataFrame({name: sample}).to_csv(out_dir / f"{name}.csv", index=False, float_format="%.17g")

    logger.info("wrote x, y, groups, f ({}) and g ({}) to {}", f_model, g_model, out_dir)


if __name__ == "__main__":
    app()
