# Machine-readable result documents for the command shell
from dataclasses import asdict, is_dataclass
import json
import math
from typing import Any

import numpy as np

from .summation import mean


def to_plain(value: Any) -> Any:
    """Recursively turn results into JSON-safe values; NaN, inf and None become null."""
    if value is None:
        return None
    if is_dataclass(value) and not isinstance(value, type):
        return to_plain(asdict(value))
    if hasattr(value, "_asdict"):
        return to_plain(value._asdict())
    if isinstance(value, dict):
        return {str(k): to_plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_plain(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        number = float(value)
        return number if math.isfinite(number) else None
    return str(value)


def series_summary(values: np.ndarray, **extra: Any) -> dict[str, Any]:
    summary = {"length": int(len(values)), "mean": mean(values)}
    summary.update(extra)
    return summary


def build_report(command: str, args: dict[str, Any], inputs: dict[str, Any], results: Any) -> dict[str, Any]:
    from . import __version__

    return {
        "tool": "cs-sharp",
        "version": __version__,
        "command": {"name": command, "args": to_plain(args)},
        "inputs": to_plain(inputs),
        "results": to_plain(results),
    }


def dumps_report(report: dict[str, Any]) -> str:
    """Sorted, indented JSON.

    Floats are written at most 17 significant digits long, using the shortest
    form that reads back to the same double (`0.1`, not `0.10000000000000001`).
    `render_table` prints the fixed 17-digit form.
    """
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=True, allow_nan=False)


def _flatten(prefix: str, value: Any, rows: list[tuple[str, str]]) -> None:
    if isinstance(value, dict):
        for key in sorted(value):
            _flatten(f"{prefix}.{key}" if prefix else key, value[key], rows)
    elif isinstance(value, list) and any(isinstance(v, (dict, list)) for v in value):
        for i, item in enumerate(value):
            _flatten(f"{prefix}[{i}]", item, rows)
    elif isinstance(value, float):
        rows.append((prefix, format(value, ".17g")))
    elif isinstance(value, list):
        rows.append((prefix, ", ".join(format(v, ".17g") if isinstance(v, float) else str(v) for v in value)))
    else:
        rows.append((prefix, "null" if value is None else str(value)))


def render_table(report: dict[str, Any]) -> str:
    """Two-column key/value table with full-precision floats."""
    rows: list[tuple[str, str]] = []
    _flatten("", report, rows)
    width = max(len(key) for key, _ in rows)
    return "\n".join(f"{key:<{width}}  {text}" for key, text in rows)
