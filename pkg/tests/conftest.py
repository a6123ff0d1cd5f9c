import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def write_column(tmp_path):
    """Write values as a one-column CSV (optionally with a header) and return its path."""

    def _write(name, values, header=None):
        path = tmp_path / name
        lines = [header] if header is not None else []
        lines.extend(repr(float(v)) for v in values)
        path.write_text("\n".join(lines) + "\n")
        return path

    return _write
