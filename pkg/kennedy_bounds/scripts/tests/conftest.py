"""Pytest configuration and fixtures for the command-line front end tests."""

import io
from pathlib import Path
from typing import List, NamedTuple

import pandas as pd
import pytest
import yaml

from kennedy_bounds.scripts.cli import run


class CliResult(NamedTuple):
    code: int
    out: str
    err: str

    def frame(self) -> pd.DataFrame:
        """Parse CSV stdout."""
        return pd.read_csv(io.StringIO(self.out))


@pytest.fixture
def cli(capsys):
    """Run the command-line front end in-process and capture both streams."""

    def invoke(*argv: str) -> CliResult:
        code = run(list(argv))
        captured = capsys.readouterr()
        return CliResult(code, captured.out, captured.err)

    return invoke


@pytest.fixture
def small_grid_file(tmp_path) -> Path:
    """A verification grid that runs quickly at dim 40."""
    path = tmp_path / "grid.yaml"
    path.write_text(yaml.safe_dump({
        "tolerance": 1e-8,
        "phi": [0.0, 0.1],
        "coherent": {"alpha": [0.5, 1.0]},
        "squeezed": {"alpha": [0.5], "r": [0.3]},
    }))
    return path


@pytest.fixture
def sweep_rows() -> List[dict]:
    return [
        {"ratio": 0.0, "phi_m": 0.123456789012345},
        {"ratio": 0.5, "phi_m": None},
        {"ratio": 1.0, "phi_m": 0.08},
    ]
