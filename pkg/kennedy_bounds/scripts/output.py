"""
Row serialization for the command-line front end.

Each command's rows are checked against ``core/schemas/<command>.json`` and
written as CSV or JSON with a fixed column order (the schema's ``required``
list) and 12 significant digits, so identical runs give identical bytes.
"""

from __future__ import annotations

import json
import math
import sys
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd
from jsonschema import Draft202012Validator

from ..core.errors import RowSchemaError
from .config import SCHEMA_DIR

Row = Dict[str, Any]

FLOAT_FORMAT = "%.12g"


@lru_cache(maxsize=None)
def load_schema(command: str) -> Dict[str, Any]:
    with open(SCHEMA_DIR / f"{command}.json", "r") as f:
        return json.load(f)


def columns(command: str) -> List[str]:
    return list(load_schema(command)["required"])


def validate_rows(command: str, rows: Sequence[Row]) -> None:
    validator = Draft202012Validator(load_schema(command))
    for index, row in enumerate(rows):
        errors = sorted(validator.iter_errors(row), key=lambda e: list(e.path))
        if errors:
            details = "; ".join(f"{'/'.join(map(str, e.path)) or '<row>'}: {e.message}" for e in errors)
            raise RowSchemaError(f"{command} row {index} does not match its schema: {details}")


def _round(value: Any) -> Any:
    if isinstance(value, float) and math.isfinite(value):
        return float(FLOAT_FORMAT % value)
    return value


def to_frame(command: str, rows: Sequence[Row]) -> pd.DataFrame:
    return pd.DataFrame(list(rows), columns=columns(command))


def render(command: str, rows: Sequence[Row], fmt: str = "csv") -> str:
    validate_rows(command, rows)
    if fmt == "json":
        records = [{key: _round(row[key]) for key in columns(command)} for row in rows]
        return json.dumps(records, indent=2) + "\n"
    return to_frame(command, rows).to_csv(
        index=False,
        float_format=FLOAT_FORMAT,
        lineterminator="\n",
        na_rep="",
    )


def emit(command: str, rows: Sequence[Row], fmt: str = "csv", path: Optional[Path] = None) -> None:
    text = render(command, rows, fmt)
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        f.write(text)
