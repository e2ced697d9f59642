"""Tests for schema-checked row serialization."""

import json

import pytest

from kennedy_bounds.core.errors import RowSchemaError
from kennedy_bounds.scripts import output
from kennedy_bounds.scripts.config import COMMANDS


class TestSchemas:
    """Test that every command has a loadable schema."""

    @pytest.mark.parametrize("command", COMMANDS)
    def test_schema_per_command(self, command):
        schema = output.load_schema(command)
        assert schema["additionalProperties"] is False
        assert set(output.columns(command)) == set(schema["properties"])

    def test_column_order(self):
        assert output.columns("kappa") == ["alpha", "r", "phi", "mode", "kappa"]
        assert output.columns("sweep-n") == ["n_total", "ratio", "phi_m"]


class TestValidateRows:
    """Test validate_rows."""

    def test_valid_rows(self, sweep_rows):
        output.validate_rows("sweep-ratio", sweep_rows)

    def test_out_of_range_value(self):
        with pytest.raises(RowSchemaError, match="kappa"):
            output.validate_rows("kappa", [{"alpha": 1.0, "r": 0.0, "phi": 0.1, "mode": "exact", "kappa": 1.5}])

    def test_missing_column(self):
        with pytest.raises(RowSchemaError):
            output.validate_rows("bound", [{"p01": 0.1, "kappa": 0.5}])

    def test_unexpected_column(self):
        with pytest.raises(RowSchemaError):
            output.validate_rows("bound", [{"p01": 0.1, "kappa": 0.5, "p11": 0.7, "extra": 1}])

    def test_reports_row_index(self, sweep_rows):
        rows = sweep_rows + [{"ratio": 2.0, "phi_m": 0.1}]
        with pytest.raises(RowSchemaError, match="row 3"):
            output.validate_rows("sweep-ratio", rows)


class TestRender:
    """Test render and emit."""

    def test_csv(self, sweep_rows):
        """Test 12 significant digits and empty fields for absent values."""
        text = output.render("sweep-ratio", sweep_rows)
        assert text == "ratio,phi_m\n0,0.123456789012\n0.5,\n1,0.08\n"

    def test_json(self, sweep_rows):
        records = json.loads(output.render("sweep-ratio", sweep_rows, "json"))
        assert records == [
            {"ratio": 0.0, "phi_m": 0.123456789012},
            {"ratio": 0.5, "phi_m": None},
            {"ratio": 1.0, "phi_m": 0.08},
        ]

    def test_json_keeps_column_order(self):
        row = {"kappa": 0.5, "p11": 0.5, "p01": 0.0}
        text = output.render("bound", [row], "json")
        assert list(json.loads(text)[0]) == ["p01", "kappa", "p11"]

    def test_invalid_rows_are_not_written(self, tmp_path):
        path = tmp_path / "bound.csv"
        with pytest.raises(RowSchemaError):
            output.emit("bound", [{"p01": -1.0, "kappa": 0.5, "p11": 0.5}], "csv", path)
        assert not path.exists()

    def test_emit_creates_parent_directories(self, tmp_path, sweep_rows):
        path = tmp_path / "nested" / "fig.csv"
        output.emit("sweep-ratio", sweep_rows, "csv", path)
        assert path.read_text().startswith("ratio,phi_m\n")
