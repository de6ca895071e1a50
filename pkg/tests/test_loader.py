"""Tests for document loading with source locations."""

import json

import pytest

from ionduct.loader import Loader, MetadataRegistry
from ionduct.utils.exceptions import LoadError, SourceLocation


class TestLoadFile:
    """Test loading JSON and YAML documents."""

    def test_json(self, tmp_path):
        """Test that JSON documents load as mappings."""
        path = tmp_path / "design.json"
        path.write_text(json.dumps({"schema_version": 1, "design": {"stage_count": 5}}, indent=2))
        document, metadata = Loader().load_file(path)
        assert document == {"schema_version": 1, "design": {"stage_count": 5}}
        assert metadata.get("design").line == 3

    def test_yaml(self, tmp_path):
        """Test that YAML documents load with line numbers."""
        path = tmp_path / "space.yaml"
        path.write_text("space:\n  aspect_ratios: [1, 3, 5]\n  stage_counts:\n    - 1\n    - 2\n")
        document, metadata = Loader().load_file(path)
        assert document["space"]["aspect_ratios"] == [1, 3, 5]
        assert metadata.get("space::aspect_ratios").line == 2
        assert metadata.get("space::stage_counts").line == 4
        assert "space" in metadata

    def test_json_exponent_is_float(self, tmp_path):
        """Test that exponent-only JSON numbers load as floats."""
        path = tmp_path / "design.json"
        path.write_text('{"conductance_coeff_A_per_V2": 5e-05, "onset_voltage_V": 2.4e3}')
        document, _ = Loader().load_file(path)
        assert document["conductance_coeff_A_per_V2"] == 5e-05
        assert document["onset_voltage_V"] == 2400.0

    def test_empty_file(self, tmp_path):
        """Test that an empty file is an empty document."""
        path = tmp_path / "empty.yaml"
        path.write_text("")
        document, metadata = Loader().load_file(path)
        assert document == {}
        assert len(metadata) == 0

    def test_source_location_filepath(self, tmp_path):
        """Test that locations carry the resolved file path."""
        path = tmp_path / "design.yml"
        path.write_text("design:\n  stage_count: 2\n")
        _, metadata = Loader().load_file(path)
        location = metadata.get("design")
        assert location.filepath == str(path.resolve())
        assert location.id == "design"


class TestLoadErrors:
    """Test diagnostics of unreadable documents."""

    def test_unknown_extension(self, tmp_path):
        """Test that only JSON and YAML files are accepted."""
        path = tmp_path / "design.toml"
        path.write_text("")
        with pytest.raises(LoadError, match="Unknown file input") as excinfo:
            Loader().load_file(path)
        assert ".json, .yaml, .yml" in str(excinfo.value)

    def test_missing_file(self, tmp_path):
        """Test that a missing file is reported."""
        with pytest.raises(LoadError, match="File not found"):
            Loader().load_file(tmp_path / "missing.json")

    def test_duplicate_key(self, tmp_path):
        """Test that duplicate keys are rejected with their line."""
        path = tmp_path / "design.json"
        path.write_text('{\n  "stage_count": 5,\n  "stage_count": 3\n}\n')
        with pytest.raises(LoadError, match="Duplicate key 'stage_count'") as excinfo:
            Loader().load_file(path)
        assert excinfo.value.source_location.line == 3

    def test_syntax_error(self, tmp_path):
        """Test that parse errors carry a location."""
        path = tmp_path / "design.json"
        path.write_text('{\n  "stage_count": 5,\n  "gap_mm": [2,\n}\n')
        with pytest.raises(LoadError, match="Cannot parse document") as excinfo:
            Loader().load_file(path)
        assert excinfo.value.source_location is not None
        assert excinfo.value.exit_code == 2

    def test_invalid_utf8(self, tmp_path):
        """Test that undecodable bytes are a load error, not a crash."""
        path = tmp_path / "design.json"
        path.write_bytes(b'{\n  "stage_count": 5,\n  "note": "\xff\xfe"\n}\n')
        with pytest.raises(LoadError, match="Cannot decode .* as UTF-8") as excinfo:
            Loader().load_file(path)
        assert excinfo.value.exit_code == 2

    def test_control_character(self, tmp_path):
        """Test that characters YAML refuses are a load error."""
        path = tmp_path / "design.yaml"
        path.write_text("stage_count: 5\nnote: \x07\n")
        with pytest.raises(LoadError, match="Cannot parse"):
            Loader().load_file(path)

    def test_top_level_list(self, tmp_path):
        """Test that the top level must be a mapping."""
        path = tmp_path / "design.yaml"
        path.write_text("- 1\n- 2\n")
        with pytest.raises(LoadError, match="Expected a mapping at the top level, got list"):
            Loader().load_file(path)


class TestMetadataRegistry:
    """Test the location registry."""

    def test_register_and_get(self):
        """Test storing and looking up a location."""
        registry = MetadataRegistry()
        location = SourceLocation("design.json", 7, 5, "design::stage")
        registry.register("design::stage", location)
        assert registry.get("design::stage") is location
        assert registry.get("design") is None
        assert "design::stage" in registry
        assert len(registry) == 1
