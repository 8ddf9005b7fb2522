"""Unit tests for ConfigSchemaValidator."""

import pytest
from hypothesis import given, settings, strategies as st

from cier.core.config import CIERConfig
from cier.core.exceptions import ConfigurationError
from cier.core.results import SchemaError, ValidationResult
from cier.evaluators.schema_validator import ConfigSchemaValidator


@pytest.fixture
def validator():
    return ConfigSchemaValidator()


@pytest.mark.unit
class TestConfigSchemaValidator:
    """Test cases for ConfigSchemaValidator."""

    def test_default_config_is_valid(self, validator):
        result = validator.validate(CIERConfig().to_dict())

        assert isinstance(result, ValidationResult)
        assert result.is_valid is True
        assert bool(result) is True
        assert result.errors == []

    def test_partial_document_is_valid(self, validator):
        assert validator.validate({"replay": {"mode": "ciper"}}).is_valid

    def test_custom_schema(self):
        validator = ConfigSchemaValidator({"type": "object", "required": ["name"]})
        result = validator.validate({})
        assert not result.is_valid
        assert "name" in result.errors[0].message

    def test_invalid_schema(self):
        with pytest.raises(ConfigurationError, match="Invalid schema"):
            ConfigSchemaValidator({"type": "invalid_type"})

    def test_wrong_type_message(self, validator):
        errors = validator.get_schema_errors({"ticc": {"window": "three"}})

        assert len(errors) == 1
        assert errors[0].path == "ticc.window"
        assert errors[0].message == "Expected type 'integer', got 'string'"
        assert errors[0].value == "three"
        assert str(errors[0]) == "Schema error at 'ticc.window': Expected type 'integer', got 'string'"

    def test_enum_message(self, validator):
        errors = validator.get_schema_errors({"replay": {"mode": "rank"}})
        assert errors[0].path == "replay.mode"
        assert errors[0].message.startswith("Value must be one of:")

    def test_unknown_section(self, validator):
        errors = validator.get_schema_errors({"optimizer": {}})
        assert errors[0].path == "root"
        assert errors[0].message == "Unknown section 'optimizer'"

    def test_array_paths_and_min_items(self, validator):
        errors = validator.get_schema_errors({"run": {"seeds": []}, "agent": {"actor_hidden": [64, "x"]}})

        paths = [e.path for e in errors]
        assert paths == sorted(paths)
        assert "agent.actor_hidden[1]" in paths
        assert any(e.message == "Array must contain at least 1 item(s)" for e in errors)

    def test_all_errors_collected(self, validator):
        errors = validator.get_schema_errors({"ticc": {"window": 1.5, "beta": "high"}, "env": {"name": "x"}})
        assert {e.path for e in errors} == {"ticc.window", "ticc.beta", "env.name"}
        assert all(isinstance(e, SchemaError) for e in errors)

    @pytest.mark.property
    @given(st.integers(1, 10_000), st.sampled_from(["uniform", "per", "cier", "ciper"]))
    @settings(max_examples=50, deadline=None)
    def test_well_typed_replay_sections_pass(self, capacity, mode):
        assert ConfigSchemaValidator().validate({"replay": {"capacity": capacity, "mode": mode}}).is_valid
