"""JSON schema validation for configuration documents."""

import re
from typing import Any, Dict, List, Optional
import jsonschema
from jsonschema import Draft7Validator, ValidationError
from ..core.config_schema import CONFIG_SCHEMA
from ..core.exceptions import ConfigurationError
from ..core.results import ValidationResult, SchemaError

_JSON_TYPE_NAMES = {
    'str': 'string',
    'int': 'integer',
    'float': 'number',
    'bool': 'boolean',
    'list': 'array',
    'dict': 'object',
    'NoneType': 'null',
}


class ConfigSchemaValidator:
    """Validates configuration documents against a Draft 7 JSON schema.

    Every violation is collected (not just the first) so a user fixing a config
    file sees the whole list at once.
    """

    def __init__(self, schema: Optional[Dict[str, Any]] = None):
        """Initialize with a JSON schema definition.

        Args:
            schema: JSON schema dictionary; defaults to ``CONFIG_SCHEMA``

        Raises:
            ConfigurationError: If the provided schema is itself invalid
        """
        self.schema = schema if schema is not None else CONFIG_SCHEMA
        try:
            Draft7Validator.check_schema(self.schema)
            self._validator = Draft7Validator(self.schema)
        except jsonschema.SchemaError as e:
            raise ConfigurationError(f"Invalid schema: {e.message}")

    def validate(self, document: Any) -> ValidationResult:
        """Validate a configuration document.

        Args:
            document: Parsed configuration (normally a dict)

        Returns:
            ValidationResult containing every schema error
        """
        errors = self.get_schema_errors(document)
        return ValidationResult(is_valid=not errors, errors=errors)

    def get_schema_errors(self, document: Any) -> List[SchemaError]:
        """Return detailed schema validation errors, ordered by path."""
        errors = []
        for error in self._validator.iter_errors(document):
            errors.append(SchemaError(
                path=self._format_error_path(error.absolute_path),
                message=self._format_error_message(error),
                value=error.instance,
            ))
        errors.sort(key=lambda e: e.path)
        return errors

    def _format_error_path(self, path_deque) -> str:
        """Render ``deque(['replay', 'mode'])`` as ``replay.mode``."""
        if not path_deque:
            return "root"

        path_parts = []
        for part in path_deque:
            if isinstance(part, int):
                path_parts.append(f"[{part}]")
            elif path_parts:
                path_parts.append(f".{part}")
            else:
                path_parts.append(str(part))
        return "".join(path_parts)

    def _format_error_message(self, error: ValidationError) -> str:
        message = error.message

        if error.validator == "type":
            actual_type = type(error.instance).__name__
            json_type = _JSON_TYPE_NAMES.get(actual_type, actual_type)
            message = f"Expected type '{error.validator_value}', got '{json_type}'"

        elif error.validator == "enum":
            message = f"Value must be one of: {error.validator_value}"

        elif error.validator == "minItems":
            message = f"Array must contain at least {error.validator_value} item(s)"

        elif error.validator == "additionalProperties" and error.validator_value is False:
            match = re.search(r"\('([^']+)' was unexpected\)", error.message)
            if match:
                message = f"Unknown section '{match.group(1)}'"
            else:
                message = "Additional properties are not allowed"

        return message
