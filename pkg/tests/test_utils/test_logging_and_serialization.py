"""Tests for logging and serialization helpers."""

import logging

import numpy as np
import pytest

from cier.models.metrics import Metrics
from cier.utils.logging import LoggerMixin, get_logger, setup_logger
from cier.utils.serialization import (
    canonical_json,
    load_json,
    read_json_lines,
    save_json,
    stable_hash,
    to_jsonable,
    write_json_lines,
)


class Worker(LoggerMixin):
    pass


@pytest.mark.unit
class TestLogging:
    """Test cases for the logging helpers."""

    def test_names_nested_under_package(self):
        assert get_logger("cier.replay").name == "cier.replay"
        assert get_logger("Trainer").name == "cier.Trainer"
        assert Worker().logger.name == "cier.Worker"

    def test_setup_logger_writes_file(self, tmp_path):
        log_file = tmp_path / "logs" / "run.log"
        logger = setup_logger("cier.test_file", "DEBUG", str(log_file))

        logger.debug("hello %d", 42)
        for handler in logger.handlers:
            handler.flush()

        assert logger.level == logging.DEBUG
        assert not logger.propagate
        assert "hello 42" in log_file.read_text(encoding="utf-8")

    def test_setup_replaces_handlers(self):
        setup_logger("cier.test_handlers")
        logger = setup_logger("cier.test_handlers", "warning")
        assert len(logger.handlers) == 1
        assert logger.level == logging.WARNING

    def test_setup_closes_replaced_file_handler(self, tmp_path):
        first = setup_logger("cier.test_close", "INFO", str(tmp_path / "a.log"))
        old_handler = first.handlers[-1]

        setup_logger("cier.test_close", "INFO", str(tmp_path / "b.log"))

        assert old_handler.stream is None


@pytest.mark.unit
class TestSerialization:
    """Test cases for JSON helpers."""

    def test_numpy_values_converted(self):
        converted = to_jsonable({1: np.arange(3), "x": np.float64(0.5), "y": (np.int64(2),), "z": float("inf")})
        assert converted == {"1": [0, 1, 2], "x": 0.5, "y": [2], "z": "inf"}

    def test_serializable_objects_converted(self):
        assert to_jsonable([Metrics(1.0, 2.0, 1, 3.0)]) == [{"AS": 1.0, "BS": 2.0, "SAS": 1, "ACS": 3.0}]

    def test_canonical_form_and_hash(self):
        assert canonical_json({"b": 1, "a": [1, 2]}) == '{"a":[1,2],"b":1}'
        assert stable_hash({"b": 1, "a": 2}) == stable_hash({"a": 2, "b": 1})
        assert stable_hash({"a": 1}) != stable_hash({"a": 2})

    def test_json_file(self, tmp_path):
        path = str(tmp_path / "nested" / "data.json")
        save_json({"values": np.array([1.5, 2.5])}, path)
        assert load_json(path) == {"values": [1.5, 2.5]}

    def test_load_errors(self, tmp_path):
        with pytest.raises(IOError):
            load_json(str(tmp_path / "missing.json"))
        bad = tmp_path / "bad.json"
        bad.write_text("{", encoding="utf-8")
        with pytest.raises(ValueError, match="Invalid JSON"):
            load_json(str(bad))

    def test_json_lines(self, tmp_path):
        path = str(tmp_path / "records.jsonl")
        assert write_json_lines(({"i": i} for i in range(3)), path) == 3
        assert read_json_lines(path) == [{"i": 0}, {"i": 1}, {"i": 2}]

    def test_json_lines_error_reports_line(self, tmp_path):
        path = tmp_path / "records.jsonl"
        path.write_text('{"i": 0}\n\nnot json\n', encoding="utf-8")
        with pytest.raises(ValueError, match="line 3"):
            read_json_lines(str(path))
