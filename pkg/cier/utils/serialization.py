"""Serialization utilities for the CIER pipeline."""

import hashlib
import json
import math
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Type, TypeVar

import numpy as np

T = TypeVar('T', bound='JSONSerializable')


def to_jsonable(obj: Any) -> Any:
    """Convert numpy containers and scalars (recursively) into JSON-native values."""
    if isinstance(obj, JSONSerializable):
        return to_jsonable(obj.to_dict())
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    return obj


def _default(obj: Any) -> Any:
    converted = to_jsonable(obj)
    if converted is obj:
        return str(obj)
    return converted


class JSONSerializable(ABC):
    """Abstract base class for objects that can be serialized to/from JSON."""

    @abstractmethod
    def to_dict(self) -> Dict[str, Any]:
        """Convert object to dictionary representation."""
        pass

    @classmethod
    @abstractmethod
    def from_dict(cls: Type[T], data: Dict[str, Any]) -> T:
        """Create object from dictionary representation."""
        pass

    def to_json(self, indent: Optional[int] = None) -> str:
        """Convert object to JSON string."""
        return json.dumps(to_jsonable(self.to_dict()), indent=indent, default=_default)

    @classmethod
    def from_json(cls: Type[T], json_str: str) -> T:
        """Create object from JSON string.

        Raises:
            ValueError: If JSON is invalid
        """
        try:
            return cls.from_dict(json.loads(json_str))
        except json.JSONDecodeError as e:
            raise ValueError(f"Invalid JSON: {e}")

    def save_to_file(self, file_path: str, indent: int = 2) -> None:
        """Save object to JSON file."""
        save_json(self.to_dict(), file_path, indent=indent)

    @classmethod
    def load_from_file(cls: Type[T], file_path: str) -> T:
        """Load object from JSON file."""
        return cls.from_dict(load_json(file_path))


def save_json(data: Any, file_path: str, indent: int = 2) -> None:
    """Save data to JSON file, creating parent directories."""
    path = Path(file_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(to_jsonable(data), f, indent=indent, default=_default)


def load_json(file_path: str) -> Any:
    """Load data from JSON file.

    Raises:
        IOError: If file cannot be read
        ValueError: If file contains invalid JSON
    """
    path = Path(file_path)
    if not path.exists():
        raise IOError(f"File not found: {file_path}")
    with open(path, 'r', encoding='utf-8') as f:
        try:
            return json.load(f)
        except json.JSONDecodeError as e:
            raise ValueError(f"Invalid JSON in {file_path}: {e}")


def write_json_lines(records: Iterable[Any], file_path: str) -> int:
    """Write one compact JSON document per line; returns the record count."""
    path = Path(file_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    count = 0
    with open(path, 'w', encoding='utf-8') as f:
        for record in records:
            f.write(json.dumps(to_jsonable(record), separators=(",", ":"), default=_default))
            f.write("\n")
            count += 1
    return count


def canonical_json(data: Any) -> str:
    """Serialize with sorted keys and fixed separators (stable across round-trips)."""
    return json.dumps(to_jsonable(data), sort_keys=True, separators=(",", ":"), default=_default)


def stable_hash(data: Any) -> str:
    """SHA-256 of the canonical JSON form of ``data``."""
    return hashlib.sha256(canonical_json(data).encode("utf-8")).hexdigest()


def read_json_lines(file_path: str) -> List[Any]:
    """Read a JSON-lines file, skipping blank lines.

    Raises:
        ValueError: If a line is not valid JSON
    """
    records = []
    with open(file_path, 'r', encoding='utf-8') as f:
        for number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                records.append(json.loads(line))
            except json.JSONDecodeError as e:
                raise ValueError(f"Invalid JSON on line {number} of {file_path}: {e}")
    return records
