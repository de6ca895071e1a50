"""Schema validation of ionduct files against the domain dataclasses.

File keys are the dataclass field names followed by the unit stored in the
field metadata, so a field declared as

```python
gap: float = field(default=2e-3, metadata=unit("m"))
```

is written as ``gap_m`` in a design file. Millimeters and kilovolts are
accepted on input (``gap_mm``, ``onset_voltage_kV``) and converted to SI;
output always uses the SI key.

Domain invariants are declared as ``@validator`` methods and run when an
instance is created, so a file that passes ``structure`` yields objects that
already satisfy every invariant:

```python
@dataclass(frozen=True)
class CollectorGrid(Validated):
    wire_width: float = field(default=50e-6, metadata=unit("m"))
    pitch: float = field(default=1e-3, metadata=unit("m"))

    @validator
    def check_wires(self):
        if not 0 < self.wire_width < self.pitch:
            raise DomainError("wire width must lie in (0, pitch)")
```
"""

import dataclasses
import functools
import types
from enum import Enum
from typing import Any, TypeVar, Union, get_args, get_origin, get_type_hints

from .errors import format_suggestions, get_suggestions
from .loader import MetadataRegistry
from .utils.constants import ID_SEP_KEY
from .utils.exceptions import DomainError, SourceLocation, ValidationError

__all__ = ["unit", "file_key", "validator", "Validated", "structure", "validate", "unstructure", "ALTERNATE_UNITS"]

T = TypeVar("T")

# Input-only unit spellings and their factor to SI
ALTERNATE_UNITS: dict[str, tuple[tuple[str, float], ...]] = {
    "m": (("mm", 1e-3),),
    "m2": (("mm2", 1e-6),),
    "V": (("kV", 1e3),),
}


def unit(suffix: str) -> dict[str, str]:
    """Field metadata declaring the SI unit suffix of a file key."""
    return {"unit": suffix}


def file_key(f: dataclasses.Field) -> str:  # type: ignore[type-arg]
    """SI file key of a dataclass field.

    Examples:
        >>> from dataclasses import dataclass, field, fields
        >>> @dataclass
        ... class Gap:
        ...     gap: float = field(default=0.002, metadata=unit("m"))
        >>> file_key(fields(Gap)[0])
        'gap_m'
    """
    suffix = f.metadata.get("unit")
    return f"{f.name}_{suffix}" if suffix else f.name


def validator(func):
    """Decorator to mark a method as an invariant check.

    Validators run after construction and raise ``DomainError`` on failure.
    """
    func.__is_validator__ = True
    return func


@functools.cache
def _get_validators(schema_type: type) -> tuple:
    """Get all validator methods of a class, in name order."""
    validators = []
    for attr_name in dir(schema_type):
        if attr_name.startswith("_"):
            continue
        attr = getattr(schema_type, attr_name, None)
        if callable(attr) and getattr(attr, "__is_validator__", False):
            validators.append(attr)
    return tuple(validators)


class Validated:
    """Mixin for dataclasses that run their ``@validator`` methods on creation."""

    def __post_init__(self) -> None:
        for check in _get_validators(type(self)):
            check(self)


def _is_union_type(origin: Any) -> bool:
    """Check if origin is a Union type (typing.Union or X | Y)."""
    return origin is Union or origin is types.UnionType


@functools.cache
def _type_hints(schema: type) -> dict[str, Any]:
    return get_type_hints(schema)


def _location(metadata: MetadataRegistry | None, id_parts: list[str]) -> SourceLocation | None:
    """Closest registered location for an id path, walking up to its parents."""
    if metadata is None:
        return None
    parts = list(id_parts)
    while True:
        location = metadata.get(ID_SEP_KEY.join(parts))
        if location is not None or not parts:
            return location
        parts.pop()


def structure(
    data: Any,
    schema: type[T],
    field_path: str = "",
    metadata: MetadataRegistry | None = None,
    _id_parts: list[str] | None = None,
) -> T:
    """Build a dataclass instance from a file mapping, validating as it goes.

    Args:
        data: Mapping loaded from a file
        schema: Dataclass type to build
        field_path: Dot-separated path of ``data`` in its document
        metadata: Optional registry of source locations
        _id_parts: Internal id path used for location lookups

    Returns:
        An instance of ``schema`` whose invariants hold

    Raises:
        ValidationError: If a key is missing, unexpected, given in two units,
            has the wrong type or violates an invariant
        TypeError: If ``schema`` is not a dataclass
    """
    if not dataclasses.is_dataclass(schema):
        raise TypeError(f"Schema must be a dataclass, got {type(schema).__name__}")
    id_parts = _id_parts or []

    if not isinstance(data, dict):
        raise ValidationError(
            f"Expected a mapping for {schema.__name__}",
            field_path=field_path,
            actual_value=data,
            source_location=_location(metadata, id_parts),
        )

    hints = _type_hints(schema)
    kwargs: dict[str, Any] = {}
    allowed: set[str] = set()

    for f in dataclasses.fields(schema):
        if not f.init:
            continue
        key = file_key(f)
        suffix = f.metadata.get("unit")
        spellings = [(key, 1.0)] + [(f"{f.name}_{alt}", factor) for alt, factor in ALTERNATE_UNITS.get(suffix, ())]
        allowed.update(name for name, _ in spellings)
        present = [(name, factor) for name, factor in spellings if name in data]
        current_path = f"{field_path}.{key}" if field_path else key

        if len(present) > 1:
            names = " and ".join(f"'{name}'" for name, _ in present)
            raise ValidationError(
                f"Field given twice as {names}",
                field_path=current_path,
                source_location=_location(metadata, id_parts),
            )
        if not present:
            if f.default is not dataclasses.MISSING or f.default_factory is not dataclasses.MISSING:
                continue
            raise ValidationError(
                f"Missing required field '{key}'",
                field_path=current_path,
                source_location=_location(metadata, id_parts),
            )

        name, factor = present[0]
        value_path = f"{field_path}.{name}" if field_path else name
        kwargs[f.name] = _convert(data[name], hints[f.name], factor, value_path, metadata, id_parts + [name])

    unexpected = sorted(set(data) - allowed)
    if unexpected:
        first_unexpected = str(unexpected[0])
        current_path = f"{field_path}.{first_unexpected}" if field_path else first_unexpected
        hints_text = format_suggestions(get_suggestions(first_unexpected, sorted(allowed)))
        raise ValidationError(
            f"Unexpected field '{first_unexpected}' not in {schema.__name__}",
            field_path=current_path,
            source_location=_location(metadata, id_parts),
            suggestion=hints_text or None,
        )

    try:
        return schema(**kwargs)
    except DomainError as e:
        raise ValidationError(
            e._original_message,
            field_path=field_path or schema.__name__,
            source_location=_location(metadata, id_parts),
        ) from e


def validate(data: Any, schema: type, field_path: str = "", metadata: MetadataRegistry | None = None) -> None:
    """Validate a file mapping against a dataclass schema without keeping the result."""
    structure(data, schema, field_path, metadata)


def _convert(
    value: Any,
    expected_type: Any,
    factor: float,
    field_path: str,
    metadata: MetadataRegistry | None,
    id_parts: list[str],
) -> Any:
    """Convert a single file value to the annotated type, scaling units to SI."""
    origin = get_origin(expected_type)
    args = get_args(expected_type)

    def mismatch(expected: str) -> ValidationError:
        return ValidationError(
            f"Type mismatch, expected {expected}",
            field_path=field_path,
            actual_value=value,
            source_location=_location(metadata, id_parts),
        )

    if _is_union_type(origin):
        if value is None and type(None) in args:
            return None
        non_none = [t for t in args if t is not type(None)]
        if len(non_none) != 1:
            raise TypeError(f"Unsupported union annotation {expected_type!r}")
        return _convert(value, non_none[0], factor, field_path, metadata, id_parts)

    if origin is tuple:
        if not isinstance(value, (list, tuple)):
            raise mismatch("list")
        item_type = args[0] if args else Any
        return tuple(
            _convert(item, item_type, factor, f"{field_path}[{i}]", metadata, id_parts + [str(i)])
            for i, item in enumerate(value)
        )

    if dataclasses.is_dataclass(expected_type):
        return structure(value, expected_type, field_path, metadata, id_parts)

    if isinstance(expected_type, type) and issubclass(expected_type, Enum):
        valid = [member.value for member in expected_type]
        if value not in valid:
            raise ValidationError(
                f"Value must be one of {', '.join(repr(v) for v in valid)}",
                field_path=field_path,
                actual_value=value,
                source_location=_location(metadata, id_parts),
            )
        return expected_type(value)

    if expected_type is bool:
        if not isinstance(value, bool):
            raise mismatch("bool")
        return value

    if expected_type is int:
        if isinstance(value, bool):
            raise mismatch("int")
        if isinstance(value, float) and value.is_integer():
            return int(value)
        if not isinstance(value, int):
            raise mismatch("int")
        return value

    if expected_type is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise mismatch("float")
        return float(value) * factor

    if expected_type is str:
        if not isinstance(value, str):
            raise mismatch("str")
        return value

    return value


def unstructure(obj: Any) -> Any:
    """Turn a domain object into plain data with SI file keys.

    Examples:
        >>> from dataclasses import dataclass, field
        >>> @dataclass
        ... class Gap:
        ...     gap: float = field(default=0.002, metadata=unit("m"))
        >>> unstructure(Gap())
        {'gap_m': 0.002}
    """
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {file_key(f): unstructure(getattr(obj, f.name)) for f in dataclasses.fields(obj) if f.init}
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, (list, tuple)):
        return [unstructure(item) for item in obj]
    return obj
