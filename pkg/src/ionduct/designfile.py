"""Design and design-space documents with command-line overrides.

A design file is JSON (or YAML) with unit-suffixed keys::

    {
      "schema_version": 1,
      "design": {
        "stage": {"emitter": {"inner_diameter_mm": 4, "outer_diameter_mm": 6, "tip_count": 5}},
        "stage_count": 5,
        "corona": {"conductance_coeff_A_per_V2": 1e-11, "onset_voltage_kV": 2.4}
      }
    }

Overrides address any key with ``::`` paths, e.g.
``design::stage::gap_mm=3`` or ``design::stage_count=2``.
"""

import ast
import copy
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import yaml

from .calibrate import CalibrationParams
from .loader import Loader
from .optimize import DesignSpace
from .physics import FluidMedium
from .schema import Validated, structure, unstructure, validator
from .stack import ThrusterDesign
from .utils.constants import ID_SEP_KEY
from .utils.exceptions import DomainError, ValidationError
from .utils.types import PathLike

__all__ = [
    "SCHEMA_VERSION",
    "DesignFile",
    "SpaceFile",
    "parse_override",
    "parse_overrides",
    "apply_overrides",
    "load_design",
    "load_space",
    "dumps_document",
    "save_document",
]

SCHEMA_VERSION = 1


class _Versioned(Validated):
    schema_version: int

    @validator
    def check_version(self) -> None:
        if self.schema_version != SCHEMA_VERSION:
            raise DomainError(f"unsupported schema_version {self.schema_version!r}; this release reads version {SCHEMA_VERSION}")


@dataclass(frozen=True, kw_only=True)
class DesignFile(_Versioned):
    """A thruster design with the medium it runs in and an optional calibration."""

    schema_version: int = SCHEMA_VERSION
    design: ThrusterDesign
    calibration: CalibrationParams | None = None
    medium: FluidMedium = field(default_factory=FluidMedium)
    provenance: str = ""

    def effective_calibration(self) -> CalibrationParams:
        """The stored calibration, or the design's corona law with default slopes and no degradation."""
        return self.calibration or CalibrationParams(corona=self.design.corona)


@dataclass(frozen=True, kw_only=True)
class SpaceFile(_Versioned):
    """A design space to search with the calibration and medium to evaluate it under."""

    schema_version: int = SCHEMA_VERSION
    space: DesignSpace
    calibration: CalibrationParams | None = None
    medium: FluidMedium = field(default_factory=FluidMedium)
    provenance: str = ""


def parse_override(arg: str) -> tuple[str, Any]:
    """Parse one ``key::path=value`` override; values are Python literals when possible.

    Examples:
        >>> parse_override("design::stage_count=3")
        ('design::stage_count', 3)
        >>> parse_override("design::stage::gap_mm=2.5")
        ('design::stage::gap_mm', 2.5)
        >>> parse_override("space::aspect_ratios=[1,3,5]")
        ('space::aspect_ratios', [1, 3, 5])
        >>> parse_override("provenance=bench run 4")
        ('provenance', 'bench run 4')

    Raises:
        DomainError: If the argument has no ``=``
    """
    if "=" not in arg:
        raise DomainError(f"Invalid override format: '{arg}'. Expected format: 'key::path=value'")
    key, text = arg.split("=", 1)
    try:
        value = ast.literal_eval(text)
    except (ValueError, SyntaxError):
        value = text
    return key, value


def parse_overrides(args: list[str] | None) -> dict[str, Any]:
    """Parse several overrides; later ones win on repeated keys."""
    return dict(parse_override(arg) for arg in args or [])


def apply_overrides(document: dict[str, Any], overrides: dict[str, Any]) -> dict[str, Any]:
    """Return a copy of ``document`` with every override set, creating mappings as needed.

    Examples:
        >>> apply_overrides({"design": {"stage_count": 5}}, {"design::stage_count": 2})
        {'design': {'stage_count': 2}}
        >>> apply_overrides({}, {"medium::ion_mobility_m2_per_Vs": 1.8e-4})
        {'medium': {'ion_mobility_m2_per_Vs': 0.00018}}
    """
    result = copy.deepcopy(document)
    for path, value in overrides.items():
        keys = path.split(ID_SEP_KEY)
        current: Any = result
        for k in keys[:-1]:
            if isinstance(current, list) and k.isdigit() and int(k) < len(current):
                current = current[int(k)]
                continue
            if not isinstance(current.get(k), (dict, list)):
                current[k] = {}
            current = current[k]
        if isinstance(current, list):
            if not (keys[-1].isdigit() and int(keys[-1]) < len(current)):
                raise ValidationError(f"Override index out of range for list at '{path}'", field_path=path)
            current[int(keys[-1])] = value
        else:
            current[keys[-1]] = value
    return result


def _load(path: PathLike, schema: type, overrides: list[str] | None) -> Any:
    document, metadata = Loader().load_file(path)
    document = apply_overrides(document, parse_overrides(overrides))
    return structure(document, schema, metadata=metadata)


def load_design(path: PathLike, overrides: list[str] | None = None) -> DesignFile:
    """Load and validate a design file.

    Raises:
        LoadError: If the file is missing or unparseable
        ValidationError: If a key is missing, unexpected or out of range
        InfeasibleDesignError: If the design breaks a hard rule
    """
    design_file: DesignFile = _load(path, DesignFile, overrides)
    return design_file


def load_space(path: PathLike, overrides: list[str] | None = None) -> SpaceFile:
    """Load and validate a design-space file."""
    space_file: SpaceFile = _load(path, SpaceFile, overrides)
    return space_file


def dumps_document(obj: Any) -> str:
    """Serialize a document to indented JSON with SI keys and a trailing newline."""
    return json.dumps(unstructure(obj), indent=2) + "\n"


def save_document(obj: Any, path: PathLike) -> None:
    """Write a document; ``.yaml``/``.yml`` paths get YAML, everything else JSON."""
    target = Path(path)
    if target.suffix.lower() in (".yaml", ".yml"):
        target.write_text(yaml.safe_dump(unstructure(obj), sort_keys=False), encoding="utf-8")
    else:
        target.write_text(dumps_document(obj), encoding="utf-8")
