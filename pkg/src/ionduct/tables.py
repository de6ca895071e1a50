"""CSV ingest of measurement sweeps and emission of report tables.

Measurement files have one row per sample::

    device_id,trial_id,voltage_V,current_A,force_N
    A,1,2400,0,0
    A,1,2600,1.2e-05,0.00011

``force_N`` may be absent or left empty. Emitted tables use ``.`` as the
decimal point, ``,`` as the separator, ``\\n`` line endings and ten
significant digits, so identical inputs give identical bytes.
"""

import io
import math
from collections.abc import Sequence
from pathlib import Path

import pandas as pd

from .calibrate import MeasuredCurve, Sample
from .errors import format_suggestions, get_suggestions
from .geometry import clearance_check
from .optimize import ParetoPoint
from .stack import StackPerformance, ThrusterDesign
from .utils.exceptions import DomainError, InsufficientDataError, LoadError, SourceLocation, ValidationError
from .utils.types import PathLike

__all__ = [
    "MEASUREMENT_COLUMNS",
    "SWEEP_COLUMNS",
    "read_measurements",
    "read_stage_observations",
    "measurements_frame",
    "design_key_fields",
    "sweep_row",
    "sweep_frame",
    "pareto_frame",
    "format_csv",
    "write_table",
]

MEASUREMENT_COLUMNS = ("device_id", "trial_id", "voltage_V", "current_A", "force_N")
STAGE_COLUMNS = ("stage_count", "thrust_N")
KEY_COLUMNS = ("aspect_ratio", "stage_count", "tip_count", "gap_m", "interstage_factor")
SWEEP_COLUMNS = KEY_COLUMNS + (
    "voltage_V",
    "current_A",
    "thrust_N",
    "power_W",
    "efficiency_N_per_W",
    "thrust_density_N_per_m2",
    "feasible",
)
FLOAT_FORMAT = "%.10g"


def _read_csv(path: PathLike, required: Sequence[str], optional: Sequence[str] = (), **kwargs) -> pd.DataFrame:
    source = Path(path)
    if not source.is_file():
        raise LoadError(f'File not found: "{path}"')
    try:
        frame = pd.read_csv(source, skipinitialspace=True, float_precision="round_trip", encoding="utf-8", **kwargs)
    except UnicodeDecodeError as e:
        raise LoadError(f'Cannot decode "{path}" as UTF-8 text: {e}') from e
    except pd.errors.EmptyDataError as e:
        raise InsufficientDataError(f'"{path}" holds no rows') from e
    except pd.errors.ParserError as e:
        raise LoadError(f'Cannot parse "{path}": {e}') from e

    allowed = [*required, *optional]
    for column in frame.columns:
        if column not in allowed:
            raise ValidationError(
                f"Unexpected column '{column}'",
                field_path=str(column),
                source_location=SourceLocation(str(source), 1),
                suggestion=format_suggestions(get_suggestions(str(column), allowed)) or None,
            )
    for column in required:
        if column not in frame.columns:
            raise ValidationError(
                f"Missing required column '{column}'", field_path=column, source_location=SourceLocation(str(source), 1)
            )
    if frame.empty:
        raise InsufficientDataError(f'"{path}" holds no rows')
    return frame


def _numeric(frame: pd.DataFrame, column: str, path: PathLike, allow_missing: bool = False) -> pd.Series:
    values = pd.to_numeric(frame[column], errors="coerce")
    bad = values.isna() & (frame[column].notna() | (not allow_missing))
    if bad.any():
        row = int(bad.to_numpy().nonzero()[0][0])
        raise ValidationError(
            "Expected a number",
            field_path=column,
            actual_value=frame[column].iloc[row],
            source_location=SourceLocation(str(path), row + 2),
        )
    return values


def read_measurements(path: PathLike, geometry_tag: str = "") -> list[MeasuredCurve]:
    """Read a measurement CSV into one curve per ``(device_id, trial_id)``, in file order.

    Raises:
        LoadError: If the file is missing or not CSV
        ValidationError: If a column is missing, unexpected or non-numeric, or
            a sample is negative or repeats a voltage of its trial
        InsufficientDataError: If the file holds no rows
    """
    frame = _read_csv(path, MEASUREMENT_COLUMNS[:4], MEASUREMENT_COLUMNS[4:], dtype={"device_id": str, "trial_id": str})
    voltage = _numeric(frame, "voltage_V", path)
    current = _numeric(frame, "current_A", path)
    force = _numeric(frame, "force_N", path, allow_missing=True) if "force_N" in frame else pd.Series(math.nan, frame.index)

    curves = []
    for (device, trial), rows in frame.groupby(["device_id", "trial_id"], sort=False):
        order = voltage[rows.index].sort_values(kind="stable").index
        samples = []
        for row in order:
            try:
                samples.append(
                    Sample(
                        voltage=float(voltage[row]),
                        current=float(current[row]),
                        force=None if pd.isna(force[row]) else float(force[row]),
                    )
                )
            except DomainError as e:
                raise ValidationError(e._original_message, source_location=SourceLocation(str(path), int(row) + 2)) from e
        try:
            curves.append(MeasuredCurve(str(device), str(trial), tuple(samples), geometry_tag))
        except DomainError as e:
            raise ValidationError(e._original_message, source_location=SourceLocation(str(path), int(rows.index[0]) + 2)) from e
    return curves


def read_stage_observations(path: PathLike) -> list[tuple[int, float]]:
    """Read ``stage_count,thrust_N`` rows of single- and multi-stage thrust measurements."""
    frame = _read_csv(path, STAGE_COLUMNS)
    counts = _numeric(frame, "stage_count", path)
    thrusts = _numeric(frame, "thrust_N", path)
    return [(int(n), float(t)) for n, t in zip(counts, thrusts, strict=True)]


def measurements_frame(curves: Sequence[MeasuredCurve]) -> pd.DataFrame:
    """Curves as a measurement table."""
    rows = [
        (c.device_id, c.trial_id, s.voltage, s.current, s.force)
        for c in curves
        for s in c.samples
    ]
    return pd.DataFrame(rows, columns=list(MEASUREMENT_COLUMNS))


def design_key_fields(design: ThrusterDesign) -> dict[str, float]:
    stage = design.stage
    return {
        "aspect_ratio": stage.aspect_ratio,
        "stage_count": design.stage_count,
        "tip_count": stage.emitter.tip_count,
        "gap_m": stage.gap,
        "interstage_factor": design.interstage_factor,
    }


def sweep_row(design: ThrusterDesign, performance: StackPerformance) -> dict[str, float | bool]:
    """One table row: design key fields and the stack operating point.

    ``feasible`` is set for supra-onset points of designs without hard violations.
    """
    report = clearance_check(design.stage, design.interstage_factor)
    return {
        **design_key_fields(design),
        "voltage_V": performance.voltage,
        "current_A": performance.current * design.stage_count,
        "thrust_N": performance.total_thrust,
        "power_W": performance.total_power,
        "efficiency_N_per_W": performance.efficiency,
        "thrust_density_N_per_m2": performance.thrust_density,
        "feasible": performance.current > 0 and not report.has_hard,
    }


def sweep_frame(design: ThrusterDesign, performances: Sequence[StackPerformance]) -> pd.DataFrame:
    return pd.DataFrame([sweep_row(design, p) for p in performances], columns=list(SWEEP_COLUMNS))


def pareto_frame(points: Sequence[ParetoPoint]) -> pd.DataFrame:
    """Pareto points in front order with their design key fields."""
    rows = [
        {
            **design_key_fields(p.design),
            "voltage_V": p.voltage,
            "thrust_density_N_per_m2": p.thrust_density,
            "efficiency_N_per_W": p.efficiency,
        }
        for p in points
    ]
    columns = [*KEY_COLUMNS, "voltage_V", "thrust_density_N_per_m2", "efficiency_N_per_W"]
    return pd.DataFrame(rows, columns=columns)


def format_csv(frame: pd.DataFrame) -> str:
    buffer = io.StringIO()
    frame.to_csv(buffer, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return buffer.getvalue()


def write_table(frame: pd.DataFrame, path: PathLike) -> None:
    Path(path).write_text(format_csv(frame), encoding="utf-8")
