"""
ionduct: performance modeling, calibration and design search for ducted multi-stage ionic thrusters.
"""

__version__ = "0.1.0"

from .calibrate import (  # noqa: E402
    CalibrationParams,
    FitResult,
    MeasuredCurve,
    Sample,
    aggregate_trials,
    calibrate_from_sweeps,
    fit_iv,
    fit_onset_penalty,
    fit_stage_factor,
    fit_thrust_effectiveness,
)
from .designfile import DesignFile, SpaceFile, load_design, load_space, parse_override, parse_overrides  # noqa: E402
from .errors import enable_colors  # noqa: E402
from .geometry import (  # noqa: E402
    CollectorGrid,
    ConstraintReport,
    EmitterRing,
    OnsetPenalty,
    StageGeometry,
    Violation,
    chord_spacing,
    clearance_check,
    electrode_outline,
    inner_area,
    layout_emitters,
    onset_penalty,
    tip_to_lip_clearance,
    warburg_radius,
)
from .optimize import (  # noqa: E402
    Constraint,
    DesignSpace,
    Objective,
    OptResult,
    enumerate_designs,
    evaluate,
    optimize,
    pareto_front,
    trade_study,
)
from .physics import (  # noqa: E402
    CoronaModel,
    FluidMedium,
    OperatingPoint,
    corona_current,
    drift_field,
    efficiency_bound,
    outlet_velocity,
    reynolds,
    space_charge_thrust_limit,
    stage_performance,
    thrust_from_current,
)
from .stack import (  # noqa: E402
    StackPerformance,
    StageDegradation,
    ThrusterDesign,
    duct_length,
    stack_performance,
    system_budget,
    thrust_density,
    thrust_to_weight,
)
from .utils.enums import Metric, Severity, StudyParameter, Target  # noqa: E402
from .utils.exceptions import (  # noqa: E402
    BreakdownError,
    CurveMismatchError,
    DomainError,
    EmptyFeasibleSetError,
    InfeasibleDesignError,
    InsufficientDataError,
    IonductError,
    LayoutError,
    LoadError,
    NoDischargeError,
    SourceLocation,
    UnidentifiableError,
    ValidationError,
)

__all__ = [
    "__version__",
    # physics
    "FluidMedium",
    "OperatingPoint",
    "CoronaModel",
    "drift_field",
    "thrust_from_current",
    "space_charge_thrust_limit",
    "efficiency_bound",
    "corona_current",
    "stage_performance",
    "outlet_velocity",
    "reynolds",
    # geometry
    "EmitterRing",
    "CollectorGrid",
    "StageGeometry",
    "Violation",
    "ConstraintReport",
    "OnsetPenalty",
    "warburg_radius",
    "chord_spacing",
    "tip_to_lip_clearance",
    "inner_area",
    "layout_emitters",
    "clearance_check",
    "onset_penalty",
    "electrode_outline",
    # stack
    "ThrusterDesign",
    "StageDegradation",
    "StackPerformance",
    "stack_performance",
    "thrust_density",
    "system_budget",
    "thrust_to_weight",
    "duct_length",
    # calibrate
    "Sample",
    "MeasuredCurve",
    "CalibrationParams",
    "FitResult",
    "fit_iv",
    "fit_thrust_effectiveness",
    "fit_stage_factor",
    "fit_onset_penalty",
    "aggregate_trials",
    "calibrate_from_sweeps",
    # optimize
    "DesignSpace",
    "Constraint",
    "Objective",
    "OptResult",
    "enumerate_designs",
    "evaluate",
    "optimize",
    "pareto_front",
    "trade_study",
    # files
    "DesignFile",
    "SpaceFile",
    "load_design",
    "load_space",
    "parse_override",
    "parse_overrides",
    "enable_colors",
    # enums
    "Severity",
    "Target",
    "Metric",
    "StudyParameter",
    # errors
    "IonductError",
    "DomainError",
    "ValidationError",
    "LoadError",
    "BreakdownError",
    "LayoutError",
    "InfeasibleDesignError",
    "EmptyFeasibleSetError",
    "InsufficientDataError",
    "NoDischargeError",
    "UnidentifiableError",
    "CurveMismatchError",
    "SourceLocation",
]
