"""One-dimensional electrohydrodynamic relations and per-stage performance.

The force on the neutral air of a single acceleration stage follows from the
ion drift current ``I`` over a gap ``d`` and the ion mobility ``mu``::

    F = I d / mu <= 9/8 eps0 A E^2        eta = F / P <= 1 / (mu E)

with ``E = V / d``. Current follows a quadratic corona law per emitter tip,
``I = C V (V - V0)`` above onset and zero below it.
"""

import math
from dataclasses import dataclass, field

from .geometry import OnsetPenalty, StageGeometry, inner_area, onset_penalty
from .schema import Validated, unit, validator
from .utils.constants import (
    AIR_DENSITY,
    BREAKDOWN_FIELD,
    BREAKDOWN_GUARD,
    ION_MOBILITY,
    KINEMATIC_VISCOSITY,
    SPACE_CHARGE_FACTOR,
    VACUUM_PERMITTIVITY,
)
from .utils.exceptions import BreakdownError, DomainError

__all__ = [
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
    "make_operating_point",
]


@dataclass(frozen=True)
class FluidMedium(Validated):
    """Transport and dielectric properties of the working gas."""

    ion_mobility: float = field(default=ION_MOBILITY, metadata=unit("m2_per_Vs"))
    permittivity: float = field(default=VACUUM_PERMITTIVITY, metadata=unit("F_per_m"))
    air_density: float = field(default=AIR_DENSITY, metadata=unit("kg_per_m3"))
    kinematic_viscosity: float = field(default=KINEMATIC_VISCOSITY, metadata=unit("m2_per_s"))
    breakdown_field: float = field(default=BREAKDOWN_FIELD, metadata=unit("V_per_m"))

    @validator
    def check_positive(self) -> None:
        for name in ("ion_mobility", "permittivity", "air_density", "kinematic_viscosity", "breakdown_field"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"FluidMedium.{name} must be a positive finite number, got {value!r}")


@dataclass(frozen=True)
class OperatingPoint(Validated):
    """Electrical and mechanical state of a stage at one drive condition."""

    voltage: float = field(metadata=unit("V"))
    current: float = field(metadata=unit("A"))
    thrust: float = field(metadata=unit("N"))
    power: float = field(metadata=unit("W"))
    efficiency: float = field(metadata=unit("N_per_W"))
    drift_field: float = field(metadata=unit("V_per_m"))

    @validator
    def check_non_negative(self) -> None:
        for name in ("voltage", "current", "thrust", "power", "efficiency", "drift_field"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise DomainError(f"OperatingPoint.{name} must be non-negative and finite, got {value!r}")


@dataclass(frozen=True)
class CoronaModel(Validated):
    """Quadratic corona law ``I = C V (V - V0)`` per emitter tip with thrust effectiveness ``beta``."""

    conductance_coeff: float = field(metadata=unit("A_per_V2"))
    onset_voltage: float = field(metadata=unit("V"))
    thrust_effectiveness: float = 1.0

    @validator
    def check_coefficients(self) -> None:
        if not self.conductance_coeff > 0:
            raise DomainError(f"conductance_coeff must be positive, got {self.conductance_coeff!r}")
        if not self.onset_voltage > 0:
            raise DomainError(f"onset_voltage must be positive, got {self.onset_voltage!r}")
        if not 0 < self.thrust_effectiveness <= 1:
            raise DomainError(f"thrust_effectiveness must lie in (0, 1], got {self.thrust_effectiveness!r}")


def make_operating_point(voltage: float, current: float, thrust: float, drift: float) -> OperatingPoint:
    """Assemble an operating point with ``P = V I`` and ``eta = F / P`` (zero without power)."""
    power = voltage * current
    efficiency = thrust / power if power > 0 else 0.0
    return OperatingPoint(voltage, current, thrust, power, efficiency, drift)


def drift_field(voltage: float, gap: float) -> float:
    """Mean drift field ``E = V / d`` across the inter-electrode gap.

    Examples:
        >>> drift_field(3200.0, 0.002)
        1600000.0
    """
    if not gap > 0:
        raise DomainError(f"gap must be positive, got {gap!r}")
    if voltage < 0:
        raise DomainError(f"voltage must be non-negative, got {voltage!r}")
    return voltage / gap


def thrust_from_current(current: float, gap: float, medium: FluidMedium) -> float:
    """Ideal thrust ``F = I d / mu`` of an ion drift current.

    Examples:
        >>> thrust_from_current(1e-4, 0.002, FluidMedium(ion_mobility=2e-4))
        0.001
    """
    if current < 0:
        raise DomainError(f"current must be non-negative, got {current!r}")
    if not gap > 0:
        raise DomainError(f"gap must be positive, got {gap!r}")
    return current * gap / medium.ion_mobility


def space_charge_thrust_limit(area: float, field: float, medium: FluidMedium) -> float:
    """Thrust ceiling ``9/8 eps0 A E^2`` set by the space-charge limited unipolar current."""
    if not area > 0:
        raise DomainError(f"area must be positive, got {area!r}")
    if field < 0:
        raise DomainError(f"field must be non-negative, got {field!r}")
    return SPACE_CHARGE_FACTOR * medium.permittivity * area * field**2


def efficiency_bound(field: float, medium: FluidMedium) -> float:
    """Upper bound ``1 / (mu E)`` of thrust efficiency, N/W.

    Raises:
        DomainError: If ``field`` is not positive (the bound diverges)
    """
    if not field > 0:
        raise DomainError(f"efficiency bound diverges for field {field!r}; field must be positive")
    return 1.0 / (medium.ion_mobility * field)


def corona_current(voltage: float, model: CoronaModel) -> float:
    """Corona current of one emitter tip; zero at and below onset.

    Examples:
        >>> corona_current(3200.0, CoronaModel(1e-11, 2400.0))
        2.56e-05
        >>> corona_current(2400.0, CoronaModel(1e-11, 2400.0))
        0.0
    """
    if voltage < 0:
        raise DomainError(f"voltage must be non-negative, got {voltage!r}")
    if voltage <= model.onset_voltage:
        return 0.0
    return model.conductance_coeff * voltage * (voltage - model.onset_voltage)


def stage_performance(
    stage: StageGeometry,
    voltage: float,
    model: CoronaModel,
    medium: FluidMedium,
    penalty: OnsetPenalty | None = None,
    breakdown_guard: float = BREAKDOWN_GUARD,
) -> OperatingPoint:
    """Predict the operating point of one stage at a drive voltage.

    Every emitter tip discharges with the corona law after its onset voltage
    has been raised by the geometric onset penalty; thrust is the effective
    share of ``I d / mu`` and never exceeds the space-charge limit of the
    stage's inner area.

    Args:
        stage: Stage geometry
        voltage: Applied voltage, V
        model: Corona law and thrust effectiveness
        medium: Working gas
        penalty: Onset penalty slopes; defaults to ``OnsetPenalty()``
        breakdown_guard: Admissible fraction of the breakdown field

    Returns:
        The stage operating point

    Raises:
        BreakdownError: If the drift field exceeds ``breakdown_guard`` times the breakdown field
    """
    field_value = drift_field(voltage, stage.gap)
    limit = breakdown_guard * medium.breakdown_field
    if field_value > limit:
        raise BreakdownError(field_value, limit)

    adjusted = CoronaModel(
        conductance_coeff=model.conductance_coeff,
        onset_voltage=model.onset_voltage + onset_penalty(stage, penalty or OnsetPenalty()),
        thrust_effectiveness=model.thrust_effectiveness,
    )
    current = stage.emitter.tip_count * corona_current(voltage, adjusted)
    if current == 0.0:
        return make_operating_point(voltage, 0.0, 0.0, field_value)

    ideal = model.thrust_effectiveness * thrust_from_current(current, stage.gap, medium)
    thrust = min(ideal, space_charge_thrust_limit(inner_area(stage), field_value, medium))
    return make_operating_point(voltage, current, thrust, field_value)


def outlet_velocity(thrust: float, area: float, medium: FluidMedium) -> float:
    """Actuator-disk jet velocity ``sqrt(F / (rho A))``, m/s."""
    if thrust < 0:
        raise DomainError(f"thrust must be non-negative, got {thrust!r}")
    if not area > 0:
        raise DomainError(f"area must be positive, got {area!r}")
    return math.sqrt(thrust / (medium.air_density * area))


def reynolds(velocity: float, chord: float, medium: FluidMedium) -> float:
    """Reynolds number ``v c / nu`` on a chord length."""
    if velocity < 0:
        raise DomainError(f"velocity must be non-negative, got {velocity!r}")
    if not chord > 0:
        raise DomainError(f"chord must be positive, got {chord!r}")
    return velocity * chord / medium.kinematic_viscosity
