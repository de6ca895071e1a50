"""Serial stacks of identical stages and system-level metrics."""

import logging
import math
from dataclasses import dataclass, field

from .geometry import OnsetPenalty, StageGeometry, clearance_check, inner_area
from .physics import (
    CoronaModel,
    FluidMedium,
    OperatingPoint,
    make_operating_point,
    outlet_velocity,
    reynolds,
    stage_performance,
)
from .schema import Validated, unit, validator
from .utils.constants import BREAKDOWN_GUARD, DEFAULT_INTERSTAGE_FACTOR, STANDARD_GRAVITY
from .utils.exceptions import DomainError, InfeasibleDesignError

__all__ = [
    "ThrusterDesign",
    "StageDegradation",
    "StackPerformance",
    "stage_sum",
    "stack_performance",
    "thrust_density",
    "system_budget",
    "thrust_to_weight",
    "duct_length",
    "lift_adjusted_efficiency",
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ThrusterDesign(Validated):
    """A thruster of ``stage_count`` identical stages spaced ``interstage_factor x gap`` apart.

    Construction fails with ``InfeasibleDesignError`` when the stage and
    spacing break a hard rule (an inter-stage factor below 1).
    """

    stage: StageGeometry
    stage_count: int
    corona: CoronaModel
    interstage_factor: float = DEFAULT_INTERSTAGE_FACTOR

    @validator
    def check_counts(self) -> None:
        if self.stage_count < 1:
            raise DomainError(f"stage_count must be at least 1, got {self.stage_count!r}")
        if not self.interstage_factor > 0:
            raise DomainError(f"interstage_factor must be positive, got {self.interstage_factor!r}")

    @validator
    def check_hard_rules(self) -> None:
        report = clearance_check(self.stage, self.interstage_factor)
        if report.has_hard:
            violation = report.hard[0]
            raise InfeasibleDesignError(
                f"Design breaks the '{violation.rule}' rule: {violation.message}",
                rule=violation.rule,
                suggestion="Use an inter-stage factor of at least 1.5.",
            )


@dataclass(frozen=True)
class StageDegradation(Validated):
    """Geometric thrust multiplier ``k`` applied once per additional stage."""

    factor: float = 1.0

    @validator
    def check_factor(self) -> None:
        if not 0 < self.factor <= 1:
            raise DomainError(f"degradation factor must lie in (0, 1], got {self.factor!r}")


@dataclass(frozen=True)
class StackPerformance:
    """Operating point of a whole stack."""

    per_stage: tuple[OperatingPoint, ...]
    total_thrust: float = field(metadata=unit("N"))
    total_power: float = field(metadata=unit("W"))
    efficiency: float = field(metadata=unit("N_per_W"))
    thrust_density: float = field(metadata=unit("N_per_m2"))
    outlet_velocity: float = field(metadata=unit("m_per_s"))
    reynolds: float

    @property
    def voltage(self) -> float:
        return self.per_stage[0].voltage

    @property
    def current(self) -> float:
        return self.per_stage[0].current


def stage_sum(factor: float, stage_count: int) -> float:
    """Thrust multiple ``1 + k + ... + k^(N-1)`` of an ``N``-stage stack.

    Examples:
        >>> stage_sum(1.0, 5)
        5.0
        >>> round(stage_sum(0.85, 5), 5)
        3.70863
    """
    return math.fsum(factor**i for i in range(stage_count))


def thrust_density(total_thrust: float, area: float) -> float:
    """Thrust per unit inner cross-section, N/m².

    Examples:
        >>> round(thrust_density(3.09e-3, 172.27e-6), 2)
        17.94
    """
    if not area > 0:
        raise DomainError(f"area must be positive, got {area!r}")
    return total_thrust / area


def stack_performance(
    design: ThrusterDesign,
    voltage: float,
    degradation: StageDegradation | None = None,
    medium: FluidMedium | None = None,
    penalty: OnsetPenalty | None = None,
    breakdown_guard: float = BREAKDOWN_GUARD,
) -> StackPerformance:
    """Predict the performance of a stack at a drive voltage.

    Every stage draws the first stage's current and power; stage ``i`` delivers
    ``T1 k^(i-1)`` of thrust. A single stage reproduces ``stage_performance``.

    Raises:
        BreakdownError: If the drift field exceeds the breakdown guard
        LayoutError: If the stage's tips cannot be placed
    """
    degradation = degradation or StageDegradation()
    medium = medium or FluidMedium()
    first = stage_performance(design.stage, voltage, design.corona, medium, penalty, breakdown_guard)

    per_stage = [first]
    for i in range(1, design.stage_count):
        thrust = first.thrust * degradation.factor**i
        per_stage.append(make_operating_point(first.voltage, first.current, thrust, first.drift_field))

    total_thrust = first.thrust * stage_sum(degradation.factor, design.stage_count)
    total_power = first.power * design.stage_count
    efficiency = total_thrust / total_power if total_power > 0 else 0.0
    area = inner_area(design.stage)
    velocity = outlet_velocity(total_thrust, area, medium)
    return StackPerformance(
        per_stage=tuple(per_stage),
        total_thrust=total_thrust,
        total_power=total_power,
        efficiency=efficiency,
        thrust_density=thrust_density(total_thrust, area),
        outlet_velocity=velocity,
        reynolds=reynolds(velocity, design.stage.height, medium),
    )


def system_budget(
    design: ThrusterDesign,
    thruster_count: int,
    voltage: float,
    degradation: StageDegradation | None = None,
    medium: FluidMedium | None = None,
    penalty: OnsetPenalty | None = None,
) -> float:
    """Combined thrust of ``thruster_count`` identical thrusters, N."""
    if thruster_count < 1:
        raise DomainError(f"thruster_count must be at least 1, got {thruster_count!r}")
    performance = stack_performance(design, voltage, degradation, medium, penalty)
    logger.debug("system budget: %d x %.6g N", thruster_count, performance.total_thrust)
    return thruster_count * performance.total_thrust


def thrust_to_weight(total_thrust: float, mass: float) -> float:
    """Thrust over weight at standard gravity."""
    if not mass > 0:
        raise DomainError(f"mass must be positive, got {mass!r}")
    return total_thrust / (mass * STANDARD_GRAVITY)


def duct_length(design: ThrusterDesign) -> float:
    """Axial extent ``N d + (N - 1) gamma d`` of the stack, m.

    Examples:
        >>> from ionduct.geometry import StageGeometry
        >>> from ionduct.physics import CoronaModel
        >>> design = ThrusterDesign(StageGeometry.build(5), 5, CoronaModel(1e-11, 2400.0))
        >>> round(duct_length(design) * 1e3, 9)
        22.0
    """
    n, gap = design.stage_count, design.stage.gap
    return n * gap + (n - 1) * design.interstage_factor * gap


def lift_adjusted_efficiency(efficiency: float, lift_to_drag: float) -> float:
    """Thrust efficiency of a winged craft expressed as supported weight per watt.

    A glider with lift-to-drag ratio ``L/D`` carries ``L/D`` newtons of weight
    per newton of thrust, which is how fixed-wing budgets are compared against
    flapping or rotary craft whose thrust lifts directly.
    """
    if efficiency < 0:
        raise DomainError(f"efficiency must be non-negative, got {efficiency!r}")
    if not lift_to_drag > 0:
        raise DomainError(f"lift_to_drag must be positive, got {lift_to_drag!r}")
    return efficiency * lift_to_drag
