from enum import Enum

__all__ = ["StrEnum", "Severity", "Target", "Metric", "StudyParameter"]


class StrEnum(str, Enum):
    """String enumeration base class."""

    def __str__(self) -> str:
        return str(self.value)


class Severity(StrEnum):
    """
    Severity of a constraint violation.

    - HARD: the design must be rejected (arcing regime)
    - SOFT: the design works with degraded discharge performance
    """

    HARD = "hard"
    SOFT = "soft"


class Target(StrEnum):
    """Quantity an optimization maximizes."""

    MAX_THRUST_DENSITY = "max_thrust_density"
    MAX_EFFICIENCY = "max_efficiency"
    MAX_TOTAL_THRUST = "max_total_thrust"


class Metric(StrEnum):
    """
    Quantities an objective constraint can bound.

    EFFICIENCY, THRUST_DENSITY and TOTAL_THRUST are lower bounds, VOLTAGE is an
    upper bound and NO_SOFT_VIOLATIONS ignores its bound.
    """

    EFFICIENCY = "efficiency"
    THRUST_DENSITY = "thrust_density"
    TOTAL_THRUST = "total_thrust"
    VOLTAGE = "voltage"
    NO_SOFT_VIOLATIONS = "no_soft_violations"


class StudyParameter(StrEnum):
    """Design parameters a one-at-a-time trade study can vary."""

    TIP_COUNT = "tip_count"
    ASPECT_RATIO = "aspect_ratio"
    STAGE_COUNT = "stage_count"
    INTERSTAGE_FACTOR = "interstage_factor"
