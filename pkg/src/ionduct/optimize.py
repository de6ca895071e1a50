"""Exhaustive constrained search over discrete design spaces.

Designs are enumerated in a fixed lexicographic order. For each design the
drive voltage is searched on an integer grid: bisection finds the band of
voltages where the monotone constraints hold and a golden-section search
locates the best objective inside that band. The winner is picked by a
strict-improvement scan in enumeration order, so results do not depend on
how many worker threads evaluated the designs.
"""

import itertools
import logging
import math
from collections import Counter
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

from .calibrate import CalibrationParams
from .geometry import ConstraintReport, StageGeometry, clearance_check
from .physics import FluidMedium, drift_field
from .schema import Validated, unit, validator
from .stack import StackPerformance, ThrusterDesign, stack_performance
from .utils.constants import (
    BREAKDOWN_GUARD,
    DEFAULT_BEND_DEPTH,
    DEFAULT_DUCT_HEIGHT,
    DEFAULT_GAP,
    DEFAULT_INTERSTAGE_FACTOR,
    DEFAULT_LATERAL,
    DEFAULT_TIP_ANGLE,
    TIPS_PER_ASPECT_RATIO,
)
from .utils.enums import Metric, StudyParameter, Target
from .utils.exceptions import (
    BreakdownError,
    DomainError,
    EmptyFeasibleSetError,
    InfeasibleDesignError,
    LayoutError,
)
from .utils.search import first_true, golden_section_argmax, last_true

__all__ = [
    "DesignSpace",
    "DesignCandidate",
    "Constraint",
    "Objective",
    "Evaluation",
    "OptResult",
    "ParetoPoint",
    "TradeRow",
    "enumerate_designs",
    "evaluate",
    "optimize",
    "pareto_front",
    "trade_study",
]

logger = logging.getLogger(__name__)

DesignKey = tuple[float, int, int, float, float]


@dataclass(frozen=True)
class DesignSpace(Validated):
    """Discrete sets of design parameters and the admissible drive voltages.

    ``tip_counts`` apply to circular ducts only; a stadium duct of aspect
    ratio ``AR`` always carries ``4 AR`` tips.
    """

    aspect_ratios: tuple[float, ...]
    stage_counts: tuple[int, ...]
    voltage_range: tuple[float, ...] = field(metadata=unit("V"))
    tip_counts: tuple[int, ...] = ()
    gaps: tuple[float, ...] = field(default=(DEFAULT_GAP,), metadata=unit("m"))
    interstage_factors: tuple[float, ...] = (DEFAULT_INTERSTAGE_FACTOR,)
    duct_height: float = field(default=DEFAULT_DUCT_HEIGHT, metadata=unit("m"))
    lateral: float = field(default=DEFAULT_LATERAL, metadata=unit("m"))
    bend_depth: float = field(default=DEFAULT_BEND_DEPTH, metadata=unit("m"))
    tip_angle: float = field(default=DEFAULT_TIP_ANGLE, metadata=unit("deg"))

    @validator
    def check_sets(self) -> None:
        for name in ("aspect_ratios", "stage_counts", "gaps", "interstage_factors"):
            if not getattr(self, name):
                raise DomainError(f"DesignSpace.{name} must not be empty")
        if any(ar < 1 for ar in self.aspect_ratios):
            raise DomainError(f"aspect ratios must be at least 1, got {self.aspect_ratios!r}")
        if any(n < 1 for n in self.stage_counts):
            raise DomainError(f"stage counts must be at least 1, got {self.stage_counts!r}")
        if 1 in self.aspect_ratios and not self.tip_counts:
            raise DomainError("tip_counts must not be empty when the space includes aspect ratio 1")
        if any(n < 1 for n in self.tip_counts):
            raise DomainError(f"tip counts must be at least 1, got {self.tip_counts!r}")
        if any(g <= 0 for g in self.gaps):
            raise DomainError(f"gaps must be positive, got {self.gaps!r}")
        if any(not 0 < f <= 2 for f in self.interstage_factors):
            raise DomainError(f"inter-stage factors must lie in (0, 2], got {self.interstage_factors!r}")

    @validator
    def check_voltage_range(self) -> None:
        if len(self.voltage_range) != 2:
            raise DomainError(f"voltage_range needs a minimum and a maximum, got {self.voltage_range!r}")
        low, high = self.voltage_range
        if not 0 <= low < high:
            raise DomainError(f"voltage_range needs 0 <= min < max, got {self.voltage_range!r}")

    def tips_for(self, aspect_ratio: float) -> tuple[int, ...]:
        if aspect_ratio == 1:
            return tuple(sorted(set(self.tip_counts)))
        return (int(round(TIPS_PER_ASPECT_RATIO * aspect_ratio)),)

    def keys(self) -> list[DesignKey]:
        """Design keys ``(AR, N, n, gap, gamma)`` in lexicographic order."""
        keys = []
        for ar, n_stages in itertools.product(sorted(set(self.aspect_ratios)), sorted(set(self.stage_counts))):
            keys.extend(
                (ar, n_stages, tips, gap, gamma)
                for tips, gap, gamma in itertools.product(
                    self.tips_for(ar), sorted(set(self.gaps)), sorted(set(self.interstage_factors))
                )
            )
        return keys


@dataclass(frozen=True)
class DesignCandidate:
    """One enumerated design; ``design`` is ``None`` when the combination was rejected."""

    index: int
    key: DesignKey
    design: ThrusterDesign | None
    report: ConstraintReport
    rejection: str | None = None

    @property
    def rejected(self) -> bool:
        return self.design is None


@dataclass(frozen=True)
class Constraint(Validated):
    """A bound on one metric; ``bound`` is ignored for ``no_soft_violations``."""

    metric: Metric
    bound: float = 0.0

    @validator
    def check_bound(self) -> None:
        if not math.isfinite(self.bound):
            raise DomainError(f"constraint bound must be finite, got {self.bound!r}")
        if self.metric is Metric.VOLTAGE and not self.bound > 0:
            raise DomainError(f"voltage ceiling must be positive, got {self.bound!r}")

    def holds(self, performance: StackPerformance, report: ConstraintReport) -> bool:
        if self.metric is Metric.NO_SOFT_VIOLATIONS:
            return not report.soft
        if self.metric is Metric.VOLTAGE:
            return performance.voltage <= self.bound
        return _metric(performance, self.metric) >= self.bound


def _metric(performance: StackPerformance, metric: Metric | Target) -> float:
    if metric in (Metric.EFFICIENCY, Target.MAX_EFFICIENCY):
        return performance.efficiency
    if metric in (Metric.THRUST_DENSITY, Target.MAX_THRUST_DENSITY):
        return performance.thrust_density
    if metric in (Metric.TOTAL_THRUST, Target.MAX_TOTAL_THRUST):
        return performance.total_thrust
    if metric is Metric.VOLTAGE:
        return performance.voltage
    raise DomainError(f"no scalar value for {metric}")


@dataclass(frozen=True)
class Objective(Validated):
    """What to maximize and the constraints an operating point must meet."""

    target: Target
    constraints: tuple[Constraint, ...]

    @validator
    def check_ceiling(self) -> None:
        if not any(c.metric is Metric.VOLTAGE for c in self.constraints):
            raise DomainError("an objective needs a voltage ceiling constraint")

    @property
    def voltage_ceiling(self) -> float:
        return min(c.bound for c in self.constraints if c.metric is Metric.VOLTAGE)

    def bound(self, metric: Metric) -> float | None:
        bounds = [c.bound for c in self.constraints if c.metric is metric]
        return max(bounds) if bounds else None

    def value(self, performance: StackPerformance) -> float:
        return _metric(performance, self.target)

    def violated(self, performance: StackPerformance, report: ConstraintReport) -> str | None:
        """Name of the first failing condition, or ``None`` when the point is feasible."""
        if performance.current <= 0:
            return "onset"
        for c in self.constraints:
            if not c.holds(performance, report):
                return str(c.metric)
        return None

    def is_satisfied(self, performance: StackPerformance, report: ConstraintReport) -> bool:
        return self.violated(performance, report) is None


@dataclass(frozen=True)
class Evaluation:
    """Best operating point of one design, or the constraint that ruled it out."""

    feasible: bool
    voltage: float | None
    metrics: StackPerformance | None
    objective_value: float | None
    binding: str | None = None


@dataclass(frozen=True)
class OptResult:
    """Winner of a design-space search."""

    best_design: ThrusterDesign
    best_voltage: float
    metrics: StackPerformance
    evaluated_count: int
    feasible_count: int
    objective_value: float
    key: DesignKey
    rejection_counts: dict[str, int] = field(default_factory=dict)


@dataclass(frozen=True)
class ParetoPoint:
    """A non-dominated ``(design, voltage)`` pair."""

    key: DesignKey
    design: ThrusterDesign
    voltage: float
    thrust_density: float
    efficiency: float


@dataclass(frozen=True)
class TradeRow:
    """One value of a one-at-a-time parameter study."""

    value: float
    feasible: bool
    reason: str | None
    total_thrust: float | None = None
    thrust_density: float | None = None
    efficiency: float | None = None
    soft_rules: tuple[str, ...] = ()


def _build_stage(space: DesignSpace, key: DesignKey) -> StageGeometry:
    ar, _, tips, gap, _ = key
    return StageGeometry.build(
        aspect_ratio=ar,
        tip_count=tips,
        duct_height=space.duct_height,
        lateral=space.lateral,
        gap=gap,
        bend_depth=space.bend_depth,
        tip_angle=space.tip_angle,
    )


def enumerate_designs(space: DesignSpace, calib: CalibrationParams | None = None) -> list[DesignCandidate]:
    """Every combination of the space in ``(AR, N, n, gap, gamma)`` order.

    Combinations breaking a hard rule or whose tips cannot be laid out are kept
    as rejected candidates with the reason recorded.
    """
    calib = calib or CalibrationParams.default()
    candidates = []
    for index, key in enumerate(space.keys()):
        _, n_stages, _, _, gamma = key
        try:
            stage = _build_stage(space, key)
            report = clearance_check(stage, gamma)
        except (DomainError, LayoutError) as e:
            reason = "layout" if isinstance(e, LayoutError) else "geometry"
            candidates.append(DesignCandidate(index, key, None, ConstraintReport(), reason))
            continue
        if report.has_hard:
            candidates.append(DesignCandidate(index, key, None, report, "hard_violation"))
            continue
        design = ThrusterDesign(stage, n_stages, calib.corona, gamma)
        candidates.append(DesignCandidate(index, key, design, report))
    return candidates


def evaluate(
    design: ThrusterDesign,
    objective: Objective,
    calib: CalibrationParams | None = None,
    medium: FluidMedium | None = None,
    voltage_range: Sequence[float] = (0.0, math.inf),
    voltage_step: float = 1.0,
) -> Evaluation:
    """Search the drive voltage of one design.

    Voltages ``v_min + j voltage_step`` are considered up to the smallest of
    the range maximum, the voltage ceiling and the breakdown guard. Current,
    thrust and thrust density grow with voltage and efficiency falls, so the
    feasible voltages form one interval whose ends are found by bisection.

    Returns:
        The evaluation; an infeasible design names its binding constraint
    """
    calib = calib or CalibrationParams.default()
    medium = calib.medium_for(medium or FluidMedium())
    if not voltage_step > 0:
        raise DomainError(f"voltage_step must be positive, got {voltage_step!r}")

    report = clearance_check(design.stage, design.interstage_factor)
    if objective.bound(Metric.NO_SOFT_VIOLATIONS) is not None and report.soft:
        return Evaluation(False, None, None, None, str(Metric.NO_SOFT_VIOLATIONS))

    v_min = float(voltage_range[0])
    breakdown_limit = BREAKDOWN_GUARD * medium.breakdown_field * design.stage.gap
    v_max = min(float(voltage_range[1]), objective.voltage_ceiling, breakdown_limit)
    if v_max < v_min:
        binding = "breakdown" if breakdown_limit < v_min else str(Metric.VOLTAGE)
        return Evaluation(False, None, None, None, binding)
    top = int(math.floor((v_max - v_min) / voltage_step + 1e-9))
    # the snap tolerance must not lift the top point past the guard
    guard_field = BREAKDOWN_GUARD * medium.breakdown_field
    while top >= 0 and drift_field(v_min + top * voltage_step, design.stage.gap) > guard_field:
        top -= 1
    if top < 0:
        return Evaluation(False, None, None, None, "breakdown")

    cache: dict[int, StackPerformance] = {}

    def performance(j: int) -> StackPerformance:
        if j not in cache:
            cache[j] = stack_performance(
                design, v_min + j * voltage_step, calib.degradation, medium, calib.penalty, BREAKDOWN_GUARD
            )
        return cache[j]

    lower_checks: list[tuple[str, Callable[[StackPerformance], bool]]] = [("onset", lambda p: p.current > 0)]
    upper_checks: list[tuple[str, Callable[[StackPerformance], bool]]] = []
    for metric in (Metric.TOTAL_THRUST, Metric.THRUST_DENSITY):
        bound = objective.bound(metric)
        if bound is not None:
            lower_checks.append((str(metric), lambda p, m=metric, b=bound: _metric(p, m) >= b))
    bound = objective.bound(Metric.EFFICIENCY)
    if bound is not None:
        upper_checks.append((str(Metric.EFFICIENCY), lambda p, b=bound: p.efficiency >= b))

    try:
        low = first_true(lambda j: all(check(performance(j)) for _, check in lower_checks), 0, top)
        if low is None:
            binding = next(name for name, check in lower_checks if not check(performance(top)))
            return Evaluation(False, None, None, None, binding)
        high = last_true(lambda j: all(check(performance(j)) for _, check in upper_checks), low, top)
        if high is None:
            binding = next(name for name, check in upper_checks if not check(performance(low)))
            return Evaluation(False, None, None, None, binding)
        best = golden_section_argmax(lambda j: objective.value(performance(j)), low, high)
    except BreakdownError:
        return Evaluation(False, None, None, None, "breakdown")

    metrics = performance(best)
    return Evaluation(True, metrics.voltage, metrics, objective.value(metrics))


def optimize(
    space: DesignSpace,
    objective: Objective,
    calib: CalibrationParams | None = None,
    medium: FluidMedium | None = None,
    workers: int = 1,
    voltage_step: float = 1.0,
) -> OptResult:
    """Evaluate every design of a space and return the best feasible one.

    Ties keep the design that comes first in enumeration order.

    Raises:
        EmptyFeasibleSetError: If no design meets the objective constraints
    """
    calib = calib or CalibrationParams.default()
    candidates = enumerate_designs(space, calib)
    rejections: Counter[str] = Counter(c.rejection for c in candidates if c.rejection)
    viable = [c for c in candidates if not c.rejected]

    def run(candidate: DesignCandidate) -> Evaluation:
        assert candidate.design is not None
        return evaluate(candidate.design, objective, calib, medium, space.voltage_range, voltage_step)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            evaluations = list(pool.map(run, viable))
    else:
        evaluations = [run(c) for c in viable]

    best: tuple[DesignCandidate, Evaluation] | None = None
    feasible = 0
    for candidate, evaluation in zip(viable, evaluations, strict=True):
        if not evaluation.feasible:
            rejections[evaluation.binding or "unknown"] += 1
            continue
        feasible += 1
        assert evaluation.objective_value is not None
        if best is None or evaluation.objective_value > best[1].objective_value:  # type: ignore[operator]
            best = (candidate, evaluation)

    logger.info(
        "evaluated %d designs, %d feasible, %d rejected outright", len(viable), feasible, len(candidates) - len(viable)
    )
    if best is None:
        raise EmptyFeasibleSetError(dict(rejections))

    candidate, evaluation = best
    assert candidate.design is not None and evaluation.metrics is not None and evaluation.voltage is not None
    return OptResult(
        best_design=candidate.design,
        best_voltage=evaluation.voltage,
        metrics=evaluation.metrics,
        evaluated_count=len(viable),
        feasible_count=feasible,
        objective_value=evaluation.objective_value,  # type: ignore[arg-type]
        key=candidate.key,
        rejection_counts=dict(sorted(rejections.items())),
    )


def pareto_front(
    space: DesignSpace,
    calib: CalibrationParams | None,
    medium: FluidMedium | None,
    voltage_grid: Sequence[float],
) -> list[ParetoPoint]:
    """Non-dominated ``(design, voltage)`` pairs over thrust density and efficiency.

    A point is dominated when another is at least as good in both metrics and
    strictly better in one. Sub-onset points and points beyond the breakdown
    guard are left out. The front is sorted by ascending thrust density.
    """
    if not voltage_grid:
        raise DomainError("pareto_front needs a non-empty voltage grid")
    calib = calib or CalibrationParams.default()
    medium = calib.medium_for(medium or FluidMedium())

    points: list[tuple[int, ParetoPoint]] = []
    for candidate in enumerate_designs(space, calib):
        if candidate.design is None:
            continue
        for voltage in voltage_grid:
            try:
                perf = stack_performance(candidate.design, voltage, calib.degradation, medium, calib.penalty)
            except BreakdownError:
                continue
            if perf.current <= 0:
                continue
            points.append(
                (
                    len(points),
                    ParetoPoint(candidate.key, candidate.design, float(voltage), perf.thrust_density, perf.efficiency),
                )
            )

    points.sort(key=lambda item: (-item[1].thrust_density, -item[1].efficiency, item[0]))
    front: list[tuple[int, ParetoPoint]] = []
    best_efficiency = -math.inf
    for _, group in itertools.groupby(points, key=lambda item: item[1].thrust_density):
        members = list(group)
        top = members[0][1].efficiency
        if top > best_efficiency:
            front.extend(m for m in members if m[1].efficiency == top)
            best_efficiency = top

    front.sort(key=lambda item: (item[1].thrust_density, item[0]))
    return [point for _, point in front]


def _vary(base: ThrusterDesign, parameter: StudyParameter, value: float) -> ThrusterDesign:
    stage = base.stage
    if parameter is StudyParameter.STAGE_COUNT:
        return replace(base, stage_count=int(value))
    if parameter is StudyParameter.INTERSTAGE_FACTOR:
        return replace(base, interstage_factor=float(value))

    aspect_ratio = stage.aspect_ratio
    tips: int | None = stage.emitter.tip_count
    if parameter is StudyParameter.ASPECT_RATIO:
        aspect_ratio = float(value)
        tips = None if aspect_ratio > 1 else stage.emitter.tip_count
    else:
        tips = int(value)
    new_stage = StageGeometry.build(
        aspect_ratio=aspect_ratio,
        tip_count=tips,
        duct_height=stage.height,
        lateral=stage.emitter.lateral,
        gap=stage.gap,
        bend_depth=stage.emitter.bend_depth,
        tip_angle=stage.emitter.tip_angle,
        rim_width=stage.emitter.rim_width,
        collector=stage.collector,
    )
    return replace(base, stage=new_stage)


def trade_study(
    base: ThrusterDesign,
    parameter: StudyParameter,
    values: Sequence[float],
    voltage: float,
    calib: CalibrationParams | None = None,
    medium: FluidMedium | None = None,
) -> list[TradeRow]:
    """Vary one design parameter at a fixed voltage and report the stack metrics.

    Values that make the design invalid yield rows with ``feasible=False`` and
    the reason instead of stopping the study.
    """
    calib = calib or CalibrationParams.default()
    medium = calib.medium_for(medium or FluidMedium())
    rows = []
    for value in values:
        try:
            design = _vary(base, parameter, value)
            perf = stack_performance(design, voltage, calib.degradation, medium, calib.penalty)
        except InfeasibleDesignError as e:
            rows.append(TradeRow(float(value), False, e.rule))
            continue
        except BreakdownError:
            rows.append(TradeRow(float(value), False, "breakdown"))
            continue
        except LayoutError:
            rows.append(TradeRow(float(value), False, "layout"))
            continue
        except DomainError:
            rows.append(TradeRow(float(value), False, "geometry"))
            continue
        report = clearance_check(design.stage, design.interstage_factor)
        rows.append(
            TradeRow(
                value=float(value),
                feasible=perf.current > 0,
                reason=None if perf.current > 0 else "onset",
                total_thrust=perf.total_thrust,
                thrust_density=perf.thrust_density,
                efficiency=perf.efficiency,
                soft_rules=tuple(v.rule for v in report.soft),
            )
        )
    return rows
