"""Tests for design enumeration, voltage search, optimization and Pareto fronts."""

import pytest

from ionduct.calibrate import CalibrationParams
from ionduct.geometry import StageGeometry, clearance_check
from ionduct.optimize import (
    Constraint,
    DesignSpace,
    Objective,
    enumerate_designs,
    evaluate,
    optimize,
    pareto_front,
    trade_study,
)
from ionduct.physics import CoronaModel, FluidMedium
from ionduct.stack import StageDegradation, ThrusterDesign, stack_performance
from ionduct.utils.enums import Metric, StudyParameter, Target
from ionduct.utils.exceptions import BreakdownError, DomainError, EmptyFeasibleSetError

CALIB = CalibrationParams(CoronaModel(2e-12, 2400.0, 0.8), StageDegradation(0.9))
SMALL = DesignSpace(aspect_ratios=(1, 2), stage_counts=(1, 3), voltage_range=(2000.0, 3300.0), tip_counts=(3,))


def _objective(target, ceiling=3300.0, **bounds):
    constraints = [Constraint(Metric.VOLTAGE, ceiling)]
    constraints += [Constraint(Metric(name), bound) for name, bound in bounds.items()]
    return Objective(Target(target), tuple(constraints))


def _brute_force(space, objective, calib, step=1.0):
    """Best (key, voltage, value) over every design and every grid voltage."""
    medium = calib.medium_for(FluidMedium())
    best = None
    low, high = space.voltage_range
    count = int((high - low) / step)
    for candidate in enumerate_designs(space, calib):
        if candidate.rejected:
            continue
        report = clearance_check(candidate.design.stage, candidate.design.interstage_factor)
        for j in range(count + 1):
            try:
                perf = stack_performance(
                    candidate.design, low + j * step, calib.degradation, medium, calib.penalty
                )
            except BreakdownError:
                continue
            if not objective.is_satisfied(perf, report):
                continue
            value = objective.value(perf)
            if best is None or value > best[2]:
                best = (candidate.key, perf.voltage, value)
    return best


def _dominance_front(space, calib, grid):
    """Non-dominated (key, voltage) pairs by pairwise comparison."""
    medium = calib.medium_for(FluidMedium())
    points = []
    for candidate in enumerate_designs(space, calib):
        if candidate.rejected:
            continue
        for v in grid:
            try:
                perf = stack_performance(candidate.design, v, calib.degradation, medium, calib.penalty)
            except BreakdownError:
                continue
            if perf.current > 0:
                points.append((candidate.key, float(v), perf.thrust_density, perf.efficiency))

    def dominates(q, p):
        return q[2] >= p[2] and q[3] >= p[3] and (q[2] > p[2] or q[3] > p[3])

    return {(p[0], p[1]) for p in points if not any(dominates(q, p) for q in points)}


class TestDesignSpace:
    """Test design space validation and key order."""

    def test_keys_are_lexicographic(self):
        """Test the (AR, N, n, gap, gamma) order."""
        space = DesignSpace(aspect_ratios=(2, 1), stage_counts=(3, 1), voltage_range=(0.0, 3000.0), tip_counts=(5, 3))
        assert space.keys() == [
            (1, 1, 3, 2e-3, 1.5),
            (1, 1, 5, 2e-3, 1.5),
            (1, 3, 3, 2e-3, 1.5),
            (1, 3, 5, 2e-3, 1.5),
            (2, 1, 8, 2e-3, 1.5),
            (2, 3, 8, 2e-3, 1.5),
        ]

    def test_circular_needs_tip_counts(self):
        """Test that AR = 1 designs need explicit tip counts."""
        with pytest.raises(DomainError, match="tip_counts"):
            DesignSpace(aspect_ratios=(1,), stage_counts=(1,), voltage_range=(0.0, 3000.0))

    def test_empty_set(self):
        """Test that every set must be populated."""
        with pytest.raises(DomainError, match="stage_counts must not be empty"):
            DesignSpace(aspect_ratios=(2,), stage_counts=(), voltage_range=(0.0, 3000.0))

    @pytest.mark.parametrize("voltage_range", [(3000.0, 2000.0), (-1.0, 2000.0), (2000.0,)])
    def test_voltage_range(self, voltage_range):
        """Test the voltage range shape and order."""
        with pytest.raises(DomainError, match="voltage_range"):
            DesignSpace(aspect_ratios=(2,), stage_counts=(1,), voltage_range=voltage_range)

    def test_interstage_range(self):
        """Test that inter-stage factors lie in (0, 2]."""
        with pytest.raises(DomainError, match="inter-stage"):
            DesignSpace(aspect_ratios=(2,), stage_counts=(1,), voltage_range=(0.0, 3000.0), interstage_factors=(2.5,))


class TestEnumerateDesigns:
    """Test design enumeration."""

    def test_singleton(self):
        """Test that singleton sets give one design."""
        space = DesignSpace(aspect_ratios=(5,), stage_counts=(5,), voltage_range=(0.0, 3300.0))
        (candidate,) = enumerate_designs(space, CALIB)
        assert candidate.design.stage_count == 5
        assert candidate.design.stage.emitter.tip_count == 20
        assert candidate.design.corona == CALIB.corona

    def test_product_count(self):
        """Test that 3 aspect ratios and 5 stage counts give 15 designs in order."""
        space = DesignSpace(aspect_ratios=(2, 3, 4), stage_counts=(1, 2, 3, 4, 5), voltage_range=(0.0, 3300.0))
        candidates = enumerate_designs(space)
        assert len(candidates) == 15
        assert [c.index for c in candidates] == list(range(15))
        assert [c.key for c in candidates] == space.keys()

    def test_hard_violations_are_kept(self):
        """Test that arcing designs are marked rejected, not dropped."""
        space = DesignSpace(
            aspect_ratios=(2,), stage_counts=(2,), voltage_range=(0.0, 3300.0), interstage_factors=(0.5, 1.5)
        )
        rejected, accepted = enumerate_designs(space)
        assert rejected.rejected
        assert rejected.rejection == "hard_violation"
        assert rejected.report.rules()[-1] == "interstage_arcing"
        assert not accepted.rejected

    def test_invalid_geometry(self):
        """Test that unbuildable stages are marked rejected."""
        space = DesignSpace(aspect_ratios=(2,), stage_counts=(1,), voltage_range=(0.0, 3300.0), lateral=3e-3)
        (candidate,) = enumerate_designs(space)
        assert candidate.rejection == "geometry"


class TestObjective:
    """Test objectives and constraints."""

    def test_needs_voltage_ceiling(self):
        """Test that an objective must bound the voltage."""
        with pytest.raises(DomainError, match="voltage ceiling"):
            Objective(Target.MAX_EFFICIENCY, (Constraint(Metric.EFFICIENCY, 1e-3),))

    def test_positive_ceiling(self):
        """Test that the voltage ceiling is positive."""
        with pytest.raises(DomainError):
            Constraint(Metric.VOLTAGE, 0.0)

    def test_bounds(self):
        """Test the tightest bound per metric."""
        objective = _objective("max_total_thrust", efficiency=1e-3)
        assert objective.voltage_ceiling == 3300.0
        assert objective.bound(Metric.EFFICIENCY) == 1e-3
        assert objective.bound(Metric.THRUST_DENSITY) is None


@pytest.fixture
def design():
    return ThrusterDesign(StageGeometry.build(aspect_ratio=5), 5, CALIB.corona)


class TestEvaluate:
    """Test the voltage search of one design."""

    def test_max_efficiency_at_onset(self, design):
        """Test that efficiency peaks at the first discharging voltage."""
        result = evaluate(design, _objective("max_efficiency"), CALIB, voltage_range=(2000.0, 3300.0))
        below = stack_performance(design, result.voltage - 1, CALIB.degradation, None, CALIB.penalty)
        assert result.feasible
        assert result.metrics.current > 0
        assert below.current == 0.0

    def test_max_density_at_ceiling(self, design):
        """Test that density peaks at the voltage ceiling."""
        result = evaluate(design, _objective("max_thrust_density"), CALIB, voltage_range=(2000.0, 3300.0))
        assert result.voltage == 3300.0
        assert result.objective_value == result.metrics.thrust_density

    def test_efficiency_bound_unreachable(self, design):
        """Test that 10 mN/W is above 1 / (mu E) near 1.6 MV/m."""
        result = evaluate(design, _objective("max_total_thrust", efficiency=1e-2), CALIB, voltage_range=(2000.0, 3300.0))
        assert not result.feasible
        assert result.binding == "efficiency"

    def test_efficiency_bound_caps_voltage(self, design):
        """Test that an efficiency floor moves the best thrust below the ceiling."""
        result = evaluate(design, _objective("max_total_thrust", efficiency=2.5e-3), CALIB, voltage_range=(2000.0, 3300.0))
        above = stack_performance(design, result.voltage + 1, CALIB.degradation, None, CALIB.penalty)
        assert result.feasible
        assert result.metrics.efficiency >= 2.5e-3
        assert above.efficiency < 2.5e-3

    def test_sub_onset_ceiling(self, design):
        """Test that a ceiling below onset names the onset."""
        result = evaluate(design, _objective("max_thrust_density", ceiling=2200.0), CALIB, voltage_range=(2000.0, 3300.0))
        assert (result.feasible, result.binding) == (False, "onset")

    def test_thrust_floor(self, design):
        """Test that an unreachable thrust floor is named."""
        result = evaluate(design, _objective("max_efficiency", total_thrust=1.0), CALIB, voltage_range=(2000.0, 3300.0))
        assert result.binding == "total_thrust"

    def test_breakdown(self, design):
        """Test that a range above the breakdown guard is infeasible, not an error."""
        result = evaluate(design, _objective("max_thrust_density", ceiling=6000.0), CALIB, voltage_range=(5500.0, 6000.0))
        assert result.binding == "breakdown"

    def test_breakdown_limit_between_grid_points(self):
        """Test that a guard voltage just below an integer keeps the grid point beneath it."""
        design = ThrusterDesign(StageGeometry.build(aspect_ratio=5, gap=2.4e-3), 1, CALIB.corona)
        result = evaluate(design, _objective("max_thrust_density", ceiling=7000.0), CALIB, voltage_range=(2400.0, 7000.0))
        assert result.feasible
        assert result.voltage == 6479.0
        assert result.metrics.voltage / 2.4e-3 <= 0.9 * FluidMedium().breakdown_field

    def test_soft_violations(self, design):
        """Test the no-soft-violations constraint."""
        result = evaluate(design, _objective("max_thrust_density", no_soft_violations=0.0), CALIB)
        assert result.binding == "no_soft_violations"

    def test_voltage_step(self, design):
        """Test that the search respects a coarser grid."""
        result = evaluate(
            design, _objective("max_efficiency"), CALIB, voltage_range=(2000.0, 3300.0), voltage_step=50.0
        )
        assert (result.voltage - 2000.0) % 50.0 == 0.0


class TestOptimize:
    """Test exhaustive optimization."""

    @pytest.mark.parametrize(
        "target,bounds",
        [
            ("max_thrust_density", {}),
            ("max_efficiency", {}),
            ("max_total_thrust", {"efficiency": 2.5e-3}),
            ("max_efficiency", {"thrust_density": 2.0}),
        ],
    )
    def test_matches_brute_force(self, target, bounds):
        """Test that the winner equals a 1 V brute-force scan."""
        objective = _objective(target, **bounds)
        result = optimize(SMALL, objective, CALIB)
        key, voltage, value = _brute_force(SMALL, objective, CALIB)
        assert (result.key, result.best_voltage, result.objective_value) == (key, voltage, value)

    def test_winner_revalidates(self):
        """Test that the winner meets every rule when recomputed."""
        objective = _objective("max_total_thrust", efficiency=2.5e-3)
        result = optimize(SMALL, objective, CALIB)
        report = clearance_check(result.best_design.stage, result.best_design.interstage_factor)
        perf = stack_performance(result.best_design, result.best_voltage, CALIB.degradation, None, CALIB.penalty)
        assert not report.has_hard
        assert objective.is_satisfied(perf, report)
        assert perf == result.metrics

    def test_single_design(self):
        """Test that a singleton space returns its own evaluation."""
        space = DesignSpace(aspect_ratios=(5,), stage_counts=(5,), voltage_range=(2000.0, 3300.0))
        result = optimize(space, _objective("max_thrust_density"), CALIB)
        assert result.key == (5, 5, 20, 2e-3, 1.5)
        assert result.best_voltage == 3300.0
        assert (result.evaluated_count, result.feasible_count) == (1, 1)

    def test_ties_keep_first(self):
        """Test that equal objective values resolve to the first design."""
        space = DesignSpace(
            aspect_ratios=(2,), stage_counts=(2,), voltage_range=(2000.0, 3300.0), interstage_factors=(1.5, 2.0)
        )
        result = optimize(space, _objective("max_thrust_density"), CALIB)
        assert result.key[-1] == 1.5

    def test_largest_stack_wins_density(self):
        """Test that max density picks the most stages at the highest voltage."""
        space = DesignSpace(aspect_ratios=(2, 3, 5), stage_counts=(1, 3, 5), voltage_range=(2000.0, 3300.0))
        result = optimize(space, _objective("max_thrust_density"), CalibrationParams(CALIB.corona))
        assert result.key[1] == 5
        assert result.best_voltage == 3300.0

    def test_deterministic_across_workers(self):
        """Test bit-identical results for one and several threads."""
        objective = _objective("max_total_thrust", efficiency=2.5e-3)
        first = optimize(SMALL, objective, CALIB)
        assert optimize(SMALL, objective, CALIB) == first
        assert optimize(SMALL, objective, CALIB, workers=4) == first

    def test_empty_feasible_set(self):
        """Test the rejection histogram of an infeasible space."""
        space = DesignSpace(
            aspect_ratios=(2,), stage_counts=(1, 2), voltage_range=(2000.0, 3300.0), interstage_factors=(0.5, 1.5)
        )
        with pytest.raises(EmptyFeasibleSetError) as excinfo:
            optimize(space, _objective("max_total_thrust", efficiency=1e-2), CALIB)
        assert excinfo.value.rejection_counts == {"efficiency": 2, "hard_violation": 2}
        assert excinfo.value.exit_code == 3
        assert "hard_violation: 2" in str(excinfo.value)

    def test_rejection_counts(self):
        """Test that rejected designs are counted in the result."""
        space = DesignSpace(
            aspect_ratios=(2,), stage_counts=(1,), voltage_range=(2000.0, 3300.0), interstage_factors=(0.5, 1.5)
        )
        result = optimize(space, _objective("max_thrust_density"), CALIB)
        assert result.rejection_counts == {"hard_violation": 1}


class TestParetoFront:
    """Test the thrust-density versus efficiency front."""

    GRID = [2000.0 + 50.0 * j for j in range(27)]

    def test_matches_dominance_oracle(self):
        """Test against pairwise dominance checks."""
        front = pareto_front(SMALL, CALIB, None, self.GRID)
        assert {(p.key, p.voltage) for p in front} == _dominance_front(SMALL, CALIB, self.GRID)

    def test_sorted_and_monotone(self):
        """Test that density ascends and efficiency never rises along the front."""
        front = pareto_front(SMALL, CALIB, None, self.GRID)
        densities = [p.thrust_density for p in front]
        efficiencies = [p.efficiency for p in front]
        assert densities == sorted(densities)
        assert all(b <= a for a, b in zip(efficiencies, efficiencies[1:]))

    def test_single_point(self):
        """Test a one-design, one-voltage front."""
        space = DesignSpace(aspect_ratios=(5,), stage_counts=(1,), voltage_range=(2000.0, 3300.0))
        (point,) = pareto_front(space, CALIB, None, [3000.0])
        assert point.voltage == 3000.0

    def test_excludes_idle_and_breakdown(self):
        """Test that sub-onset and over-field voltages are left out."""
        space = DesignSpace(aspect_ratios=(5,), stage_counts=(1,), voltage_range=(2000.0, 6000.0))
        front = pareto_front(space, CALIB, None, [1000.0, 6000.0])
        assert front == []

    def test_contains_single_objective_winners(self):
        """Test that the density and efficiency winners lie on the front."""
        space = DesignSpace(aspect_ratios=(5,), stage_counts=(1, 2, 3), voltage_range=(2000.0, 3300.0))
        front = {(p.key, p.voltage) for p in pareto_front(space, CALIB, None, self.GRID)}
        for target in ("max_thrust_density", "max_efficiency"):
            result = optimize(space, _objective(target), CALIB, voltage_step=50.0)
            assert (result.key, result.best_voltage) in front

    def test_empty_grid(self):
        """Test that a voltage grid is required."""
        with pytest.raises(DomainError):
            pareto_front(SMALL, CALIB, None, [])


class TestTradeStudy:
    """Test one-at-a-time parameter studies."""

    def test_stage_count(self, design):
        """Test that thrust grows with the stage count."""
        rows = trade_study(design, StudyParameter.STAGE_COUNT, [1, 2, 3], 3000.0, CALIB)
        thrusts = [r.total_thrust for r in rows]
        assert all(r.feasible for r in rows)
        assert thrusts == sorted(thrusts)

    def test_interstage_factor(self, design):
        """Test the hard and soft spacing outcomes."""
        rows = trade_study(design, StudyParameter.INTERSTAGE_FACTOR, [0.8, 1.2, 1.5], 3000.0, CALIB)
        assert (rows[0].feasible, rows[0].reason) == (False, "interstage_arcing")
        assert "interstage_reverse_corona" in rows[1].soft_rules
        assert "interstage_reverse_corona" not in rows[2].soft_rules

    def test_aspect_ratio(self):
        """Test that stadium ducts follow the tip rule when widened."""
        base = ThrusterDesign(StageGeometry.build(tip_count=3), 1, CALIB.corona)
        rows = trade_study(base, StudyParameter.ASPECT_RATIO, [1, 2, 3], 3000.0, CALIB)
        densities = [r.thrust_density for r in rows]
        assert all(r.feasible for r in rows)
        assert len(set(densities)) == 3

    def test_tip_count_on_stadium(self, design):
        """Test that a tip count breaking the rule is reported, not raised."""
        rows = trade_study(design, StudyParameter.TIP_COUNT, [20, 12], 3000.0, CALIB)
        assert rows[0].feasible
        assert (rows[1].feasible, rows[1].reason) == (False, "geometry")

    def test_voltage_outcomes(self, design):
        """Test the onset and breakdown reasons."""
        assert trade_study(design, StudyParameter.STAGE_COUNT, [1], 1000.0, CALIB)[0].reason == "onset"
        assert trade_study(design, StudyParameter.STAGE_COUNT, [1], 6000.0, CALIB)[0].reason == "breakdown"
