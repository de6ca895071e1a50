"""Tests for stage geometry, emitter layout, spacing rules and outlines."""

import math

import pytest

from ionduct.geometry import (
    CollectorGrid,
    EmitterRing,
    OnsetPenalty,
    StageGeometry,
    Stadium,
    chord_spacing,
    clearance_check,
    clearance_deficits,
    electrode_outline,
    inner_area,
    layout_emitters,
    onset_penalty,
    tip_spacing,
    tip_to_lip_clearance,
    warburg_radius,
)
from ionduct.utils.enums import Severity
from ionduct.utils.exceptions import DomainError, LayoutError


def _pairwise(points):
    return [math.dist(points[k], points[(k + 1) % len(points)]) for k in range(len(points))]


def _nearest(points):
    return [min(math.dist(p, q) for j, q in enumerate(points) if j != k) for k, p in enumerate(points)]


class TestEmitterRing:
    """Test emitter parameters and their invariants."""

    def test_derived_lengths(self):
        """Test duct height and lateral distance."""
        ring = EmitterRing(inner_diameter=4e-3, outer_diameter=6e-3, tip_count=3)
        assert ring.duct_height == 6e-3
        assert ring.lateral == pytest.approx(1e-3)

    def test_inner_must_be_smaller(self):
        """Test that d1 < d2 is enforced."""
        with pytest.raises(DomainError, match="inner_diameter < outer_diameter"):
            EmitterRing(inner_diameter=6e-3, outer_diameter=6e-3, tip_count=3)

    def test_tip_count_positive(self):
        """Test that an emitter needs at least one tip."""
        with pytest.raises(DomainError, match="tip_count"):
            EmitterRing(inner_diameter=4e-3, outer_diameter=6e-3, tip_count=0)

    @pytest.mark.parametrize("aspect_ratio,tips", [(2, 8), (2.5, 10), (5, 20)])
    def test_tips_follow_aspect_ratio(self, aspect_ratio, tips):
        """Test that four tips per unit aspect ratio are accepted."""
        EmitterRing(inner_diameter=4e-3, outer_diameter=6e-3, tip_count=tips, aspect_ratio=aspect_ratio)

    @pytest.mark.parametrize("aspect_ratio,tips", [(2, 7), (1.3, 5)])
    def test_tip_rule_violation(self, aspect_ratio, tips):
        """Test that other tip counts are refused for stadium ducts."""
        with pytest.raises(DomainError, match="requires"):
            EmitterRing(inner_diameter=4e-3, outer_diameter=6e-3, tip_count=tips, aspect_ratio=aspect_ratio)

    def test_aspect_ratio_below_one(self):
        """Test that the duct cannot be narrower than it is high."""
        with pytest.raises(DomainError, match="at least 1"):
            EmitterRing(inner_diameter=4e-3, outer_diameter=6e-3, tip_count=2, aspect_ratio=0.5)


class TestStageGeometry:
    """Test stage construction."""

    def test_duct_defaults_follow_emitter(self):
        """Test that the duct inherits the outer contour."""
        stage = StageGeometry.build(aspect_ratio=5)
        assert stage.height == pytest.approx(6e-3)
        assert stage.width == pytest.approx(30e-3)
        assert stage.emitter.tip_count == 20

    def test_circular_duct_needs_tip_count(self):
        """Test that AR = 1 has no default tip count."""
        with pytest.raises(DomainError, match="tip_count is required"):
            StageGeometry.build(aspect_ratio=1)

    def test_mismatched_duct_height(self):
        """Test that an explicit height must equal d2."""
        emitter = EmitterRing(inner_diameter=4e-3, outer_diameter=6e-3, tip_count=3)
        with pytest.raises(DomainError, match="differs"):
            StageGeometry(emitter=emitter, duct_inner_height=7e-3)

    def test_mismatched_duct_width(self):
        """Test that an explicit width must equal h x AR."""
        emitter = EmitterRing(inner_diameter=4e-3, outer_diameter=6e-3, tip_count=8, aspect_ratio=2)
        with pytest.raises(DomainError, match="height x aspect ratio"):
            StageGeometry(emitter=emitter, duct_inner_width=10e-3)

    def test_gap_positive(self):
        """Test the gap check."""
        with pytest.raises(DomainError, match="gap"):
            StageGeometry.build(tip_count=3, gap=0.0)

    def test_collector_wires(self):
        """Test the collector grid invariant."""
        with pytest.raises(DomainError, match="wire_width < pitch"):
            CollectorGrid(wire_width=1e-3, pitch=1e-3)

    def test_hashable(self):
        """Test that equal stages compare and hash equal."""
        assert StageGeometry.build(tip_count=3) == StageGeometry.build(tip_count=3)
        assert hash(StageGeometry.build(tip_count=3)) == hash(StageGeometry.build(tip_count=3))


class TestClosedForms:
    """Test the closed-form geometric relations."""

    def test_warburg_radius(self):
        """Test arctan(pi/3) d at a 2 mm gap."""
        assert warburg_radius(2e-3) == pytest.approx(1.6169e-3, rel=1e-4)

    @pytest.mark.parametrize("tips,expected", [(3, 3.46e-3), (5, 2.35e-3)])
    def test_chord_spacing(self, tips, expected):
        """Test d1 sin(pi / n) on a 4 mm circle."""
        assert chord_spacing(4e-3, tips) == pytest.approx(expected, abs=5e-6)

    def test_chord_spacing_single_tip(self):
        """Test that one tip has no neighbour."""
        with pytest.raises(DomainError):
            chord_spacing(4e-3, 1)

    @pytest.mark.parametrize(
        "lateral,bend,expected",
        [(2e-3, 1e-3, 2.236e-3), (1e-3, 1e-3, 1.414e-3), (0.75e-3, 1e-3, 1.25e-3)],
    )
    def test_tip_to_lip_clearance(self, lateral, bend, expected):
        """Test the bent-tip clearance."""
        assert tip_to_lip_clearance(lateral, bend) == pytest.approx(expected, abs=1e-6)

    @pytest.mark.parametrize("aspect_ratio,expected", [(5, 172.27e-6), (9, 316.27e-6)])
    def test_inner_area(self, aspect_ratio, expected):
        """Test the stadium cross-section at h = 6 mm."""
        assert inner_area(StageGeometry.build(aspect_ratio=aspect_ratio)) == pytest.approx(expected, abs=1e-8)

    def test_inner_area_circle(self):
        """Test that AR = 1 gives a disk."""
        assert inner_area(StageGeometry.build(tip_count=3)) == pytest.approx(math.pi * 9e-6)


class TestStadium:
    """Test the stadium contour parametrization."""

    def test_perimeter(self):
        """Test 2 pi r + 4 a."""
        assert Stadium(2.0, 1.0).perimeter == pytest.approx(2 * math.pi + 8)

    def test_start_at_left_apex(self):
        """Test that arc length starts at the left cap apex."""
        assert Stadium(2.0, 1.0).point(0.0) == pytest.approx((-3.0, 0.0))

    def test_counterclockwise(self):
        """Test that the bottom side is traversed left to right."""
        contour = Stadium(2.0, 1.0)
        _, tangent, normal = contour.frame(math.pi / 2 + 1.0)
        assert tangent == pytest.approx((1.0, 0.0))
        assert normal == pytest.approx((0.0, -1.0))

    def test_locate_position_inverse(self):
        """Test that position undoes locate."""
        contour = Stadium(2.0, 1.0)
        for t in [0.3, 2.0, 4.5, 7.0, 10.0, 13.5]:
            assert contour.position(*contour.locate(t)) == pytest.approx(t)

    def test_frames_are_unit(self):
        """Test that tangents and normals are orthonormal."""
        contour = Stadium(2.0, 1.0)
        for k in range(40):
            _, (tx, ty), (nx, ny) = contour.frame(k * contour.perimeter / 40)
            assert math.hypot(tx, ty) == pytest.approx(1.0)
            assert math.hypot(nx, ny) == pytest.approx(1.0)
            assert tx * nx + ty * ny == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("half_length,count", [(2.0, 4 * 8 + 2), (0.0, 4 * 8)])
    def test_sample_count(self, half_length, count):
        """Test the polyline size with and without straight sides."""
        assert len(Stadium(half_length, 1.0).sample(per_quarter=8)) == count


class TestLayout:
    """Test emitter tip placement."""

    def test_circular_uniform(self):
        """Test uniform angular placement from the left apex, counterclockwise."""
        tips = layout_emitters(StageGeometry.build(tip_count=4))
        expected = [(-2e-3, 0.0), (0.0, -2e-3), (2e-3, 0.0), (0.0, 2e-3)]
        for point, target in zip(tips, expected, strict=True):
            assert point == pytest.approx(target, abs=1e-12)

    @pytest.mark.parametrize("aspect_ratio", [2, 2.5, 5])
    def test_stadium_equal_neighbours(self, aspect_ratio):
        """Test that neighbouring tips are equidistant on stadium ducts."""
        tips = layout_emitters(StageGeometry.build(aspect_ratio=aspect_ratio))
        distances = _pairwise(tips)
        assert len(tips) == round(4 * aspect_ratio)
        assert max(distances) == pytest.approx(min(distances), rel=1e-9)

    @pytest.mark.parametrize("aspect_ratio", range(1, 10))
    def test_nearest_neighbours_uniform(self, aspect_ratio):
        """Test that 4 x AR tips keep their nearest-neighbour distances within 10 %."""
        stage = StageGeometry.build(aspect_ratio=aspect_ratio, tip_count=4 * aspect_ratio)
        nearest = _nearest(layout_emitters(stage))
        assert len(nearest) == 4 * aspect_ratio
        assert max(nearest) / min(nearest) <= 1.1

    @pytest.mark.parametrize("aspect_ratio", [3, 5])
    def test_stadium_spacing_near_three_mm(self, aspect_ratio):
        """Test that the 4 x AR rule keeps tips about 3 mm apart at h = 6 mm."""
        stage = StageGeometry.build(aspect_ratio=aspect_ratio)
        assert tip_spacing(stage) == pytest.approx(3e-3, rel=0.05)

    def test_stadium_first_tip_at_apex(self):
        """Test that the first tip sits at the left apex of the inner contour."""
        stage = StageGeometry.build(aspect_ratio=5)
        assert layout_emitters(stage)[0] == pytest.approx((-14e-3, 0.0))

    def test_tips_on_inner_contour(self):
        """Test that every tip lies on the d1 stadium."""
        stage = StageGeometry.build(aspect_ratio=3)
        a, r = 6e-3, 2e-3
        for x, y in layout_emitters(stage):
            dx = max(0.0, abs(x) - a)
            assert math.hypot(dx, y) == pytest.approx(r, rel=1e-9)

    def test_tip_spacing(self):
        """Test the nearest-neighbour distance."""
        assert tip_spacing(StageGeometry.build(tip_count=3)) == pytest.approx(3.4641e-3, rel=1e-4)
        assert tip_spacing(StageGeometry.build(tip_count=1)) is None
        stage = StageGeometry.build(aspect_ratio=2)
        assert tip_spacing(stage) == pytest.approx(min(_pairwise(layout_emitters(stage))))

    def test_overlapping_tips(self):
        """Test that tip bases wider than their share of the lip are refused."""
        stage = StageGeometry.build(tip_count=20, tip_angle=60)
        with pytest.raises(LayoutError, match="do not fit"):
            layout_emitters(stage)


class TestClearanceCheck:
    """Test the spacing rules."""

    def test_default_stage(self):
        """Test that a 1 mm bend leaves the tips inside the Warburg radius."""
        report = clearance_check(StageGeometry.build(tip_count=3), 1.5)
        assert report.rules() == ("wall_clearance",)
        assert report.soft == report.violations
        assert not report.has_hard

    def test_compliant_stage(self):
        """Test that a deeper bend clears the wall rule."""
        report = clearance_check(StageGeometry.build(tip_count=3, bend_depth=2e-3), 1.5)
        assert report.ok

    def test_tip_spacing_rule(self):
        """Test that five tips on a 4 mm circle crowd each other."""
        report = clearance_check(StageGeometry.build(tip_count=5, bend_depth=2e-3), 1.5)
        (violation,) = report.violations
        assert violation.rule == "tip_spacing"
        assert violation.measured == pytest.approx(2.351e-3, rel=1e-3)
        assert violation.threshold == pytest.approx(2 * warburg_radius(2e-3))

    def test_reverse_corona_is_soft(self):
        """Test the soft band of inter-stage factors."""
        report = clearance_check(StageGeometry.build(tip_count=3, bend_depth=2e-3), 1.2)
        assert report.rules() == ("interstage_reverse_corona",)
        assert report.violations[0].severity is Severity.SOFT

    def test_arcing_is_hard(self):
        """Test that an inter-stage factor below one is a hard violation."""
        report = clearance_check(StageGeometry.build(tip_count=3, bend_depth=2e-3), 0.8)
        assert report.rules() == ("interstage_arcing",)
        assert report.has_hard


class TestOnsetPenalty:
    """Test the geometric onset rise."""

    def test_default_wall_coeff(self):
        """Test the slope anchored at 200 V for 1.25 mm at a 2 mm gap."""
        assert OnsetPenalty().wall_coeff == pytest.approx(881.4, rel=1e-3)
        assert OnsetPenalty().tip_coeff == 400.0

    def test_anchor(self):
        """Test that a 1.25 mm clearance adds 200 V."""
        stage = StageGeometry.build(tip_count=3, lateral=0.75e-3)
        assert onset_penalty(stage) == pytest.approx(200.0)

    def test_deficits(self):
        """Test the normalized deficits of the default stage."""
        r = warburg_radius(2e-3)
        wall, tip = clearance_deficits(StageGeometry.build(tip_count=3))
        assert wall == pytest.approx((r - math.sqrt(2) * 1e-3) / r)
        assert tip == 0.0

    def test_compliant_stage_has_no_penalty(self):
        """Test that satisfied rules cost nothing."""
        assert onset_penalty(StageGeometry.build(tip_count=3, bend_depth=2e-3)) == 0.0

    @pytest.mark.parametrize("gap", [1e-3, 2e-3, 3e-3])
    @pytest.mark.parametrize("lateral", [0.5e-3, 1e-3, 1.5e-3])
    @pytest.mark.parametrize("bend_depth", [0.0, 1e-3, 2e-3, 3e-3])
    @pytest.mark.parametrize("tip_count", [1, 2, 3, 5])
    def test_zero_exactly_when_rules_hold(self, gap, lateral, bend_depth, tip_count):
        """Test that the penalty vanishes whenever wall clearance and tip spacing are satisfied."""
        stage = StageGeometry.build(tip_count=tip_count, lateral=lateral, gap=gap, bend_depth=bend_depth)
        spacing_rules = {"wall_clearance", "tip_spacing"} & set(clearance_check(stage, 1.5).rules())
        if spacing_rules:
            assert onset_penalty(stage) > 0.0
        else:
            assert onset_penalty(stage) == 0.0

    def test_custom_slopes(self):
        """Test that both deficits use their own slope."""
        stage = StageGeometry.build(tip_count=5)
        wall, tip = clearance_deficits(stage)
        assert onset_penalty(stage, OnsetPenalty(100.0, 50.0)) == pytest.approx(100.0 * wall + 50.0 * tip)

    def test_negative_slopes(self):
        """Test that slopes cannot be negative."""
        with pytest.raises(DomainError):
            OnsetPenalty(-1.0, 0.0)


class TestElectrodeOutline:
    """Test the fabrication outlines."""

    def test_edge_vertices(self):
        """Test three vertices per tip plus the lip samples."""
        outline = electrode_outline(StageGeometry.build(aspect_ratio=2))
        assert len(outline.edge) == 3 * 8 + outline.base_vertex_count

    def test_apexes_in_edge(self):
        """Test that every tip apex is an edge vertex."""
        stage = StageGeometry.build(tip_count=3)
        outline = electrode_outline(stage)
        for tip in layout_emitters(stage):
            assert tip in outline.edge

    def test_groups(self):
        """Test the emitter and collector polyline groups."""
        outline = electrode_outline(StageGeometry.build(tip_count=3))
        assert outline.emitter == (outline.rim, outline.edge)
        assert outline.collector[0] == outline.collector_rim

    def test_wires_clipped_to_duct(self):
        """Test that the grid wires stay inside a 6 mm circular duct."""
        outline = electrode_outline(StageGeometry.build(tip_count=3))
        assert len(outline.wires) == 10
        for wire in outline.wires:
            for x, y in wire:
                assert math.hypot(x, y) <= 3e-3 + 1e-12

    def test_overlap_refused(self):
        """Test that the outline shares the layout check."""
        with pytest.raises(LayoutError):
            electrode_outline(StageGeometry.build(tip_count=20, tip_angle=60))
