"""Parametric emitter, collector and duct geometry with spacing-rule checks.

A stage is a duct of stadium cross-section (height ``h``, width ``w = h AR``)
whose inner wall is the outer contour ``d2`` of the emitter electrode. Emitter
tips are triangles drawn inward from that contour to the inset contour ``d1``
and bent down by ``bend_depth`` towards the collector grid. All lengths are
meters.
"""

import functools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .schema import Validated, unit, validator
from .utils.constants import (
    DEFAULT_BEND_DEPTH,
    DEFAULT_DUCT_HEIGHT,
    DEFAULT_GAP,
    DEFAULT_LATERAL,
    DEFAULT_RIM_WIDTH,
    DEFAULT_TIP_ANGLE,
    DEFAULT_TIP_PENALTY,
    DEFAULT_WIRE_PITCH,
    DEFAULT_WIRE_WIDTH,
    REVERSE_CORONA_FACTOR,
    TIPS_PER_ASPECT_RATIO,
    WALL_PENALTY_ANCHOR,
    WARBURG_COEFF,
)
from .utils.enums import Severity
from .utils.exceptions import DomainError, LayoutError
from .utils.types import Point

__all__ = [
    "EmitterRing",
    "CollectorGrid",
    "StageGeometry",
    "Violation",
    "ConstraintReport",
    "OnsetPenalty",
    "Stadium",
    "ElectrodeOutline",
    "warburg_radius",
    "chord_spacing",
    "tip_to_lip_clearance",
    "inner_area",
    "layout_emitters",
    "tip_spacing",
    "clearance_deficits",
    "clearance_check",
    "onset_penalty",
    "electrode_outline",
]

_REL_TOL = 1e-9


@dataclass(frozen=True)
class EmitterRing(Validated):
    """Emitter electrode: an annulus or rounded rectangle with inward triangular tips.

    ``outer_diameter`` (d2) is the contour where the triangles begin and the
    duct inner wall; ``inner_diameter`` (d1) is the contour the tips reach.
    For aspect ratios above one both contours are stadia of the same straight
    length and the tip count follows the four-tips-per-aspect-ratio rule.
    """

    inner_diameter: float = field(metadata=unit("m"))
    outer_diameter: float = field(metadata=unit("m"))
    tip_count: int
    tip_angle: float = field(default=DEFAULT_TIP_ANGLE, metadata=unit("deg"))
    bend_depth: float = field(default=DEFAULT_BEND_DEPTH, metadata=unit("m"))
    aspect_ratio: float = 1.0
    rim_width: float = field(default=DEFAULT_RIM_WIDTH, metadata=unit("m"))

    @property
    def duct_height(self) -> float:
        """Duct inner height ``h``: the outer contour of the emitter."""
        return self.outer_diameter

    @property
    def lateral(self) -> float:
        """Lateral distance from a tip to the annulus lip, ``(d2 - d1) / 2``."""
        return (self.outer_diameter - self.inner_diameter) / 2

    @validator
    def check_diameters(self) -> None:
        if not 0 < self.inner_diameter < self.outer_diameter:
            raise DomainError(
                f"EmitterRing needs 0 < inner_diameter < outer_diameter, got {self.inner_diameter!r} and {self.outer_diameter!r}"
            )

    @validator
    def check_tips(self) -> None:
        if self.tip_count < 1:
            raise DomainError(f"tip_count must be at least 1, got {self.tip_count!r}")
        if not 0 < self.tip_angle < 180:
            raise DomainError(f"tip_angle must lie in (0, 180) degrees, got {self.tip_angle!r}")
        if self.bend_depth < 0:
            raise DomainError(f"bend_depth must be non-negative, got {self.bend_depth!r}")
        if not self.rim_width > 0:
            raise DomainError(f"rim_width must be positive, got {self.rim_width!r}")

    @validator
    def check_aspect_ratio(self) -> None:
        if not self.aspect_ratio >= 1:
            raise DomainError(f"aspect_ratio must be at least 1, got {self.aspect_ratio!r}")
        if self.aspect_ratio > 1:
            expected = TIPS_PER_ASPECT_RATIO * self.aspect_ratio
            if abs(expected - round(expected)) > _REL_TOL or self.tip_count != round(expected):
                raise DomainError(
                    f"aspect ratio {self.aspect_ratio:g} requires {TIPS_PER_ASPECT_RATIO} x AR tips, got {self.tip_count}"
                )


@dataclass(frozen=True)
class CollectorGrid(Validated):
    """Square collector grid of thin wires."""

    wire_width: float = field(default=DEFAULT_WIRE_WIDTH, metadata=unit("m"))
    pitch: float = field(default=DEFAULT_WIRE_PITCH, metadata=unit("m"))

    @validator
    def check_wires(self) -> None:
        if not 0 < self.wire_width < self.pitch:
            raise DomainError(f"CollectorGrid needs 0 < wire_width < pitch, got {self.wire_width!r} and {self.pitch!r}")


@dataclass(frozen=True)
class StageGeometry(Validated):
    """One acceleration stage: emitter, collector, gap and stadium duct section.

    ``duct_inner_height`` and ``duct_inner_width`` default to the emitter's
    outer contour and ``height x aspect_ratio``; when given they must agree.
    """

    emitter: EmitterRing
    collector: CollectorGrid = field(default_factory=CollectorGrid)
    gap: float = field(default=DEFAULT_GAP, metadata=unit("m"))
    duct_inner_height: float | None = field(default=None, metadata=unit("m"))
    duct_inner_width: float | None = field(default=None, metadata=unit("m"))

    def __post_init__(self) -> None:
        if self.duct_inner_height is None:
            object.__setattr__(self, "duct_inner_height", self.emitter.duct_height)
        if self.duct_inner_width is None:
            object.__setattr__(self, "duct_inner_width", self.height * self.emitter.aspect_ratio)
        super().__post_init__()

    @property
    def height(self) -> float:
        return float(self.duct_inner_height)  # type: ignore[arg-type]

    @property
    def width(self) -> float:
        return float(self.duct_inner_width)  # type: ignore[arg-type]

    @property
    def aspect_ratio(self) -> float:
        return self.emitter.aspect_ratio

    @validator
    def check_gap(self) -> None:
        if not self.gap > 0:
            raise DomainError(f"gap must be positive, got {self.gap!r}")

    @validator
    def check_duct(self) -> None:
        h, w = self.height, self.width
        if not 0 < h <= w:
            raise DomainError(f"duct needs 0 < height <= width, got {h!r} x {w!r}")
        if not math.isclose(h, self.emitter.duct_height, rel_tol=_REL_TOL):
            raise DomainError(f"duct height {h!r} differs from the emitter outer contour {self.emitter.duct_height!r}")
        if not math.isclose(w, h * self.emitter.aspect_ratio, rel_tol=_REL_TOL):
            raise DomainError(f"duct width {w!r} must equal height x aspect ratio {h * self.emitter.aspect_ratio!r}")

    @classmethod
    def build(
        cls,
        aspect_ratio: float = 1.0,
        tip_count: int | None = None,
        duct_height: float = DEFAULT_DUCT_HEIGHT,
        lateral: float = DEFAULT_LATERAL,
        gap: float = DEFAULT_GAP,
        bend_depth: float = DEFAULT_BEND_DEPTH,
        tip_angle: float = DEFAULT_TIP_ANGLE,
        rim_width: float = DEFAULT_RIM_WIDTH,
        collector: CollectorGrid | None = None,
    ) -> "StageGeometry":
        """Build a stage from the design-space parameters.

        ``tip_count`` is required for circular ducts and defaults to
        ``4 x aspect_ratio`` otherwise.

        Examples:
            >>> stage = StageGeometry.build(aspect_ratio=5)
            >>> stage.emitter.tip_count, round(stage.width * 1e3, 9)
            (20, 30.0)
        """
        if tip_count is None:
            if aspect_ratio == 1:
                raise DomainError("tip_count is required for a circular duct")
            tip_count = int(round(TIPS_PER_ASPECT_RATIO * aspect_ratio))
        emitter = EmitterRing(
            inner_diameter=duct_height - 2 * lateral,
            outer_diameter=duct_height,
            tip_count=tip_count,
            tip_angle=tip_angle,
            bend_depth=bend_depth,
            aspect_ratio=aspect_ratio,
            rim_width=rim_width,
        )
        return cls(emitter=emitter, collector=collector or CollectorGrid(), gap=gap)


@dataclass(frozen=True)
class Violation:
    """One broken spacing rule."""

    rule: str
    severity: Severity
    measured: float
    threshold: float
    message: str


@dataclass(frozen=True)
class ConstraintReport:
    """All spacing-rule violations of a stage at an inter-stage factor; empty when compliant."""

    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def hard(self) -> tuple[Violation, ...]:
        return tuple(v for v in self.violations if v.severity is Severity.HARD)

    @property
    def soft(self) -> tuple[Violation, ...]:
        return tuple(v for v in self.violations if v.severity is Severity.SOFT)

    @property
    def has_hard(self) -> bool:
        return bool(self.hard)

    def rules(self) -> tuple[str, ...]:
        return tuple(v.rule for v in self.violations)


def warburg_radius(gap: float) -> float:
    """Space-charge repulsion radius ``arctan(pi/3) d`` of a single tip.

    Examples:
        >>> round(warburg_radius(0.002) * 1e3, 3)
        1.617
    """
    if not gap > 0:
        raise DomainError(f"gap must be positive, got {gap!r}")
    return WARBURG_COEFF * gap


def _default_wall_coeff() -> float:
    clearance, gap, volts = WALL_PENALTY_ANCHOR
    r = warburg_radius(gap)
    return volts / ((r - clearance) / r)


@dataclass(frozen=True)
class OnsetPenalty(Validated):
    """Slopes of the onset-voltage rise per unit normalized clearance deficit.

    The default wall slope puts a 1.25 mm tip-to-lip clearance at a 2 mm gap
    exactly 200 V above the unobstructed onset.
    """

    wall_coeff: float = field(default_factory=_default_wall_coeff, metadata=unit("V"))
    tip_coeff: float = field(default=DEFAULT_TIP_PENALTY, metadata=unit("V"))

    @validator
    def check_slopes(self) -> None:
        if self.wall_coeff < 0 or self.tip_coeff < 0:
            raise DomainError(f"onset penalty slopes must be non-negative, got {self.wall_coeff!r}, {self.tip_coeff!r}")


def chord_spacing(inner_diameter: float, tip_count: int) -> float:
    """Tip-to-tip chord ``d1 sin(pi / n)`` of tips spread evenly on a circle.

    Examples:
        >>> round(chord_spacing(0.004, 3) * 1e3, 2)
        3.46
    """
    if tip_count < 2:
        raise DomainError(f"chord spacing needs at least 2 tips, got {tip_count!r}")
    return inner_diameter * math.sin(math.pi / tip_count)


def tip_to_lip_clearance(lateral: float, bend_depth: float) -> float:
    """Straight-line distance from a bent tip to the annulus lip."""
    if lateral < 0 or bend_depth < 0:
        raise DomainError(f"lateral and bend_depth must be non-negative, got {lateral!r}, {bend_depth!r}")
    return math.hypot(lateral, bend_depth)


def inner_area(stage: StageGeometry) -> float:
    """Stadium cross-section ``pi (h/2)^2 + (w - h) h`` of the duct.

    Examples:
        >>> round(inner_area(StageGeometry.build(aspect_ratio=5)) * 1e6, 2)
        172.27
    """
    h, w = stage.height, stage.width
    return math.pi * (h / 2) ** 2 + (w - h) * h


@dataclass(frozen=True)
class Stadium:
    """Closed stadium contour: straight sides of length ``2 half_length`` capped by semicircles.

    Arc length ``t`` starts at the apex of the left cap and runs counterclockwise.
    """

    half_length: float
    radius: float

    @property
    def perimeter(self) -> float:
        return 2 * math.pi * self.radius + 4 * self.half_length

    def _segments(self) -> tuple[float, float, float, float]:
        quarter = math.pi * self.radius / 2
        t1 = quarter
        t2 = t1 + 2 * self.half_length
        t3 = t2 + math.pi * self.radius
        t4 = t3 + 2 * self.half_length
        return t1, t2, t3, t4

    def locate(self, t: float) -> tuple[int, float]:
        """Segment index (0..4) and local fraction of arc position ``t`` (taken modulo the perimeter)."""
        t = t % self.perimeter
        t1, t2, t3, t4 = self._segments()
        quarter = t1
        if t < t1:
            return 0, t / quarter
        if t < t2:
            return 1, (t - t1) / (t2 - t1)
        if t < t3:
            return 2, (t - t2) / (t3 - t2)
        if t < t4:
            return 3, (t - t3) / (t4 - t3)
        return 4, min((t - t4) / quarter, 1.0)

    def position(self, segment: int, fraction: float) -> float:
        """Arc position of a segment index and local fraction (inverse of ``locate``)."""
        t1, t2, t3, t4 = self._segments()
        starts = (0.0, t1, t2, t3, t4)
        lengths = (t1, t2 - t1, t3 - t2, t4 - t3, self.perimeter - t4)
        return starts[segment] + fraction * lengths[segment]

    def frame(self, t: float) -> tuple[Point, Point, Point]:
        """Point, unit tangent (direction of increasing ``t``) and outward unit normal at ``t``."""
        segment, fraction = self.locate(t)
        a, r = self.half_length, self.radius
        if segment == 1:
            return (-a + 2 * a * fraction, -r), (1.0, 0.0), (0.0, -1.0)
        if segment == 3:
            return (a - 2 * a * fraction, r), (-1.0, 0.0), (0.0, 1.0)
        if segment == 0:
            theta, cx = math.pi + fraction * math.pi / 2, -a
        elif segment == 2:
            theta, cx = -math.pi / 2 + fraction * math.pi, a
        else:
            theta, cx = math.pi / 2 + fraction * math.pi / 2, -a
        c, s = math.cos(theta), math.sin(theta)
        return (cx + r * c, r * s), (-s, c), (c, s)

    def point(self, t: float) -> Point:
        return self.frame(t)[0]

    def sample(self, per_quarter: int = 16) -> list[Point]:
        """Polyline approximation: subdivided caps joined by the straight sides."""
        quarter = math.pi * self.radius / 2
        straight = 2 * self.half_length
        ts = [j * quarter / per_quarter for j in range(per_quarter)]
        if straight > 0:
            ts.append(quarter)
        t_right = quarter + straight
        ts += [t_right + j * 2 * quarter / (2 * per_quarter) for j in range(2 * per_quarter)]
        t_top = t_right + 2 * quarter
        if straight > 0:
            ts.append(t_top)
        t_left = t_top + straight
        ts += [t_left + j * quarter / per_quarter for j in range(per_quarter)]
        return [self.point(t) for t in ts]


def _contours(stage: StageGeometry) -> tuple[Stadium, Stadium]:
    """Inner (tip) and outer (lip) emitter contours of a stage."""
    half_length = (stage.width - stage.height) / 2
    return (
        Stadium(half_length, stage.emitter.inner_diameter / 2),
        Stadium(half_length, stage.emitter.outer_diameter / 2),
    )


def _distance(p: Point, q: Point) -> float:
    return math.hypot(p[0] - q[0], p[1] - q[1])


def _chord_walk(contour: Stadium, chord: float, steps: int) -> list[float]:
    """Arc positions reached by stepping a fixed chord along the contour from ``t = 0``."""
    positions = [0.0]
    t = 0.0
    for _ in range(steps):
        start = contour.point(t)
        t = brentq(lambda u, p=start: _distance(contour.point(u), p) - chord, t, t + chord * math.pi / 2, xtol=1e-15)
        positions.append(t)
    return positions


@functools.lru_cache(maxsize=512)
def _tip_positions(stage: StageGeometry) -> tuple[float, ...]:
    """Arc positions of the tip apexes on the inner contour."""
    inner, _ = _contours(stage)
    n = stage.emitter.tip_count
    perimeter = inner.perimeter
    if n == 1 or inner.half_length == 0:
        return tuple(k * perimeter / n for k in range(n))

    def closure(chord: float) -> float:
        return _chord_walk(inner, chord, n)[-1] - perimeter

    chord = brentq(closure, 2 * perimeter / (math.pi * n), perimeter / n, xtol=1e-15)
    return tuple(_chord_walk(inner, chord, n)[:-1])


def _lip_positions(stage: StageGeometry, tip_positions: tuple[float, ...]) -> list[float]:
    """Arc positions on the outer contour facing each tip along the contour normal."""
    inner, outer = _contours(stage)
    return [outer.position(*inner.locate(t)) for t in tip_positions]


def _tip_half_base(emitter: EmitterRing) -> float:
    return emitter.lateral * math.tan(math.radians(emitter.tip_angle) / 2)


def _check_layout(stage: StageGeometry, lip_positions: list[float]) -> None:
    _, outer = _contours(stage)
    base = 2 * _tip_half_base(stage.emitter)
    n = len(lip_positions)
    gaps = [(lip_positions[(k + 1) % n] - lip_positions[k]) % outer.perimeter or outer.perimeter for k in range(n)]
    if min(gaps) <= base:
        raise LayoutError(
            f"{n} tips with {base * 1e3:.3f} mm bases do not fit on a {outer.perimeter * 1e3:.3f} mm lip contour",
            suggestion="Reduce the tip count or enlarge the duct.",
        )


def layout_emitters(stage: StageGeometry) -> list[Point]:
    """Place the tip apexes on the inner contour, starting at the left cap apex.

    Circular ducts get uniform angular placement. Stadium ducts step a
    constant chord along the contour, with the chord chosen so the walk
    closes after ``n`` steps; neighbouring tips are then equidistant.

    Raises:
        LayoutError: If the triangle bases overlap on the lip contour
    """
    tips = _tip_positions(stage)
    _check_layout(stage, _lip_positions(stage, tips))
    inner, _ = _contours(stage)
    return [inner.point(t) for t in tips]


@functools.lru_cache(maxsize=512)
def tip_spacing(stage: StageGeometry) -> float | None:
    """Nearest-neighbour distance between tips; ``None`` for a single tip."""
    n = stage.emitter.tip_count
    if n < 2:
        return None
    if stage.aspect_ratio == 1:
        return chord_spacing(stage.emitter.inner_diameter, n)
    points = np.asarray(layout_emitters(stage))
    distances = np.hypot(*(points[:, None, :] - points[None, :, :]).transpose(2, 0, 1))
    np.fill_diagonal(distances, np.inf)
    return float(distances.min())


def clearance_deficits(stage: StageGeometry) -> tuple[float, float]:
    """Normalized wall and tip-spacing deficits ``max(0, r - cl) / r`` and ``max(0, 2r - c) / 2r``."""
    r = warburg_radius(stage.gap)
    wall = tip_to_lip_clearance(stage.emitter.lateral, stage.emitter.bend_depth)
    spacing = tip_spacing(stage)
    wall_deficit = max(0.0, r - wall) / r
    tip_deficit = 0.0 if spacing is None else max(0.0, 2 * r - spacing) / (2 * r)
    return wall_deficit, tip_deficit


def clearance_check(stage: StageGeometry, interstage_factor: float) -> ConstraintReport:
    """Check a stage against the spacing rules at an inter-stage factor.

    Rules:
        - ``wall_clearance`` (soft): tip-to-lip clearance below the Warburg radius
        - ``tip_spacing`` (soft): neighbouring tips closer than twice the Warburg radius
        - ``interstage_arcing`` (hard): inter-stage factor below 1
        - ``interstage_reverse_corona`` (soft): inter-stage factor in [1, 1.5)
    """
    r = warburg_radius(stage.gap)
    violations = []

    wall = tip_to_lip_clearance(stage.emitter.lateral, stage.emitter.bend_depth)
    if wall < r:
        violations.append(
            Violation(
                "wall_clearance",
                Severity.SOFT,
                wall,
                r,
                f"tip-to-lip clearance {wall * 1e3:.3f} mm is inside the {r * 1e3:.3f} mm Warburg radius",
            )
        )

    spacing = tip_spacing(stage)
    if spacing is not None and spacing < 2 * r:
        violations.append(
            Violation(
                "tip_spacing",
                Severity.SOFT,
                spacing,
                2 * r,
                f"tip spacing {spacing * 1e3:.3f} mm is below twice the Warburg radius ({2 * r * 1e3:.3f} mm)",
            )
        )

    if interstage_factor < 1:
        violations.append(
            Violation(
                "interstage_arcing",
                Severity.HARD,
                interstage_factor,
                1.0,
                f"inter-stage factor {interstage_factor:g} < 1 arcs along the duct surface",
            )
        )
    elif interstage_factor < REVERSE_CORONA_FACTOR:
        violations.append(
            Violation(
                "interstage_reverse_corona",
                Severity.SOFT,
                interstage_factor,
                REVERSE_CORONA_FACTOR,
                f"inter-stage factor {interstage_factor:g} < {REVERSE_CORONA_FACTOR:g} risks reverse corona",
            )
        )

    return ConstraintReport(tuple(violations))


def onset_penalty(stage: StageGeometry, coefficients: OnsetPenalty | None = None) -> float:
    """Rise of the onset voltage caused by wall and neighbour shielding, V."""
    coefficients = coefficients or OnsetPenalty()
    wall_deficit, tip_deficit = clearance_deficits(stage)
    return coefficients.wall_coeff * wall_deficit + coefficients.tip_coeff * tip_deficit


@dataclass(frozen=True)
class ElectrodeOutline:
    """Closed polylines of one stage, in meters.

    Attributes:
        rim: Outer boundary of the emitter sheet
        edge: Inner boundary of the emitter sheet with the tip triangles
        collector_rim: Outer boundary of the collector sheet
        wires: Collector wires clipped to the duct, one rectangle each
        base_vertex_count: Vertices of ``edge`` that are not tip vertices
    """

    rim: tuple[Point, ...]
    edge: tuple[Point, ...]
    collector_rim: tuple[Point, ...]
    wires: tuple[tuple[Point, ...], ...]
    base_vertex_count: int

    @property
    def emitter(self) -> tuple[tuple[Point, ...], ...]:
        return (self.rim, self.edge)

    @property
    def collector(self) -> tuple[tuple[Point, ...], ...]:
        return (self.collector_rim, *self.wires)


def _emitter_edge(stage: StageGeometry, per_gap: int) -> tuple[list[Point], int]:
    inner, outer = _contours(stage)
    tips = _tip_positions(stage)
    lips = _lip_positions(stage, tips)
    _check_layout(stage, lips)
    half_base = _tip_half_base(stage.emitter)
    n = len(tips)

    vertices: list[Point] = []
    base_count = 0
    for k in range(n):
        (cx, cy), (tx, ty), _ = outer.frame(lips[k])
        vertices.append((cx - half_base * tx, cy - half_base * ty))
        vertices.append(inner.point(tips[k]))
        vertices.append((cx + half_base * tx, cy + half_base * ty))

        span = (lips[(k + 1) % n] - lips[k]) % outer.perimeter or outer.perimeter
        samples = max(1, min(per_gap, int(span / (3 * half_base)) - 1))
        for j in range(samples):
            vertices.append(outer.point(lips[k] + span * (j + 0.5) / samples))
        base_count += samples
    return vertices, base_count


def _collector_wires(stage: StageGeometry) -> list[tuple[Point, ...]]:
    _, outer = _contours(stage)
    a, r = outer.half_length, outer.radius
    half = stage.collector.wire_width / 2
    pitch = stage.collector.pitch

    def half_height(x: float) -> float:
        excess = abs(x) - a
        if excess <= 0:
            return r
        return math.sqrt(r * r - excess * excess) if excess < r else 0.0

    wires: list[tuple[Point, ...]] = []
    reach = int(math.floor((a + r) / pitch))
    for i in range(-reach, reach + 1):
        x = i * pitch
        y = min(half_height(x - half), half_height(x + half))
        if y > 0:
            wires.append(((x - half, -y), (x + half, -y), (x + half, y), (x - half, y)))
    reach = int(math.floor(r / pitch))
    for j in range(-reach, reach + 1):
        y = j * pitch
        edge = max(abs(y - half), abs(y + half))
        if edge < r:
            x = a + math.sqrt(r * r - edge * edge)
            wires.append(((-x, y - half), (x, y - half), (x, y + half), (-x, y + half)))
    return wires


def electrode_outline(stage: StageGeometry, per_gap: int = 8, per_quarter: int = 16) -> ElectrodeOutline:
    """Fabrication outlines of the emitter and collector of a stage.

    The emitter edge follows the lip contour with ``3 n`` tip vertices (base,
    apex, base) and up to ``per_gap`` lip samples between neighbouring tips.

    Raises:
        DomainError: If the tips have no height
        LayoutError: If the tips do not fit on the lip contour
    """
    if not stage.emitter.lateral > 0:
        raise DomainError("emitter tips have no height")
    _, outer = _contours(stage)
    rim = Stadium(outer.half_length, outer.radius + stage.emitter.rim_width).sample(per_quarter)
    edge, base_count = _emitter_edge(stage, per_gap)
    return ElectrodeOutline(
        rim=tuple(rim),
        edge=tuple(edge),
        collector_rim=tuple(rim),
        wires=tuple(_collector_wires(stage)),
        base_vertex_count=base_count,
    )
