"""Deterministic least-squares calibration of the corona, thrust and stacking models.

Fits work on sweeps of ``(voltage, current, force)`` samples. Replicate trials
are averaged per device first and then across devices, with the standard
error of the mean taken across device means.
"""

import logging
import math
import warnings
from collections.abc import Sequence
from dataclasses import dataclass, field, replace

import numpy as np
import pandas as pd
from scipy.optimize import minimize_scalar, nnls

from .geometry import OnsetPenalty, StageGeometry, clearance_deficits, onset_penalty
from .physics import CoronaModel, FluidMedium
from .schema import Validated, unit, validator
from .stack import StageDegradation, ThrusterDesign, stage_sum
from .utils.constants import (
    DEFAULT_TIP_PENALTY,
    MIN_THRUST_EFFECTIVENESS,
    NOISE_FLOOR_FACTOR,
    ONSET_SCAN_POINTS,
    ONSET_TOLERANCE,
    STAGE_FACTOR_RESOLUTION,
    SUB_ONSET_FRACTION,
    SUPERLINEAR_TOLERANCE,
    VOLTAGE_SNAP,
)
from .utils.exceptions import (
    ClampedParameterWarning,
    CurveMismatchError,
    DomainError,
    InsufficientDataError,
    NoDischargeError,
    SuperlinearDataWarning,
    UndefinedDispersionWarning,
    UnidentifiableError,
)
from .utils.types import FloatArray

__all__ = [
    "Sample",
    "MeasuredCurve",
    "CalibrationParams",
    "FitResult",
    "TrialAggregate",
    "fit_iv",
    "fit_thrust_effectiveness",
    "fit_stage_factor",
    "fit_onset_penalty",
    "aggregate_trials",
    "calibrate_from_sweeps",
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Sample(Validated):
    """One measured drive condition; ``force`` is ``None`` when not recorded."""

    voltage: float = field(metadata=unit("V"))
    current: float = field(metadata=unit("A"))
    force: float | None = field(default=None, metadata=unit("N"))

    @validator
    def check_values(self) -> None:
        if not (math.isfinite(self.voltage) and self.voltage >= 0):
            raise DomainError(f"sample voltage must be non-negative, got {self.voltage!r}")
        if not (math.isfinite(self.current) and self.current >= 0):
            raise DomainError(f"sample current must be non-negative, got {self.current!r}")
        if self.force is not None and not (math.isfinite(self.force) and self.force >= 0):
            raise DomainError(f"sample force must be non-negative, got {self.force!r}")


@dataclass(frozen=True)
class MeasuredCurve(Validated):
    """A voltage sweep of one trial on one device."""

    device_id: str
    trial_id: str
    samples: tuple[Sample, ...]
    geometry_tag: str = ""

    @validator
    def check_order(self) -> None:
        voltages = [s.voltage for s in self.samples]
        if any(b <= a for a, b in zip(voltages, voltages[1:], strict=False)):
            raise DomainError(f"curve {self.device_id}/{self.trial_id}: voltages must increase strictly")

    @property
    def voltages(self) -> FloatArray:
        return np.array([s.voltage for s in self.samples], dtype=float)

    @property
    def currents(self) -> FloatArray:
        return np.array([s.current for s in self.samples], dtype=float)

    @property
    def forces(self) -> FloatArray:
        """Forces with ``nan`` where none was recorded."""
        return np.array([np.nan if s.force is None else s.force for s in self.samples], dtype=float)


def _default_wall_coeff() -> float:
    return OnsetPenalty().wall_coeff


@dataclass(frozen=True)
class CalibrationParams(Validated):
    """Every fitted coefficient of the performance model."""

    corona: CoronaModel
    degradation: StageDegradation = field(default_factory=StageDegradation)
    onset_wall_coeff: float = field(default_factory=_default_wall_coeff, metadata=unit("V"))
    onset_tip_coeff: float = field(default=DEFAULT_TIP_PENALTY, metadata=unit("V"))
    ion_mobility_override: float | None = field(default=None, metadata=unit("m2_per_Vs"))

    @validator
    def check_coefficients(self) -> None:
        if self.onset_wall_coeff < 0 or self.onset_tip_coeff < 0:
            raise DomainError("onset penalty slopes must be non-negative")
        if self.ion_mobility_override is not None and not self.ion_mobility_override > 0:
            raise DomainError(f"ion_mobility_override must be positive, got {self.ion_mobility_override!r}")

    @classmethod
    def default(cls) -> "CalibrationParams":
        """Uncalibrated starting point: C = 1e-11 A/V² per tip, V0 = 2.4 kV, beta = k = 1."""
        return cls(corona=CoronaModel(1e-11, 2400.0))

    @property
    def penalty(self) -> OnsetPenalty:
        return OnsetPenalty(self.onset_wall_coeff, self.onset_tip_coeff)

    def medium_for(self, medium: FluidMedium) -> FluidMedium:
        """The medium with the fitted ion mobility, if one was fitted."""
        if self.ion_mobility_override is None:
            return medium
        return replace(medium, ion_mobility=self.ion_mobility_override)


@dataclass(frozen=True)
class FitResult:
    """Outcome of a fit.

    Attributes:
        params: Calibration with the fitted coefficients replaced
        residual_rms: Root-mean-square residual in the units of the fitted quantity
        sample_count: Observations that entered the fit
        converged: Whether the refinement reached its tolerance
        fitted: Names of the coefficients this fit determined
    """

    params: CalibrationParams
    residual_rms: float
    sample_count: int
    converged: bool
    fitted: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.residual_rms >= 0:
            raise DomainError(f"residual_rms must be non-negative, got {self.residual_rms!r}")


@dataclass(frozen=True)
class TrialAggregate:
    """Mean curve over devices and trials with the standard error across device means."""

    curve: MeasuredCurve
    current_sem: tuple[float, ...]
    force_sem: tuple[float, ...]
    device_count: int
    trial_count: int


def _noise_floor(current: FloatArray, factor: float) -> float:
    """``factor`` times the RMS of the leading samples below a small share of the peak current."""
    quiet = current < SUB_ONSET_FRACTION * current.max()
    leading = np.logical_and.accumulate(quiet)
    if not leading.any():
        return 0.0
    return factor * float(np.sqrt(np.mean(current[leading] ** 2)))


def _iv_residual(voltage: FloatArray, current: FloatArray, onset: float) -> tuple[float, float]:
    """Best conductance at a fixed onset and the residual sum of squares."""
    x = voltage * (voltage - onset)
    coeff = float(x @ current / (x @ x))
    r = current - coeff * x
    return coeff, float(r @ r)


def _fit_iv_arrays(
    voltage: FloatArray, current: FloatArray, noise_factor: float
) -> tuple[float, float, float, int, bool]:
    if not (current > 0).any():
        raise NoDischargeError("No corona current in the sweep; every sample is zero")

    floor = _noise_floor(current, noise_factor)
    supra = current > max(floor, 0.0)
    count = int(supra.sum())
    if count < 3:
        raise InsufficientDataError(
            f"Current-voltage fit needs at least 3 samples above the noise floor, got {count}",
            suggestion="Extend the sweep above the onset voltage.",
        )
    v, i = voltage[supra], current[supra]
    v_first = float(v[0])

    grid = np.linspace(0.0, v_first, ONSET_SCAN_POINTS)
    x = v[None, :] * (v[None, :] - grid[:, None])
    coeffs = (x @ i) / np.einsum("ij,ij->i", x, x)
    sse = np.sum((i[None, :] - coeffs[:, None] * x) ** 2, axis=1)
    best = int(np.argmin(sse))

    lo = grid[max(best - 1, 0)]
    hi = grid[min(best + 1, len(grid) - 1)]
    onset, converged = float(grid[best]), True
    if hi > lo:
        refined = minimize_scalar(
            lambda v0: _iv_residual(v, i, v0)[1],
            bounds=(lo, hi),
            method="bounded",
            options={"xatol": ONSET_TOLERANCE},
        )
        converged = bool(refined.success)
        if refined.fun <= sse[best]:
            onset = float(refined.x)
    coeff, residual = _iv_residual(v, i, onset)

    # exact polish from the linear form I = a V^2 + b V
    (a, b), *_ = np.linalg.lstsq(np.column_stack([v * v, v]), i, rcond=None)
    if a > 0 and 0.0 <= -b / a <= v_first:
        polished_coeff, polished = _iv_residual(v, i, float(-b / a))
        if polished < residual:
            onset, coeff, residual = float(-b / a), polished_coeff, polished

    return coeff, float(onset), math.sqrt(residual / count), count, converged


def fit_iv(
    curve: MeasuredCurve,
    tip_count: int = 1,
    base: CalibrationParams | None = None,
    noise_factor: float = NOISE_FLOOR_FACTOR,
) -> FitResult:
    """Fit ``I = C V (V - V0)`` to the supra-onset samples of a sweep.

    Onset candidates are scanned on a grid between 0 and the first discharging
    voltage, with the best conductance solved in closed form at each; the best
    grid cell is refined by bounded Brent minimization. Samples at or below
    ``noise_factor`` times the RMS of the quiet leading samples are excluded.

    Args:
        curve: Measured sweep
        tip_count: Emitter tips the current is spread over; ``C`` is returned per tip
        base: Calibration whose other coefficients are kept
        noise_factor: Multiple of the quiet-sample RMS that counts as noise

    Raises:
        NoDischargeError: If every current is zero
        InsufficientDataError: If fewer than 3 samples lie above the noise floor
    """
    if tip_count < 1:
        raise DomainError(f"tip_count must be at least 1, got {tip_count!r}")
    base = base or CalibrationParams.default()
    coeff, onset, rms, count, converged = _fit_iv_arrays(curve.voltages, curve.currents, noise_factor)
    corona = replace(base.corona, conductance_coeff=coeff / tip_count, onset_voltage=onset)
    logger.debug("fit_iv %s/%s: C=%.6g V0=%.6g rms=%.3g", curve.device_id, curve.trial_id, coeff, onset, rms)
    return FitResult(replace(base, corona=corona), rms, count, converged, ("conductance_coeff", "onset_voltage"))


def _clamp_effectiveness(beta: float) -> float:
    if beta > 1:
        warnings.warn(f"thrust effectiveness {beta:.4g} exceeds 1; clamped to 1", ClampedParameterWarning, stacklevel=3)
        return 1.0
    if beta < MIN_THRUST_EFFECTIVENESS:
        warnings.warn(
            f"thrust effectiveness {beta:.4g} is not positive; clamped to {MIN_THRUST_EFFECTIVENESS:g}",
            ClampedParameterWarning,
            stacklevel=3,
        )
        return MIN_THRUST_EFFECTIVENESS
    return beta


def _fit_effectiveness_arrays(
    current: FloatArray, force: FloatArray, gap: float, mobility: float
) -> tuple[float, float, int]:
    paired = (current > 0) & ~np.isnan(force)
    count = int(paired.sum())
    if count == 0:
        raise InsufficientDataError("Thrust effectiveness fit needs samples with both current and force")
    ideal = current[paired] * gap / mobility
    measured = force[paired]
    beta = _clamp_effectiveness(float(measured @ ideal / (ideal @ ideal)))
    residual = measured - beta * ideal
    return beta, math.sqrt(float(residual @ residual) / count), count


def fit_thrust_effectiveness(
    curve: MeasuredCurve,
    gap: float,
    medium: FluidMedium | None = None,
    base: CalibrationParams | None = None,
) -> FitResult:
    """Least-squares ratio ``beta`` of measured force to ``I d / mu``, through the origin.

    Raises:
        InsufficientDataError: If no sample carries both current and force
    """
    if not gap > 0:
        raise DomainError(f"gap must be positive, got {gap!r}")
    base = base or CalibrationParams.default()
    medium = base.medium_for(medium or FluidMedium())
    beta, rms, count = _fit_effectiveness_arrays(curve.currents, curve.forces, gap, medium.ion_mobility)
    corona = replace(base.corona, thrust_effectiveness=beta)
    return FitResult(replace(base, corona=corona), rms, count, True, ("thrust_effectiveness",))


def _stage_sums(factors: FloatArray, stage_count: int) -> FloatArray:
    return np.sum(factors[:, None] ** np.arange(stage_count)[None, :], axis=1)


def fit_stage_factor(
    single_stage_thrust: float,
    multi: Sequence[tuple[int, float]],
    base: CalibrationParams | None = None,
) -> FitResult:
    """Fit the per-stage thrust multiplier ``k`` from stacks of known stage count.

    The squared error of ``T_N - T1 (1 + k + ... + k^(N-1))`` is scanned on a
    0.001 grid over (0, 1] and refined with a bounded scalar minimization.
    Data growing faster than ``N T1`` cannot be represented and pins ``k = 1``.

    Warns:
        SuperlinearDataWarning: If some ``T_N`` exceeds ``N T1`` by more than 1 %
    """
    if not single_stage_thrust > 0:
        raise DomainError(f"single_stage_thrust must be positive, got {single_stage_thrust!r}")
    observations = [(int(n), float(t)) for n, t in multi if n >= 2]
    if not observations:
        raise InsufficientDataError("Stage factor fit needs at least one observation with 2 or more stages")
    base = base or CalibrationParams.default()

    def sse(factors: FloatArray) -> FloatArray:
        total = np.zeros_like(factors)
        for n, t in observations:
            total += (t - single_stage_thrust * _stage_sums(factors, n)) ** 2
        return total

    def result(factor: float, converged: bool) -> FitResult:
        rms = math.sqrt(float(sse(np.array([factor]))[0]) / len(observations))
        params = replace(base, degradation=StageDegradation(factor))
        return FitResult(params, rms, len(observations), converged, ("degradation",))

    superlinear = [(n, t) for n, t in observations if t > n * single_stage_thrust * (1 + SUPERLINEAR_TOLERANCE)]
    if superlinear:
        n, t = superlinear[0]
        warnings.warn(
            f"{n}-stage thrust {t:.4g} N exceeds {n} x single-stage thrust; degradation factor set to 1",
            SuperlinearDataWarning,
            stacklevel=2,
        )
        return result(1.0, True)

    steps = int(round(1 / STAGE_FACTOR_RESOLUTION))
    grid = np.arange(1, steps + 1) * STAGE_FACTOR_RESOLUTION
    grid_sse = sse(grid)
    best = int(np.argmin(grid_sse))
    refined = minimize_scalar(
        lambda k: float(sse(np.array([k]))[0]),
        bounds=(grid[max(best - 1, 0)], grid[min(best + 1, steps - 1)]),
        method="bounded",
        options={"xatol": 1e-12},
    )
    factor = float(grid[best])
    if refined.fun < grid_sse[best]:
        factor = min(float(refined.x), 1.0)
    logger.debug("fit_stage_factor: k=%.6f", factor)
    return result(factor, bool(refined.success))


def fit_onset_penalty(
    observations: Sequence[tuple[StageGeometry, float]],
    base: CalibrationParams | None = None,
) -> FitResult:
    """Fit the wall and tip-spacing onset slopes from onsets measured on several geometries.

    The model is ``V0_measured = V0 + k_wall D_wall + k_tip D_tip`` with the
    normalized clearance deficits of each geometry; the slopes are
    non-negative and a slope whose deficit never occurs is zero.

    Raises:
        UnidentifiableError: If fewer than two distinct geometries are given,
            none satisfies all clearances, or the deficits are collinear
    """
    if len({stage for stage, _ in observations}) < 2:
        raise UnidentifiableError("Onset penalty fit needs onsets from at least two distinct geometries")
    base = base or CalibrationParams.default()

    deficits = np.array([clearance_deficits(stage) for stage, _ in observations], dtype=float)
    onsets = np.array([v0 for _, v0 in observations], dtype=float)
    if not np.any(np.all(deficits == 0, axis=1)):
        raise UnidentifiableError(
            "Onset penalty fit needs a geometry with every clearance satisfied",
            suggestion="Add a measurement of a stage whose tips clear the wall and each other.",
        )

    design = np.column_stack([np.ones(len(onsets)), deficits])
    active = np.flatnonzero(np.any(design != 0, axis=0))
    if np.linalg.matrix_rank(design[:, active]) < len(active):
        raise UnidentifiableError("Wall and tip-spacing deficits vary together; their slopes cannot be separated")

    solution, rnorm = nnls(design[:, active], onsets)
    coefficients = np.zeros(3)
    coefficients[active] = solution
    intercept, wall, tip = (float(c) for c in coefficients)

    corona = replace(base.corona, onset_voltage=intercept)
    params = replace(base, corona=corona, onset_wall_coeff=wall, onset_tip_coeff=tip)
    rms = float(rnorm) / math.sqrt(len(onsets))
    return FitResult(params, rms, len(onsets), True, ("onset_voltage", "onset_wall_coeff", "onset_tip_coeff"))


def _curves_frame(curves: Sequence[MeasuredCurve]) -> pd.DataFrame:
    rows = [
        {
            "device_id": c.device_id,
            "trial_id": c.trial_id,
            "point": k,
            "voltage": s.voltage,
            "current": s.current,
            "force": np.nan if s.force is None else s.force,
        }
        for c in curves
        for k, s in enumerate(c.samples)
    ]
    return pd.DataFrame(rows)


def aggregate_trials(curves: Sequence[MeasuredCurve]) -> TrialAggregate:
    """Average replicate sweeps: trials per device, then devices.

    Raises:
        InsufficientDataError: If no curve is given
        CurveMismatchError: If the curves differ in geometry tag or voltage grid

    Warns:
        UndefinedDispersionWarning: If all curves come from one device
    """
    if not curves:
        raise InsufficientDataError("No curves to aggregate")
    tags = sorted({c.geometry_tag for c in curves})
    if len(tags) > 1:
        raise CurveMismatchError(f"Curves mix geometry tags {', '.join(repr(t) for t in tags)}")
    reference = curves[0].voltages
    for c in curves[1:]:
        if len(c.samples) != len(reference) or np.max(np.abs(c.voltages - reference)) > VOLTAGE_SNAP:
            raise CurveMismatchError(
                f"Curve {c.device_id}/{c.trial_id} is on a different voltage grid than "
                f"{curves[0].device_id}/{curves[0].trial_id}"
            )

    frame = _curves_frame(curves)
    device_means = frame.groupby(["device_id", "point"], sort=True)[["voltage", "current", "force"]].mean()
    by_point = device_means.groupby(level="point")
    mean = by_point.mean()
    sem = by_point.sem(ddof=1)
    device_count = frame["device_id"].nunique()
    if device_count < 2:
        warnings.warn(
            "Standard error of the mean is undefined for a single device",
            UndefinedDispersionWarning,
            stacklevel=2,
        )

    samples = tuple(
        Sample(
            voltage=float(row.voltage),
            current=float(row.current),
            force=None if math.isnan(row.force) else float(row.force),
        )
        for row in mean.itertuples()
    )
    curve = MeasuredCurve("mean", "mean", samples, tags[0])
    return TrialAggregate(
        curve=curve,
        current_sem=tuple(float(v) for v in sem["current"]),
        force_sem=tuple(float(v) for v in sem["force"]),
        device_count=int(device_count),
        trial_count=len(curves),
    )


def calibrate_from_sweeps(
    curves: Sequence[MeasuredCurve],
    design: ThrusterDesign,
    base: CalibrationParams | None = None,
    medium: FluidMedium | None = None,
    pooled: bool = False,
    stage_observations: Sequence[tuple[int, float]] | None = None,
) -> FitResult:
    """Calibrate the corona law, thrust effectiveness and optionally ``k`` from sweeps of a design.

    Sweeps are averaged with ``aggregate_trials`` unless ``pooled`` is set, in
    which case every raw sample enters the fits. Stack current and force are
    reduced to one stage (``I / N`` and ``F / (1 + k + ... + k^(N-1))``) and the
    fitted onset is corrected for the stage's geometric onset penalty.

    Args:
        curves: Sweeps of the design
        design: The measured thruster
        base: Calibration providing penalty slopes and the starting ``k``
        medium: Working gas
        pooled: Fit all raw samples instead of the device-mean curve
        stage_observations: ``(stage_count, thrust)`` pairs including ``N = 1``
            to fit the degradation factor first
    """
    base = base or CalibrationParams.default()
    medium = medium or FluidMedium()
    fitted: list[str] = []

    if stage_observations:
        singles = [t for n, t in stage_observations if n == 1]
        if not singles:
            raise InsufficientDataError("Stage factor fit needs a single-stage thrust observation")
        stage_fit = fit_stage_factor(float(np.mean(singles)), stage_observations, base)
        base = stage_fit.params
        fitted.extend(stage_fit.fitted)

    if pooled:
        frame = _curves_frame(curves).sort_values("voltage", kind="stable")
        voltage = frame["voltage"].to_numpy(float)
        current = frame["current"].to_numpy(float)
        force = frame["force"].to_numpy(float)
    else:
        curve = aggregate_trials(curves).curve
        voltage, current, force = curve.voltages, curve.currents, curve.forces

    stage = design.stage
    stages = design.stage_count
    current = current / stages
    force = force / stage_sum(base.degradation.factor, stages)

    coeff, onset, rms, count, converged = _fit_iv_arrays(voltage, current, NOISE_FLOOR_FACTOR)
    onset -= onset_penalty(stage, base.penalty)
    if not onset > 0:
        warnings.warn(
            f"unobstructed onset voltage {onset:.4g} V is not positive; clamped to 1 V",
            ClampedParameterWarning,
            stacklevel=2,
        )
        onset = 1.0
    fitted.extend(("conductance_coeff", "onset_voltage"))

    beta = base.corona.thrust_effectiveness
    if not np.isnan(force).all():
        beta, _, _ = _fit_effectiveness_arrays(current, force, stage.gap, base.medium_for(medium).ion_mobility)
        fitted.append("thrust_effectiveness")

    corona = CoronaModel(coeff / stage.emitter.tip_count, onset, beta)
    logger.info(
        "calibrated C=%.6g A/V2 per tip, V0=%.6g V, beta=%.4f, k=%.4f",
        corona.conductance_coeff,
        onset,
        beta,
        base.degradation.factor,
    )
    return FitResult(replace(base, corona=corona), rms, count, converged, tuple(fitted))
