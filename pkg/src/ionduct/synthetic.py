"""Seeded synthetic sweeps in the measurement format.

Used by the tests and to produce demonstration data for the ``fit`` command.
Noise is multiplicative and drawn from ``numpy.random.default_rng(seed)``, so
a seed fixes the data exactly. From a shell::

    python -m ionduct.synthetic design.json --voltages 2000:3300:50 --noise 0.02 --seed 7 --out sweeps.csv
"""

import argparse
import sys
from collections.abc import Sequence
from pathlib import Path

import numpy as np

from .calibrate import CalibrationParams, MeasuredCurve, Sample
from .cli import parse_voltage_spec
from .designfile import load_design
from .errors import format_error
from .physics import FluidMedium
from .stack import ThrusterDesign, stack_performance
from .tables import MEASUREMENT_COLUMNS, measurements_frame
from .utils.exceptions import DomainError, IonductError
from .utils.types import PathLike

__all__ = ["synthesize_curve", "synthesize_trials", "write_measurements_csv", "main"]


def synthesize_curve(
    design: ThrusterDesign,
    calib: CalibrationParams,
    voltages: Sequence[float],
    medium: FluidMedium | None = None,
    noise: float = 0.0,
    seed: int = 0,
    device_id: str = "synthetic",
    trial_id: str = "1",
    geometry_tag: str = "",
    with_force: bool = True,
) -> MeasuredCurve:
    """Sweep a modeled thruster: stack current ``N I1`` and total thrust per voltage.

    Args:
        design: Thruster to model
        calib: Calibration the data is generated from
        voltages: Strictly increasing drive voltages
        medium: Working gas
        noise: Relative standard deviation of the multiplicative noise
        seed: Seed of the noise generator
        device_id: Device identifier written to the curve
        trial_id: Trial identifier written to the curve
        geometry_tag: Geometry reference written to the curve
        with_force: Record thrust alongside current
    """
    if noise < 0:
        raise DomainError(f"noise must be non-negative, got {noise!r}")
    medium = calib.medium_for(medium or FluidMedium())
    rng = np.random.default_rng(seed)
    design = ThrusterDesign(design.stage, design.stage_count, calib.corona, design.interstage_factor)

    samples = []
    for voltage in voltages:
        perf = stack_performance(design, float(voltage), calib.degradation, medium, calib.penalty)
        current_scale, force_scale = 1 + noise * rng.standard_normal(2)
        current = max(0.0, perf.current * design.stage_count * current_scale)
        force = max(0.0, perf.total_thrust * force_scale) if with_force else None
        samples.append(Sample(float(voltage), current, force))
    return MeasuredCurve(device_id, trial_id, tuple(samples), geometry_tag)


def synthesize_trials(
    design: ThrusterDesign,
    calib: CalibrationParams,
    voltages: Sequence[float],
    devices: int = 3,
    trials: int = 3,
    medium: FluidMedium | None = None,
    noise: float = 0.0,
    seed: int = 0,
    geometry_tag: str = "",
) -> list[MeasuredCurve]:
    """Replicate sweeps over ``devices x trials``, each with its own derived seed."""
    seeds = np.random.SeedSequence(seed).spawn(devices * trials)
    curves = []
    for d in range(devices):
        for t in range(trials):
            child = int(seeds[d * trials + t].generate_state(1)[0])
            curves.append(
                synthesize_curve(
                    design,
                    calib,
                    voltages,
                    medium,
                    noise,
                    child,
                    device_id=f"D{d + 1}",
                    trial_id=str(t + 1),
                    geometry_tag=geometry_tag,
                )
            )
    return curves


def write_measurements_csv(curves: Sequence[MeasuredCurve], path: PathLike) -> None:
    """Write curves in the measurement format with full float precision."""
    frame = measurements_frame(curves)
    frame.to_csv(path, index=False, columns=list(MEASUREMENT_COLUMNS), lineterminator="\n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="python -m ionduct.synthetic", description="Write seeded synthetic sweeps of a design as a measurement CSV."
    )
    parser.add_argument("design", help="design file (.json/.yaml); its calibration generates the data")
    parser.add_argument("--voltages", required=True, help="sweep start:stop:step or a comma-separated list, V")
    parser.add_argument("--devices", type=int, default=3)
    parser.add_argument("--trials", type=int, default=3)
    parser.add_argument("--noise", type=float, default=0.0, help="relative standard deviation of the noise")
    parser.add_argument("--seed", type=int, default=0, help="seed of the noise generator")
    parser.add_argument("--out", required=True, help="measurement CSV to write")
    parser.add_argument("--set", action="append", default=[], metavar="KEY::PATH=VALUE")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Generate sweeps from a design file and return the exit code."""
    args = build_parser().parse_args(argv)
    try:
        design_file = load_design(args.design, args.set)
        curves = synthesize_trials(
            design_file.design,
            design_file.effective_calibration(),
            parse_voltage_spec(args.voltages),
            devices=args.devices,
            trials=args.trials,
            medium=design_file.medium,
            noise=args.noise,
            seed=args.seed,
            geometry_tag=Path(args.design).stem,
        )
    except IonductError as e:
        sys.stderr.write(format_error(f"error: {e}") + "\n")
        return e.exit_code
    write_measurements_csv(curves, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
