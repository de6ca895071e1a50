"""Command-line interface.

Subcommands::

    ionduct analyze design.json --voltage 3280
    ionduct sweep design.json --voltages 2400:3300:100
    ionduct fit measurements.csv design.json --out calibrated.json
    ionduct optimize space.json --target max_thrust_density --max-voltage 3300 --pareto front.csv
    ionduct geometry design.json --svg stage.svg

Every subcommand accepts ``--set key::path=value`` overrides of the input
document. Reports go to standard output or ``--out``; diagnostics go to
standard error. Exit codes: 0 success, 2 input or schema error, 3 infeasible
or degenerate design, 4 insufficient data.
"""

import argparse
import json
import logging
import math
import sys
from collections.abc import Sequence
from dataclasses import replace
from pathlib import Path
from typing import Any

from . import __version__
from .calibrate import calibrate_from_sweeps
from .designfile import DesignFile, load_design, load_space, save_document
from .errors import format_error, format_success
from .geometry import clearance_check, electrode_outline, inner_area, tip_spacing, warburg_radius
from .optimize import Constraint, Objective, optimize, pareto_front
from .schema import unstructure
from .stack import duct_length, stack_performance
from .svg import write_svg
from .tables import format_csv, pareto_frame, read_measurements, read_stage_observations, sweep_frame, write_table
from .utils.enums import Metric, Target
from .utils.exceptions import DomainError, IonductError

__all__ = ["main", "build_parser", "parse_voltage_spec"]

logger = logging.getLogger(__name__)


def parse_voltage_spec(spec: str) -> list[float]:
    """Parse ``start:stop:step`` (inclusive of ``stop``) or a comma-separated list, in volts.

    Examples:
        >>> parse_voltage_spec("2400:2700:100")
        [2400.0, 2500.0, 2600.0, 2700.0]
        >>> parse_voltage_spec("2500,3000")
        [2500.0, 3000.0]
    """
    try:
        if ":" in spec:
            start, stop, step = (float(part) for part in spec.split(":"))
            if not step > 0 or stop < start:
                raise DomainError(f"voltage sweep '{spec}' needs step > 0 and stop >= start")
            count = int(math.floor((stop - start) / step + 1e-9)) + 1
            return [start + i * step for i in range(count)]
        return [float(part) for part in spec.split(",")]
    except ValueError as e:
        if isinstance(e, DomainError):
            raise
        raise DomainError(f"cannot read voltage specification '{spec}'") from e


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _json(data: Any) -> str:
    return json.dumps(data, indent=2) + "\n"


def _analyze(args: argparse.Namespace, voltages: list[float] | None) -> int:
    design_file = load_design(args.design, args.set)
    calib = design_file.effective_calibration()
    design = replace(design_file.design, corona=calib.corona)
    medium = calib.medium_for(design_file.medium)

    def run(voltage: float):
        return stack_performance(design, voltage, calib.degradation, medium, calib.penalty)

    if voltages is None:
        performance = run(args.voltage)
        report = clearance_check(design.stage, design.interstage_factor)
        record = {
            **unstructure(performance),
            "voltage_V": performance.voltage,
            "inner_area_m2": inner_area(design.stage),
            "duct_length_m": duct_length(design),
            "violations": [unstructure(v) for v in report.violations],
        }
        if args.format == "csv":
            _emit(format_csv(sweep_frame(design, [performance])), args.out)
        else:
            _emit(_json(record), args.out)
        return 0

    frame = sweep_frame(design, [run(v) for v in voltages])
    if args.format == "json":
        _emit(_json(frame.to_dict(orient="records")), args.out)
    else:
        _emit(format_csv(frame), args.out)
    return 0


def cmd_analyze(args: argparse.Namespace) -> int:
    if args.voltages:
        return _analyze(args, parse_voltage_spec(args.voltages))
    if args.voltage is None:
        raise DomainError("analyze needs --voltage or --voltages")
    return _analyze(args, None)


def cmd_sweep(args: argparse.Namespace) -> int:
    return _analyze(args, parse_voltage_spec(args.voltages))


def cmd_fit(args: argparse.Namespace) -> int:
    design_file = load_design(args.design, args.set)
    curves = read_measurements(args.measurements, geometry_tag=Path(args.design).stem)
    stages = read_stage_observations(args.stages) if args.stages else None
    base = design_file.effective_calibration()

    result = calibrate_from_sweeps(curves, design_file.design, base, design_file.medium, args.pooled, stages)
    params = result.params
    calibrated = DesignFile(
        design=replace(design_file.design, corona=params.corona),
        calibration=params,
        medium=design_file.medium,
        provenance="; ".join(p for p in (design_file.provenance, f"calibrated from {Path(args.measurements).name}") if p),
    )

    corona = params.corona
    sys.stderr.write(
        format_success(
            f"fit {len(curves)} curve(s), {result.sample_count} samples: "
            f"C={corona.conductance_coeff:.6g} A/V2 per tip, V0={corona.onset_voltage:.6g} V, "
            f"beta={corona.thrust_effectiveness:.4f}, k={params.degradation.factor:.4f}, "
            f"residual_rms={result.residual_rms:.3g} A"
        )
        + "\n"
    )
    if args.out:
        save_document(calibrated, args.out)
    else:
        _emit(_json(unstructure(calibrated)), None)
    return 0


def _objective(args: argparse.Namespace, voltage_max: float) -> Objective:
    constraints = [Constraint(Metric.VOLTAGE, args.max_voltage if args.max_voltage is not None else voltage_max)]
    if args.min_efficiency is not None:
        constraints.append(Constraint(Metric.EFFICIENCY, args.min_efficiency))
    if args.min_thrust_density is not None:
        constraints.append(Constraint(Metric.THRUST_DENSITY, args.min_thrust_density))
    if args.min_thrust is not None:
        constraints.append(Constraint(Metric.TOTAL_THRUST, args.min_thrust))
    if args.no_soft_violations:
        constraints.append(Constraint(Metric.NO_SOFT_VIOLATIONS))
    return Objective(Target(args.target), tuple(constraints))


def cmd_optimize(args: argparse.Namespace) -> int:
    space_file = load_space(args.space, args.set)
    space = space_file.space
    calib = space_file.calibration
    objective = _objective(args, space.voltage_range[1])

    result = optimize(space, objective, calib, space_file.medium, workers=args.workers, voltage_step=args.voltage_step)
    record = {
        "key": dict(zip(("aspect_ratio", "stage_count", "tip_count", "gap_m", "interstage_factor"), result.key, strict=True)),
        "voltage_V": result.best_voltage,
        "objective": str(objective.target),
        "objective_value": result.objective_value,
        "evaluated_count": result.evaluated_count,
        "feasible_count": result.feasible_count,
        "rejection_counts": result.rejection_counts,
        "metrics": unstructure(result.metrics),
        "design": unstructure(result.best_design),
    }
    if args.format == "csv":
        _emit(format_csv(sweep_frame(result.best_design, [result.metrics])), args.out)
    else:
        _emit(_json(record), args.out)

    if args.pareto:
        low, high = space.voltage_range
        high = min(high, objective.voltage_ceiling)
        count = int(math.floor((high - low) / args.voltage_step + 1e-9)) + 1
        grid = [low + i * args.voltage_step for i in range(count)]
        write_table(pareto_frame(pareto_front(space, calib, space_file.medium, grid)), args.pareto)
    return 0


def cmd_geometry(args: argparse.Namespace) -> int:
    design_file = load_design(args.design, args.set)
    stage = design_file.design.stage
    outline = electrode_outline(stage)
    if args.svg:
        write_svg(outline, args.svg)

    report = clearance_check(stage, design_file.design.interstage_factor)
    summary = {
        "inner_area_m2": inner_area(stage),
        "duct_inner_height_m": stage.height,
        "duct_inner_width_m": stage.width,
        "warburg_radius_m": warburg_radius(stage.gap),
        "tip_spacing_m": tip_spacing(stage),
        "edge_vertex_count": len(outline.edge),
        "collector_wire_count": len(outline.wires),
        "violations": [unstructure(v) for v in report.violations],
    }
    _emit(_json(summary), args.out)
    return 0


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", help="write the report to this path instead of standard output")
    parser.add_argument(
        "--set",
        action="append",
        default=[],
        metavar="KEY::PATH=VALUE",
        help="override a value of the input document (repeatable)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ionduct", description="Ducted multi-stage ionic thruster modeling and design.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log debug messages to standard error")
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="predict the performance of a design")
    analyze.add_argument("design", help="design file (.json/.yaml)")
    analyze.add_argument("--voltage", type=float, help="drive voltage, V")
    analyze.add_argument("--voltages", help="sweep start:stop:step or a comma-separated list, V")
    analyze.add_argument("--format", choices=("csv", "json"), default="json")
    _add_common(analyze)
    analyze.set_defaults(handler=cmd_analyze)

    sweep = sub.add_parser("sweep", help="tabulate a design over a voltage sweep")
    sweep.add_argument("design", help="design file (.json/.yaml)")
    sweep.add_argument("--voltages", required=True, help="sweep start:stop:step or a comma-separated list, V")
    sweep.add_argument("--format", choices=("csv", "json"), default="csv")
    _add_common(sweep)
    sweep.set_defaults(handler=cmd_sweep)

    fit = sub.add_parser("fit", help="calibrate a design from measured sweeps")
    fit.add_argument("measurements", help="CSV with device_id,trial_id,voltage_V,current_A[,force_N]")
    fit.add_argument("design", help="design file of the measured thruster")
    fit.add_argument("--stages", help="CSV with stage_count,thrust_N to fit the stage degradation factor")
    fit.add_argument("--pooled", action="store_true", help="fit all raw samples instead of device means")
    _add_common(fit)
    fit.set_defaults(handler=cmd_fit)

    opt = sub.add_parser("optimize", help="search a design space")
    opt.add_argument("space", help="design-space file (.json/.yaml)")
    opt.add_argument("--target", choices=[t.value for t in Target], default=Target.MAX_THRUST_DENSITY.value)
    opt.add_argument("--max-voltage", type=float, help="voltage ceiling, V (defaults to the space's maximum)")
    opt.add_argument("--min-efficiency", type=float, help="lower bound on thrust efficiency, N/W")
    opt.add_argument("--min-thrust-density", type=float, help="lower bound on thrust density, N/m2")
    opt.add_argument("--min-thrust", type=float, help="lower bound on total thrust, N")
    opt.add_argument("--no-soft-violations", action="store_true", help="reject designs with soft rule violations")
    opt.add_argument("--voltage-step", type=float, default=1.0, help="voltage resolution, V")
    opt.add_argument("--workers", type=int, default=1, help="threads evaluating designs")
    opt.add_argument("--pareto", help="write the thrust density / efficiency front to this CSV")
    opt.add_argument("--format", choices=("csv", "json"), default="json")
    _add_common(opt)
    opt.set_defaults(handler=cmd_optimize)

    geometry = sub.add_parser("geometry", help="export electrode outlines")
    geometry.add_argument("design", help="design file (.json/.yaml)")
    geometry.add_argument("--svg", help="write the outlines to this SVG file")
    _add_common(geometry)
    geometry.set_defaults(handler=cmd_geometry)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Run the command line and return the exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    logging.captureWarnings(True)
    try:
        return int(args.handler(args))
    except IonductError as e:
        sys.stderr.write(format_error(f"error: {e}") + "\n")
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
