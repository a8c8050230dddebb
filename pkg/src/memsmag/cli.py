"""Command line front end.

Exit codes: 0 on success, 1 for invalid input (bad flags, unreadable or
invalid config), 2 for runtime failures and failed verification.
"""

import argparse
import os
import sys

import numpy as np

from .dynamics import frequency_response, simulate_transient
from .errors import MemsmagError, ParseError, ValidationError
from .mechanics import lumped_resonator
from .noise import noise_budget
from .scenario import Scenario, load_scenario
from .transduction import LorentzDesign
from .explorer import (
    emit_report,
    optimize,
    oracle_check,
    run_scenario,
    sweep,
)

CONFIG_DIR_ENV = "MEMSMAG_CONFIG_DIR"
DEFAULT_CONFIG_NAME = "default.yaml"


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; here 2 means runtime failure,
    # so usage problems are remapped onto the invalid-input code.
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _config_path(args) -> str:
    if args.config:
        return args.config
    return os.path.join(os.environ.get(CONFIG_DIR_ENV, "."), DEFAULT_CONFIG_NAME)


def _load(args) -> Scenario:
    return load_scenario(_config_path(args))


def _scenario_resonator(scenario: Scenario):
    sensor = scenario.sensor
    if isinstance(sensor, LorentzDesign):
        return lumped_resonator(sensor.support_beam, scenario.quality_factor)
    return lumped_resonator(
        sensor.suspension,
        scenario.quality_factor,
        tip_mass=sensor.plate_mass / sensor.suspension_count,
    )


def _cmd_simulate(args) -> int:
    report = run_scenario(_load(args))
    emit_report(report, args.format, args.out)
    return 0


def _cmd_sweep(args) -> int:
    result = sweep(
        _load(args), args.path, args.start, args.stop, args.steps, args.scale
    )
    emit_report(result, args.format, args.out)
    return 0


def _parse_param(text: str):
    parts = text.rsplit(":", 2)
    if len(parts) != 3:
        raise ValueError(f"--param expects path:lower:upper, got {text!r}")
    return parts[0], float(parts[1]), float(parts[2])


def _cmd_optimize(args) -> int:
    params = [_parse_param(text) for text in args.param]
    constraints = {
        "max_stress_fraction": args.max_stress_fraction,
        "max_temperature_rise": args.max_temperature_rise,
    }
    result = optimize(_load(args), params, args.objective, constraints)
    best_eval = min(
        (entry for entry in result.trace if entry["feasible"]),
        key=lambda entry: entry["objective"],
    )
    for path, _, _ in params:
        print(f"{path} = {best_eval['params'][path]!r}")
    print(f"objective = {best_eval['objective']!r}")
    print(f"evaluations = {len(result.trace)}")
    if args.out:
        emit_report(result.report, args.format, args.out)
    return 0


def _cmd_noise(args) -> int:
    scenario = _load(args)
    budget = noise_budget(
        scenario.sensor,
        scenario.drive,
        scenario.environment,
        scenario.noise_band,
        scenario.quality_factor,
    )
    lines = [
        f"thermal_electrical_psd_V2_per_Hz = {budget.thermal_electrical_psd!r}",
        f"thermal_mechanical_psd_referred_V2_per_Hz = {budget.thermal_mechanical_psd_referred!r}",
        f"flicker_scale_V2 = {budget.flicker_scale!r}",
        f"corner_frequency_Hz = {budget.corner_frequency!r}",
        f"band_Hz = {budget.band[0]!r} {budget.band[1]!r}",
        f"rms_V = {budget.rms!r}",
        f"snr = {budget.snr!r}",
        f"min_detectable_field_T = {budget.min_detectable_field!r}",
    ]
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    if args.out:
        with open(args.out, "w", newline="") as handle:
            handle.write(text)
    return 0


def _cmd_freq_response(args) -> int:
    scenario = _load(args)
    resonator = _scenario_resonator(scenario)
    f_min = args.f_min if args.f_min is not None else resonator.natural_frequency / 10.0
    f_max = args.f_max if args.f_max is not None else resonator.natural_frequency * 10.0
    if not 0 < f_min < f_max:
        raise ValueError("need 0 < f-min < f-max")
    lines = ["frequency_Hz,amplitude_m_per_N,phase_rad"]
    for frequency in np.geomspace(f_min, f_max, args.points):
        point = frequency_response(resonator, float(frequency))
        lines.append(f"{point.frequency!r},{point.amplitude!r},{point.phase!r}")
    with open(args.out, "w", newline="") as handle:
        handle.write("\n".join(lines) + "\n")
    return 0


def _cmd_transient(args) -> int:
    scenario = _load(args)
    resonator = _scenario_resonator(scenario)
    period = 1.0 / resonator.natural_frequency
    drive = scenario.drive
    if drive.waveform == "square" and drive.frequency > 0:
        duration = args.duration or 20.0 / drive.frequency
        dt = args.dt or min(period, 1.0 / drive.frequency) / 200.0
    else:
        duration = args.duration or 20.0 * period
        dt = args.dt or period / 200.0
    series = simulate_transient(
        resonator, scenario.sensor, drive, scenario.environment, duration, dt
    )
    series.to_csv(args.out)
    return 0


def _cmd_verify(args) -> int:
    checks = oracle_check(_load(args))
    for name, value in checks.items():
        if name != "passed":
            print(f"{name} = {value!r}")
    print("verify: PASS" if checks["passed"] else "verify: FAIL")
    return 0 if checks["passed"] else 2


def _add_config(parser) -> None:
    parser.add_argument(
        "--config",
        help=(
            "scenario YAML; defaults to default.yaml in the directory named "
            f"by ${CONFIG_DIR_ENV} (or the working directory)"
        ),
    )


def _add_output(parser, required: bool = True) -> None:
    parser.add_argument("--out", required=required, help="output file path")
    parser.add_argument(
        "--format",
        choices=("csv", "structured-text"),
        default="csv",
        help="output encoding (default: csv)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="memsmag", description=__doc__)
    commands = parser.add_subparsers(dest="command", required=True)

    sub = commands.add_parser("simulate", help="run one scenario into a report")
    _add_config(sub)
    _add_output(sub)
    sub.set_defaults(handler=_cmd_simulate)

    sub = commands.add_parser("sweep", help="run a scenario across a parameter range")
    _add_config(sub)
    sub.add_argument("--path", required=True, help="dotted scenario path, e.g. drive.amplitude")
    sub.add_argument("--start", type=float, required=True)
    sub.add_argument("--stop", type=float, required=True)
    sub.add_argument("--steps", type=int, required=True)
    sub.add_argument("--scale", choices=("linear", "log"), default="linear")
    _add_output(sub)
    sub.set_defaults(handler=_cmd_sweep)

    sub = commands.add_parser("optimize", help="search a design box under constraints")
    _add_config(sub)
    sub.add_argument(
        "--param",
        action="append",
        required=True,
        metavar="PATH:LOWER:UPPER",
        help="free parameter with bounds; repeatable",
    )
    sub.add_argument(
        "--objective",
        choices=("min_detectable_field", "sensitivity"),
        default="min_detectable_field",
    )
    sub.add_argument("--max-stress-fraction", type=float, default=0.5)
    sub.add_argument("--max-temperature-rise", type=float, default=1.0)
    _add_output(sub, required=False)
    sub.set_defaults(handler=_cmd_optimize)

    sub = commands.add_parser("noise", help="print the noise budget")
    _add_config(sub)
    sub.add_argument("--out", help="also write the budget to this file")
    sub.set_defaults(handler=_cmd_noise)

    sub = commands.add_parser("freq-response", help="tabulate the harmonic response")
    _add_config(sub)
    sub.add_argument("--f-min", type=float, help="default: natural frequency / 10")
    sub.add_argument("--f-max", type=float, help="default: natural frequency * 10")
    sub.add_argument("--points", type=int, default=200)
    sub.add_argument("--out", required=True, help="CSV output path")
    sub.set_defaults(handler=_cmd_freq_response)

    sub = commands.add_parser("transient", help="integrate the driven beam in time")
    _add_config(sub)
    sub.add_argument("--duration", type=float, help="default: 20 drive or natural periods")
    sub.add_argument("--dt", type=float, help="default: finest relevant period / 200")
    sub.add_argument("--out", required=True, help="CSV output path")
    sub.set_defaults(handler=_cmd_transient)

    sub = commands.add_parser(
        "verify", help="cross-check closed forms against the brute-force beam solver"
    )
    _add_config(sub)
    sub.set_defaults(handler=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    try:
        return args.handler(args)
    except (ValidationError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except MemsmagError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
