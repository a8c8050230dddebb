"""Ties the physics modules together: run one scenario into a full report,
sweep a parameter, optimize a design under constraints, and serialize the
results. Everything here is deterministic: identical inputs give
byte-identical emitted files, optimizer included.
"""

import copy
import csv
import io
import itertools
import math
import re
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np
import yaml
from scipy.optimize import minimize

from .beam_oracle import convergence_order, solve_static
from .errors import InfeasibleError, MemsmagError, UnknownPathError
from .mechanics import composite_section, lumped_resonator, tip_deflection
from .noise import NoiseBudget, noise_budget
from .scenario import Scenario, build_scenario
from .transduction import (
    LorentzDesign,
    end_to_end_response,
    ferro_deflection,
    ferro_sensitivity,
    ferro_torque,
    joule_offset,
    joule_temperature_rise,
    lorentz_sensitivity,
)

HIGH_CURRENT_WARNING = (
    "drive amplitude exceeds 1 mA: self-heating is not negligible"
)

DEFAULT_CONSTRAINTS = {"max_stress_fraction": 0.5, "max_temperature_rise": 1.0}

# Death penalty for constraint-violating optimizer points; grows with the
# relative violation so the walk is still guided back toward feasibility.
_PENALTY = 1e30

MAX_FREE_PARAMETERS = 6


@dataclass
class SimulationReport:
    sensitivity: float  # V/T
    offset: float  # V, field-independent
    output_at_field: float  # V at the scenario's ambient field
    tip_deflection: float  # m, static
    anchor_stress: float  # Pa
    stress_margin: float  # weakest layer yield over anchor stress
    resonant_frequency: float  # Hz
    quality_factor: float
    noise: NoiseBudget
    min_detectable_field: float  # T
    temperature_rise: float  # K
    warnings: list
    scenario: dict  # resolved input tree, echoed for reproducibility


@dataclass
class SweepResult:
    parameter_path: str
    values: list
    reports: list  # SimulationReport, or None where the point failed
    errors: list  # failure text per point, None where it succeeded


@dataclass
class OptimizeResult:
    best: Scenario
    report: SimulationReport
    trace: list  # one {params, objective, feasible} record per evaluation


@contextmanager
def _stage(name: str):
    # Tag propagated failures with the module that produced them.
    try:
        yield
    except MemsmagError as exc:
        if exc.args and isinstance(exc.args[0], str):
            exc.args = (f"{name}: {exc.args[0]}",) + exc.args[1:]
        raise


def _stress_margin(beam, stress: float) -> float:
    yields = [
        layer.material.yield_stress
        for layer in beam.layers
        if layer.material.yield_stress is not None
    ]
    if not yields or stress == 0.0:
        return math.inf
    return min(yields) / abs(stress)


def run_scenario(scenario: Scenario) -> SimulationReport:
    """Populate every report field for one operating point."""
    sensor, drive, env = scenario.sensor, scenario.drive, scenario.environment
    if isinstance(sensor, LorentzDesign):
        with _stage("transduction"):
            sensitivity = lorentz_sensitivity(sensor, drive, env)
            chain = end_to_end_response(
                sensor, drive, env, scenario.offset_coefficient
            )
            heating = joule_temperature_rise(
                drive.amplitude, sensor.loop_resistance, scenario.thermal_resistance
            )
        offset, output, stress = chain.offset, chain.output, chain.stress
        with _stage("mechanics"):
            resonator = lumped_resonator(sensor.support_beam, scenario.quality_factor)
            deflection = chain.force / (sensor.load_share_count * resonator.stiffness)
            margin = _stress_margin(sensor.support_beam, stress)
    else:
        with _stage("transduction"):
            sensitivity = ferro_sensitivity(sensor, env)
            torque = ferro_torque(
                sensor.magnetization,
                sensor.plate_volume,
                env.field_magnitude,
                env.field_angle + sensor.misalignment,
            )
            response = ferro_deflection(sensor, torque)
            offset = joule_offset(drive.amplitude, scenario.offset_coefficient)
            # The plate has no drive loop, so no resistive self-heating.
            heating = joule_temperature_rise(drive.amplitude, 0.0, 0.0)
        output = sensitivity * env.field_magnitude + offset
        stress, deflection = response.anchor_stress, response.tip_deflection
        with _stage("mechanics"):
            resonator = lumped_resonator(
                sensor.suspension,
                scenario.quality_factor,
                tip_mass=sensor.plate_mass / sensor.suspension_count,
            )
            margin = _stress_margin(sensor.suspension, stress)

    with _stage("noise"):
        budget = noise_budget(
            sensor, drive, env, scenario.noise_band, scenario.quality_factor
        )

    warnings_list = []
    if heating.high_current:
        warnings_list.append(HIGH_CURRENT_WARNING)
    return SimulationReport(
        sensitivity=sensitivity,
        offset=offset,
        output_at_field=output,
        tip_deflection=deflection,
        anchor_stress=stress,
        stress_margin=margin,
        resonant_frequency=resonator.natural_frequency,
        quality_factor=scenario.quality_factor,
        noise=budget,
        min_detectable_field=budget.min_detectable_field,
        temperature_rise=heating.temperature_rise,
        warnings=warnings_list,
        scenario=scenario.tree,
    )


_TOKEN_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)((?:\[\d+\])*)$")


def _path_steps(path: str) -> list:
    steps = []
    for token in path.split("."):
        match = _TOKEN_RE.match(token)
        if match is None:
            raise UnknownPathError(f"bad path segment {token!r} in {path!r}")
        steps.append(match.group(1))
        steps.extend(int(i) for i in re.findall(r"\[(\d+)\]", match.group(2)))
    return steps


def _walk(tree, path: str, stop_short: int = 0):
    node = tree
    steps = _path_steps(path)
    for step in steps[: len(steps) - stop_short]:
        try:
            node = node[step]
        except (KeyError, IndexError, TypeError):
            raise UnknownPathError(f"{path}: no such field in the scenario") from None
    return node, steps


def _set_path(tree: dict, path: str, value: float) -> None:
    parent, steps = _walk(tree, path, stop_short=1)
    try:
        existing = parent[steps[-1]]
    except (KeyError, IndexError, TypeError):
        raise UnknownPathError(f"{path}: no such field in the scenario") from None
    if isinstance(existing, bool) or not isinstance(existing, (int, float)):
        raise UnknownPathError(f"{path}: not a numeric field")
    parent[steps[-1]] = value


def _at_value(scenario: Scenario, assignments) -> Scenario:
    tree = copy.deepcopy(scenario.tree)
    for path, value in assignments:
        _set_path(tree, path, float(value))
    return build_scenario(tree)


def sweep(
    scenario: Scenario,
    parameter_path: str,
    start: float,
    stop: float,
    steps: int,
    scale: str = "linear",
) -> SweepResult:
    """Run the scenario across a range of one numeric parameter.

    Points that fail keep their slot: the report is None and the error
    column records what went wrong, so a sweep never dies half way.
    """
    if steps < 2:
        raise ValueError("steps must be >= 2")
    if scale == "linear":
        values = np.linspace(start, stop, steps)
    elif scale == "log":
        if start <= 0 or stop <= 0:
            raise ValueError("log scale needs positive endpoints")
        values = np.geomspace(start, stop, steps)
    else:
        raise ValueError(f"scale must be 'linear' or 'log', got {scale!r}")

    # Surface a bad path once, up front, rather than once per point.
    _set_path(copy.deepcopy(scenario.tree), parameter_path, float(values[0]))

    reports, errors = [], []
    for value in values:
        try:
            reports.append(run_scenario(_at_value(scenario, [(parameter_path, value)])))
            errors.append(None)
        except (MemsmagError, ValueError) as exc:
            reports.append(None)
            # One line per failure so the error fits a single table cell.
            errors.append(f"{type(exc).__name__}: " + " ".join(str(exc).split()))
    return SweepResult(
        parameter_path=parameter_path,
        values=[float(v) for v in values],
        reports=reports,
        errors=errors,
    )


def _normalize_parameter(param):
    if isinstance(param, dict):
        path, lower, upper = param["path"], param["lower"], param["upper"]
    else:
        path, lower, upper = param
    lower, upper = float(lower), float(upper)
    if not (math.isfinite(lower) and math.isfinite(upper)) or not lower < upper:
        raise ValueError(f"{path}: bounds must be finite with lower < upper")
    return str(path), lower, upper


def _objective_fn(objective) -> Callable:
    """Map the objective spec to a function of the report to MINIMIZE."""
    if callable(objective):
        return objective
    if objective == "min_detectable_field":
        return lambda report: report.min_detectable_field
    if objective == "sensitivity":
        return lambda report: -report.sensitivity
    raise ValueError(
        "objective must be 'min_detectable_field', 'sensitivity', or a callable"
    )


def _constraint_violation(report: SimulationReport, limits: dict) -> float:
    violation = 0.0
    fraction = limits["max_stress_fraction"]
    margin_limit = 1.0 / fraction if fraction > 0 else math.inf
    if report.stress_margin < margin_limit:
        violation += margin_limit / report.stress_margin - 1.0
    max_rise = limits["max_temperature_rise"]
    if report.temperature_rise > max_rise:
        violation += report.temperature_rise / max_rise - 1.0
    return violation


def optimize(
    scenario: Scenario,
    free_parameters,
    objective="min_detectable_field",
    constraints: Optional[dict] = None,
) -> OptimizeResult:
    """Derivative-free constrained design search.

    Nelder-Mead on the unit box (parameters normalized to their bounds),
    restarted from every corner of the box plus its center so the
    deterministic restart set covers 2^d + 1 basins. Constraint violations
    and failed evaluations get a death penalty scaled by the relative
    violation. The best returned is always the best feasible point actually
    evaluated; Infeasible is raised when there is none.
    """
    params = [_normalize_parameter(p) for p in free_parameters]
    if not 1 <= len(params) <= MAX_FREE_PARAMETERS:
        raise ValueError(f"need 1..{MAX_FREE_PARAMETERS} free parameters")
    for path, _, _ in params:
        _set_path(copy.deepcopy(scenario.tree), path, 1.0)
    limits = dict(DEFAULT_CONSTRAINTS)
    limits.update(constraints or {})
    score = _objective_fn(objective)
    dim = len(params)

    trace = []
    best = {"value": None, "point": None, "report": None}

    def evaluate(z):
        z = np.asarray(z, dtype=float)
        physical = tuple(
            float(lo + zi * (hi - lo)) for zi, (_, lo, hi) in zip(z, params)
        )
        violation = float(sum(max(0.0, -zi) + max(0.0, zi - 1.0) for zi in z))
        report = None
        if violation == 0.0:
            try:
                report = run_scenario(
                    _at_value(scenario, zip((p for p, _, _ in params), physical))
                )
            except (MemsmagError, ValueError):
                violation = 1.0
            else:
                violation = _constraint_violation(report, limits)
        feasible = violation == 0.0 and report is not None
        value = score(report) if feasible else _PENALTY * (1.0 + violation)
        trace.append(
            {
                "params": {p: x for (p, _, _), x in zip(params, physical)},
                "objective": value,
                "feasible": feasible,
            }
        )
        if feasible and (best["value"] is None or value < best["value"]):
            best.update(value=value, point=physical, report=report)
        return value

    starts = [np.full(dim, 0.5)]
    starts += [np.array(corner, dtype=float) for corner in itertools.product((0.0, 1.0), repeat=dim)]
    for z0 in starts:
        simplex = np.tile(z0, (dim + 1, 1))
        for i in range(dim):
            # Perturb inward so the initial simplex stays inside the box.
            step = 0.05 if z0[i] + 0.05 <= 1.0 else -0.05
            simplex[i + 1, i] += step
        minimize(
            evaluate,
            z0,
            method="Nelder-Mead",
            bounds=[(0.0, 1.0)] * dim,
            options={
                "initial_simplex": simplex,
                "xatol": 1e-5,
                "fatol": 1e-300,
                "maxiter": 400 * dim,
                "maxfev": 400 * dim,
            },
        )

    if best["value"] is None:
        raise InfeasibleError("no evaluated point satisfied the constraints")
    assignments = list(zip((p for p, _, _ in params), best["point"]))
    return OptimizeResult(
        best=_at_value(scenario, assignments),
        report=best["report"],
        trace=trace,
    )


def oracle_check(scenario: Scenario, grid_size: int = 400) -> dict:
    """Cross-check the closed-form beam model against the brute-force solver.

    Compares analytic tip deflection and anchor moment with the
    finite-difference solution on the scenario's suspension beam and
    measures the solver's convergence order.
    """
    sensor = scenario.sensor
    beam = sensor.support_beam if isinstance(sensor, LorentzDesign) else sensor.suspension
    force = 1e-9
    section = composite_section(beam)
    analytic_tip = tip_deflection(section, beam.length, force)
    analytic_moment = force * beam.length

    solution = solve_static(beam, grid_size=grid_size, tip_force=force)
    tip_error = abs(solution.tip_deflection - analytic_tip) / abs(analytic_tip)
    moment_error = float(
        abs(solution.bending_moment[0] - analytic_moment) / analytic_moment
    )
    order = convergence_order(beam, [100, 200, 400], tip_force=force)
    return {
        "tip_deflection_analytic_m": analytic_tip,
        "tip_deflection_fd_m": solution.tip_deflection,
        "tip_deflection_rel_error": tip_error,
        "anchor_moment_analytic_N_m": analytic_moment,
        "anchor_moment_fd_N_m": float(solution.bending_moment[0]),
        "anchor_moment_rel_error": moment_error,
        "convergence_order": order,
        "passed": bool(tip_error < 0.01 and moment_error < 0.02 and 1.8 <= order <= 2.2),
    }


def _fmt(value) -> str:
    return repr(float(value))


REPORT_COLUMNS = (
    ("sensitivity_V_per_T", lambda r: r.sensitivity),
    ("offset_V", lambda r: r.offset),
    ("output_at_field_V", lambda r: r.output_at_field),
    ("tip_deflection_m", lambda r: r.tip_deflection),
    ("anchor_stress_Pa", lambda r: r.anchor_stress),
    ("stress_margin", lambda r: r.stress_margin),
    ("resonant_frequency_Hz", lambda r: r.resonant_frequency),
    ("quality_factor", lambda r: r.quality_factor),
    ("temperature_rise_K", lambda r: r.temperature_rise),
    ("noise_thermal_electrical_psd_V2_per_Hz", lambda r: r.noise.thermal_electrical_psd),
    ("noise_mechanical_referred_psd_V2_per_Hz", lambda r: r.noise.thermal_mechanical_psd_referred),
    ("noise_flicker_scale_V2", lambda r: r.noise.flicker_scale),
    ("noise_corner_frequency_Hz", lambda r: r.noise.corner_frequency),
    ("noise_rms_V", lambda r: r.noise.rms),
    ("snr", lambda r: r.noise.snr),
    ("min_detectable_field_T", lambda r: r.min_detectable_field),
)


def _report_tree(report: SimulationReport) -> dict:
    tree = {name: float(get(report)) for name, get in REPORT_COLUMNS if not name.startswith("noise_")}
    tree["noise"] = {
        "thermal_electrical_psd_V2_per_Hz": float(report.noise.thermal_electrical_psd),
        "thermal_mechanical_psd_referred_V2_per_Hz": float(
            report.noise.thermal_mechanical_psd_referred
        ),
        "flicker_scale_V2": float(report.noise.flicker_scale),
        "band_Hz": [float(f) for f in report.noise.band],
        "corner_frequency_Hz": float(report.noise.corner_frequency),
        "rms_V": float(report.noise.rms),
        "snr": float(report.noise.snr),
        "min_detectable_field_T": float(report.noise.min_detectable_field),
    }
    tree["warnings"] = list(report.warnings)
    tree["scenario"] = report.scenario
    return tree


def _scenario_comment(tree: dict) -> list:
    dumped = yaml.safe_dump(tree, sort_keys=True, default_flow_style=False)
    return [f"# {line}" for line in dumped.splitlines()]


def _csv_rows(rows: list) -> str:
    buffer = io.StringIO()
    csv.writer(buffer, lineterminator="\n").writerows(rows)
    return buffer.getvalue()


def _report_csv(report: SimulationReport) -> str:
    header = [name for name, _ in REPORT_COLUMNS] + ["warnings"]
    row = [_fmt(get(report)) for _, get in REPORT_COLUMNS]
    row.append("; ".join(report.warnings))
    comments = "\n".join(_scenario_comment(report.scenario))
    return comments + "\n" + _csv_rows([header, row])


def _sweep_csv(result: SweepResult) -> str:
    rows = [
        [result.parameter_path]
        + [name for name, _ in REPORT_COLUMNS]
        + ["warnings", "error"]
    ]
    for value, report, error in zip(result.values, result.reports, result.errors):
        if report is not None:
            row = [_fmt(value)]
            row += [_fmt(get(report)) for _, get in REPORT_COLUMNS]
            row += ["; ".join(report.warnings), ""]
        else:
            row = [_fmt(value)] + [""] * (len(REPORT_COLUMNS) + 1) + [error or "failed"]
        rows.append(row)
    return _csv_rows(rows)


def _structured_text(obj) -> str:
    if isinstance(obj, SimulationReport):
        tree = _report_tree(obj)
    else:
        points = []
        for value, report, error in zip(obj.values, obj.reports, obj.errors):
            point = {"value": float(value)}
            if report is not None:
                point["report"] = _report_tree(report)
            else:
                point["error"] = error
            points.append(point)
        tree = {"parameter_path": obj.parameter_path, "points": points}
    return yaml.safe_dump(tree, sort_keys=True, default_flow_style=False)


def emit_report(obj: Union[SimulationReport, SweepResult], format: str, path) -> None:
    """Serialize a report or sweep; identical inputs give identical bytes.

    CSV carries one row per point with SI units in the header names (a
    single-report CSV echoes the scenario as '#' comments); structured-text
    mirrors the full field tree including the scenario echo and re-parses
    with every numeric field exact.
    """
    if format == "csv":
        text = _report_csv(obj) if isinstance(obj, SimulationReport) else _sweep_csv(obj)
    elif format == "structured-text":
        text = _structured_text(obj)
    else:
        raise ValueError(f"format must be 'csv' or 'structured-text', got {format!r}")
    with open(path, "w", newline="") as handle:
        handle.write(text)
