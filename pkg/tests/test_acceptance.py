"""End-to-end acceptance checks, one per delivery criterion.

Each test prints one `criterion NN PASS/FAIL` line with the measured
numbers; the terminal summary repeats all of them after the run.
"""

import math
import subprocess
import sys
import time
from importlib import resources

import numpy as np
import pytest
from scipy.optimize import brentq

import conftest
from memsmag import (
    BeamGeometry,
    Drive,
    InfeasibleError,
    LayerSpec,
    LumpedResonator,
    anneal_stress,
    bimorph_lift,
    build_scenario,
    builtin_material,
    composite_section,
    convergence_order,
    default_scenario,
    fit_power_law_offset,
    joule_offset,
    lorentz_force,
    lumped_resonator,
    max_anchor_stress,
    optimize,
    power_law_offset,
    run_scenario,
    simulate_transient,
    solve_static,
    steady_state_amplitude,
    sweep,
    tip_deflection,
)


def _record(number: int, passed: bool, detail: str) -> bool:
    line = f"criterion {number:02d} {'PASS' if passed else 'FAIL'}  {detail}"
    conftest.ACCEPTANCE_LINES.append(line)
    print(line)
    return passed


def test_criterion_01_default_sensitivity_and_runtime():
    start = time.perf_counter()
    report = run_scenario(default_scenario("lorentz"))
    elapsed = time.perf_counter() - start
    target = 0.15  # V/T, i.e. 0.15 mV/mT
    ok = target / 10 <= report.sensitivity <= target * 10 and elapsed < 1.0
    assert _record(
        1,
        ok,
        f"default sensitivity {report.sensitivity:.4f} V/T is within a decade "
        f"of {target} V/T; simulated in {elapsed * 1e3:.0f} ms",
    )


def test_criterion_02_linear_field_response():
    result = sweep(
        default_scenario("lorentz"), "environment.field_magnitude", 0.1e-3, 50e-3, 50
    )
    fields = np.array(result.values)
    signal = np.array([r.output_at_field - r.offset for r in result.reports])
    coeffs = np.polyfit(fields, signal, 1)
    residual = np.linalg.norm(signal - np.polyval(coeffs, fields))
    residual /= np.linalg.norm(signal)
    ok = residual < 1e-9
    assert _record(
        2,
        ok,
        f"field sweep 0.1..50 mT: linear-fit relative residual {residual:.1e} "
        f"(slope {coeffs[0]:.4f} V/T)",
    )


def test_criterion_03_offset_calibration():
    quadratic = joule_offset(10e-3, 0.3)
    exact = quadratic == pytest.approx(0.03e-3, rel=1e-12)
    a, p = fit_power_law_offset()
    err1 = abs(power_law_offset(10e-3, a, p) - 0.03e-3) / 0.03e-3
    err2 = abs(power_law_offset(50e-3, a, p) - 0.1e-3) / 0.1e-3
    ok = exact and err1 < 0.01 and err2 < 0.01
    assert _record(
        3,
        ok,
        f"offset(10 mA) = {quadratic * 1e3:.3f} mV; power law with exponent "
        f"{p:.4f} reproduces both calibration points (errors {err1:.1e}, {err2:.1e})",
    )


def test_criterion_04_flicker_corner():
    budget = run_scenario(default_scenario("lorentz")).noise
    corner = budget.corner_frequency
    freqs = np.geomspace(budget.band[0], budget.band[1], 2000)
    excess = np.array(
        [budget.flicker_psd_at(f) - budget.thermal_electrical_psd for f in freqs]
    )
    crossings = int(np.count_nonzero(np.diff(np.sign(excess))))
    flicker_below = bool(np.all(excess[freqs < corner] > 0))
    johnson_above = bool(np.all(excess[freqs > corner] < 0))
    ok = 50 <= corner <= 200 and crossings == 1 and flicker_below and johnson_above
    assert _record(
        4,
        ok,
        f"flicker corner {corner:.1f} Hz in [50, 200]; one crossover, flicker "
        f"dominant below it and Johnson above",
    )


def test_criterion_05_mechanical_noise_subdominant():
    budget = run_scenario(default_scenario("lorentz")).noise
    # Both terms are white, so one ratio covers every frequency in the band.
    ratio = budget.thermal_mechanical_psd_referred / budget.thermal_electrical_psd
    ok = ratio < 0.01
    assert _record(
        5,
        ok,
        f"referred mechanical PSD is {ratio:.1e} of the electrical PSD over "
        f"the whole band",
    )


def test_criterion_06_ferro_deflection():
    scenario = default_scenario("ferro")
    report = run_scenario(scenario)
    ok = scenario.environment.field_magnitude == 0.4 and report.tip_deflection > 10e-6
    assert _record(
        6,
        ok,
        f"plate sensor at 0.4 T deflects {report.tip_deflection * 1e6:.1f} um > 10 um",
    )


def test_criterion_07_anneal_and_release_length():
    s400 = anneal_stress(673.15)
    s430 = anneal_stress(703.15)
    stress_ok = s400 == pytest.approx(150e6, rel=1e-12) and s430 >= 150e6

    nitride = builtin_material("silicon_nitride")
    aluminum = builtin_material("aluminum")

    def lift_angle(length):
        beam = BeamGeometry(
            length=float(length),
            width=10e-6,
            layers=[LayerSpec(nitride, 350e-9), LayerSpec(aluminum, 1e-6)],
        )
        return bimorph_lift(beam, s400).tip_angle

    length = brentq(lambda l: lift_angle(l) - math.pi / 2, 100e-6, 1500e-6)
    angle_error = abs(lift_angle(length) - math.pi / 2)
    ok = stress_ok and angle_error <= math.radians(0.5)
    assert _record(
        7,
        ok,
        f"anneal stress 150 MPa at 400 C ({s430 / 1e6:.0f} MPa at 430 C); "
        f"vertical lift at beam length {length * 1e6:.1f} um "
        f"(angle error {math.degrees(angle_error):.2e} deg)",
    )


def test_criterion_08_beam_oracle_agreement():
    start = time.perf_counter()
    thickness = 1.35e-6
    beam = BeamGeometry(
        length=300e-6,
        width=20e-6,
        layers=[LayerSpec(builtin_material("silicon"), thickness)],
    )
    slenderness = beam.length / thickness
    force = 1e-6
    section = composite_section(beam)
    analytic_tip = tip_deflection(section, beam.length, force)
    analytic_stress = max_anchor_stress(
        force, beam.length, beam.width, thickness, load_share_count=1
    )
    solution = solve_static(beam, grid_size=400, tip_force=force)
    tip_err = abs(solution.tip_deflection - analytic_tip) / analytic_tip
    stress_err = abs(solution.anchor_stress - analytic_stress) / analytic_stress
    order = convergence_order(beam, [100, 200, 400], tip_force=force)
    elapsed = time.perf_counter() - start
    ok = (
        slenderness >= 50
        and tip_err <= 0.01
        and stress_err <= 0.02
        and 1.8 <= order <= 2.2
        and elapsed < 10.0
    )
    assert _record(
        8,
        ok,
        f"grid-400 solver vs closed form (slenderness {slenderness:.0f}): tip "
        f"{tip_err * 100:.3f}%, anchor stress {stress_err * 100:.2f}%, observed "
        f"order {order:.2f}, {elapsed:.1f} s",
    )


def test_criterion_09_transient_dynamics():
    scenario = default_scenario("lorentz")
    sensor, env = scenario.sensor, scenario.environment
    res = lumped_resonator(sensor.support_beam, scenario.quality_factor)
    f0, q = res.natural_frequency, res.quality_factor
    dt = 1.0 / (200 * f0)
    duration = 10 * q / f0

    def steady(amplitude):
        drive = Drive(waveform="square", amplitude=amplitude, frequency=f0)
        series = simulate_transient(res, sensor, drive, env, duration, dt)
        return steady_state_amplitude(series)

    state_10 = steady(10e-3)
    force = (
        lorentz_force(10e-3, sensor.top_beam_length, env.field_magnitude, env.field_angle)
        / sensor.load_share_count
    )
    expected = (4.0 / math.pi) * q * force / res.stiffness
    amp_err = abs(state_10.displacement - expected) / expected

    ratio = steady(25e-3).voltage / state_10.voltage
    ratio_err = abs(ratio - 2.5) / 2.5

    quiet = Drive(waveform="dc", amplitude=0.0)
    period = 1.0 / f0
    x0 = 1e-6
    w0 = 2 * math.pi * f0
    zeta = 1 / (2 * q)
    wd = w0 * math.sqrt(1 - zeta**2)
    errs = []
    for step in (period / 60, period / 120):
        series = simulate_transient(
            res, sensor, quiet, env, duration=20 * period, dt=step, x0=x0
        )
        exact = np.exp(-zeta * w0 * series.time) * (
            x0 * np.cos(wd * series.time)
            + (zeta * w0 * x0 / wd) * np.sin(wd * series.time)
        )
        errs.append(np.max(np.abs(series.displacement - exact)))
    order_ratio = errs[0] / errs[1]

    lossless = LumpedResonator(
        stiffness=res.stiffness,
        effective_mass=res.effective_mass,
        natural_frequency=f0,
        quality_factor=math.inf,
        damping=0.0,
    )
    series = simulate_transient(
        lossless, sensor, quiet, env, duration=100 * period, dt=period / 200, x0=x0
    )
    energy = (
        0.5 * res.stiffness * series.displacement**2
        + 0.5 * res.effective_mass * series.velocity**2
    )
    drift = float(np.max(np.abs(energy - energy[0])) / energy[0])

    ok = (
        amp_err <= 0.03
        and ratio_err <= 0.01
        and 12 <= order_ratio <= 20
        and drift < 1e-3
    )
    assert _record(
        9,
        ok,
        f"square drive at resonance within {amp_err * 100:.2f}% of (4/pi)QF/k; "
        f"2.5x current scales output within {ratio_err * 100:.2e}%; halving dt "
        f"shrinks the trajectory error {order_ratio:.1f}x; undamped energy "
        f"drift {drift:.1e} over 100 cycles",
    )


def test_criterion_10_rms_quadrature():
    budget = run_scenario(default_scenario("lorentz")).noise
    freqs = np.geomspace(budget.band[0], budget.band[1], 10_000)
    psd = np.array([budget.total_psd_at(f) for f in freqs])
    numeric = math.sqrt(np.trapezoid(psd, freqs))
    err = abs(numeric - budget.rms) / budget.rms
    ok = err <= 1e-3
    assert _record(
        10,
        ok,
        f"closed-form band RMS vs 10k-point quadrature: {err * 100:.4f}% apart",
    )


def test_criterion_11_optimizer_vs_grid():
    scenario = default_scenario("lorentz")
    bounds = [
        ("sensor.support_beam.length", 200e-6, 800e-6),
        ("sensor.support_beam.width", 5e-6, 40e-6),
    ]
    result = optimize(scenario, bounds, objective="sensitivity")
    best = result.report.sensitivity

    grid_best = 0.0
    for length in np.linspace(200e-6, 800e-6, 100):
        for width in np.linspace(5e-6, 40e-6, 100):
            report = run_scenario(
                build_scenario(
                    {
                        "sensor": {
                            "support_beam": {
                                "length": float(length),
                                "width": float(width),
                            }
                        }
                    }
                )
            )
            feasible = report.stress_margin >= 2.0 and report.temperature_rise <= 1.0
            if feasible and report.sensitivity > grid_best:
                grid_best = report.sensitivity
    gap = abs(best - grid_best) / grid_best

    scaled = optimize(scenario, bounds, objective=lambda r: -8.0 * r.sensitivity)
    same_argmax = (
        scaled.best.sensor.support_beam.length == result.best.sensor.support_beam.length
        and scaled.best.sensor.support_beam.width == result.best.sensor.support_beam.width
    )

    best_feasible = result.report.temperature_rise <= 1.0 + 1e-9 and (
        result.report.stress_margin >= 2.0 * (1 - 1e-9)
    )
    try:
        optimize(scenario, [("drive.amplitude", 0.2, 0.5)], objective="sensitivity")
        rejects_infeasible = False
    except InfeasibleError:
        rejects_infeasible = True

    ok = gap <= 0.02 and same_argmax and best_feasible and rejects_infeasible
    assert _record(
        11,
        ok,
        f"search best {best:.4f} V/T within {gap * 100:.2f}% of the 100x100 "
        f"grid optimum {grid_best:.4f} V/T; scaled objective keeps the argmax; "
        f"best is feasible and infeasible boxes raise",
    )


def test_criterion_12_cli_determinism(tmp_path):
    config = resources.files("memsmag").joinpath("configs/default_lorentz.yaml")
    all_zero = True
    all_identical = True
    with resources.as_file(config) as cfg:
        for fmt, suffix in (("csv", "csv"), ("structured-text", "yaml")):
            emitted = []
            for run in ("first", "second"):
                out = tmp_path / f"{run}.{suffix}"
                proc = subprocess.run(
                    [
                        sys.executable,
                        "-m",
                        "memsmag",
                        "simulate",
                        "--config",
                        str(cfg),
                        "--out",
                        str(out),
                        "--format",
                        fmt,
                    ],
                    capture_output=True,
                    text=True,
                    timeout=120,
                )
                all_zero = all_zero and proc.returncode == 0
                emitted.append(out.read_bytes() if out.exists() else run.encode())
            all_identical = all_identical and emitted[0] == emitted[1]
    ok = all_zero and all_identical
    assert _record(
        12,
        ok,
        "repeated CLI runs on the shipped default config exit 0 and emit "
        "byte-identical csv and structured-text reports",
    )
