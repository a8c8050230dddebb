"""Lumped second-order dynamics of the suspended structure.

Analytic frequency response of the spring/mass/damper reduction, numeric
resonance search, and time-domain integration under square-wave or dc drive
with the bridge voltage computed sample by sample from the instantaneous
anchor stress.
"""

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import MissingPropertyError, NoPeakError, StepTooLargeError, UnsettledError
from .mechanics import LumpedResonator
from .transduction import (
    Drive,
    Environment,
    FerroDesign,
    LorentzDesign,
    ferro_torque,
    lorentz_force,
)

MIN_SWEEP_POINTS = 16

# Steps per natural period below which RK4 phase error is unacceptable.
MIN_STEPS_PER_PERIOD = 50


@dataclass
class FrequencyResponsePoint:
    frequency: float  # Hz
    amplitude: float  # m/N, displacement per unit force
    phase: float  # rad, in (-pi, 0]


@dataclass
class TimeSeries:
    """Uniformly sampled transient; parallel arrays, one row per step."""

    dt: float  # s
    time: np.ndarray  # s
    displacement: np.ndarray  # m
    velocity: np.ndarray  # m/s
    output_voltage: np.ndarray  # V
    drive_period: Optional[float] = None  # s, None for dc drive

    def to_csv(self, path) -> None:
        data = np.column_stack(
            (self.time, self.displacement, self.velocity, self.output_voltage)
        )
        np.savetxt(
            path,
            data,
            delimiter=",",
            header="t_s,x_m,v_m_per_s,V_out_V",
            comments="",
            fmt="%.17g",
        )


@dataclass
class SteadyState:
    displacement: float  # m, half peak-to-peak
    voltage: float  # V, half peak-to-peak


def frequency_response(resonator: LumpedResonator, frequency: float) -> FrequencyResponsePoint:
    """Displacement-per-force amplitude and phase at one drive frequency.

    amplitude = (1/k) / sqrt((1 - r^2)^2 + (r/Q)^2) with r = f/f0; the
    phase lags from 0 at dc toward -pi far above resonance.
    """
    if frequency <= 0:
        raise ValueError("frequency must be > 0")
    r = frequency / resonator.natural_frequency
    q = resonator.quality_factor
    amplitude = (1.0 / resonator.stiffness) / math.hypot(1.0 - r * r, r / q)
    phase = -math.atan2(r / q, 1.0 - r * r)
    return FrequencyResponsePoint(frequency=frequency, amplitude=amplitude, phase=phase)


def find_resonance(
    resonator: LumpedResonator, f_min: float, f_max: float, points: int = 64
) -> float:
    """Locate the amplitude peak by log sweep plus parabolic refinement.

    Sweeps `points` log-spaced frequencies, then refines the bracketed
    maximum between the neighbors of the coarse argmax. Raises NoPeak when
    the amplitude is monotone over the range (peak at an endpoint), which
    includes any resonator with Q <= 1/sqrt(2).
    """
    if not 0 < f_min < f_max:
        raise ValueError("need 0 < f_min < f_max")
    if points < MIN_SWEEP_POINTS:
        raise ValueError(f"points must be >= {MIN_SWEEP_POINTS}")

    freqs = np.geomspace(f_min, f_max, points)
    r = freqs / resonator.natural_frequency
    amps = 1.0 / np.hypot(1.0 - r * r, r / resonator.quality_factor)
    peak = int(np.argmax(amps))
    if peak == 0 or peak == points - 1:
        raise NoPeakError(
            f"no interior amplitude peak in [{f_min}, {f_max}] Hz"
        )

    result = minimize_scalar(
        lambda f: -frequency_response(resonator, f).amplitude,
        bounds=(freqs[peak - 1], freqs[peak + 1]),
        method="bounded",
        options={"xatol": 1e-9 * freqs[peak]},
    )
    return float(result.x)


def _forcing_amplitude(design, drive: Drive, env: Environment) -> float:
    """Peak force on one suspension beam for the given operating point."""
    if isinstance(design, LorentzDesign):
        total = lorentz_force(
            drive.amplitude, design.top_beam_length, env.field_magnitude, env.field_angle
        )
        return total / design.load_share_count
    torque = ferro_torque(
        design.magnetization,
        design.plate_volume,
        env.field_magnitude,
        env.field_angle + design.misalignment,
    )
    moment = torque / design.suspension_count
    # Tip force producing the same tip deflection as the end moment.
    return 1.5 * moment / design.suspension.length


def _stress_per_deflection(design, resonator: LumpedResonator) -> float:
    """Anchor stress per unit tip deflection for the design's load shape."""
    if isinstance(design, LorentzDesign):
        beam = design.support_beam
        return 6.0 * beam.length * resonator.stiffness / (
            beam.width * beam.total_thickness**2
        )
    beam = design.suspension
    return 4.0 * resonator.stiffness * beam.length / (
        beam.width * beam.total_thickness**2
    )


def simulate_transient(
    resonator: LumpedResonator,
    design: Union[LorentzDesign, FerroDesign],
    drive: Drive,
    env: Environment,
    duration: float,
    dt: float,
    x0: float = 0.0,
    v0: float = 0.0,
) -> TimeSeries:
    """Integrate m x'' + D x' + k x = F(t) with classical 4th-order RK.

    The square waveform applies the forcing with exact sign flips every half
    period; dc applies it constantly. The voltage column maps displacement
    through instantaneous anchor stress, gauge, and bridge. Starts from rest
    unless initial conditions are given.
    """
    if duration <= 0 or dt <= 0:
        raise ValueError("duration and dt must be > 0")
    f0 = resonator.natural_frequency
    if dt > 1.0 / (MIN_STEPS_PER_PERIOD * f0):
        raise StepTooLargeError(
            f"dt = {dt} exceeds 1/({MIN_STEPS_PER_PERIOD} * f0) = "
            f"{1.0 / (MIN_STEPS_PER_PERIOD * f0):.3e} s"
        )
    if drive.waveform == "square":
        if drive.frequency <= 0:
            raise ValueError("square drive needs frequency > 0")
        if duration < 10.0 / drive.frequency:
            raise ValueError("duration must cover at least 10 drive periods")
        period = 1.0 / drive.frequency
    elif drive.waveform == "dc":
        period = None
    else:
        raise ValueError(f"unknown waveform {drive.waveform!r}")

    pi = design.gauge.material.pi_longitudinal
    if pi is None:
        raise MissingPropertyError(design.gauge.material.name, ("pi_longitudinal",))
    volts_per_meter = (
        _stress_per_deflection(design, resonator) * pi * design.bridge_bias / 4.0
    )

    peak = _forcing_amplitude(design, drive, env)
    freq = drive.frequency
    if period is None:
        def force(t):
            return peak
    else:
        def force(t):
            return peak if math.fmod(t * freq, 1.0) < 0.5 else -peak

    m = resonator.effective_mass
    d = resonator.damping
    k = resonator.stiffness
    steps = int(round(duration / dt))
    x = np.empty(steps + 1)
    v = np.empty(steps + 1)
    x[0], v[0] = x0, v0
    xi, vi = x0, v0
    for i in range(steps):
        t = i * dt
        f1 = force(t)
        f2 = force(t + 0.5 * dt)
        f3 = force(t + dt)

        a1 = (f1 - d * vi - k * xi) / m
        k1x, k1v = vi, a1

        x2 = xi + 0.5 * dt * k1x
        v2 = vi + 0.5 * dt * k1v
        k2x, k2v = v2, (f2 - d * v2 - k * x2) / m

        x3 = xi + 0.5 * dt * k2x
        v3 = vi + 0.5 * dt * k2v
        k3x, k3v = v3, (f2 - d * v3 - k * x3) / m

        x4 = xi + dt * k3x
        v4 = vi + dt * k3v
        k4x, k4v = v4, (f3 - d * v4 - k * x4) / m

        xi += dt * (k1x + 2.0 * k2x + 2.0 * k3x + k4x) / 6.0
        vi += dt * (k1v + 2.0 * k2v + 2.0 * k3v + k4v) / 6.0
        x[i + 1], v[i + 1] = xi, vi

    time = np.arange(steps + 1) * dt
    return TimeSeries(
        dt=dt,
        time=time,
        displacement=x,
        velocity=v,
        output_voltage=volts_per_meter * x,
        drive_period=period,
    )


def _half_ptp(values: np.ndarray) -> float:
    return float(values.max() - values.min()) / 2.0


def steady_state_amplitude(series: TimeSeries, settle_fraction: float = 0.5) -> SteadyState:
    """Half peak-to-peak amplitudes over the settled tail of a transient.

    Discards the leading settle_fraction of the record (the caller should
    size the run so that covers several ring-up time constants, about
    5 Q/f0), then checks the last two drive periods (or tail halves for dc)
    agree within 1% before reporting.
    """
    if not 0 <= settle_fraction < 1:
        raise ValueError("settle_fraction must be in [0, 1)")
    n = len(series.time)
    tail = series.displacement[int(settle_fraction * n) :]
    tail_v = series.output_voltage[int(settle_fraction * n) :]
    if len(tail) < 4:
        raise ValueError("too few samples after settling to measure amplitude")

    if series.drive_period is not None:
        per = max(2, int(round(series.drive_period / series.dt)))
        if len(tail) < 2 * per:
            raise ValueError("retained tail shorter than two drive periods")
        last, prev = tail[-per:], tail[-2 * per : -per]
    else:
        half = len(tail) // 2
        last, prev = tail[half:], tail[:half]

    amp_last, amp_prev = _half_ptp(last), _half_ptp(prev)
    scale = max(amp_last, amp_prev)
    if scale > 0 and abs(amp_last - amp_prev) > 0.01 * scale:
        raise UnsettledError(
            f"amplitude still changing: {amp_prev:.6e} -> {amp_last:.6e} m"
        )
    return SteadyState(displacement=_half_ptp(tail), voltage=_half_ptp(tail_v))
