"""Field-to-voltage conversion chains for both sensor families.

Lorentz route: drive current through the released loop, force on the top
beam, bending stress at the support-beam anchors, piezoresistive gauge,
Wheatstone bridge. Ferromagnetic route: torque on a magnetized plate carried
by its suspension beams, same gauge/bridge back end. Also the drive-current
self-heating effects: the quadratic bridge offset and the loop temperature
rise.
"""

import math
from dataclasses import dataclass

from .errors import InvalidCalibrationError, MissingPropertyError
from .mechanics import BeamGeometry, composite_section, max_anchor_stress

# Quadratic offset coefficient reproducing the measured 0.03 mV at 10 mA.
DEFAULT_OFFSET_COEFFICIENT = 0.3  # V/A^2

# Measured (current A, offset V) pairs for the power-law calibration mode.
OFFSET_CALIBRATION_POINTS = ((10e-3, 0.03e-3), (50e-3, 0.1e-3))

# Self-heating is negligible below this drive amplitude.
HIGH_CURRENT_THRESHOLD = 1e-3  # A

# The released plate does not sit perfectly parallel to the substrate.
DEFAULT_MISALIGNMENT = math.radians(5.0)  # rad


@dataclass
class GaugeSpec:
    """Piezoresistive gauge at the anchor, one active arm of the bridge."""

    length: float  # m
    width: float  # m
    thickness: float  # m
    resistance: float  # Ohm
    material: object  # Material supplying pi_l, flicker alpha, carrier density


@dataclass
class Drive:
    waveform: str = "dc"  # "dc" | "square"
    amplitude: float = 0.0  # A, half-loop current
    frequency: float = 0.0  # Hz, unused for dc


@dataclass
class Environment:
    field_magnitude: float = 0.0  # T
    field_angle: float = math.pi / 2  # rad, between field and top-beam current
    temperature: float = 300.0  # K
    snr_target: float = 1.0


@dataclass
class LorentzDesign:
    """Current loop on released beams, force picked up by a gauge bridge."""

    top_beam_length: float  # m, current-carrying segment normal to the legs
    support_beam: BeamGeometry
    gauge: GaugeSpec
    loop_resistance: float  # Ohm
    bridge_bias: float  # V
    load_share_count: int = 3  # anchored beams sharing the tip load


@dataclass
class FerroDesign:
    """Magnetized plate on suspension beams, torque read out by the bridge."""

    plate_length: float  # m
    plate_width: float  # m
    plate_thickness: float  # m
    magnetization: float  # A/m
    suspension: BeamGeometry
    gauge: GaugeSpec
    bridge_bias: float  # V
    suspension_count: int = 2
    misalignment: float = DEFAULT_MISALIGNMENT  # rad, added to the field angle
    plate_density: float = 8900.0  # kg/m^3, nickel

    @property
    def plate_volume(self) -> float:
        return self.plate_length * self.plate_width * self.plate_thickness

    @property
    def plate_mass(self) -> float:
        return self.plate_volume * self.plate_density


@dataclass
class FerroResponse:
    tip_deflection: float  # m
    anchor_stress: float  # Pa


@dataclass
class ChainResponse:
    output: float  # V, signal plus offset
    stress: float  # Pa, at the support-beam anchor
    force: float  # N, on the top beam
    offset: float  # V, field-independent self-heating term


@dataclass
class JouleHeating:
    temperature_rise: float  # K
    high_current: bool  # amplitude above the neglect threshold


def _gauge_pi(gauge: GaugeSpec) -> float:
    pi = gauge.material.pi_longitudinal
    if pi is None:
        raise MissingPropertyError(gauge.material.name, ("pi_longitudinal",))
    return pi


def lorentz_force(current: float, top_beam_length: float, field: float, angle: float) -> float:
    """Force I*L*B*sin(angle) on the top beam; odd in the field."""
    return current * top_beam_length * field * math.sin(angle)


def ferro_torque(magnetization: float, plate_volume: float, field: float, angle: float) -> float:
    """Torque magnitude (M*V)*B*sin(angle) on the magnetized plate."""
    if plate_volume <= 0:
        raise ValueError("plate_volume must be > 0")
    return magnetization * plate_volume * field * math.sin(angle)


def ferro_deflection(design: FerroDesign, torque: float) -> FerroResponse:
    """Suspension response to a plate torque, split equally across beams.

    Each beam carries the end moment torque/suspension_count; tip deflection
    is M0*l^2/(2EI) and the anchor bending stress is 6*M0/(w*t^2).
    """
    beam = design.suspension
    moment = torque / design.suspension_count
    section = composite_section(beam)
    deflection = moment * beam.length**2 / (2.0 * section.flexural_rigidity)
    stress = 6.0 * moment / (beam.width * beam.total_thickness**2)
    return FerroResponse(tip_deflection=deflection, anchor_stress=stress)


def piezo_fractional_resistance(stress: float, pi_longitudinal: float) -> float:
    """Axial-stress gauge response ΔR/R = pi_l * stress."""
    return pi_longitudinal * stress


def bridge_output(fractional_resistance: float, bias: float) -> float:
    """Single-active-arm Wheatstone output V_bias * (ΔR/R) / 4."""
    if bias <= 0:
        raise ValueError("bridge bias must be > 0")
    return bias * fractional_resistance / 4.0


def lorentz_sensitivity(design: LorentzDesign, drive: Drive, env: Environment) -> float:
    """Small-signal dV_out/dB as the product of the three stage gains.

    (I*L*sin angle) * (6l/(w*t^2*n)) * pi_l * (V_bias/4); zero drive gives a
    zero sensitivity rather than an error.
    """
    pi = _gauge_pi(design.gauge)
    beam = design.support_beam
    force_per_field = (
        drive.amplitude * design.top_beam_length * math.sin(env.field_angle)
    )
    stress_per_force = 6.0 * beam.length / (
        beam.width * beam.total_thickness**2 * design.load_share_count
    )
    return force_per_field * stress_per_force * pi * design.bridge_bias / 4.0


def ferro_sensitivity(design: FerroDesign, env: Environment) -> float:
    """Small-signal dV_out/dB of the plate sensor.

    Torque per field M*V_plate*sin(field angle + misalignment), shared across
    the suspension beams, converted through the same gauge/bridge back end.
    """
    pi = _gauge_pi(design.gauge)
    beam = design.suspension
    angle = env.field_angle + design.misalignment
    moment_per_field = (
        design.magnetization * design.plate_volume * math.sin(angle)
        / design.suspension_count
    )
    stress_per_field = 6.0 * moment_per_field / (
        beam.width * beam.total_thickness**2
    )
    return stress_per_field * pi * design.bridge_bias / 4.0


def joule_offset(current: float, offset_coefficient: float = DEFAULT_OFFSET_COEFFICIENT) -> float:
    """Field-independent bridge offset c*I^2 from drive self-heating."""
    if offset_coefficient < 0:
        raise ValueError("offset_coefficient must be >= 0")
    return offset_coefficient * current**2


def fit_power_law_offset(points=OFFSET_CALIBRATION_POINTS) -> tuple[float, float]:
    """Two-point fit of offset = a*I^p, the alternate calibration mode.

    The measured offsets do not sit on one quadratic, so this mode trades
    the stated square law for exact agreement with both points. Returns
    (coefficient a in V/A^p, exponent p).
    """
    (i1, v1), (i2, v2) = points
    if min(i1, v1, i2, v2) <= 0:
        raise InvalidCalibrationError("offset calibration needs positive points")
    if i1 == i2:
        raise InvalidCalibrationError("offset calibration needs distinct currents")
    exponent = math.log(v2 / v1) / math.log(i2 / i1)
    coefficient = v1 / i1**exponent
    return coefficient, exponent


def power_law_offset(current: float, coefficient: float, exponent: float) -> float:
    """Offset a*|I|^p; even in the current like the quadratic mode."""
    if current == 0.0:
        return 0.0
    return coefficient * abs(current) ** exponent


def joule_temperature_rise(
    current: float, loop_resistance: float, thermal_resistance: float
) -> JouleHeating:
    """Loop temperature rise I^2*R_loop*R_th, flagged above 1 mA drive."""
    if min(current, loop_resistance, thermal_resistance) < 0:
        raise ValueError("current, loop_resistance, thermal_resistance must be >= 0")
    rise = current**2 * loop_resistance * thermal_resistance
    return JouleHeating(
        temperature_rise=rise, high_current=current > HIGH_CURRENT_THRESHOLD
    )


def end_to_end_response(
    design: LorentzDesign,
    drive: Drive,
    env: Environment,
    offset_coefficient: float = DEFAULT_OFFSET_COEFFICIENT,
) -> ChainResponse:
    """Static output of the Lorentz chain with the self-heating offset.

    The field-dependent part is odd in B; the offset is even in I and takes
    no field argument, so output(-B) + output(B) = 2*offset identically.
    """
    beam = design.support_beam
    force = lorentz_force(
        drive.amplitude, design.top_beam_length, env.field_magnitude, env.field_angle
    )
    stress = max_anchor_stress(
        force, beam.length, beam.width, beam.total_thickness, design.load_share_count
    )
    signal = bridge_output(
        piezo_fractional_resistance(stress, _gauge_pi(design.gauge)),
        design.bridge_bias,
    )
    offset = joule_offset(drive.amplitude, offset_coefficient)
    return ChainResponse(
        output=signal + offset, stress=stress, force=force, offset=offset
    )
