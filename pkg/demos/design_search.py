"""Push a design against its constraints with the built-in search.

First find the drive current the heating budget allows, then reshape the
support beams for sensitivity inside a fixed design box.
"""

from memsmag import default_scenario, optimize


def main():
    scenario = default_scenario("lorentz")
    base = scenario

    result = optimize(
        base,
        [("drive.amplitude", 1e-3, 50e-3)],
        objective="sensitivity",
    )
    report = result.report
    print("drive current against the 1 K heating budget:")
    print(f"  best current     {result.best.drive.amplitude * 1e3:8.3f} mA")
    print(f"  temperature rise {report.temperature_rise:8.3f} K")
    print(f"  sensitivity      {report.sensitivity * 1e3:8.3f} mV/T")
    print(f"  evaluations      {len(result.trace):8d}")

    result = optimize(
        base,
        [
            ("sensor.support_beam.length", 200e-6, 800e-6),
            ("sensor.support_beam.width", 5e-6, 40e-6),
        ],
        objective="sensitivity",
    )
    beam = result.best.sensor.support_beam
    report = result.report
    print()
    print("support-beam geometry for sensitivity:")
    print(f"  best length      {beam.length * 1e6:8.1f} um")
    print(f"  best width       {beam.width * 1e6:8.1f} um")
    print(f"  sensitivity      {report.sensitivity * 1e3:8.3f} mV/T")
    print(f"  stress margin    {report.stress_margin:8.1f}x")
    print(f"  min detectable   {report.min_detectable_field * 1e6:8.3f} uT")


if __name__ == "__main__":
    main()
