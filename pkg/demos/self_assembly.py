"""Size a stress-released hinge that folds a plate out of plane.

The anneal sets the film stress, the stress difference across the
nitride/aluminum bilayer sets the curl, and the curl fixes how long the
hinge must be to stand the plate up at a right angle.
"""

import math

from scipy.optimize import brentq

from memsmag import BeamGeometry, LayerSpec, anneal_stress, bimorph_lift, builtin_material


def _hinge(length):
    return BeamGeometry(
        length=length,
        width=10e-6,
        layers=[
            LayerSpec(builtin_material("silicon_nitride"), 350e-9),
            LayerSpec(builtin_material("aluminum"), 1e-6),
        ],
    )


def main():
    print("anneal temperature -> film stress:")
    for celsius in (150, 250, 350, 400, 430):
        stress = anneal_stress(celsius + 273.15)
        print(f"  {celsius:4d} C   {stress / 1e6:6.1f} MPa")

    stress = anneal_stress(673.15)
    lift = bimorph_lift(_hinge(500e-6), stress)
    print()
    print(f"bilayer curl at {stress / 1e6:.0f} MPa: {lift.curvature:.1f} 1/m")
    print(f"500 um hinge tip angle  {math.degrees(lift.tip_angle):6.1f} deg")
    print(f"500 um hinge tip height {lift.tip_height * 1e6:6.1f} um")

    length = brentq(
        lambda l: bimorph_lift(_hinge(l), stress).tip_angle - math.pi / 2,
        100e-6,
        1500e-6,
    )
    upright = bimorph_lift(_hinge(length), stress)
    print()
    print(f"hinge length for a 90 deg fold: {length * 1e6:.1f} um")
    print(f"  tip angle  {math.degrees(upright.tip_angle):.2f} deg")
    print(f"  tip height {upright.tip_height * 1e6:.1f} um")


if __name__ == "__main__":
    main()
