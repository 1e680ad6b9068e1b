#!/usr/bin/env python3
"""Tour of the design space: static bounds, pitch-coupled bounds, and the
unit-cube decode every optimizer uses."""

import numpy as np

from hpmropt import (
    NOMINAL_DESIGN,
    DesignVector,
    from_unit_cube,
    resolve_bounds,
    to_unit_cube,
    validate,
)

print("nominal design:")
for name, value in NOMINAL_DESIGN.to_record().items():
    print(f"  {name:<6} = {value}")

print("\ncoupled bounds follow the pin pitch:")
for pitch in (1.94, 2.3, 2.78):
    (cr_lo, cr_hi), (mr_lo, mr_hi) = resolve_bounds(pitch)
    print(f"  x_pp={pitch:4}  ->  x_cr in [{cr_lo:.3f}, {cr_hi:.3f}]  "
          f"x_mr in [{mr_lo:.3f}, {mr_hi:.3f}]")

print("\nunit-cube decoding (pitch resolved before the radii):")
for u in (np.zeros(7), np.full(7, 0.5), np.ones(7)):
    design = from_unit_cube(u)
    print(f"  u={u[0]:.1f}...  ->  {design}")
    assert not validate(design)

print("\nround trip:")
rng = np.random.default_rng(1)
u = rng.random(7)
print(f"  u        = {np.round(u, 4)}")
print(f"  back     = {np.round(to_unit_cube(from_unit_cube(u)), 4)}")

print("\nbound violations are named, not raised:")
too_fat = DesignVector(90, 0.95, 160, 2.3, 0.197, 1.2, 0.825)
for problem in validate(too_fat):
    print(f"  {problem}")
