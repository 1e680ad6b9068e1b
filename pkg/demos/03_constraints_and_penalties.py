#!/usr/bin/env python3
"""How the quadratic relative-violation penalty behaves, and what the
aggregate constraint report looks like."""

import numpy as np

from hpmropt import default_constraints, evaluate_constraints, phi

specs = default_constraints()
print("shipped constraint set:")
for spec in specs:
    print(f"  {spec.name:<16} {spec.qoi:<9} {spec.kind:<8} limit={spec.limit} "
          f"weight={spec.weight:g}")

sdm = next(s for s in specs if s.name == "shutdown-margin")
print("\npenalty vs shutdown margin (limit -6700, more negative = safer):")
for value in (-8000, -7000, -6700, -6000, -4830):
    print(f"  sdm={value:>6}  phi={phi(sdm, value):.6f}  "
          f"weighted={1e4 * phi(sdm, value):9.3f}")

print("\nquadratic in the relative excursion: phi(limit*(1+eps)) = eps^2")
limit_spec = next(s for s in specs if s.name == "peaking-factor")
for eps in (0.01, 0.1, 0.28):
    print(f"  eps={eps:<5} phi={phi(limit_spec, 1.47 * (1 + eps)):.6f} "
          f"eps^2={eps**2:.6f}")

print("\nfull report for a design that trips two limits:")
report = evaluate_constraints(specs, {
    "lifetime": 4.97, "sdm": -4830.0, "f_dh": 1.30, "q_max": 0.019,
})
for row in report.rows:
    mark = "ok" if row.satisfied else "VIOLATED"
    print(f"  {row.name:<16} value={row.value:<9g} phi={row.phi:<10.6f} {mark}")
print(f"  aggregate penalty = {report.penalty:.3f}  feasible = {report.feasible}")
