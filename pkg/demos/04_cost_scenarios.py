#!/usr/bin/env python3
"""Levelized cost of the nominal design under the three shipped cost
scenarios, with the discounted breakdown that shifts between them."""

from hpmropt import (
    NOMINAL_DESIGN,
    DesignEvaluator,
    build_cash_flows,
    cost_breakdown,
    list_scenarios,
)

for scenario in list_scenarios():
    evaluator = DesignEvaluator(scenario)
    objectives, report, qoi = evaluator.evaluate(NOMINAL_DESIGN)
    schedule = build_cash_flows(NOMINAL_DESIGN, qoi, scenario)
    shares = cost_breakdown(schedule, scenario.econ)
    print(f"{scenario.name}: {scenario.description}")
    print(f"  LCOE = {objectives[0]:,.0f} $/MWh  (feasible={report.feasible})")
    for category in sorted(shares, key=shares.get, reverse=True):
        print(f"    {category:<20} {shares[category]:7.2%}")
    print()

print("reflector spend collapses once graphite replaces the expensive")
print("material, while the boron-carbide coating keeps the reactivity-control")
print("share visible even in the fully cheap scenario.")
