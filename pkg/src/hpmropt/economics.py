"""Cash-flow construction and levelized cost of electricity.

The levelized cost is the discounted sum of fuel, O&M, and capital flows
divided by the discounted energy produced over the plant life.  Flows are
built from design-derived masses and a per-scenario price ledger; three
preset ledgers ship with the package (expensive reflectors everywhere,
cheap axial reflector, cheap axial and drum reflectors).
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .constraints import constraints_from_config, default_constraints
from .errors import ConfigError, ContractError

CATEGORIES = ("fuel", "o_and_m", "capital", "reflector", "reactivity_control")

PRESET_NAMES = ("scenario-1", "scenario-2", "scenario-3")


def default_annual_energy_mwh(thermal_power_mw: float = 2.0,
                              efficiency: float = 0.35,
                              capacity_factor: float = 0.95) -> float:
    """Electrical MWh per year.  Conversion efficiency and capacity factor
    are package defaults with no anchor in the calibration data; override
    them through the scenario file when better numbers exist."""
    return thermal_power_mw * 8766.0 * efficiency * capacity_factor


@dataclass(frozen=True)
class EconParams:
    discount_rate: float = 0.06
    plant_life_years: int = 60
    replacement_period_years: int = 10
    annual_energy_mwh: float = field(default_factory=default_annual_energy_mwh)

    def __post_init__(self):
        if not 0.0 <= self.discount_rate < 1.0:
            raise ConfigError(f"discount rate {self.discount_rate} outside [0, 1)")
        if self.plant_life_years < 1:
            raise ConfigError("plant life must be at least 1 year")
        if self.replacement_period_years < 1:
            raise ConfigError("replacement period must be at least 1 year")

    def discount_factors(self) -> np.ndarray:
        t = np.arange(self.plant_life_years + 1)
        return (1.0 + self.discount_rate) ** -t


@dataclass(frozen=True)
class CostScenario:
    """Price ledger plus the mass models mapping a design to kilograms.

    The axial reflector fills the vessel height not occupied by fuel; the
    drum surface splits between absorber coating (arc fraction x_ca/360)
    and reflector material; absorber price carries a linear enrichment
    premium in x_b10.
    """

    name: str
    axial_reflector_price_per_kg: float
    drum_reflector_price_per_kg: float
    absorber_price_per_kg: float
    fuel_price_per_kgu: float
    fixed_direct_capital: float
    annual_om: float
    vessel_height_cm: float = 230.0
    axial_reflector_kg_per_cm: float = 18.5
    drum_reflector_total_kg: float = 1200.0
    absorber_total_kg: float = 320.0
    b10_premium_slope: float = 1.5
    replacement_fraction: float = 1.0
    description: str = ""
    econ: EconParams = field(default_factory=EconParams)
    constraints: tuple = field(default_factory=lambda: tuple(default_constraints()))
    proxy: dict | None = None  # optional surrogate-model overrides

    def __post_init__(self):
        for name in ("axial_reflector_price_per_kg", "drum_reflector_price_per_kg",
                     "absorber_price_per_kg", "fuel_price_per_kgu",
                     "fixed_direct_capital", "annual_om"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{self.name}: {name} must be non-negative")

    def axial_reflector_mass(self, x_fh: float) -> float:
        return self.axial_reflector_kg_per_cm * max(self.vessel_height_cm - x_fh, 0.0)

    def drum_reflector_mass(self, x_ca: float) -> float:
        return self.drum_reflector_total_kg * (1.0 - x_ca / 360.0)

    def absorber_mass(self, x_ca: float) -> float:
        return self.absorber_total_kg * (x_ca / 360.0)

    def absorber_unit_price(self, x_b10: float) -> float:
        return self.absorber_price_per_kg * (1.0 + self.b10_premium_slope * x_b10)


@dataclass
class CashFlowSchedule:
    """Yearly flows by category, years 0..n inclusive."""

    years: np.ndarray
    flows: dict

    def __post_init__(self):
        for category, values in self.flows.items():
            if len(values) != len(self.years):
                raise ContractError(f"category {category}: length mismatch")
            if np.any(np.asarray(values) < 0):
                raise ContractError(f"category {category}: negative flow")

    @property
    def total_by_year(self) -> np.ndarray:
        return np.sum([self.flows[c] for c in self.flows], axis=0)


def build_cash_flows(design, qoi, scenario: CostScenario,
                     econ: EconParams | None = None) -> CashFlowSchedule:
    """Assemble the yearly ledger for one design.

    Fuel batches are purchased at t=0 and then at the ceiling of every
    batch-interval multiple, where the interval is min(fuel lifetime,
    replacement period): fuel lasting past a replacement is never bought
    for the years beyond it.  Equipment (reflector, drums, absorber) is
    bought at t=0 and re-bought at the replacement fraction on every
    replacement year.  O&M is constant over the operating years.
    """
    econ = econ or scenario.econ
    if qoi.lifetime is None or qoi.lifetime <= 0:
        raise ContractError(f"fuel lifetime must be positive, got {qoi.lifetime}")
    n = econ.plant_life_years
    flows = {c: np.zeros(n + 1) for c in CATEGORIES}

    batch_cost = qoi.uranium_mass * scenario.fuel_price_per_kgu
    interval = min(qoi.lifetime, float(econ.replacement_period_years))
    k = 0
    while k * interval < n:
        flows["fuel"][math.ceil(k * interval)] += batch_cost
        k += 1

    axial = scenario.axial_reflector_mass(design.x_fh) * scenario.axial_reflector_price_per_kg
    drums = scenario.drum_reflector_mass(design.x_ca) * scenario.drum_reflector_price_per_kg
    absorber = scenario.absorber_mass(design.x_ca) * scenario.absorber_unit_price(design.x_b10)
    flows["reflector"][0] += axial
    flows["reactivity_control"][0] += drums + absorber
    flows["capital"][0] += scenario.fixed_direct_capital
    for t in range(econ.replacement_period_years, n, econ.replacement_period_years):
        flows["reflector"][t] += scenario.replacement_fraction * axial
        flows["reactivity_control"][t] += scenario.replacement_fraction * (drums + absorber)

    flows["o_and_m"][1:] = scenario.annual_om
    return CashFlowSchedule(years=np.arange(n + 1), flows=flows)


def lcoe(schedule: CashFlowSchedule, econ: EconParams) -> float:
    """Discounted total cost over discounted energy, both summed over years
    0..n with constant annual energy."""
    if econ.annual_energy_mwh == 0:
        raise ZeroDivisionError("annual energy is zero")
    disc = econ.discount_factors()
    if len(disc) != len(schedule.years):
        raise ContractError("schedule span does not match plant life")
    numerator = float(schedule.total_by_year @ disc)
    denominator = float(econ.annual_energy_mwh * disc.sum())
    return numerator / denominator


def cost_breakdown(schedule: CashFlowSchedule, econ: EconParams) -> dict:
    """Discounted share of total cost per category (shares sum to 1)."""
    disc = econ.discount_factors()
    discounted = {c: float(np.asarray(v) @ disc) for c, v in schedule.flows.items()}
    total = sum(discounted.values())
    if total == 0:
        raise ContractError("cannot break down an all-zero schedule")
    return {c: v / total for c, v in discounted.items()}


def _scenario_from_config(config: dict) -> CostScenario:
    try:
        econ = EconParams(**config.get("econ", {}))
        constraint_records = config.get("constraints")
        constraints = (
            tuple(constraints_from_config(constraint_records))
            if constraint_records
            else tuple(default_constraints())
        )
        return CostScenario(
            name=config["name"],
            description=config.get("description", ""),
            econ=econ,
            constraints=constraints,
            proxy=config.get("proxy"),
            **config["costs"],
        )
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"bad scenario configuration: {exc}") from exc


def load_scenario(name_or_path) -> CostScenario:
    """Load a preset by name ('scenario-1'..'scenario-3') or a JSON file."""
    name = str(name_or_path)
    if name in PRESET_NAMES:
        text = resources.files("hpmropt.data").joinpath(f"{name}.json").read_text()
    else:
        path = Path(name_or_path)
        if not path.exists():
            raise ConfigError(f"no such scenario preset or file: {name}")
        text = path.read_text()
    try:
        config = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{name}: invalid JSON: {exc}") from exc
    return _scenario_from_config(config)


def list_scenarios(extra_dir=None) -> list[CostScenario]:
    """Shipped presets, plus any *.json scenario files in ``extra_dir`` or
    in $HPMROPT_SCENARIO_DIR."""
    scenarios = [load_scenario(name) for name in PRESET_NAMES]
    directory = extra_dir or os.environ.get("HPMROPT_SCENARIO_DIR")
    if directory:
        for path in sorted(Path(directory).glob("*.json")):
            scenarios.append(load_scenario(path))
    return scenarios
