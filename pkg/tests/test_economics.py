import dataclasses
import json

import numpy as np
import pytest

from hpmropt.anchors import NOMINAL_ANCHOR
from hpmropt.design_space import NOMINAL_DESIGN
from hpmropt.economics import (
    CashFlowSchedule,
    CostScenario,
    EconParams,
    build_cash_flows,
    cost_breakdown,
    lcoe,
    list_scenarios,
    load_scenario,
)
from hpmropt.environment import DesignEvaluator
from hpmropt.errors import ConfigError, ContractError


def flat_schedule(costs, category="capital"):
    costs = np.asarray(costs, dtype=float)
    return CashFlowSchedule(years=np.arange(len(costs)), flows={category: costs})


@dataclasses.dataclass
class FakeQoI:
    lifetime: float
    uranium_mass: float


def scenario_with(**overrides):
    base = load_scenario("scenario-1")
    return dataclasses.replace(base, **overrides)


class TestLcoe:
    def test_undiscounted_ratio(self):
        econ = EconParams(discount_rate=0.0, plant_life_years=2,
                          annual_energy_mwh=100.0)
        # total cost 600 against total energy 300 MWh
        assert lcoe(flat_schedule([300.0, 200.0, 100.0]), econ) == pytest.approx(2.0)

    def test_hand_discounted_case(self):
        econ = EconParams(discount_rate=0.06, plant_life_years=2,
                          annual_energy_mwh=10.0)
        value = lcoe(flat_schedule([100.0, 50.0, 50.0]), econ)
        assert value == pytest.approx(6.7647, abs=1e-4)

    @pytest.mark.parametrize("rate", [0.0, 0.06, 0.2])
    def test_annuity_invariance(self, rate):
        econ = EconParams(discount_rate=rate, plant_life_years=40,
                          annual_energy_mwh=250.0)
        schedule = flat_schedule(np.full(41, 1000.0))
        assert lcoe(schedule, econ) == pytest.approx(4.0, rel=1e-12)

    def test_price_scaling_homogeneity(self):
        econ = EconParams(plant_life_years=30, annual_energy_mwh=123.0)
        rng = np.random.default_rng(3)
        costs = rng.random(31) * 1e6
        base = lcoe(flat_schedule(costs), econ)
        scaled = lcoe(flat_schedule(costs * 7.3), econ)
        assert scaled == pytest.approx(7.3 * base, rel=1e-12)

    def test_zero_energy_rejected(self):
        econ = EconParams(annual_energy_mwh=0.0)
        with pytest.raises(ZeroDivisionError):
            lcoe(flat_schedule(np.ones(61)), econ)

    def test_span_mismatch_rejected(self):
        econ = EconParams(plant_life_years=60)
        with pytest.raises(ContractError):
            lcoe(flat_schedule([1.0, 2.0]), econ)


class TestBuildCashFlows:
    def test_long_lifetime_batches_every_replacement(self):
        scenario = load_scenario("scenario-1")
        qoi = FakeQoI(lifetime=14.03, uranium_mass=586.66)
        schedule = build_cash_flows(NOMINAL_DESIGN, qoi, scenario)
        fuel_years = np.flatnonzero(schedule.flows["fuel"]).tolist()
        assert fuel_years == [0, 10, 20, 30, 40, 50]

    def test_short_lifetime_batches_on_ceiling_boundaries(self):
        scenario = load_scenario("scenario-1")
        qoi = FakeQoI(lifetime=6.99, uranium_mass=525.06)
        schedule = build_cash_flows(NOMINAL_DESIGN, qoi, scenario)
        fuel_years = np.flatnonzero(schedule.flows["fuel"]).tolist()
        assert fuel_years == [0, 7, 14, 21, 28, 35, 42, 49, 56]

    def test_zero_prices_zero_schedule(self):
        scenario = scenario_with(
            axial_reflector_price_per_kg=0.0, drum_reflector_price_per_kg=0.0,
            absorber_price_per_kg=0.0, fuel_price_per_kgu=0.0,
            fixed_direct_capital=0.0, annual_om=0.0)
        qoi = FakeQoI(lifetime=8.0, uranium_mass=500.0)
        schedule = build_cash_flows(NOMINAL_DESIGN, qoi, scenario)
        assert schedule.total_by_year.sum() == 0.0

    def test_nonpositive_lifetime_rejected(self):
        scenario = load_scenario("scenario-1")
        with pytest.raises(ContractError):
            build_cash_flows(NOMINAL_DESIGN, FakeQoI(0.0, 500.0), scenario)

    def test_lcoe_non_increasing_in_lifetime(self):
        scenario = load_scenario("scenario-1")
        values = []
        for lifetime in np.linspace(1.0, 10.4, 40):
            qoi = FakeQoI(lifetime=float(lifetime), uranium_mass=525.06)
            schedule = build_cash_flows(NOMINAL_DESIGN, qoi, scenario)
            values.append(lcoe(schedule, scenario.econ))
        assert all(b <= a + 1e-12 for a, b in zip(values, values[1:]))


class TestCostBreakdown:
    def test_single_category(self):
        econ = EconParams(plant_life_years=5, annual_energy_mwh=10.0)
        shares = cost_breakdown(flat_schedule(np.ones(6), category="fuel"), econ)
        assert shares["fuel"] == pytest.approx(1.0)

    def test_two_equal_categories_at_t0(self):
        econ = EconParams(plant_life_years=1, annual_energy_mwh=10.0)
        schedule = CashFlowSchedule(
            years=np.arange(2),
            flows={"fuel": np.array([5.0, 0.0]), "capital": np.array([5.0, 0.0])})
        shares = cost_breakdown(schedule, econ)
        assert shares["fuel"] == pytest.approx(0.5)
        assert shares["capital"] == pytest.approx(0.5)

    def test_shares_sum_to_one(self):
        scenario = load_scenario("scenario-2")
        qoi = FakeQoI(lifetime=9.0, uranium_mass=600.0)
        schedule = build_cash_flows(NOMINAL_DESIGN, qoi, scenario)
        shares = cost_breakdown(schedule, scenario.econ)
        assert sum(shares.values()) == pytest.approx(1.0, abs=1e-9)

    def test_cheap_reflectors_still_pay_for_absorber(self):
        # scenario 3 keeps a visible reactivity-control share: the boron
        # carbide coating stays expensive even when reflectors are graphite
        evaluator = DesignEvaluator(load_scenario("scenario-3"))
        _, _, qoi = evaluator.evaluate(NOMINAL_DESIGN)
        schedule = build_cash_flows(NOMINAL_DESIGN, qoi, evaluator.scenario)
        shares = cost_breakdown(schedule, evaluator.scenario.econ)
        assert shares["reactivity_control"] > 0.01
        assert shares["reflector"] < shares["reactivity_control"]


class TestScenarios:
    def test_three_presets(self):
        scenarios = list_scenarios()
        assert [s.name for s in scenarios] == ["scenario-1", "scenario-2", "scenario-3"]

    def test_preset_prices(self):
        s1, s2, s3 = (load_scenario(f"scenario-{i}") for i in (1, 2, 3))
        assert s1.axial_reflector_price_per_kg == 45000.0
        assert s1.drum_reflector_price_per_kg == 45000.0
        assert s2.axial_reflector_price_per_kg == 80.0
        assert s2.drum_reflector_price_per_kg == 45000.0
        assert s3.axial_reflector_price_per_kg == 80.0
        assert s3.drum_reflector_price_per_kg == 80.0
        for s in (s1, s2, s3):
            assert s.absorber_price_per_kg == 14268.0

    def test_scenario_cost_ordering_on_nominal_design(self):
        lcoes = []
        for name in ("scenario-1", "scenario-2", "scenario-3"):
            evaluator = DesignEvaluator(load_scenario(name))
            objectives, _, _ = evaluator.evaluate(NOMINAL_DESIGN)
            lcoes.append(objectives[0])
        assert lcoes[0] > lcoes[1] > lcoes[2]

    def test_user_file_appears_in_listing(self, tmp_path):
        config = {
            "name": "my-scenario",
            "costs": {
                "axial_reflector_price_per_kg": 1.0,
                "drum_reflector_price_per_kg": 2.0,
                "absorber_price_per_kg": 3.0,
                "fuel_price_per_kgu": 4.0,
                "fixed_direct_capital": 5.0,
                "annual_om": 6.0,
            },
        }
        (tmp_path / "custom.json").write_text(json.dumps(config))
        names = [s.name for s in list_scenarios(extra_dir=tmp_path)]
        assert names == ["scenario-1", "scenario-2", "scenario-3", "my-scenario"]

    def test_unknown_scenario_rejected(self):
        with pytest.raises(ConfigError):
            load_scenario("scenario-9")

    def test_bad_econ_params(self):
        with pytest.raises(ConfigError):
            EconParams(discount_rate=1.5)
        with pytest.raises(ConfigError):
            EconParams(plant_life_years=0)
        with pytest.raises(ConfigError):
            CostScenario(name="x", axial_reflector_price_per_kg=-1.0,
                         drum_reflector_price_per_kg=0.0, absorber_price_per_kg=0.0,
                         fuel_price_per_kgu=0.0, fixed_direct_capital=0.0,
                         annual_om=0.0)


def test_nominal_anchor_lifetime_matches_proxy_usage():
    # the anchor record carries the same nominal numbers the proxy anchors use
    assert NOMINAL_ANCHOR.lifetime == 6.99
    assert NOMINAL_ANCHOR.design == NOMINAL_DESIGN
