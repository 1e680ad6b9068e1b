"""Reference design/QoI anchor records.

Ten distinct core designs with independently computed quantities of
interest, spanning three cost scenarios (the nominal design is shared by
all three scenario studies and is stored once).  These records calibrate
the surrogate physics model and pin its regression tests; they are not
produced by this package.
"""

from __future__ import annotations

from dataclasses import dataclass

from .design_space import DesignVector


@dataclass(frozen=True)
class AnchorRecord:
    name: str
    scenario: str
    design: DesignVector
    lifetime: float        # years
    sdm: float             # pcm, negative
    f_dh: float            # dimensionless
    q_max: float           # heat-flux units
    q_avg: float           # heat-flux units
    power_density: float
    uranium_mass: float    # kg
    u235_mass: float       # kg
    burnup: float          # MWd/kgU


ANCHOR_RECORDS = (
    AnchorRecord(
        name="nominal", scenario="all",
        design=DesignVector(90.0, 0.95, 160.0, 2.30, 0.197, 1.000, 0.825),
        lifetime=6.99, sdm=-6725.0, f_dh=1.469, q_max=0.0188,
        q_avg=0.010536, power_density=2.105,
        uranium_mass=525.06, u235_mass=103.44, burnup=9.725,
    ),
    AnchorRecord(
        name="s1-min-cost", scenario="scenario-1",
        design=DesignVector(86.0, 0.20, 190.0, 1.94, 0.199, 0.970, 0.743),
        lifetime=14.03, sdm=-4830.0, f_dh=1.333, q_max=0.0174,
        q_avg=0.0091, power_density=1.876,
        uranium_mass=586.66, u235_mass=116.746, burnup=17.470,
    ),
    AnchorRecord(
        name="s1-min-peaking", scenario="scenario-1",
        design=DesignVector(35.0, 0.778, 190.0, 2.31, 0.199, 1.010, 0.716),
        lifetime=4.97, sdm=-6805.0, f_dh=1.317, q_max=0.0170,
        q_avg=0.0088, power_density=1.76,
        uranium_mass=625.99, u235_mass=124.572, burnup=5.800,
    ),
    AnchorRecord(
        name="s1-single-objective", scenario="scenario-1",
        design=DesignVector(91.0, 0.53, 190.0, 2.20, 0.199, 1.100, 0.750),
        lifetime=11.41, sdm=-6708.0, f_dh=1.41, q_max=0.016,
        q_avg=0.00806, power_density=1.612,
        uranium_mass=753.27, u235_mass=149.90, burnup=11.07,
    ),
    AnchorRecord(
        name="s2-min-cost", scenario="scenario-2",
        design=DesignVector(106.7, 0.777, 178.2, 1.94, 0.186, 0.970, 0.800),
        lifetime=10.72, sdm=-7338.0, f_dh=1.455, q_max=0.0188,
        q_avg=0.00974, power_density=2.008,
        uranium_mass=550.241, u235_mass=102.515, burnup=14.23,
    ),
    AnchorRecord(
        name="s2-min-peaking", scenario="scenario-2",
        design=DesignVector(56.6, 0.504, 190.0, 2.14, 0.199, 1.070, 0.742),
        lifetime=9.00, sdm=-5659.0, f_dh=1.37, q_max=0.0164,
        q_avg=0.0083, power_density=1.551,
        uranium_mass=713.99, u235_mass=142.084, burnup=9.21,
    ),
    AnchorRecord(
        name="s2-single-objective", scenario="scenario-2",
        design=DesignVector(96.0, 0.615, 148.36, 1.94, 0.199, 0.970, 0.689),
        lifetime=9.61, sdm=-7952.0, f_dh=1.373, q_max=0.0214,
        q_avg=0.0117, power_density=2.412,
        uranium_mass=458.09, u235_mass=91.160, burnup=15.33,
    ),
    AnchorRecord(
        name="s3-min-cost", scenario="scenario-3",
        design=DesignVector(100.82, 0.20, 172.0, 1.94, 0.197, 0.908, 0.733),
        lifetime=6.58, sdm=-7956.0, f_dh=1.387, q_max=0.0192,
        q_avg=0.0108, power_density=2.379,
        uranium_mass=465.63, u235_mass=91.773, burnup=10.32,
    ),
    AnchorRecord(
        name="s3-min-peaking", scenario="scenario-3",
        design=DesignVector(35.0, 0.20, 190.0, 2.61, 0.199, 0.948, 0.702),
        lifetime=4.42, sdm=-6277.0, f_dh=1.365, q_max=0.0182,
        q_avg=0.00935, power_density=1.973,
        uranium_mass=559.80, u235_mass=111.4, burnup=5.768,
    ),
    AnchorRecord(
        name="s3-single-objective", scenario="scenario-3",
        design=DesignVector(98.0, 0.95, 158.0, 2.78, 0.197, 1.063, 0.522),
        lifetime=11.42, sdm=-6557.0, f_dh=1.455, q_max=0.0182,
        q_avg=0.0100, power_density=1.881,
        uranium_mass=586.83, u235_mass=115.82, burnup=14.216,
    ),
)

NOMINAL_ANCHOR = ANCHOR_RECORDS[0]


def anchor_by_name(name: str) -> AnchorRecord:
    for record in ANCHOR_RECORDS:
        if record.name == name:
            return record
    raise KeyError(name)
