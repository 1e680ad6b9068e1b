"""Decision variables of the core design problem.

Seven geometric/material parameters describe a candidate core.  Five carry
static bounds; the fuel compact radius and moderator radius are coupled to
the pin pitch so every decoded design is geometrically admissible.  All
operations here are pure functions over value types.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np

from .errors import BoundsDomainError, DecodeError

# Radial gap between pin channel and moderator sleeve, cm.  Appears in the
# coupled moderator-radius bounds and must not be inlined.
MODERATOR_GAP_CM = 0.095

FIELD_NAMES = ("x_ca", "x_b10", "x_fh", "x_pp", "x_e", "x_cr", "x_mr")

FIELD_UNITS = {
    "x_ca": "degrees",
    "x_b10": "fraction",
    "x_fh": "cm",
    "x_pp": "cm",
    "x_e": "fraction",
    "x_cr": "cm",
    "x_mr": "cm",
}

# Static (lower, upper) bounds for the five uncoupled variables.
STATIC_BOUNDS = {
    "x_ca": (35.0, 180.0),
    "x_b10": (0.20, 0.95),
    "x_fh": (130.0, 190.0),
    "x_pp": (1.94, 2.78),
    "x_e": (0.17, 0.20),
}

PIN_PITCH_BOUNDS = STATIC_BOUNDS["x_pp"]


@dataclass(frozen=True)
class DesignVector:
    """One candidate design.

    x_ca: control drum coating angle, degrees
    x_b10: drum absorber B-10 enrichment, fraction
    x_fh: active fuel height, cm
    x_pp: pin pitch, cm
    x_e: U-235 enrichment, fraction
    x_cr: fuel compact radius, cm (pitch-coupled bounds)
    x_mr: moderator radius, cm (pitch-coupled bounds)
    """

    x_ca: float
    x_b10: float
    x_fh: float
    x_pp: float
    x_e: float
    x_cr: float
    x_mr: float

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, f) for f in FIELD_NAMES], dtype=float)

    @classmethod
    def from_array(cls, values) -> "DesignVector":
        values = np.asarray(values, dtype=float)
        if values.shape != (7,):
            raise DecodeError(f"expected 7 design values, got shape {values.shape}")
        return cls(*(float(v) for v in values))

    def to_record(self) -> dict:
        """Flat key/value form used by run configuration and result files."""
        return {f: float(getattr(self, f)) for f in FIELD_NAMES}

    @classmethod
    def from_record(cls, record: dict) -> "DesignVector":
        missing = [f for f in FIELD_NAMES if f not in record]
        if missing:
            raise DecodeError(f"design record missing fields: {missing}")
        return cls(**{f: float(record[f]) for f in FIELD_NAMES})


NOMINAL_DESIGN = DesignVector(
    x_ca=90.0, x_b10=0.95, x_fh=160.0, x_pp=2.3, x_e=0.197, x_cr=1.0, x_mr=0.825
)


@dataclass(frozen=True)
class DesignBounds:
    """Resolved per-variable (lower, upper) pairs for a given pin pitch."""

    x_ca: tuple
    x_b10: tuple
    x_fh: tuple
    x_pp: tuple
    x_e: tuple
    x_cr: tuple
    x_mr: tuple

    def as_arrays(self):
        lo = np.array([getattr(self, f)[0] for f in FIELD_NAMES])
        hi = np.array([getattr(self, f)[1] for f in FIELD_NAMES])
        return lo, hi


def resolve_bounds(x_pp: float):
    """Coupled (lower, upper) intervals for x_cr and x_mr at pin pitch x_pp.

    Returns ``((cr_lo, cr_hi), (mr_lo, mr_hi))``.  Raises BoundsDomainError
    when x_pp lies outside its static bounds.
    """
    lo, hi = PIN_PITCH_BOUNDS
    if not (lo <= x_pp <= hi):
        raise BoundsDomainError(f"x_pp={x_pp} outside [{lo}, {hi}]")
    cr = (x_pp / 4.0, x_pp / 2.0)
    span = x_pp - 2.0 * MODERATOR_GAP_CM
    mr = (span / 5.0, span / 2.0)
    return cr, mr


def bounds_for(x_pp: float) -> DesignBounds:
    cr, mr = resolve_bounds(x_pp)
    return DesignBounds(
        x_ca=STATIC_BOUNDS["x_ca"],
        x_b10=STATIC_BOUNDS["x_b10"],
        x_fh=STATIC_BOUNDS["x_fh"],
        x_pp=STATIC_BOUNDS["x_pp"],
        x_e=STATIC_BOUNDS["x_e"],
        x_cr=cr,
        x_mr=mr,
    )


def validate(design: DesignVector) -> list[str]:
    """Check every bound, including the pitch-coupled ones.

    Returns an empty list when the design is admissible, otherwise one
    message per violated bound.  Bounds are inclusive at both ends.
    """
    violations = []
    for name, (lo, hi) in STATIC_BOUNDS.items():
        value = getattr(design, name)
        if not (lo <= value <= hi):
            violations.append(f"{name}={value} outside [{lo}, {hi}]")
    lo, hi = PIN_PITCH_BOUNDS
    if not (lo <= design.x_pp <= hi):
        # Coupled bounds are undefined for an out-of-range pitch.
        return violations
    (cr_lo, cr_hi), (mr_lo, mr_hi) = resolve_bounds(design.x_pp)
    if not (cr_lo <= design.x_cr <= cr_hi):
        violations.append(
            f"x_cr={design.x_cr} outside [{cr_lo}, {cr_hi}] at x_pp={design.x_pp}"
        )
    if not (mr_lo <= design.x_mr <= mr_hi):
        violations.append(
            f"x_mr={design.x_mr} outside [{mr_lo}, {mr_hi}] at x_pp={design.x_pp}"
        )
    return violations


def is_valid(design: DesignVector) -> bool:
    return not validate(design)


def from_unit_cube(u) -> DesignVector:
    """Decode a point of [0, 1]^7 into an admissible design.

    The pin pitch is decoded before the two radii so their coupled bounds
    are always consistent; every decoded design passes ``validate``.
    """
    u = np.asarray(u, dtype=float)
    if u.shape != (7,):
        raise DecodeError(f"expected 7 coordinates, got shape {u.shape}")
    if np.any(u < 0.0) or np.any(u > 1.0) or not np.all(np.isfinite(u)):
        raise DecodeError(f"coordinates outside [0, 1]: {u.tolist()}")
    statics = {}
    for i, name in enumerate(FIELD_NAMES[:5]):
        lo, hi = STATIC_BOUNDS[name]
        statics[name] = float(lo + u[i] * (hi - lo))
    (cr_lo, cr_hi), (mr_lo, mr_hi) = resolve_bounds(statics["x_pp"])
    return DesignVector(
        x_cr=float(cr_lo + u[5] * (cr_hi - cr_lo)),
        x_mr=float(mr_lo + u[6] * (mr_hi - mr_lo)),
        **statics,
    )


def to_unit_cube(design: DesignVector) -> np.ndarray:
    """Inverse of ``from_unit_cube`` for an admissible design."""
    z = np.empty(7)
    for i, name in enumerate(FIELD_NAMES[:5]):
        lo, hi = STATIC_BOUNDS[name]
        z[i] = (getattr(design, name) - lo) / (hi - lo)
    (cr_lo, cr_hi), (mr_lo, mr_hi) = resolve_bounds(design.x_pp)
    z[5] = (design.x_cr - cr_lo) / (cr_hi - cr_lo)
    z[6] = (design.x_mr - mr_lo) / (mr_hi - mr_lo)
    return z


def write_design_file(design: DesignVector, path) -> None:
    """Serialize to the flat key=value record consumed by the CLI."""
    lines = ["# design vector; units: " +
             ", ".join(f"{f} [{FIELD_UNITS[f]}]" for f in FIELD_NAMES)]
    lines += [f"{f} = {getattr(design, f)!r}" for f in FIELD_NAMES]
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_design_file(path) -> DesignVector:
    record = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise DecodeError(f"{path}:{lineno}: expected 'name = value'")
            key, value = (part.strip() for part in line.split("=", 1))
            try:
                record[key] = float(value)
            except ValueError as exc:
                raise DecodeError(f"{path}:{lineno}: bad value {value!r}") from exc
    unknown = set(record) - set(FIELD_NAMES)
    if unknown:
        raise DecodeError(f"{path}: unknown fields {sorted(unknown)}")
    return DesignVector.from_record(record)


# fields() is imported for introspection-based consumers (kept explicit so a
# stale FIELD_NAMES tuple cannot drift from the dataclass).
assert FIELD_NAMES == tuple(f.name for f in fields(DesignVector))
