"""Dominance relations, non-dominated sorting, diversity ranking, and the
bounded rank-reward buffer.

A candidate inserted into the buffer is ranked against every held solution
under (non-domination front, diversity metric) ordering; its reward is the
negative of that rank and the buffer keeps the best ``capacity`` solutions.
Feasible solutions always outrank infeasible ones; infeasible solutions
order by ascending penalty, giving the optimizer a gradient toward
feasibility.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import ContractError

METRICS = ("crowding", "niching")


@dataclass(eq=False)
class ObjectivePoint:
    """One evaluated solution in objective space (all objectives minimized).

    Instances compare by identity: distinct evaluations may coincide in
    objective space yet remain separate archive entries."""

    objectives: np.ndarray
    feasible: bool
    penalty: float = 0.0
    payload: Any = None

    def __post_init__(self):
        self.objectives = np.atleast_1d(np.asarray(self.objectives, dtype=float))
        if not np.all(np.isfinite(self.objectives)):
            raise ContractError(f"non-finite objectives: {self.objectives}")
        if self.penalty < 0:
            raise ContractError("penalty must be non-negative")
        if self.feasible != (self.penalty == 0.0):
            raise ContractError("penalty must be zero exactly for feasible points")


def dominates(a: ObjectivePoint, b: ObjectivePoint) -> bool:
    """Constraint-aware dominance.

    A feasible point dominates every infeasible one; between infeasible
    points the smaller penalty dominates; between feasible points the usual
    componentwise rule applies.
    """
    if a.objectives.shape != b.objectives.shape:
        raise ContractError(
            f"dimension mismatch: {a.objectives.shape} vs {b.objectives.shape}"
        )
    if a.feasible and not b.feasible:
        return True
    if not a.feasible:
        if b.feasible:
            return False
        return a.penalty < b.penalty
    return bool(
        np.all(a.objectives <= b.objectives) and np.any(a.objectives < b.objectives)
    )


def _point_arrays(points):
    obj = np.vstack([p.objectives for p in points])
    feas = np.array([p.feasible for p in points], dtype=bool)
    pen = np.array([p.penalty for p in points], dtype=float)
    return obj, feas, pen


def _dominance_matrix(obj, feas, pen):
    """D[i, j] is True when point i dominates point j."""
    le = np.all(obj[:, None, :] <= obj[None, :, :], axis=-1)
    lt = np.any(obj[:, None, :] < obj[None, :, :], axis=-1)
    both_feasible = feas[:, None] & feas[None, :]
    both_infeasible = ~feas[:, None] & ~feas[None, :]
    feasible_over_infeasible = feas[:, None] & ~feas[None, :]
    return (
        (both_feasible & le & lt)
        | feasible_over_infeasible
        | (both_infeasible & (pen[:, None] < pen[None, :]))
    )


def nondominated_sort(points) -> list[list[int]]:
    """Partition indices into fronts: front 0 is the maximal non-dominated
    set, each later front is the non-dominated set of the remainder."""
    if len(points) == 0:
        raise ContractError("cannot sort an empty point set")
    shapes = {p.objectives.shape for p in points}
    if len(shapes) != 1:
        raise ContractError(f"mixed objective dimensions: {shapes}")
    dom = _dominance_matrix(*_point_arrays(points))
    dominated_count = dom.sum(axis=0)
    remaining = np.ones(len(points), dtype=bool)
    fronts = []
    while remaining.any():
        current = remaining & (dominated_count == 0)
        fronts.append(np.flatnonzero(current).tolist())
        dominated_count = dominated_count - dom[current].sum(axis=0)
        remaining &= ~current
    return fronts


def crowding_distance(front) -> np.ndarray:
    """NSGA-II crowding distance for one mutually non-dominated front.

    Boundary points get +inf; interior points accumulate span-normalized
    neighbor gaps per objective.  A zero-span objective contributes nothing.
    Fronts of one or two points are all-boundary.
    """
    obj = np.vstack([
        p.objectives if isinstance(p, ObjectivePoint) else np.atleast_1d(p)
        for p in front
    ])
    n, n_obj = obj.shape
    distances = np.zeros(n)
    if n <= 2:
        return np.full(n, np.inf)
    for j in range(n_obj):
        order = np.argsort(obj[:, j], kind="stable")
        distances[order[0]] = np.inf
        distances[order[-1]] = np.inf
        span = obj[order[-1], j] - obj[order[0], j]
        if span == 0:
            continue
        gaps = (obj[order[2:], j] - obj[order[:-2], j]) / span
        distances[order[1:-1]] += gaps
    return distances


def reference_directions(n_obj: int, divisions: int) -> np.ndarray:
    """Simplex-lattice directions with coordinates summing to 1.

    Produces C(divisions + n_obj - 1, n_obj - 1) points in deterministic
    lexicographic order.
    """
    if n_obj < 2 or divisions < 1:
        raise ContractError("need n_obj >= 2 and divisions >= 1")

    def compositions(total, parts):
        if parts == 1:
            yield (total,)
            return
        for head in range(total + 1):
            for tail in compositions(total - head, parts - 1):
                yield (head, *tail)

    return np.array(list(compositions(divisions, n_obj)), dtype=float) / divisions


def _associate(normalized, directions):
    """Nearest reference direction by perpendicular distance to the ray."""
    unit = directions / np.linalg.norm(directions, axis=1, keepdims=True)
    projection = normalized @ unit.T
    perp = np.linalg.norm(
        normalized[:, None, :] - projection[:, :, None] * unit[None, :, :], axis=-1
    )
    niche = np.argmin(perp, axis=1)
    return niche, perp[np.arange(len(normalized)), niche]


def niching_rank(normalized, directions, initial_counts=None, seq=None) -> list[int]:
    """Rank order (best first) of pre-normalized points under niche
    preservation.

    Selection repeatedly visits the least-occupied niche that still holds
    unranked points; within a niche the smaller perpendicular distance wins,
    then earlier insertion order (``seq``; list position when omitted).
    ``initial_counts`` carries occupancy from already-ranked points
    (earlier fronts).
    """
    directions = np.asarray(directions, dtype=float)
    if directions.size == 0:
        raise ContractError("empty reference direction set")
    normalized = np.asarray(normalized, dtype=float)
    if len(normalized) == 0:
        return []
    seq = np.asarray(list(range(len(normalized))) if seq is None else seq)
    counts = (
        np.zeros(len(directions), dtype=int)
        if initial_counts is None
        else np.asarray(initial_counts, dtype=int).copy()
    )
    niche, perp = _associate(normalized, directions)
    unranked = np.ones(len(normalized), dtype=bool)
    order: list[int] = []
    for _ in range(len(normalized)):
        active = np.unique(niche[unranked])          # sorted, so count ties
        best_niche = active[np.argmin(counts[active])]  # break by niche index
        candidates = np.flatnonzero(unranked & (niche == best_niche))
        pick = candidates[np.lexsort((seq[candidates], perp[candidates]))[0]]
        order.append(int(pick))
        unranked[pick] = False
        counts[best_niche] += 1
    if initial_counts is not None:
        initial_counts[:] = counts
    return order


@dataclass(eq=False)
class _Slot:
    point: ObjectivePoint
    seq: int
    front: int = -1
    distance: float = 0.0


class ParetoBuffer:
    """Bounded archive of ranked solutions with rank-based rewards.

    One buffer has exactly one owner; insertions are strictly sequential.
    ``metric`` selects the within-front diversity ordering.  For niching,
    the reference lattice defaults to one direction per buffer slot
    (capacity - 1 divisions) and is built lazily once the objective
    dimension is known.
    """

    def __init__(self, capacity: int = 64, metric: str = "crowding",
                 directions=None, divisions: int | None = None):
        if capacity < 1:
            raise ContractError("capacity must be at least 1")
        if metric not in METRICS:
            raise ContractError(f"unknown distance metric {metric!r}")
        self.capacity = capacity
        self.metric = metric
        self.directions = None if directions is None else np.asarray(directions, float)
        self.divisions = divisions
        self._slots: list[_Slot] = []
        self._seq = 0

    def __len__(self) -> int:
        return len(self._slots)

    @property
    def entries(self) -> list[ObjectivePoint]:
        return [slot.point for slot in self._slots]

    def _ensure_directions(self, n_obj: int):
        if self.metric == "niching" and self.directions is None:
            divisions = self.divisions or max(self.capacity - 1, 1)
            self.directions = reference_directions(n_obj, divisions)

    def _normalization(self, slots):
        feasible_obj = np.array(
            [s.point.objectives for s in slots if s.point.feasible]
        )
        if len(feasible_obj) == 0:
            return None
        lo = feasible_obj.min(axis=0)
        hi = feasible_obj.max(axis=0)
        return lo, hi

    def _rank_all(self, slots) -> list[_Slot]:
        points = [s.point for s in slots]
        fronts = nondominated_sort(points)
        bounds = self._normalization(slots)
        counts = (
            np.zeros(len(self.directions), dtype=int)
            if self.metric == "niching" and self.directions is not None
            else None
        )
        ordered: list[_Slot] = []
        for front_index, front in enumerate(fronts):
            members = [slots[i] for i in front]
            if not members[0].point.feasible:
                # penalty-tied infeasible group: incumbency order
                members.sort(key=lambda s: s.seq)
                for slot in members:
                    slot.front = front_index
                    slot.distance = 0.0
                ordered.extend(members)
                continue
            if self.metric == "crowding" or len(members) == 1:
                dist = crowding_distance([s.point for s in members])
                ranked = sorted(
                    zip(members, dist), key=lambda md: (-md[1], md[0].seq)
                )
            else:
                lo, hi = bounds
                span = np.where(hi > lo, hi - lo, 1.0)
                normalized = np.array(
                    [(s.point.objectives - lo) / span for s in members]
                )
                normalized[:, hi == lo] = 0.0
                order = niching_rank(normalized, self.directions, counts,
                                     seq=[s.seq for s in members])
                _, perp = _associate(normalized, self.directions)
                ranked = [(members[i], perp[i]) for i in order]
            for slot, dist in ranked:
                slot.front = front_index
                slot.distance = float(dist)
                ordered.append(slot)
        return ordered

    def insert(self, point: ObjectivePoint) -> int:
        """Rank ``point`` against the held solutions, keep the best
        ``capacity`` of the union, and return ``-rank`` (rank is 1-based)."""
        self._ensure_directions(len(point.objectives))
        candidate = _Slot(point=point, seq=self._seq)
        self._seq += 1
        ordered = self._rank_all(self._slots + [candidate])
        rank = next(i for i, slot in enumerate(ordered) if slot is candidate) + 1
        self._slots = ordered[: self.capacity]
        return -rank

    def front(self, index: int = 0) -> list[ObjectivePoint]:
        """Points of the given non-domination front (0 = best)."""
        return [s.point for s in self._slots if s.front == index]

    def snapshot(self) -> list[dict]:
        records = []
        for slot in self._slots:
            record = {
                **{f"objective_{j}": float(v)
                   for j, v in enumerate(slot.point.objectives)},
                "feasible": slot.point.feasible,
                "penalty": slot.point.penalty,
                "front": slot.front,
                "distance": slot.distance,
            }
            payload = slot.point.payload
            if payload is not None:
                record["payload"] = payload
            records.append(record)
        return records

    def export(self, path) -> None:
        """Columnar snapshot: objectives, feasibility, penalty, rank keys,
        and the design payload."""
        records = self.snapshot()
        fieldnames: list[str] = []
        rows = []
        for record in records:
            payload = record.pop("payload", None)
            row = dict(record)
            if payload is not None:
                row.update(_flatten_payload(payload))
            rows.append(row)
            for key in row:
                if key not in fieldnames:
                    fieldnames.append(key)
        with open(path, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=fieldnames, delimiter="\t")
            writer.writeheader()
            for row in rows:
                writer.writerow({k: _format_cell(row.get(k, "")) for k in fieldnames})


def _flatten_payload(payload) -> dict:
    if hasattr(payload, "design") and hasattr(payload.design, "to_record"):
        return {"id": getattr(payload, "id", ""), **payload.design.to_record()}
    if hasattr(payload, "to_record"):
        return payload.to_record()
    return {"payload": payload}


def _format_cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)
