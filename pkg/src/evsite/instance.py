"""
Domain types for charger placement instances.

Units are abstract: lengths in map units, energy in kWh, money in an
arbitrary currency.  ``variable_cost[i][j]`` is a rate per kWh per unit
distance, so serving all of customer ``j`` from facility ``i`` costs
``variable_cost[i][j] * dist(i, j) * demand[j]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Sequence

import numpy as np

__all__ = [
    "Point2D",
    "Region",
    "Facility",
    "Customer",
    "FlpInstance",
    "FlpSolution",
    "distance",
    "distance_matrix",
    "validate",
]


@dataclass(frozen=True)
class Point2D:
    x: float
    y: float

    def __iter__(self):
        yield self.x
        yield self.y


@dataclass(frozen=True)
class Region:
    x_min: float
    x_max: float
    y_min: float
    y_max: float

    @property
    def width(self) -> float:
        return self.x_max - self.x_min

    @property
    def height(self) -> float:
        return self.y_max - self.y_min

    @property
    def area(self) -> float:
        return self.width * self.height

    def contains(self, p: Point2D) -> bool:
        return self.x_min <= p.x <= self.x_max and self.y_min <= p.y <= self.y_max

    def problems(self) -> list[str]:
        out = []
        vals = (self.x_min, self.x_max, self.y_min, self.y_max)
        if not all(math.isfinite(v) for v in vals):
            out.append("region: bounds must be finite")
        elif not self.x_min < self.x_max:
            out.append("region: x_min must be < x_max")
        elif not self.y_min < self.y_max:
            out.append("region: y_min must be < y_max")
        return out


UNIT_SQUARE = Region(0.0, 1.0, 0.0, 1.0)


@dataclass(frozen=True)
class Facility:
    id: int
    location: Point2D
    sunken_cost: float
    capacity: float


@dataclass(frozen=True)
class Customer:
    id: int
    location: Point2D
    demand: float


@dataclass(frozen=True)
class FlpInstance:
    """
    A capacitated facility location instance.

    Parameters
    ----------
    region : Region
        Bounding box every facility and customer must lie in.
    facilities : tuple of Facility
        The ``n`` candidate charger sites.
    customers : tuple of Customer
        The ``m`` demand areas.
    variable_cost : tuple of tuple of float
        ``n x m`` rate matrix.
    min_capacity : float
        Minimum load an *open* facility must serve.
    equity_weight : float
        Weight of the Gini equity penalty (0 disables it).
    extension_terms : tuple
        Extra penalty terms, see :class:`evsite.model.ExtensionTerm`.
    """

    region: Region
    facilities: tuple[Facility, ...]
    customers: tuple[Customer, ...]
    variable_cost: tuple[tuple[float, ...], ...]
    min_capacity: float = 0.0
    equity_weight: float = 0.0
    extension_terms: tuple = field(default=())

    @classmethod
    def from_arrays(
        cls,
        facility_xy,
        customer_xy,
        sunken_cost,
        capacity,
        demand,
        variable_cost,
        region: Region | None = None,
        min_capacity: float = 0.0,
        equity_weight: float = 0.0,
        extension_terms: Sequence = (),
    ) -> "FlpInstance":
        """Build an instance from plain arrays; the region defaults to the bounding box."""
        fxy = np.asarray(facility_xy, dtype=float).reshape(-1, 2)
        cxy = np.asarray(customer_xy, dtype=float).reshape(-1, 2)
        n, m = len(fxy), len(cxy)
        s = np.broadcast_to(np.asarray(sunken_cost, dtype=float), (n,))
        cap = np.broadcast_to(np.asarray(capacity, dtype=float), (n,))
        d = np.broadcast_to(np.asarray(demand, dtype=float), (m,))
        v = np.broadcast_to(np.asarray(variable_cost, dtype=float), (n, m))
        if region is None:
            pts = np.vstack([fxy, cxy]) if n + m else np.zeros((1, 2))
            lo, hi = pts.min(axis=0), pts.max(axis=0)
            # pad degenerate extents so the region stays non-empty
            pad = np.where(hi > lo, 0.0, 1.0)
            region = Region(float(lo[0]), float(hi[0] + pad[0]), float(lo[1]), float(hi[1] + pad[1]))
        facilities = tuple(
            Facility(i, Point2D(float(fxy[i, 0]), float(fxy[i, 1])), float(s[i]), float(cap[i]))
            for i in range(n)
        )
        customers = tuple(
            Customer(j, Point2D(float(cxy[j, 0]), float(cxy[j, 1])), float(d[j])) for j in range(m)
        )
        return cls(
            region=region,
            facilities=facilities,
            customers=customers,
            variable_cost=tuple(tuple(float(e) for e in row) for row in v),
            min_capacity=float(min_capacity),
            equity_weight=float(equity_weight),
            extension_terms=tuple(extension_terms),
        )

    @property
    def n(self) -> int:
        return len(self.facilities)

    @property
    def m(self) -> int:
        return len(self.customers)

    @cached_property
    def facility_xy(self) -> np.ndarray:
        return _frozen(np.array([[f.location.x, f.location.y] for f in self.facilities], dtype=float).reshape(-1, 2))

    @cached_property
    def customer_xy(self) -> np.ndarray:
        return _frozen(np.array([[c.location.x, c.location.y] for c in self.customers], dtype=float).reshape(-1, 2))

    @cached_property
    def sunken_costs(self) -> np.ndarray:
        return _frozen(np.array([f.sunken_cost for f in self.facilities], dtype=float))

    @cached_property
    def capacities(self) -> np.ndarray:
        return _frozen(np.array([f.capacity for f in self.facilities], dtype=float))

    @cached_property
    def demands(self) -> np.ndarray:
        return _frozen(np.array([c.demand for c in self.customers], dtype=float))

    @cached_property
    def cost_rates(self) -> np.ndarray:
        return _frozen(np.array(self.variable_cost, dtype=float).reshape(self.n, self.m))

    @cached_property
    def distances(self) -> np.ndarray:
        return _frozen(distance_matrix(self))

    @cached_property
    def unit_transport_costs(self) -> np.ndarray:
        """Cost of fully serving customer ``j`` from facility ``i``: ``v_ij * dist_ij * d_j``."""
        return _frozen(self.cost_rates * self.distances * self.demands[None, :])

    def with_model(self, **changes: Any) -> "FlpInstance":
        """Copy with ``min_capacity``, ``equity_weight`` or ``extension_terms`` replaced."""
        from dataclasses import replace

        allowed = {"min_capacity", "equity_weight", "extension_terms"}
        bad = set(changes) - allowed
        if bad:
            raise TypeError(f"cannot replace {sorted(bad)}")
        if "extension_terms" in changes:
            changes["extension_terms"] = tuple(changes["extension_terms"])
        return replace(self, **changes)


@dataclass(frozen=True, eq=False)
class FlpSolution:
    """Open/close vector, assignment fractions and the objective broken down by term."""

    open: np.ndarray
    assign: np.ndarray
    objective_total: float
    objective_terms: dict[str, float]

    def __post_init__(self):
        object.__setattr__(self, "open", _frozen(np.asarray(self.open, dtype=int)))
        object.__setattr__(self, "assign", _frozen(np.asarray(self.assign, dtype=float)))

    @property
    def open_indices(self) -> tuple[int, ...]:
        return tuple(int(i) for i in np.flatnonzero(self.open))

    def problems(self, full_service: bool = False, tol: float = 1e-7) -> list[str]:
        """Check the structural invariants every emitted solution must satisfy."""
        out = []
        x, y = self.open, self.assign
        if not np.all((x == 0) | (x == 1)):
            out.append("open: entries must be 0 or 1")
        if np.any(y < -tol) or np.any(y > 1 + tol):
            out.append("assign: entries must lie in [0, 1]")
        if np.any((y > tol) & (x[:, None] == 0)):
            out.append("assign: closed facility serves demand")
        cols = y.sum(axis=0)
        if np.any(cols > 1 + tol):
            out.append("assign: a customer is served more than once")
        if full_service and np.any(np.abs(cols - 1) > tol):
            out.append("assign: a customer is not fully served")
        total = sum(self.objective_terms.values())
        if not math.isclose(total, self.objective_total, rel_tol=1e-9, abs_tol=1e-9):
            out.append("objective_total does not equal the sum of its terms")
        return out


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def distance(a: Point2D, b: Point2D) -> float:
    """Euclidean distance between two points."""
    return math.hypot(a.x - b.x, a.y - b.y)


def distance_matrix(inst: FlpInstance) -> np.ndarray:
    """``n x m`` matrix of facility-to-customer Euclidean distances."""
    f = np.array([[fa.location.x, fa.location.y] for fa in inst.facilities], dtype=float).reshape(-1, 2)
    c = np.array([[cu.location.x, cu.location.y] for cu in inst.customers], dtype=float).reshape(-1, 2)
    diff = f[:, None, :] - c[None, :, :]
    return np.hypot(diff[..., 0], diff[..., 1])


def validate(inst: FlpInstance) -> list[str]:
    """
    Return a list of human-readable invariant violations (empty if valid).

    Each entry starts with the offending field, e.g.
    ``"customers[3].demand: must be > 0"``.
    """
    out = list(inst.region.problems())
    n, m = inst.n, inst.m
    if n < 1:
        out.append("facilities: need at least one facility")
    if m < 1:
        out.append("customers: need at least one customer")
    region_ok = not inst.region.problems()
    for f in inst.facilities:
        tag = f"facilities[{f.id}]"
        if not (math.isfinite(f.location.x) and math.isfinite(f.location.y)):
            out.append(f"{tag}.location: coordinates must be finite")
        elif region_ok and not inst.region.contains(f.location):
            out.append(f"{tag}.location: outside region")
        if not (math.isfinite(f.sunken_cost) and f.sunken_cost >= 0):
            out.append(f"{tag}.sunken_cost: must be >= 0")
        if not (math.isfinite(f.capacity) and f.capacity > 0):
            out.append(f"{tag}.capacity: must be > 0")
    for c in inst.customers:
        tag = f"customers[{c.id}]"
        if not (math.isfinite(c.location.x) and math.isfinite(c.location.y)):
            out.append(f"{tag}.location: coordinates must be finite")
        elif region_ok and not inst.region.contains(c.location):
            out.append(f"{tag}.location: outside region")
        if not (math.isfinite(c.demand) and c.demand > 0):
            out.append(f"{tag}.demand: must be > 0")
    v = inst.variable_cost
    if len(v) != n or any(len(row) != m for row in v):
        out.append(f"variable_cost: shape must be {n}x{m}")
    elif any(not (math.isfinite(e) and e >= 0) for row in v for e in row):
        out.append("variable_cost: entries must be finite and >= 0")
    cmin = inst.min_capacity
    if not (math.isfinite(cmin) and cmin >= 0):
        out.append("min_capacity: must be >= 0")
    elif n and cmin > min(f.capacity for f in inst.facilities):
        out.append("min_capacity: exceeds the smallest facility capacity")
    if not (math.isfinite(inst.equity_weight) and inst.equity_weight >= 0):
        out.append("equity_weight: must be >= 0")
    names = [t.name for t in inst.extension_terms]
    if len(set(names)) != len(names):
        out.append("extension_terms: names must be unique")
    return out
