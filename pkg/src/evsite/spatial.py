"""
Homogeneous Poisson point process placement of chargers and demand areas.

All randomness flows through a :class:`numpy.random.Generator` backed by
PCG64, which produces the same stream for the same seed on every platform.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .instance import Customer, Facility, FlpInstance, Point2D, Region, validate

__all__ = [
    "PRNG_NAME",
    "CountMode",
    "fixed",
    "poisson",
    "CostRanges",
    "GenConfig",
    "GenerationError",
    "make_rng",
    "sample_ppp",
    "generate_instance",
]

PRNG_NAME = "numpy.random.PCG64"


class GenerationError(ValueError):
    """Raised when a configuration cannot produce a valid instance."""


@dataclass(frozen=True)
class CountMode:
    """How many points to draw: exactly ``count`` or Poisson(``intensity * area``)."""

    kind: str
    value: float

    def __post_init__(self):
        if self.kind == "fixed":
            if self.value < 0 or int(self.value) != self.value:
                raise ValueError("fixed count must be a non-negative integer")
        elif self.kind == "poisson":
            if not self.value > 0:
                raise ValueError("poisson intensity must be > 0")
        else:
            raise ValueError(f"unknown count mode {self.kind!r}")

    def to_dict(self) -> dict:
        return {"kind": self.kind, "value": int(self.value) if self.kind == "fixed" else float(self.value)}


def fixed(count: int) -> CountMode:
    return CountMode("fixed", int(count))


def poisson(intensity: float) -> CountMode:
    return CountMode("poisson", float(intensity))


@dataclass(frozen=True)
class CostRanges:
    """Uniform sampling ranges ``(lo, hi)`` for the per-site parameters."""

    sunken_cost: tuple[float, float] = (50.0, 150.0)
    capacity: tuple[float, float] = (40.0, 80.0)
    rate: tuple[float, float] = (0.5, 1.5)
    demand: tuple[float, float] = (5.0, 15.0)

    def problems(self) -> list[str]:
        out = []
        for name in ("sunken_cost", "capacity", "rate", "demand"):
            lo, hi = getattr(self, name)
            if not (0 <= lo <= hi):
                out.append(f"cost_ranges.{name}: need 0 <= min <= max")
        for name in ("capacity", "demand"):
            if getattr(self, name)[0] <= 0:
                out.append(f"cost_ranges.{name}: min must be > 0")
        return out

    def to_dict(self) -> dict:
        return {k: [float(v) for v in getattr(self, k)] for k in ("sunken_cost", "capacity", "rate", "demand")}


@dataclass(frozen=True)
class GenConfig:
    region: Region = Region(0.0, 100.0, 0.0, 100.0)
    facilities: CountMode = field(default_factory=lambda: fixed(20))
    customers: CountMode = field(default_factory=lambda: fixed(40))
    seed: int = 0
    cost_ranges: CostRanges = field(default_factory=CostRanges)
    min_capacity: float = 0.0
    equity_weight: float = 0.0
    full_service: bool = True
    max_redraws: int = 100

    def to_dict(self) -> dict:
        r = self.region
        return {
            "region": [r.x_min, r.x_max, r.y_min, r.y_max],
            "facilities": self.facilities.to_dict(),
            "customers": self.customers.to_dict(),
            "seed": int(self.seed),
            "cost_ranges": self.cost_ranges.to_dict(),
            "min_capacity": float(self.min_capacity),
            "equity_weight": float(self.equity_weight),
            "full_service": bool(self.full_service),
            "max_redraws": int(self.max_redraws),
        }


def make_rng(seed: int) -> np.random.Generator:
    if not 0 <= int(seed) < 2**64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    return np.random.Generator(np.random.PCG64(int(seed)))


def sample_ppp(region: Region, mode: CountMode, rng: np.random.Generator) -> list[Point2D]:
    """
    Draw points of a homogeneous PPP restricted to ``region``.

    Given the count, points are i.i.d. uniform over the rectangle, which is
    exactly the conditional law of a homogeneous Poisson process.
    """
    bad = region.problems()
    if bad:
        raise ValueError("; ".join(bad))
    if mode.kind == "fixed":
        k = int(mode.value)
    else:
        k = int(rng.poisson(mode.value * region.area))
    if k == 0:
        return []
    xs = rng.uniform(region.x_min, region.x_max, size=k)
    ys = rng.uniform(region.y_min, region.y_max, size=k)
    return [Point2D(float(x), float(y)) for x, y in zip(xs, ys)]


def generate_instance(cfg: GenConfig) -> FlpInstance:
    """
    Generate a random instance from ``cfg``; a pure function of ``cfg``.

    Capacities and demands are redrawn (up to ``cfg.max_redraws`` times)
    until total capacity covers total demand when ``full_service`` is set.

    Raises
    ------
    GenerationError
        If the configuration is invalid or coverage never succeeds.
    """
    bad = cfg.region.problems() + cfg.cost_ranges.problems()
    cr = cfg.cost_ranges
    if not cfg.min_capacity >= 0:
        bad.append("min_capacity: must be >= 0")
    elif cfg.min_capacity > cr.capacity[0]:
        bad.append("min_capacity: exceeds the minimum of cost_ranges.capacity")
    if bad:
        raise GenerationError("; ".join(bad))

    rng = make_rng(cfg.seed)
    fpts = sample_ppp(cfg.region, cfg.facilities, rng)
    cpts = sample_ppp(cfg.region, cfg.customers, rng)
    n, m = len(fpts), len(cpts)
    if n == 0:
        raise GenerationError("facilities: drew zero facilities")
    if m == 0:
        raise GenerationError("customers: drew zero customers")

    sunk = rng.uniform(*cr.sunken_cost, size=n)
    rate = rng.uniform(*cr.rate, size=(n, m))
    for _ in range(max(1, cfg.max_redraws)):
        cap = rng.uniform(*cr.capacity, size=n)
        dem = rng.uniform(*cr.demand, size=m)
        if not cfg.full_service or cap.sum() >= dem.sum():
            break
    else:
        raise GenerationError(
            f"capacity: total capacity stayed below total demand after {cfg.max_redraws} redraws"
        )

    inst = FlpInstance(
        region=cfg.region,
        facilities=tuple(Facility(i, p, float(sunk[i]), float(cap[i])) for i, p in enumerate(fpts)),
        customers=tuple(Customer(j, p, float(dem[j])) for j, p in enumerate(cpts)),
        variable_cost=tuple(tuple(float(e) for e in row) for row in rate),
        min_capacity=float(cfg.min_capacity),
        equity_weight=float(cfg.equity_weight),
    )
    problems = validate(inst)
    if problems:
        raise GenerationError("; ".join(problems))
    return inst
