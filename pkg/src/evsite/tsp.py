"""
Closed-tour routing over charger locations.

Tours are permutations of point indices; the length of a tour includes
the closing edge back to the first point.  :func:`tsp_anneal` runs the
same annealing loop as :func:`~evsite.metaheuristics.simulated_annealing`
but scores 2-opt moves by their edge delta, so a proposal costs O(1)
instead of O(n).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .instance import FlpInstance, Point2D, Region
from .metaheuristics import AnnealSchedule, RunTrace
from .spatial import fixed, make_rng, sample_ppp

__all__ = [
    "TspInstance",
    "Tour",
    "random_tsp_instance",
    "tour_length",
    "tsp_anneal",
    "tsp_brute_force",
    "BRUTE_FORCE_MAX_POINTS",
    "NEIGHBORS",
]

BRUTE_FORCE_MAX_POINTS = 10
NEIGHBORS = ("2opt", "swap")


@dataclass(frozen=True, eq=False)
class TspInstance:
    points: tuple[Point2D, ...]
    region: Region
    _dist: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        pts = tuple(p if isinstance(p, Point2D) else Point2D(float(p[0]), float(p[1])) for p in self.points)
        object.__setattr__(self, "points", pts)
        if not pts:
            raise ValueError("points: need at least one point")
        bad = self.region.problems()
        if bad:
            raise ValueError("; ".join(bad))
        outside = [i for i, p in enumerate(pts) if not self.region.contains(p)]
        if outside:
            raise ValueError(f"points[{outside[0]}]: outside the region")
        xy = np.array([[p.x, p.y] for p in pts], dtype=float)
        d = np.hypot(xy[:, None, 0] - xy[None, :, 0], xy[:, None, 1] - xy[None, :, 1])
        d.setflags(write=False)
        object.__setattr__(self, "_dist", d)

    @classmethod
    def from_instance(cls, inst: FlpInstance, open_only=None) -> "TspInstance":
        """Tour over facility (charger) locations, optionally only the open ones."""
        idx = range(inst.n) if open_only is None else np.flatnonzero(np.asarray(open_only) > 0.5)
        return cls(tuple(inst.facilities[i].location for i in idx), inst.region)

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def distances(self) -> np.ndarray:
        return self._dist


@dataclass(frozen=True)
class Tour:
    order: tuple[int, ...]
    length: float


def random_tsp_instance(n: int, seed: int, region: Region = Region(0.0, 100.0, 0.0, 100.0)) -> TspInstance:
    """``n`` uniform points in ``region``, i.e. a PPP conditioned on its count."""
    return TspInstance(tuple(sample_ppp(region, fixed(n), make_rng(seed))), region)


def _check_order(n: int, order) -> list[int]:
    try:
        out = [int(i) for i in order]
    except (TypeError, ValueError):
        raise ValueError("order: must be a sequence of integers") from None
    if len(out) != n or sorted(out) != list(range(n)):
        raise ValueError(f"order: not a permutation of 0..{n - 1}")
    if any(float(a) != b for a, b in zip(order, out)):
        raise ValueError("order: must be a sequence of integers")
    return out


def tour_length(inst: TspInstance, order: Sequence[int]) -> float:
    """
    Euclidean length of the closed tour visiting ``order``.

    Raises
    ------
    ValueError
        If ``order`` is not a permutation of ``0..n-1``.
    """
    o = np.array(_check_order(inst.n, order))
    return float(inst.distances[o, np.roll(o, -1)].sum())


def tsp_anneal(
    inst: TspInstance,
    sched: AnnealSchedule,
    seed: int,
    neighbor: str = "2opt",
) -> tuple[Tour, RunTrace]:
    """
    Anneal a random initial tour.

    Parameters
    ----------
    inst : TspInstance
        At least three points.
    sched : AnnealSchedule
        ``k_max`` proposals; when ``initial_temp`` is None it is the
        standard deviation of ``temp_samples`` random tour lengths.
    seed : int
    neighbor : {"2opt", "swap"}
        ``"2opt"`` reverses a random segment; ``"swap"`` exchanges two
        positions ``i, i+1`` that are adjacent in the order.

    Returns
    -------
    tour : Tour
        Best tour visited, with its length recomputed from scratch.
    trace : RunTrace
        Best-so-far and current lengths per proposal.
    """
    if neighbor not in NEIGHBORS:
        raise ValueError(f"neighbor must be one of {', '.join(NEIGHBORS)}")
    n = inst.n
    if n < 3:
        raise ValueError("tsp_anneal needs at least 3 points")
    rng = make_rng(seed)
    D = inst.distances.tolist()
    order = [int(i) for i in rng.permutation(n)]
    e = e_init = tour_length(inst, order)
    evals = 1
    t0 = sched.initial_temp
    if t0 is None:
        lengths = [tour_length(inst, rng.permutation(n)) for _ in range(sched.temp_samples)]
        t0 = float(np.std(lengths)) or 1.0
        evals += sched.temp_samples

    k_max = sched.k_max
    if neighbor == "2opt":
        a_idx = rng.integers(n, size=k_max)
        b_idx = rng.integers(n - 1, size=k_max)
    else:
        a_idx = rng.integers(n - 1, size=k_max)
        b_idx = a_idx + 1
    u = rng.random(k_max)
    best, best_order = e, order.copy()
    best_hist = np.empty(k_max)
    cur_hist = np.empty(k_max)
    accepted = 0
    temp_fn, accept = sched.temp_fn, sched.acceptance

    for k in range(k_max):
        temp = temp_fn(t0, 1.0 - (k + 1) / k_max)
        i, j = int(a_idx[k]), int(b_idx[k])
        if neighbor == "2opt" and j >= i:
            j += 1
        if i > j:
            i, j = j, i
        if j - i >= n - 1:
            # reversing the whole order is the same cycle
            delta = 0.0
        else:
            a, b, c, d = order[i - 1], order[i], order[j], order[(j + 1) % n]
            delta = D[a][c] + D[b][d] - D[a][b] - D[c][d]
        if accept(e, e + delta, temp) >= u[k]:
            order[i : j + 1] = order[i : j + 1][::-1]
            e += delta
            accepted += 1
            if e < best:
                best, best_order = e, order.copy()
        best_hist[k] = best
        cur_hist[k] = e

    length = tour_length(inst, best_order)
    tour = Tour(tuple(best_order), length)
    trace = RunTrace(
        best_history=best_hist,
        state=np.array(order),
        energy=tour_length(inst, order),
        best_state=np.array(best_order),
        best_energy=length,
        iterations=k_max,
        evaluations=evals + k_max,
        seed=seed,
        current_history=cur_hist,
        accepted=accepted,
        initial_energy=e_init,
    )
    return tour, trace


def tsp_brute_force(inst: TspInstance) -> Tour:
    """
    Exact shortest tour by enumerating every distinct cycle.

    Point 0 is fixed first and each reversal pair is visited once
    (``order[1] < order[-1]``).  Among equally short tours the
    lexicographically smallest order is returned.

    Raises
    ------
    ValueError
        If the instance has more than ``BRUTE_FORCE_MAX_POINTS`` points.
    """
    n = inst.n
    if n > BRUTE_FORCE_MAX_POINTS:
        raise ValueError(f"brute force is limited to {BRUTE_FORCE_MAX_POINTS} points, got {n}")
    if n <= 3:
        order = tuple(range(n))
        return Tour(order, tour_length(inst, order))
    D = inst.distances.tolist()
    best, best_order = math.inf, None
    for rest in itertools.permutations(range(1, n)):
        if rest[0] > rest[-1]:
            continue
        length = D[0][rest[0]] + D[rest[-1]][0]
        for a, b in zip(rest, rest[1:]):
            length += D[a][b]
        # permutations come in lexicographic order, so only a strict drop wins a tie
        if length < best - 1e-12 * max(1.0, best if math.isfinite(best) else 1.0):
            best, best_order = length, (0,) + rest
    return Tour(best_order, tour_length(inst, best_order))
