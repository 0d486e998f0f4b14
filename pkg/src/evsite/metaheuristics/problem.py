"""Problem, schedule and trace types shared by every black-box solver."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

__all__ = [
    "BlackBoxProblem",
    "AnnealSchedule",
    "RunTrace",
    "metropolis",
    "linear_cooling",
    "geometric_cooling",
    "gaussian_coordinate_step",
]

Neighbor = Callable[[Any, np.random.Generator, float], Any]


def gaussian_coordinate_step(lower, upper, step: float = 0.1) -> Neighbor:
    """
    Neighbour that moves one random coordinate by a Gaussian step.

    The standard deviation is ``step * (upper - lower) * sqrt(heat)``,
    where ``heat = T / T0`` is the relative temperature passed by the
    annealer, so moves shrink as the system cools.  Results are clipped
    to the bounds.
    """
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    width = upper - lower
    dim = lower.size

    def neighbor(x, rng, heat=1.0):
        out = np.array(x, dtype=float)
        i = int(rng.random() * dim)
        sigma = step * width[i] * math.sqrt(max(heat, 0.0))
        out[i] = min(upper[i], max(lower[i], out[i] + sigma * rng.standard_normal()))
        return out

    return neighbor


@dataclass(frozen=True, eq=False)
class BlackBoxProblem:
    """
    A minimisation problem seen only through its energy function.

    Continuous problems carry ``lower``/``upper`` bounds; discrete ones
    leave them ``None`` and supply ``sample`` and ``neighbor``.  The
    neighbour is called as ``neighbor(state, rng, heat)`` with
    ``heat = T / T0`` in [0, 1]; it may ignore ``heat``.
    """

    energy: Callable[[Any], float]
    dimension: int
    lower: np.ndarray | None = None
    upper: np.ndarray | None = None
    sample: Callable[[np.random.Generator], Any] | None = None
    neighbor: Neighbor | None = None

    @classmethod
    def continuous(cls, energy, lower, upper, step: float = 0.1, neighbor: Neighbor | None = None):
        lower = np.atleast_1d(np.asarray(lower, dtype=float))
        upper = np.atleast_1d(np.asarray(upper, dtype=float))
        if lower.shape != upper.shape or np.any(lower > upper):
            raise ValueError("need lower <= upper with matching shapes")
        lower.setflags(write=False)
        upper.setflags(write=False)

        def sample(rng):
            return rng.uniform(lower, upper)

        return cls(
            energy=energy,
            dimension=lower.size,
            lower=lower,
            upper=upper,
            sample=sample,
            neighbor=neighbor or gaussian_coordinate_step(lower, upper, step),
        )

    @classmethod
    def discrete(cls, energy, dimension: int, sample, neighbor):
        return cls(energy=energy, dimension=dimension, sample=sample, neighbor=neighbor)

    @property
    def is_continuous(self) -> bool:
        return self.lower is not None

    def clip(self, x) -> np.ndarray:
        return np.clip(np.asarray(x, dtype=float), self.lower, self.upper)


def metropolis(e_old: float, e_new: float, temperature: float) -> float:
    """Probability of accepting a move from energy ``e_old`` to ``e_new``."""
    if e_new <= e_old:
        return 1.0
    if temperature <= 0 or math.isinf(e_new):
        return 0.0
    return math.exp(-(e_new - e_old) / temperature)


def linear_cooling(t0: float, remaining: float) -> float:
    return t0 * remaining


def geometric_cooling(ratio: float) -> Callable[[float, float], float]:
    """Cooling from ``t0`` down to ``t0 * ratio`` geometrically over the run."""
    if not 0 < ratio <= 1:
        raise ValueError("ratio must lie in (0, 1]")

    def temp(t0: float, remaining: float) -> float:
        return t0 * ratio ** (1.0 - remaining)

    return temp


@dataclass(frozen=True)
class AnnealSchedule:
    """
    Parameters
    ----------
    k_max : int
        Number of iterations (neighbour proposals).
    initial_temp : float, optional
        ``T0``.  When omitted, the standard deviation of the energy over
        ``temp_samples`` random states is used.
    temp_fn : callable
        ``temp_fn(T0, remaining)`` with ``remaining = 1 - (k + 1) / k_max``.
    acceptance : callable
        ``acceptance(e_old, e_new, T)`` returning a probability.
    """

    k_max: int
    initial_temp: float | None = None
    temp_fn: Callable[[float, float], float] = linear_cooling
    acceptance: Callable[[float, float, float], float] = metropolis
    temp_samples: int = 100

    def __post_init__(self):
        if self.k_max < 0:
            raise ValueError("k_max must be >= 0")
        if self.initial_temp is not None and not self.initial_temp > 0:
            raise ValueError("initial_temp must be > 0")


@dataclass(frozen=True, eq=False)
class RunTrace:
    """
    Result of one solver run.

    ``best_history[k]`` is the best energy seen after the ``k``-th energy
    evaluation of the main loop, so the array is non-increasing.
    ``current_history`` holds the energy of the current state and
    ``initial_energy`` that of the starting state (annealing only).
    """

    best_history: np.ndarray
    state: Any
    energy: float
    best_state: Any
    best_energy: float
    iterations: int
    evaluations: int
    seed: int | None
    current_history: np.ndarray | None = None
    accepted: int = 0
    initial_energy: float | None = None
    notes: tuple[str, ...] = field(default=())
