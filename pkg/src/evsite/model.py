"""
Objective and constraint evaluation for the extended capacitated FLP.

The objective is

    transport + sunken + equity_weight * gini(fulfillment) + sum(extensions)

with ``transport = sum_ij v_ij * dist_ij * d_j * y_ij`` and
``sunken = sum_i s_i * x_i``.  Fulfillment of customer ``j`` is
``sum_i y_ij``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .instance import FlpInstance, FlpSolution

__all__ = [
    "FEAS_TOL",
    "ExtensionTerm",
    "ModelConfig",
    "ObjectiveBreakdown",
    "max_distance_term",
    "EXTENSION_KINDS",
    "make_extension",
    "gini",
    "equity_penalty",
    "evaluate",
    "check_feasible",
    "package_solution",
]

FEAS_TOL = 1e-7
SERVICE_MODES = ("full", "partial")

Penalty = Callable[[FlpInstance, np.ndarray, np.ndarray, Mapping[str, float]], float]


@dataclass(frozen=True)
class ExtensionTerm:
    """
    A pluggable penalty added to the objective.

    ``evaluate(inst, open, assign, params)`` must be deterministic and
    return a finite scalar for feasible inputs.  ``bounds`` maps a
    parameter name to an inclusive ``(lo, hi)`` box.
    """

    name: str
    evaluate: Penalty
    params: Mapping[str, float] = field(default_factory=dict)
    bounds: Mapping[str, tuple[float, float]] = field(default_factory=dict)
    kind: str = "custom"

    def __call__(self, inst, x, y) -> float:
        return float(self.evaluate(inst, x, y, self.params))

    def param_problems(self) -> list[str]:
        out = []
        for key, (lo, hi) in self.bounds.items():
            if key not in self.params:
                out.append(f"extension {self.name}: missing parameter {key}")
            elif not lo <= self.params[key] <= hi:
                out.append(f"extension {self.name}: parameter {key}={self.params[key]} outside [{lo}, {hi}]")
        return out


def _max_distance_penalty(inst, x, y, params) -> float:
    over = np.maximum(0.0, inst.distances - params["threshold"])
    return float(params["weight"] * np.sum(y * over))


def max_distance_term(weight: float, threshold: float, name: str = "max_distance") -> ExtensionTerm:
    """Penalise every unit of assignment that travels further than ``threshold``."""
    return ExtensionTerm(
        name=name,
        evaluate=_max_distance_penalty,
        params={"weight": float(weight), "threshold": float(threshold)},
        bounds={"weight": (0.0, math.inf), "threshold": (0.0, math.inf)},
        kind="max_distance",
    )


EXTENSION_KINDS: dict[str, Callable[..., ExtensionTerm]] = {
    "max_distance": lambda name, params: max_distance_term(name=name, **params),
}


def make_extension(kind: str, name: str, params: Mapping[str, float]) -> ExtensionTerm:
    try:
        factory = EXTENSION_KINDS[kind]
    except KeyError:
        raise ValueError(f"unknown extension kind {kind!r}") from None
    return factory(name, dict(params))


@dataclass(frozen=True)
class ModelConfig:
    service_mode: str = "full"
    equity_weight: float = 0.0
    extension_terms: tuple[ExtensionTerm, ...] = ()

    def __post_init__(self):
        if self.service_mode not in SERVICE_MODES:
            raise ValueError(f"service_mode must be one of {SERVICE_MODES}")
        if not self.equity_weight >= 0:
            raise ValueError("equity_weight must be >= 0")
        object.__setattr__(self, "extension_terms", tuple(self.extension_terms))

    @classmethod
    def from_instance(cls, inst: FlpInstance, service_mode: str = "full") -> "ModelConfig":
        return cls(service_mode, inst.equity_weight, inst.extension_terms)

    @property
    def full_service(self) -> bool:
        return self.service_mode == "full"

    @property
    def is_linear(self) -> bool:
        return self.equity_weight == 0 and not self.extension_terms


@dataclass(frozen=True)
class ObjectiveBreakdown:
    transport: float
    sunken: float
    equity: float
    equity_weight: float
    extensions: dict[str, float]

    @property
    def total(self) -> float:
        return self.transport + self.sunken + self.equity_weight * self.equity + sum(self.extensions.values())

    def terms(self) -> dict[str, float]:
        """Weighted contributions keyed by term name; they sum to :attr:`total`."""
        out = {
            "transport": self.transport,
            "sunken": self.sunken,
            "equity": self.equity_weight * self.equity,
        }
        out.update(self.extensions)
        return out


def gini(values) -> float:
    """
    Gini coefficient of a non-negative vector.

    Uses the mean absolute difference over all ordered pairs,
    ``sum_ab |v_a - v_b| / (2 k^2 mean(v))``.  An all-zero vector is
    defined to have coefficient 0.

    Examples
    --------
    >>> gini([0, 0, 0, 1])
    0.75
    """
    v = np.asarray(values, dtype=float).ravel()
    if v.size == 0:
        raise ValueError("gini needs at least one value")
    if np.any(v < 0) or not np.all(np.isfinite(v)):
        raise ValueError("gini needs finite non-negative values")
    total = v.sum()
    if total == 0:
        return 0.0
    # sorted form of the pairwise sum: sum_ab |v_a - v_b| = 2 sum_i (2i - k - 1) v_(i)
    s = np.sort(v)
    k = s.size
    weights = 2.0 * np.arange(1, k + 1) - k - 1
    # rounding can push equal values a hair below zero
    return max(0.0, float(2.0 * np.dot(weights, s) / (2.0 * k * total)))


def equity_penalty(inst: FlpInstance, assign) -> float:
    """Gini coefficient of per-customer fulfillment ``f_j = sum_i y_ij``."""
    y = np.asarray(assign, dtype=float)
    if y.shape != (inst.n, inst.m):
        raise ValueError(f"assign must have shape {(inst.n, inst.m)}")
    return gini(np.clip(y.sum(axis=0), 0.0, None))


def _coerce(inst: FlpInstance, open_, assign) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(open_, dtype=float).ravel()
    y = np.asarray(assign, dtype=float)
    if x.shape != (inst.n,):
        raise ValueError(f"open must have length {inst.n}, got {x.shape}")
    if y.shape != (inst.n, inst.m):
        raise ValueError(f"assign must have shape {(inst.n, inst.m)}, got {y.shape}")
    return x, y


def evaluate(inst: FlpInstance, cfg: ModelConfig, open_, assign) -> ObjectiveBreakdown:
    """
    Break the objective of ``(open_, assign)`` into its terms.

    Raises
    ------
    ValueError
        On shape mismatch, non-binary ``open_`` or ``assign`` outside [0, 1].
    """
    x, y = _coerce(inst, open_, assign)
    if not np.all((x == 0) | (x == 1)):
        raise ValueError("open must be binary")
    if np.any(y < -FEAS_TOL) or np.any(y > 1 + FEAS_TOL) or not np.all(np.isfinite(y)):
        raise ValueError("assign entries must lie in [0, 1]")
    transport = float(np.sum(inst.unit_transport_costs * y))
    sunken = float(np.dot(inst.sunken_costs, x))
    equity = equity_penalty(inst, y) if cfg.equity_weight > 0 else 0.0
    ext = {t.name: t(inst, x, y) for t in cfg.extension_terms}
    return ObjectiveBreakdown(transport, sunken, equity, cfg.equity_weight, ext)


def check_feasible(inst: FlpInstance, cfg: ModelConfig, open_, assign, tol: float = FEAS_TOL) -> list[str]:
    """Return constraint violations of ``(open_, assign)``; empty means feasible."""
    x, y = _coerce(inst, open_, assign)
    out = []
    if not np.all((x == 0) | (x == 1)):
        out.append("open: entries must be 0 or 1")
    for i, j in zip(*np.nonzero(y < -tol)):
        out.append(f"assign[{i},{j}]: negative")
    for i, j in zip(*np.nonzero(y > x[:, None] + tol)):
        out.append(f"assign[{i},{j}]: exceeds open[{i}]")
    cols = y.sum(axis=0)
    for j in range(inst.m):
        if cfg.full_service and abs(cols[j] - 1) > tol:
            out.append(f"customer {j}: served fraction {cols[j]:.9g} != 1 (full service)")
        elif not cfg.full_service and cols[j] > 1 + tol:
            out.append(f"customer {j}: served fraction {cols[j]:.9g} > 1")
    load = y @ inst.demands
    for i in range(inst.n):
        lo = inst.min_capacity * x[i]
        hi = inst.capacities[i] * x[i]
        scale = max(1.0, hi)
        if load[i] < lo - tol * scale:
            out.append(f"facility {i}: load {load[i]:.9g} below C_min {inst.min_capacity:.9g}")
        if load[i] > hi + tol * scale:
            out.append(f"facility {i}: load {load[i]:.9g} above capacity {hi:.9g}")
    for t in cfg.extension_terms:
        out.extend(t.param_problems())
    return out


def package_solution(inst: FlpInstance, cfg: ModelConfig, open_, assign) -> FlpSolution:
    """Evaluate ``(open_, assign)`` and wrap it as an :class:`FlpSolution`."""
    x = np.asarray(open_, dtype=int)
    y = np.clip(np.array(assign, dtype=float), 0.0, 1.0)
    y[x == 0, :] = 0.0
    b = evaluate(inst, cfg, x, y)
    terms = b.terms()
    return FlpSolution(x, y, sum(terms.values()), terms)
