"""Compass (coordinate) pattern search."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .problem import BlackBoxProblem, RunTrace

__all__ = ["PatternConfig", "pattern_search"]


@dataclass(frozen=True)
class PatternConfig:
    initial_mesh: float = 1.0
    expansion: float = 2.0
    contraction: float = 0.5
    mesh_tol: float = 1e-10
    max_mesh: float = np.inf
    max_evaluations: int = 10_000
    opportunistic: bool = True

    def __post_init__(self):
        if not (self.initial_mesh > 0 and self.expansion >= 1 and 0 < self.contraction < 1):
            raise ValueError("need initial_mesh > 0, expansion >= 1 and 0 < contraction < 1")
        if self.max_evaluations < 1:
            raise ValueError("max_evaluations must be >= 1")


def pattern_search(p: BlackBoxProblem, cfg: PatternConfig, start) -> RunTrace:
    """
    Poll ``x +/- mesh * e_i`` for every coordinate ``i``.

    A successful poll moves there and multiplies the mesh by
    ``cfg.expansion``; a failed one multiplies it by ``cfg.contraction``.
    Stops when the mesh drops to ``cfg.mesh_tol`` or the evaluation
    budget runs out.  No randomness is involved.  A start outside the
    bounds is clipped and the clipping is recorded in ``notes``.
    """
    if not p.is_continuous:
        raise ValueError("pattern_search needs a bounded continuous problem")
    raw = np.asarray(start, dtype=float).reshape(p.dimension)
    x = p.clip(raw)
    notes = ("start clipped to bounds",) if not np.array_equal(x, raw) else ()
    fx = float(p.energy(x))
    evals = 1
    hist = [fx]
    mesh = cfg.initial_mesh
    dirs = [(i, s) for i in range(p.dimension) for s in (1.0, -1.0)]

    while mesh > cfg.mesh_tol and evals < cfg.max_evaluations:
        best_y, best_f = None, fx
        for i, s in dirs:
            if evals >= cfg.max_evaluations:
                break
            y = x.copy()
            y[i] = min(p.upper[i], max(p.lower[i], y[i] + s * mesh))
            if y[i] == x[i]:
                continue
            fy = float(p.energy(y))
            evals += 1
            if fy < best_f:
                best_y, best_f = y, fy
            hist.append(min(hist[-1], fy))
            if best_y is not None and cfg.opportunistic:
                break
        if best_y is not None:
            x, fx = best_y, best_f
            mesh = min(mesh * cfg.expansion, cfg.max_mesh)
        else:
            mesh *= cfg.contraction

    return RunTrace(
        best_history=np.array(hist),
        state=x,
        energy=fx,
        best_state=x.copy(),
        best_energy=fx,
        iterations=evals,
        evaluations=evals,
        seed=None,
        notes=notes + (f"final_mesh={mesh:.3g}",),
    )
