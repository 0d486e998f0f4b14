"""
Dense two-phase simplex and the FLP linear relaxations built on it.

Bland's rule (lowest-index entering column, lowest-index leaving basic
variable on ratio ties) guarantees termination on degenerate problems.
Problem sizes here are small, so a full tableau is used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .instance import FlpInstance
from .model import FEAS_TOL, ModelConfig

__all__ = [
    "LpProblem",
    "LpResult",
    "solve_lp",
    "Assignment",
    "Relaxation",
    "assign_for_open_set",
    "relax",
    "lp_bound",
]

_PIVOT_EPS = 1e-9
_SENSES = ("<=", "==", ">=")


@dataclass(frozen=True, eq=False)
class LpProblem:
    """
    ``min c @ x`` subject to ``A[r] @ x (senses[r]) b[r]`` and
    ``lower <= x <= upper``.  Infinite bounds are allowed.
    """

    c: np.ndarray
    A: np.ndarray
    senses: tuple[str, ...]
    b: np.ndarray
    lower: np.ndarray | None = None
    upper: np.ndarray | None = None

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float).ravel()
        k = c.size
        A = np.asarray(self.A, dtype=float).reshape(-1, k) if k else np.zeros((len(self.senses), 0))
        b = np.asarray(self.b, dtype=float).ravel()
        lo = np.zeros(k) if self.lower is None else np.asarray(self.lower, dtype=float).ravel()
        hi = np.full(k, np.inf) if self.upper is None else np.asarray(self.upper, dtype=float).ravel()
        senses = tuple(self.senses)
        if A.shape[0] != b.size or len(senses) != b.size:
            raise ValueError("A, senses and b must have matching row counts")
        if lo.size != k or hi.size != k:
            raise ValueError("bounds must match the number of variables")
        if any(s not in _SENSES for s in senses):
            raise ValueError(f"senses must be among {_SENSES}")
        if not (np.all(np.isfinite(c)) and np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
            raise ValueError("coefficients must be finite")
        if np.any(np.isnan(lo)) or np.any(np.isnan(hi)) or np.any(lo > hi):
            raise ValueError("need lower <= upper for every variable")
        if np.any(lo == np.inf) or np.any(hi == -np.inf):
            raise ValueError("bounds must leave every variable a finite value")
        for name, val in (("c", c), ("A", A), ("b", b), ("lower", lo), ("upper", hi)):
            object.__setattr__(self, name, val)
        object.__setattr__(self, "senses", senses)

    @property
    def num_vars(self) -> int:
        return self.c.size

    def violation(self, x) -> float:
        """Largest constraint or bound violation of ``x``."""
        x = np.asarray(x, dtype=float)
        worst = 0.0
        if self.b.size:
            r = self.A @ x - self.b
            for s, ri in zip(self.senses, r):
                v = ri if s == "<=" else (-ri if s == ">=" else abs(ri))
                worst = max(worst, v)
        worst = max(worst, float(np.max(self.lower - x, initial=0.0)), float(np.max(x - self.upper, initial=0.0)))
        return worst


@dataclass(frozen=True, eq=False)
class LpResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: np.ndarray
    objective: float
    iterations: int = 0

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


class _Tableau:
    def __init__(self, T, basis, cost_eps):
        self.T = T
        self.basis = basis
        self.cost_eps = cost_eps
        self.iterations = 0

    def pivot(self, row, col):
        T = self.T
        T[row] /= T[row, col]
        # only rows with a nonzero in the pivot column change
        hit = np.flatnonzero(T[:, col])
        hit = hit[hit != row]
        if hit.size:
            T[hit] -= T[hit, col, None] * T[row]
        self.basis[row] = col
        self.iterations += 1

    def run(self, obj, allowed, rule):
        """Optimise in place; ``obj`` is the reduced-cost row (last entry = -value)."""
        T = self.T
        nrows = T.shape[0]
        degenerate = 0
        while True:
            rc = obj[:-1]
            cand = np.flatnonzero((rc < -self.cost_eps) & allowed)
            if cand.size == 0:
                return "optimal"
            if rule == "bland" or degenerate > 50:
                col = int(cand[0])
            else:
                col = int(cand[np.argmin(rc[cand])])
            colv = T[:, col]
            rows = np.flatnonzero(colv > _PIVOT_EPS)
            if rows.size == 0:
                return "unbounded"
            ratios = T[rows, -1] / colv[rows]
            best = ratios.min()
            ties = rows[ratios <= best + 1e-12 * max(1.0, abs(best))]
            row = int(min(ties, key=lambda r: self.basis[r]))
            degenerate = degenerate + 1 if best <= 1e-12 else 0
            self.pivot(row, col)
            obj -= obj[col] * T[row]
            if self.iterations > 50 * (nrows + T.shape[1]) + 1000:
                raise RuntimeError("simplex iteration cap exceeded")


def solve_lp(p: LpProblem, rule: str = "bland") -> LpResult:
    """
    Solve ``p`` with a two-phase dense tableau simplex.

    Parameters
    ----------
    p : LpProblem
    rule : {"bland", "dantzig"}
        Entering-column rule.  ``"dantzig"`` picks the most negative
        reduced cost and falls back to Bland's rule after a run of
        degenerate pivots, so it also terminates.

    Returns
    -------
    LpResult
        Infeasible and unbounded problems are reported through ``status``.
    """
    if rule not in ("bland", "dantzig"):
        raise ValueError("rule must be 'bland' or 'dantzig'")
    k = p.num_vars
    lo, hi = p.lower, p.upper

    # x = offset + M @ z with z >= 0
    offset = np.zeros(k)
    cols = []  # (var index, sign)
    upper_rows = []  # (z index, bound)
    for j in range(k):
        if lo[j] == hi[j]:
            offset[j] = lo[j]
        elif math.isfinite(lo[j]):
            offset[j] = lo[j]
            cols.append((j, 1.0))
            if math.isfinite(hi[j]):
                upper_rows.append((len(cols) - 1, hi[j] - lo[j]))
        elif math.isfinite(hi[j]):
            offset[j] = hi[j]
            cols.append((j, -1.0))
        else:
            cols.append((j, 1.0))
            cols.append((j, -1.0))
    nz = len(cols)
    M = np.zeros((k, nz))
    for z, (j, sgn) in enumerate(cols):
        M[j, z] = sgn

    cz = p.c @ M
    Az = p.A @ M if p.b.size else np.zeros((0, nz))
    bz = p.b - (p.A @ offset if p.b.size else 0.0)
    senses = list(p.senses)
    if upper_rows:
        U = np.zeros((len(upper_rows), nz))
        for r, (z, ub) in enumerate(upper_rows):
            U[r, z] = 1.0
        Az = np.vstack([Az, U])
        bz = np.concatenate([bz, [ub for _, ub in upper_rows]])
        senses += ["<="] * len(upper_rows)

    def finish(status, z=None, iters=0):
        if z is None:
            return LpResult(status, np.full(k, np.nan), math.nan if status == "infeasible" else -math.inf, iters)
        x = offset + M @ z
        return LpResult(status, x, float(p.c @ x), iters)

    nr = len(senses)
    if nr == 0:
        if np.any(cz < 0):
            return finish("unbounded")
        return finish("optimal", np.zeros(nz))

    # flip rows to get b >= 0
    A = Az.copy()
    b = bz.copy()
    for r in range(nr):
        if b[r] < 0:
            A[r] *= -1
            b[r] *= -1
            senses[r] = {"<=": ">=", ">=": "<=", "==": "=="}[senses[r]]

    n_slack = sum(s != "==" for s in senses)
    n_art = sum(s != "<=" for s in senses)
    ncol = nz + n_slack + n_art
    T = np.zeros((nr, ncol + 1))
    T[:, :nz] = A
    T[:, -1] = b
    basis = [0] * nr
    si, ai = nz, nz + n_slack
    art_rows = []
    for r, s in enumerate(senses):
        if s == "<=":
            T[r, si] = 1.0
            basis[r] = si
            si += 1
        else:
            if s == ">=":
                T[r, si] = -1.0
                si += 1
            T[r, ai] = 1.0
            basis[r] = ai
            art_rows.append(r)
            ai += 1

    cost_eps = 1e-9 * max(1.0, float(np.max(np.abs(cz), initial=0.0)))
    tab = _Tableau(T, basis, 1e-11)
    is_art = np.zeros(ncol, dtype=bool)
    is_art[nz + n_slack:] = True

    if art_rows:
        obj = np.zeros(ncol + 1)
        obj[:ncol][is_art] = 1.0
        for r in art_rows:
            obj -= T[r]
        tab.run(obj, np.ones(ncol, dtype=bool), rule)
        infeas = -obj[-1]
        if infeas > 1e-9 * max(1.0, float(np.max(b))):
            return finish("infeasible", iters=tab.iterations)
        # drive zero-valued artificials out of the basis; drop redundant rows
        keep = []
        for r in range(nr):
            if is_art[tab.basis[r]]:
                row = tab.T[r, :ncol]
                cand = np.flatnonzero((np.abs(row) > _PIVOT_EPS) & ~is_art)
                if cand.size:
                    tab.pivot(r, int(cand[0]))
                    keep.append(r)
            else:
                keep.append(r)
        tab.T = tab.T[keep]
        tab.basis = [tab.basis[r] for r in keep]

    tab.cost_eps = cost_eps
    cfull = np.zeros(ncol)
    cfull[:nz] = cz
    cB = cfull[tab.basis]
    obj = np.concatenate([cfull, [0.0]]) - cB @ tab.T
    status = tab.run(obj, ~is_art, rule)
    if status == "unbounded":
        return finish("unbounded", iters=tab.iterations)
    z = np.zeros(ncol)
    z[tab.basis] = tab.T[:, -1]
    z = np.maximum(z[:nz], 0.0)
    return finish("optimal", z, tab.iterations)


# ---------------------------------------------------------------------------
# FLP relaxations


class Assignment(NamedTuple):
    assign: np.ndarray
    transport: float


class Relaxation(NamedTuple):
    bound: float
    open: np.ndarray  # relaxed x in [0, 1]
    assign: np.ndarray


def _quick_infeasible(inst: FlpInstance, cfg: ModelConfig, fixed) -> bool:
    """Cheap necessary conditions, checked before building an LP."""
    cap = sum(inst.capacities[i] for i, f in enumerate(fixed) if f != 0)
    total = float(inst.demands.sum())
    if cfg.full_service and cap < total * (1 - 1e-12):
        return True
    forced = sum(1 for f in fixed if f == 1)
    return inst.min_capacity * forced > total * (1 + 1e-12)


def relax(
    inst: FlpInstance, cfg: ModelConfig, fixed: Sequence[int | None], rule: str = "dantzig"
) -> Relaxation | None:
    """
    LP relaxation of the linear model with some ``x_i`` fixed.

    ``fixed[i]`` is 0, 1, or ``None`` (relaxed to [0, 1]).  Returns
    ``None`` when the relaxation is infeasible.

    The linking rows ``y_ij <= x_i`` of relaxed facilities are added
    lazily: the LP is solved without them, violated rows are appended
    and the LP is solved again.  Each round is a relaxation of the full
    LP, so a solution violating no linking row is optimal for it.
    """
    n, m = inst.n, inst.m
    fixed = list(fixed)
    if len(fixed) != n or any(f not in (0, 1, None) for f in fixed):
        raise ValueError("fixed must hold 0, 1 or None for every facility")
    if _quick_infeasible(inst, cfg, fixed):
        return None
    avail = [i for i in range(n) if fixed[i] != 0]
    free = [i for i in avail if fixed[i] is None]
    xcol = {i: len(avail) * m + t for t, i in enumerate(free)}
    nv = len(avail) * m + len(free)
    if nv == 0:
        # nothing can open
        if cfg.full_service and m:
            return None
        return Relaxation(0.0, np.zeros(n), np.zeros((n, m)))

    d = inst.demands
    c = np.zeros(nv)
    for t, i in enumerate(avail):
        c[t * m:(t + 1) * m] = inst.unit_transport_costs[i]
    for i in free:
        c[xcol[i]] = inst.sunken_costs[i]
    const = float(sum(inst.sunken_costs[i] for i in avail if fixed[i] == 1))

    rows, senses, rhs = [], [], []
    svc = "==" if cfg.full_service else "<="
    for j in range(m):
        r = np.zeros(nv)
        r[j:len(avail) * m:m] = 1.0
        rows.append(r)
        senses.append(svc)
        rhs.append(1.0)
    for t, i in enumerate(avail):
        r = np.zeros(nv)
        r[t * m:(t + 1) * m] = d
        if i in xcol:
            r[xcol[i]] = -inst.capacities[i]
            rows.append(r)
            senses.append("<=")
            rhs.append(0.0)
            if inst.min_capacity > 0:
                rmin = -r.copy()
                rmin[xcol[i]] = inst.min_capacity
                rows.append(rmin)
                senses.append("<=")
                rhs.append(0.0)
        else:
            rows.append(r)
            senses.append("<=")
            rhs.append(inst.capacities[i])
            if inst.min_capacity > 0:
                rows.append(r.copy())
                senses.append(">=")
                rhs.append(inst.min_capacity)

    upper = np.full(nv, np.inf)
    for i in free:
        upper[xcol[i]] = 1.0
    lower = np.zeros(nv)
    free_t = np.array([t for t, i in enumerate(avail) if i in xcol], dtype=int)
    free_x = np.array([xcol[avail[t]] for t in free_t], dtype=int)
    linked = np.zeros((len(free_t), m), dtype=bool)
    while True:
        res = solve_lp(LpProblem(c, np.array(rows), tuple(senses), np.array(rhs), lower, upper), rule=rule)
        if res.status != "optimal":
            return None
        z = res.x
        if not free_t.size:
            break
        yv = z[:len(avail) * m].reshape(len(avail), m)[free_t]
        viol = (yv > z[free_x][:, None] + FEAS_TOL) & ~linked
        if not viol.any():
            break
        for a, j in zip(*np.nonzero(viol)):
            link = np.zeros(nv)
            link[free_t[a] * m + j] = 1.0
            link[free_x[a]] = -1.0
            rows.append(link)
            senses.append("<=")
            rhs.append(0.0)
        linked |= viol

    x = np.array([1.0 if f == 1 else 0.0 for f in fixed])
    for i in free:
        x[i] = min(1.0, max(0.0, z[xcol[i]]))
    y = np.zeros((n, m))
    for t, i in enumerate(avail):
        y[i] = np.clip(z[t * m:(t + 1) * m], 0.0, 1.0)
    return Relaxation(res.objective + const, x, y)


def assign_for_open_set(inst: FlpInstance, cfg: ModelConfig, open_, rule: str = "dantzig") -> Assignment | None:
    """
    Transport-optimal assignment for a fixed set of open facilities.

    Returns ``None`` when the open capacity band cannot satisfy the
    service-mode condition.
    """
    x = np.asarray(open_).ravel()
    if x.shape != (inst.n,) or not np.all((x == 0) | (x == 1)):
        raise ValueError(f"open must be a binary vector of length {inst.n}")
    r = relax(inst, cfg, [int(v) for v in x], rule=rule)
    if r is None:
        return None
    y = r.assign
    return Assignment(y, float(np.sum(inst.unit_transport_costs * y)))


def lp_bound(inst: FlpInstance, cfg: ModelConfig, fixed: Sequence[int | None]) -> float:
    """LP lower bound on transport + sunken cost; ``inf`` if infeasible."""
    r = relax(inst, cfg, fixed)
    return math.inf if r is None else r.bound

