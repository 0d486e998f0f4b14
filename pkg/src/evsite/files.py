"""
JSON instance and solution files.

Instances and solutions are stored as UTF-8 JSON with sorted keys and
full-precision floats (``repr`` round-trips every double), so the same
data always produces the same bytes.  A solution refers to its instance
by the SHA-256 of the instance's canonical JSON, never by path.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .instance import FlpInstance, FlpSolution, Region, validate
from .model import ModelConfig, check_feasible, evaluate, make_extension
from .tsp import Tour, TspInstance, tour_length

__all__ = [
    "FORMAT_VERSION",
    "FormatError",
    "InstanceFile",
    "SolutionFile",
    "instance_to_dict",
    "instance_from_dict",
    "content_hash",
    "dumps",
    "read_instance",
    "write_instance",
    "read_solution",
    "write_solution",
    "flp_solution_file",
    "tour_solution_file",
    "verify",
    "sample_trace",
]

FORMAT_VERSION = "1.0"
VERIFY_TOL = 1e-9


class FormatError(ValueError):
    """A file is not valid JSON or does not match the expected layout."""


def _num(v) -> float | None:
    v = float(v)
    return v if math.isfinite(v) else None


def dumps(obj: Any) -> str:
    """Deterministic pretty JSON, newline-terminated; non-finite floats are rejected."""
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False, ensure_ascii=False) + "\n"


def _canonical(obj: Any) -> bytes:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False).encode("utf-8")


# ---------------------------------------------------------------------------
# instances


def instance_to_dict(inst: FlpInstance) -> dict:
    r = inst.region
    return {
        "region": {"x_min": r.x_min, "x_max": r.x_max, "y_min": r.y_min, "y_max": r.y_max},
        "facilities": [
            {"id": f.id, "x": f.location.x, "y": f.location.y, "sunken_cost": f.sunken_cost, "capacity": f.capacity}
            for f in inst.facilities
        ],
        "customers": [{"id": c.id, "x": c.location.x, "y": c.location.y, "demand": c.demand} for c in inst.customers],
        "variable_cost": [list(row) for row in inst.variable_cost],
        "model": {
            "min_capacity": inst.min_capacity,
            "equity_weight": inst.equity_weight,
            "extensions": [
                {"kind": t.kind, "name": t.name, "params": dict(t.params)} for t in inst.extension_terms
            ],
        },
    }


def _get(d: dict, key: str, where: str):
    if not isinstance(d, dict) or key not in d:
        raise FormatError(f"{where}{key}: missing")
    return d[key]


def instance_from_dict(d: dict) -> FlpInstance:
    """
    Rebuild and validate an instance.

    Raises
    ------
    FormatError
        On missing keys, malformed values or invariant violations.
    """
    try:
        r = _get(d, "region", "")
        region = Region(*(float(_get(r, k, "region.")) for k in ("x_min", "x_max", "y_min", "y_max")))
        facs = _get(d, "facilities", "")
        custs = _get(d, "customers", "")
        model = _get(d, "model", "")
        for want, items, name in ((("id", "x", "y", "sunken_cost", "capacity"), facs, "facilities"),
                                  (("id", "x", "y", "demand"), custs, "customers")):
            for k, item in enumerate(items):
                for key in want:
                    _get(item, key, f"{name}[{k}].")
                if item["id"] != k:
                    raise FormatError(f"{name}[{k}].id: must equal its position {k}")
        exts = [
            make_extension(_get(e, "kind", "model.extensions[]."), _get(e, "name", "model.extensions[]."),
                           _get(e, "params", "model.extensions[]."))
            for e in _get(model, "extensions", "model.")
        ]
        inst = FlpInstance.from_arrays(
            facility_xy=[[f["x"], f["y"]] for f in facs],
            customer_xy=[[c["x"], c["y"]] for c in custs],
            sunken_cost=[f["sunken_cost"] for f in facs],
            capacity=[f["capacity"] for f in facs],
            demand=[c["demand"] for c in custs],
            variable_cost=np.asarray(_get(d, "variable_cost", ""), dtype=float).reshape(len(facs), len(custs)),
            region=region,
            min_capacity=float(_get(model, "min_capacity", "model.")),
            equity_weight=float(_get(model, "equity_weight", "model.")),
            extension_terms=exts,
        )
    except FormatError:
        raise
    except (TypeError, ValueError, KeyError) as exc:
        raise FormatError(f"instance: {exc}") from None
    problems = validate(inst)
    if problems:
        raise FormatError("; ".join(problems))
    return inst


def content_hash(inst: FlpInstance) -> str:
    """``sha256:<hex>`` of the instance's canonical JSON."""
    return "sha256:" + hashlib.sha256(_canonical(instance_to_dict(inst))).hexdigest()


@dataclass(frozen=True, eq=False)
class InstanceFile:
    """
    An instance plus how it was made.

    ``generator`` holds the seed, the PRNG identity and the generator
    configuration when the instance was sampled, else None.
    ``service_mode`` is the default used when solving it.
    """

    instance: FlpInstance
    generator: dict | None = None
    service_mode: str = "full"
    format_version: str = FORMAT_VERSION

    def __eq__(self, other):
        if not isinstance(other, InstanceFile):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    @property
    def hash(self) -> str:
        return content_hash(self.instance)

    def model_config(self, service_mode: str | None = None) -> ModelConfig:
        return ModelConfig.from_instance(self.instance, service_mode or self.service_mode)

    def tsp_instance(self) -> TspInstance:
        """Facility locations as the stops of a tour."""
        return TspInstance.from_instance(self.instance)

    def to_dict(self) -> dict:
        out = {"format_version": self.format_version, "kind": "instance", "service_mode": self.service_mode}
        out["generator"] = self.generator
        out.update(instance_to_dict(self.instance))
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "InstanceFile":
        if not isinstance(d, dict) or d.get("kind") != "instance":
            raise FormatError("kind: expected 'instance'")
        version = _get(d, "format_version", "")
        if str(version).split(".")[0] != FORMAT_VERSION.split(".")[0]:
            raise FormatError(f"format_version: unsupported {version!r}")
        mode = d.get("service_mode", "full")
        if mode not in ("full", "partial"):
            raise FormatError("service_mode: must be 'full' or 'partial'")
        return cls(instance_from_dict(d), d.get("generator"), mode, str(version))


def _load_json(path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"{path}: {exc.strerror or exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def _write(path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8", newline="\n")


def read_instance(path) -> InstanceFile:
    return InstanceFile.from_dict(_load_json(path))


def write_instance(path, f: InstanceFile) -> None:
    _write(path, dumps(f.to_dict()))


# ---------------------------------------------------------------------------
# solutions


def sample_trace(history, points: int = 201) -> dict:
    """
    Evenly spaced samples of a trace, always including the first and last entry.

    Returns ``{"length": len, "index": [...], "value": [...]}``.
    """
    h = np.asarray(history, dtype=float).ravel()
    if h.size == 0:
        return {"length": 0, "index": [], "value": []}
    idx = np.unique(np.linspace(0, h.size - 1, min(points, h.size)).round().astype(int))
    return {"length": int(h.size), "index": [int(i) for i in idx], "value": [_num(h[i]) for i in idx]}


@dataclass(frozen=True, eq=False)
class SolutionFile:
    """
    A stored FLP solution (``kind="flp"``) or tour (``kind="tour"``).

    ``result`` holds the decision variables, ``objective`` the stored
    objective (``total`` plus per-term values) and ``trace`` a summary of
    the run.
    """

    kind: str
    instance_hash: str
    solver: dict
    status: str
    result: dict
    objective: dict
    trace: dict = field(default_factory=dict)
    format_version: str = FORMAT_VERSION

    def __eq__(self, other):
        if not isinstance(other, SolutionFile):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def to_dict(self) -> dict:
        return {
            "format_version": self.format_version,
            "kind": self.kind,
            "instance_hash": self.instance_hash,
            "solver": self.solver,
            "status": self.status,
            "result": self.result,
            "objective": self.objective,
            "trace": self.trace,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SolutionFile":
        if not isinstance(d, dict):
            raise FormatError("solution: expected a JSON object")
        kind = _get(d, "kind", "")
        if kind not in ("flp", "tour"):
            raise FormatError("kind: expected 'flp' or 'tour'")
        version = _get(d, "format_version", "")
        if str(version).split(".")[0] != FORMAT_VERSION.split(".")[0]:
            raise FormatError(f"format_version: unsupported {version!r}")
        keys = ("instance_hash", "solver", "status", "result", "objective")
        vals = [_get(d, k, "") for k in keys]
        return cls(kind, *vals, trace=d.get("trace", {}), format_version=str(version))

    def flp_solution(self) -> FlpSolution | None:
        if self.kind != "flp" or self.result.get("open") is None:
            return None
        return FlpSolution(
            np.array(self.result["open"], dtype=int),
            np.array(self.result["assign"], dtype=float),
            float(self.objective["total"]),
            {k: float(v) for k, v in self.objective["terms"].items()},
        )

    def tour(self) -> Tour | None:
        if self.kind != "tour":
            return None
        return Tour(tuple(int(i) for i in self.result["order"]), float(self.objective["total"]))


def read_solution(path) -> SolutionFile:
    return SolutionFile.from_dict(_load_json(path))


def write_solution(path, f: SolutionFile) -> None:
    _write(path, dumps(f.to_dict()))


def flp_solution_file(inst_file: InstanceFile, report, solver: dict, service_mode: str) -> SolutionFile:
    """Wrap a :class:`~evsite.bnb.BnbReport` for storage."""
    sol = report.solution
    if sol is None:
        result = {"open": None, "assign": None, "open_indices": []}
        objective = {"total": None, "terms": {}}
    else:
        result = {
            "open": [int(v) for v in sol.open],
            "assign": [[float(v) for v in row] for row in sol.assign],
            "open_indices": list(sol.open_indices),
        }
        objective = {"total": float(sol.objective_total), "terms": {k: float(v) for k, v in sol.objective_terms.items()}}
    trace = {
        "nodes_explored": int(report.nodes_explored),
        "best_bound": _num(report.best_bound),
        "proven_optimal": bool(report.proven_optimal),
        "incumbent": sample_trace(report.incumbent_history),
    }
    solver = dict(solver, service_mode=service_mode)
    return SolutionFile("flp", inst_file.hash, solver, report.status, result, objective, trace)


def tour_solution_file(inst_file: InstanceFile, tour: Tour, run, solver: dict) -> SolutionFile:
    """Wrap an annealed tour and its convergence trace."""
    trace = {
        "initial_length": _num(run.initial_energy) if run.initial_energy is not None else None,
        "evaluations": int(run.evaluations),
        "accepted": int(run.accepted),
        "best": sample_trace(run.best_history),
    }
    result = {"order": [int(i) for i in tour.order]}
    return SolutionFile("tour", inst_file.hash, dict(solver), "feasible", result, {"total": float(tour.length)}, trace)


def verify(sol_file: SolutionFile, inst_file: InstanceFile, tol: float = VERIFY_TOL) -> list[str]:
    """
    Re-derive a stored solution's objective from the raw data.

    Returns a list of problems; empty means the hash matches, the
    solution is feasible and the recomputed objective agrees with the
    stored one within ``tol`` (relative).
    """
    if sol_file.instance_hash != inst_file.hash:
        return [f"instance_hash: {sol_file.instance_hash} does not match instance {inst_file.hash}"]
    out = []
    if sol_file.kind == "tour":
        tour = sol_file.tour()
        tsp = inst_file.tsp_instance()
        try:
            length = tour_length(tsp, tour.order)
        except ValueError as exc:
            return [f"result.order: {exc}"]
        if not math.isclose(length, tour.length, rel_tol=tol, abs_tol=tol):
            out.append(f"objective.total: stored {tour.length!r}, recomputed {length!r}")
        return out

    sol = sol_file.flp_solution()
    if sol is None:
        if sol_file.status in ("optimal", "feasible"):
            out.append(f"result: status {sol_file.status!r} but no solution stored")
        return out
    cfg = inst_file.model_config(sol_file.solver.get("service_mode"))
    inst = inst_file.instance
    try:
        breakdown = evaluate(inst, cfg, sol.open, sol.assign)
    except ValueError as exc:
        return [f"result: {exc}"]
    out += [f"result: {p}" for p in check_feasible(inst, cfg, sol.open, sol.assign)]
    total = breakdown.total
    if not math.isclose(total, sol.objective_total, rel_tol=tol, abs_tol=tol):
        out.append(f"objective.total: stored {sol.objective_total!r}, recomputed {total!r}")
    for name, value in breakdown.terms().items():
        stored = sol.objective_terms.get(name)
        if stored is None or not math.isclose(value, stored, rel_tol=tol, abs_tol=tol):
            out.append(f"objective.terms.{name}: stored {stored!r}, recomputed {value!r}")
    return out
