"""
Command-line interface: ``evsite gen | solve-flp | solve-tsp | bench | render | verify``.

Exit codes: 0 success, 1 usage error, 2 validation error, 3 infeasible,
4 limits exceeded.  Set ``EVSITE_LOG`` (e.g. ``INFO`` or ``DEBUG``) for
progress messages on standard error.  Output files depend only on the
flags, except bench timings, which are written only with ``--timing``.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import asdict
from pathlib import Path

from .bnb import BnbConfig, NonlinearModelError, solve_exact
from .files import (
    FormatError,
    InstanceFile,
    flp_solution_file,
    read_instance,
    read_solution,
    tour_solution_file,
    verify,
    write_instance,
    write_solution,
)
from .instance import Region
from .metaheuristics import AnnealSchedule, flp_anneal
from .model import max_distance_term
from .rastrigin import DEFAULT_BUDGET, SOLVERS, UnknownSolverError, run_bench
from .spatial import PRNG_NAME, CostRanges, GenConfig, GenerationError, fixed, generate_instance, poisson
from .svg import render_svg
from .tsp import tsp_anneal

__all__ = ["main", "build_parser", "EXIT_OK", "EXIT_USAGE", "EXIT_INVALID", "EXIT_INFEASIBLE", "EXIT_LIMIT"]

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_INFEASIBLE, EXIT_LIMIT = 0, 1, 2, 3, 4

log = logging.getLogger("evsite")


class UsageError(Exception):
    pass


class ValidationError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: {message}")


# ---------------------------------------------------------------------------
# flag parsing helpers


def _region(text: str) -> Region:
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError("expected four numbers x_min,x_max,y_min,y_max") from None
    if len(vals) != 4:
        raise argparse.ArgumentTypeError("expected four numbers x_min,x_max,y_min,y_max")
    region = Region(*vals)
    if region.problems():
        raise argparse.ArgumentTypeError("; ".join(region.problems()))
    return region


def _pair(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected min,max") from None
    return lo, hi


def parse_seeds(text: str) -> list[int]:
    """``"0-4,7,9"`` -> ``[0, 1, 2, 3, 4, 7, 9]``; an empty string gives no seeds."""
    seeds: list[int] = []
    for part in filter(None, (p.strip() for p in text.split(","))):
        lo, sep, hi = part.partition("-")
        try:
            if sep and lo:
                a, b = int(lo), int(hi)
                if b < a:
                    raise ValueError
                seeds.extend(range(a, b + 1))
            else:
                seeds.append(int(part))
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad seed item {part!r}") from None
    if any(s < 0 for s in seeds):
        raise argparse.ArgumentTypeError("seeds must be >= 0")
    return sorted(set(seeds))


def _solvers(text: str) -> list[str]:
    names = [s.strip() for s in text.split(",") if s.strip()]
    if not names:
        raise argparse.ArgumentTypeError("need at least one solver")
    return names


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _write_text(path: str, text: str, flag: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8", newline="\n")
    except OSError as exc:
        raise ValidationError(f"{flag} {path}: {exc.strerror or exc}") from None


# ---------------------------------------------------------------------------
# commands


def cmd_gen(a) -> int:
    for flag, count, rate in (("--facilities", a.facilities, a.facility_intensity),
                              ("--customers", a.customers, a.customer_intensity)):
        if count is not None and count < 1:
            raise ValidationError(f"{flag}: must be >= 1, got {count}")
        if rate is not None and not rate > 0:
            raise ValidationError(f"{flag.rstrip('s')}-intensity: must be > 0")
    fac = poisson(a.facility_intensity) if a.facility_intensity is not None else fixed(20 if a.facilities is None else a.facilities)
    cus = poisson(a.customer_intensity) if a.customer_intensity is not None else fixed(40 if a.customers is None else a.customers)
    ranges = CostRanges(a.sunken_cost, a.capacity, a.rate, a.demand)
    if ranges.problems():
        raise ValidationError("; ".join(ranges.problems()))
    cfg = GenConfig(
        region=a.region,
        facilities=fac,
        customers=cus,
        seed=a.seed,
        cost_ranges=ranges,
        min_capacity=a.min_capacity,
        equity_weight=a.equity_weight,
        full_service=a.service_mode == "full",
    )
    try:
        inst = generate_instance(cfg)
    except GenerationError as exc:
        raise ValidationError(str(exc)) from None
    if a.max_distance_weight is not None:
        if a.max_distance_weight < 0 or a.max_distance_threshold < 0:
            raise ValidationError("--max-distance-weight/--max-distance-threshold: must be >= 0")
        inst = inst.with_model(extension_terms=(max_distance_term(a.max_distance_weight, a.max_distance_threshold),))
    generator = {"seed": a.seed, "prng": PRNG_NAME, "config": cfg.to_dict()}
    f = InstanceFile(inst, generator, a.service_mode)
    _write_or_fail(write_instance, a.out, f)
    print(f"wrote {a.out}: n={inst.n} facilities, m={inst.m} customers, {f.hash}")
    return EXIT_OK


def _write_or_fail(writer, path, obj) -> None:
    try:
        writer(path, obj)
    except OSError as exc:
        raise ValidationError(f"--out {path}: {exc.strerror or exc}") from None


def cmd_solve_flp(a) -> int:
    f = read_instance(a.instance)
    mode = a.service_mode or f.service_mode
    cfg = f.model_config(mode)
    if a.mode == "exact":
        bnb = BnbConfig(node_limit=a.node_limit, time_limit=a.time_limit, gap_tolerance=a.gap_tol,
                        branching_rule=a.branching)
        try:
            report = solve_exact(f.instance, cfg, bnb)
        except NonlinearModelError as exc:
            raise ValidationError(f"exact mode: {exc}; use --mode anneal") from None
        solver = {"name": "exact", "config": asdict(bnb), "seed": None}
    else:
        sched = AnnealSchedule(k_max=a.kmax, initial_temp=a.initial_temp)
        report = flp_anneal(f.instance, cfg, sched, a.seed)
        solver = {"name": "anneal", "config": {"k_max": a.kmax, "initial_temp": a.initial_temp,
                                               "cooling": "linear"}, "seed": a.seed}
    log.info("solve-flp %s: %s after %d nodes/evaluations", a.mode, report.status, report.nodes_explored)
    sf = flp_solution_file(f, report, solver, mode)
    _write_or_fail(write_solution, a.out, sf)

    print(f"status: {report.status}")
    print(f"proven_optimal: {'true' if report.proven_optimal else 'false'}")
    if report.solution is not None:
        sol = report.solution
        print(f"objective: {sol.objective_total!r}")
        for name, value in sol.objective_terms.items():
            print(f"  {name}: {value!r}")
        print(f"open: {list(sol.open_indices)}")
    if report.status == "infeasible" or (report.status == "no_incumbent" and a.mode == "anneal"):
        return EXIT_INFEASIBLE
    if report.status in ("limit", "no_incumbent"):
        return EXIT_LIMIT
    return EXIT_OK


def cmd_solve_tsp(a) -> int:
    f = read_instance(a.instance)
    tsp = f.tsp_instance()
    if tsp.n < 3:
        raise ValidationError(f"--instance: a tour needs at least 3 facility locations, got {tsp.n}")
    sched = AnnealSchedule(k_max=a.kmax, initial_temp=a.initial_temp)
    tour, run = tsp_anneal(tsp, sched, a.seed, neighbor=a.neighbor)
    solver = {"name": "anneal", "config": {"k_max": a.kmax, "initial_temp": a.initial_temp, "cooling": "linear",
                                           "neighbor": a.neighbor}, "seed": a.seed}
    _write_or_fail(write_solution, a.out, tour_solution_file(f, tour, run, solver))
    print(f"length: {tour.length!r}")
    print(f"initial_length: {run.initial_energy!r}")
    return EXIT_OK


def cmd_bench(a) -> int:
    try:
        report = run_bench(a.solvers, n=a.dim, budget=a.budget, seeds=a.seeds)
    except UnknownSolverError as exc:
        raise ValidationError(f"--solvers: {exc}") from None
    md = report.to_markdown(timing=a.timing)
    if a.out_csv:
        _write_text(a.out_csv, report.to_csv(timing=a.timing), "--out-csv")
    if a.out_md:
        _write_text(a.out_md, md, "--out-md")
    if not (a.out_csv or a.out_md):
        sys.stdout.write(md)
        return EXIT_OK
    for name, agg in report.aggregates().items():
        print(f"{name}: median {agg['median']!r} over {agg['runs']} runs")
    return EXIT_OK


def cmd_render(a) -> int:
    f = read_instance(a.instance)
    solution = tour = None
    if a.solution:
        sf = read_solution(a.solution)
        if sf.instance_hash != f.hash:
            raise ValidationError(f"--solution: instance hash {sf.instance_hash} does not match {f.hash}")
        solution, tour = sf.flp_solution(), sf.tour()
    _write_text(a.out, render_svg(f.instance, solution=solution, tour=tour), "--out")
    print(f"wrote {a.out}")
    return EXIT_OK


def cmd_verify(a) -> int:
    f = read_instance(a.instance)
    sf = read_solution(a.solution)
    problems = verify(sf, f)
    for p in problems:
        print(p)
    if problems:
        return EXIT_INVALID
    print("ok")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="evsite", description="Charger siting, routing and benchmark tools.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="sample a random instance")
    g.add_argument("--region", type=_region, default=Region(0.0, 100.0, 0.0, 100.0), help="x_min,x_max,y_min,y_max")
    fg = g.add_mutually_exclusive_group()
    fg.add_argument("--facilities", type=int, help="number of candidate sites (default 20)")
    fg.add_argument("--facility-intensity", type=float, help="Poisson intensity per unit area instead of a count")
    cg = g.add_mutually_exclusive_group()
    cg.add_argument("--customers", type=int, help="number of demand areas (default 40)")
    cg.add_argument("--customer-intensity", type=float, help="Poisson intensity per unit area instead of a count")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--sunken-cost", type=_pair, default=(50.0, 150.0), metavar="MIN,MAX")
    g.add_argument("--capacity", type=_pair, default=(40.0, 80.0), metavar="MIN,MAX")
    g.add_argument("--rate", type=_pair, default=(0.5, 1.5), metavar="MIN,MAX")
    g.add_argument("--demand", type=_pair, default=(5.0, 15.0), metavar="MIN,MAX")
    g.add_argument("--min-capacity", type=float, default=0.0)
    g.add_argument("--equity-weight", type=float, default=0.0)
    g.add_argument("--service-mode", choices=("full", "partial"), default="full")
    g.add_argument("--max-distance-weight", type=float, help="add a max-distance penalty with this weight")
    g.add_argument("--max-distance-threshold", type=float, default=0.0)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("solve-flp", help="solve a facility location instance")
    s.add_argument("--instance", required=True)
    s.add_argument("--mode", choices=("exact", "anneal"), default="exact")
    s.add_argument("--out", required=True)
    s.add_argument("--service-mode", choices=("full", "partial"), help="override the instance's mode")
    s.add_argument("--node-limit", type=_positive_int, default=100_000)
    s.add_argument("--time-limit", type=float, help="seconds; makes results timing dependent")
    s.add_argument("--gap-tol", type=float, default=1e-9)
    s.add_argument("--branching", choices=("most-fractional", "lowest-index"), default="most-fractional")
    s.add_argument("--kmax", type=int, default=2000, help="annealing proposals (each solves an assignment LP)")
    s.add_argument("--initial-temp", type=float)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_solve_flp)

    t = sub.add_parser("solve-tsp", help="anneal a tour over the facility locations")
    t.add_argument("--instance", required=True)
    t.add_argument("--kmax", type=int, default=100_000)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--neighbor", choices=("2opt", "swap"), default="2opt")
    t.add_argument("--initial-temp", type=float)
    t.add_argument("--out", required=True)
    t.set_defaults(func=cmd_solve_tsp)

    b = sub.add_parser("bench", help="compare solvers on the Rastrigin function")
    b.add_argument("--solvers", type=_solvers, default=sorted(SOLVERS), help=f"comma list from {','.join(sorted(SOLVERS))}")
    b.add_argument("--dim", type=_positive_int, default=10)
    b.add_argument("--seeds", type=parse_seeds, default=list(range(30)), help='e.g. "0-29" or "1,5,9"')
    b.add_argument("--budget", type=_positive_int, default=DEFAULT_BUDGET, help="energy evaluations per run")
    b.add_argument("--out-csv")
    b.add_argument("--out-md")
    b.add_argument("--timing", action="store_true", help="include wall-clock times (not reproducible)")
    b.set_defaults(func=cmd_bench)

    r = sub.add_parser("render", help="draw an instance, solution or tour as SVG")
    r.add_argument("--instance", required=True)
    r.add_argument("--solution")
    r.add_argument("--out", required=True)
    r.set_defaults(func=cmd_render)

    v = sub.add_parser("verify", help="re-evaluate a stored solution against its instance")
    v.add_argument("--instance", required=True)
    v.add_argument("--solution", required=True)
    v.set_defaults(func=cmd_verify)
    return p


def _setup_logging() -> None:
    level = os.environ.get("EVSITE_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


def main(argv=None) -> int:
    _setup_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValidationError, FormatError, GenerationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except Exception as exc:  # never show a traceback on the command line
        log.debug("unhandled error", exc_info=True)
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
