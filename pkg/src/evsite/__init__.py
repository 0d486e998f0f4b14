"""
evsite: charger placement, routing and black-box optimisation.

Submodules
----------
instance
    Points, regions, facilities, customers and FLP instances.
spatial
    Seeded Poisson point process instance generation.
model
    Objective terms, the Gini equity penalty and feasibility checks.
lp
    Dense simplex and the FLP linear relaxation.
bnb
    Exact branch and bound plus a brute-force reference.
metaheuristics
    Simulated annealing, genetic algorithm, particle swarm, pattern search.
rastrigin
    Rastrigin benchmark harness.
tsp
    Closed tours over charger locations.
files, svg, cli
    JSON files, SVG rendering and the ``evsite`` command.
"""

from .bnb import BnbConfig, BnbReport, brute_force, solve_exact
from .instance import Customer, Facility, FlpInstance, FlpSolution, Point2D, Region, validate
from .lp import lp_bound, solve_lp
from .model import ModelConfig, evaluate, gini, max_distance_term
from .rastrigin import local_min_lattice, rastrigin, run_bench
from .spatial import GenConfig, generate_instance
from .tsp import TspInstance, Tour, tour_length, tsp_anneal, tsp_brute_force

__version__ = "0.1.0"

__all__ = [
    "Point2D",
    "Region",
    "Facility",
    "Customer",
    "FlpInstance",
    "FlpSolution",
    "validate",
    "GenConfig",
    "generate_instance",
    "ModelConfig",
    "evaluate",
    "gini",
    "max_distance_term",
    "solve_lp",
    "lp_bound",
    "BnbConfig",
    "BnbReport",
    "solve_exact",
    "brute_force",
    "rastrigin",
    "local_min_lattice",
    "run_bench",
    "TspInstance",
    "Tour",
    "tour_length",
    "tsp_anneal",
    "tsp_brute_force",
]
