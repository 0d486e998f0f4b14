"""Black-box minimisers: simulated annealing, GA, particle swarm and pattern search."""

from .annealing import estimate_initial_temp, flp_anneal, flp_problem, simulated_annealing
from .genetic import GaConfig, genetic_algorithm
from .pattern import PatternConfig, pattern_search
from .problem import (
    AnnealSchedule,
    BlackBoxProblem,
    RunTrace,
    gaussian_coordinate_step,
    geometric_cooling,
    linear_cooling,
    metropolis,
)
from .swarm import BENCH_PSO, PsoConfig, particle_swarm

__all__ = [
    "AnnealSchedule",
    "BlackBoxProblem",
    "RunTrace",
    "metropolis",
    "linear_cooling",
    "geometric_cooling",
    "gaussian_coordinate_step",
    "estimate_initial_temp",
    "simulated_annealing",
    "flp_problem",
    "flp_anneal",
    "GaConfig",
    "genetic_algorithm",
    "PsoConfig",
    "BENCH_PSO",
    "particle_swarm",
    "PatternConfig",
    "pattern_search",
]
