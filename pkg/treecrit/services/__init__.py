"""
Services package for treecrit.

This package contains the computational services:
- environment: config parsing, moment matrices and label sampling
- spectral: Perron root, spectral constants, rate function and speed
- classifier: finiteness verdicts and critical-parameter search
- catalogue: built-in named environment families
- tree_sim: coloured tree sampling and level statistics
- rwre: random walk in random environment and conductances
- rde: recursive distributional equation solver
- brw: branching random walk and first-passage percolation
"""

from .brw import brw_env, enumerate_minima, fpp_reach, positivity_time, simulate_brw, speed_estimate
from .catalogue import CATALOGUE, get_family
from .classifier import classify, find_critical_parameter
from .environment import load_brw, load_env, moment_matrix, parse_brw, parse_env
from .rde import iterate, mean_system
from .rwre import hcr_sweep, sample_environment, simulate_walk
from .spectral import lambda1, lambda_inf, perron, rate_function, rho, speed_x0
from .tree_sim import count_exceedances, estimate_level_sums, estimate_Y, sample_tree

__all__ = [
    "CATALOGUE",
    "brw_env",
    "classify",
    "count_exceedances",
    "enumerate_minima",
    "estimate_Y",
    "estimate_level_sums",
    "find_critical_parameter",
    "fpp_reach",
    "get_family",
    "hcr_sweep",
    "iterate",
    "lambda1",
    "lambda_inf",
    "load_brw",
    "load_env",
    "mean_system",
    "moment_matrix",
    "parse_brw",
    "parse_env",
    "perron",
    "positivity_time",
    "rate_function",
    "rho",
    "sample_environment",
    "sample_tree",
    "simulate_brw",
    "simulate_walk",
    "speed_estimate",
    "speed_x0",
]
