"""Bilevel hierarchical clustering with DCA and Nesterov smoothing.

Two models choose ``k`` cluster centers plus a total center among the data
nodes. The continuous relaxations are solved by DCA under a penalty and
smoothing continuation; ``oracle`` gives exact answers for small instances.
"""

from .data_io import Dataset, eil76, gen_uniform, load_dataset
from .dca import SolverParams, SolveResult, solve, solve_from
from .gauges import EuclideanBall, UnitBox, make_gauge
from .oracle import brute_force, discrete_cost

__all__ = [
    "Dataset", "eil76", "gen_uniform", "load_dataset",
    "SolverParams", "SolveResult", "solve", "solve_from",
    "EuclideanBall", "UnitBox", "make_gauge",
    "brute_force", "discrete_cost",
]
__version__ = "0.1.0"
