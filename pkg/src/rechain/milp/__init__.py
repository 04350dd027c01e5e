"""Embedded desk-scale MILP engine: container, simplex, branch-and-bound, writers."""

from .branch_bound import brute_force, solve
from .instance import EQ, GE, INF, LE, MilpError, MilpInstance, Solution, SolveOptions
from .simplex import KERNEL, solve_lp
from .writers import export_lp_text, export_mps, export_mps_with_map

__all__ = [
    "EQ",
    "GE",
    "INF",
    "KERNEL",
    "LE",
    "MilpError",
    "MilpInstance",
    "Solution",
    "SolveOptions",
    "brute_force",
    "export_lp_text",
    "export_mps",
    "export_mps_with_map",
    "solve",
    "solve_lp",
]
