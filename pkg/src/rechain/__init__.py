"""rechain: reactive replanning for multi-material supply chains.

Compiles a network plus a disruption scenario into a multiperiod MILP,
solves it with an embedded branch-and-bound engine (or exports MPS/LP
files), and reports schedules, order-management decisions, and KPIs.
"""

__version__ = "0.1.0"
