"""Rockafellian-based analysis of optimization models.

Perturbed problem families, min-value sweeps, epi-convergence probes,
multiplier extraction, Lagrangian duality and a constrained shortest-path
relaxation.
"""

from .composite import (CompositeProblem, FunctionFamily, Rockafellian, SolverCfg, inner_solve,
                        pu_sweep)
from .extreal import INF, NINF

__version__ = "0.1.0"
__all__ = ["CompositeProblem", "FunctionFamily", "Rockafellian", "SolverCfg", "inner_solve",
           "pu_sweep", "INF", "NINF"]
