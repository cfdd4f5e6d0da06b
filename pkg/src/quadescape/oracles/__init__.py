"""Independent oracles: Monte Carlo simulation and a finite-difference solver."""

from .bounds import (absorption_upper_bound, choose_escape_radius,
                     escape_bias_bound, square_bias_bound)
from .montecarlo import McConfig, McEstimate, Outcome, mc_escape_prob, simulate_path
from .pde import PdeConfig, PdeGrid, pde_solve

__all__ = [
    "absorption_upper_bound", "choose_escape_radius", "escape_bias_bound",
    "square_bias_bound", "McConfig", "McEstimate", "Outcome",
    "mc_escape_prob", "simulate_path", "PdeConfig", "PdeGrid", "pde_solve",
]
