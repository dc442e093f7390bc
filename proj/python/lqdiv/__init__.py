"""LQ dividend control: Riccati solver, barrier valuation and Monte Carlo comparison."""

from ._lqdiv import *  # noqa: F401,F403
from ._lqdiv import ValidationError, SolverError, SimulationError  # noqa: F401

__version__ = "0.1.0"
