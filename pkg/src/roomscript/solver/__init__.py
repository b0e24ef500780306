"""Gradient-based layout solver."""

from .losses import Kernels, constraint_gradient, constraint_loss
from .optimize import LayoutState, PhaseTrace, SolveConfig, SolveResult, assign_directions, solve
from .repel import RepelField

__all__ = [
    "Kernels",
    "LayoutState",
    "PhaseTrace",
    "RepelField",
    "SolveConfig",
    "SolveResult",
    "assign_directions",
    "constraint_gradient",
    "constraint_loss",
    "solve",
]
