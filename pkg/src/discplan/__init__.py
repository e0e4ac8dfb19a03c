"""Decoupled motion planning for unit-disc robots among polygonal obstacles.

Pipeline: scenario -> revolving areas -> per-robot shortest paths ->
interference-based execution order -> coordinated trajectories -> validation.
"""

from .errors import (AssumptionViolated, CapacityError, DegenerateDirection,
                     DegenerateInput, DiscplanError, NoPath, NoRevolvingArea,
                     ParseError, PreconditionViolated, RefinementViolated,
                     SamplingExhausted, StartBlocked, TargetBlocked, TooLarge,
                     ValidationError)

__version__ = "0.1.0"

__all__ = [
    "AssumptionViolated", "CapacityError", "DegenerateDirection",
    "DegenerateInput", "DiscplanError", "NoPath", "NoRevolvingArea",
    "ParseError", "PreconditionViolated", "RefinementViolated",
    "SamplingExhausted", "StartBlocked", "TargetBlocked", "TooLarge",
    "ValidationError", "__version__",
]
