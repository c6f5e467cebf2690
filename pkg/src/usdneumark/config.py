"""Centralized numerical tolerances.

One frozen record holds every threshold used across the pipeline, so a
caller can tighten or relax the whole run coherently (the CLI exposes
the two commonly adjusted ones).
"""

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    # matrix factorizations
    unitarity: float = 1e-10
    hermiticity: float = 1e-10
    root_residual: float = 1e-7
    # ensemble / ladder
    state_norm: float = 1e-6
    independence: float = 1e-8
    gram: float = 1e-8
    # SDP barrier
    barrier_gap: float = 1e-9
    feasibility: float = 1e-8
    amplitude_clip: float = 1e-10
    max_newton_iterations: int = 500
    # final configuration
    degenerate_branch: float = 1e-9
    recursion_pivot: float = 1e-12
    # synthesis / rotations
    synthesis_residual: float = 1e-6
    skip_rotation: float = 1e-10
    reconstruction: float = 1e-7
    angle_roundtrip: float = 1e-8

    def with_overrides(self, **kwargs) -> "Tolerances":
        return replace(self, **kwargs)


DEFAULT_TOLERANCES = Tolerances()
