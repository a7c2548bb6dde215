"""stripnest: a 2D irregular strip packing solver.

Decomposes the optimization into a sequence of feasibility problems and
resolves collisions by guided local search over a continuous placement
space.
"""
from .cde import Layout, Snapshot
from .geometry import Pole, PoleSet, Polygon, Transformation
from .poles import compute_poles
from .quantify import ProxyConfig, quantify_collision
from .sampler import SamplerConfig, search_position
from .separator import GlsConfig, WeightMatrix, separate
from .strip import (
    ItemSpec,
    SolutionRecord,
    SolverConfig,
    StripInstance,
    construct_initial,
    solve,
)

__all__ = [
    "Layout",
    "Snapshot",
    "Pole",
    "PoleSet",
    "Polygon",
    "Transformation",
    "compute_poles",
    "ProxyConfig",
    "quantify_collision",
    "SamplerConfig",
    "search_position",
    "GlsConfig",
    "WeightMatrix",
    "separate",
    "ItemSpec",
    "SolutionRecord",
    "SolverConfig",
    "StripInstance",
    "construct_initial",
    "solve",
]

__version__ = "0.1.0"
