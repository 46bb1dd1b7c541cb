"""Streaming estimation of monochromatic edges under vertex-arrival models."""

from .errors import (
    ConfigError,
    ConflictStreamError,
    ConstructionError,
    ContractError,
    IntegrityError,
    ParameterError,
    PromiseViolation,
)
from .graph_core import (
    ColoredGraph,
    HardInstance,
    exact_monochromatic_count,
    monochromatic_degree,
    random_colored_graph,
    validate_promise,
)

__version__ = "0.1.0"
