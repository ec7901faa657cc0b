"""Narrative topology toolkit: role graphs, VISTA coordinates, table and inline
formats, LLM evaluation and corpus analysis."""

from .errors import VistaError
from .topology import (
    ROOT,
    Anchor,
    DeltaConfig,
    NarrativeGraph,
    Role,
    Span,
    TransitionKind,
    backbone,
    count_crossings,
    cross_dependency_count,
    validate,
    vista_coordinates,
)

__version__ = "0.1.0"

__all__ = [
    "ROOT", "Anchor", "DeltaConfig", "NarrativeGraph", "Role", "Span", "TransitionKind",
    "VistaError", "backbone", "count_crossings", "cross_dependency_count", "validate",
    "vista_coordinates",
]
