"""Centrality under popularity thresholding."""

import json as _json

from ._core import (
    ArgumentError,
    Graph,
    NodeMeta,
    ParseError,
    SchemaError,
    SGCConfig,
    SizeLimitError,
    SweepResult,
    UndefinedStatistic,
    ValidationError,
    __version__,
    attribute_assortativity,
    centrality,
    degree_assortativity,
    degree_popularity_correlation,
    detect_transition,
    fit_logistic,
    generate_sgc,
    genre_edge_overlap,
    group_mean_degree,
    load,
    power_iteration,
    threshold_sweep,
    top_k_spectrum,
)
from ._core import transition_report as _transition_report


def transition_report(sweep, group_a="leader", group_b="celebrity", field="mean_eigencentrality"):
    """Transition threshold, eigen-gaps, degree changeover and logistic fits as a dict."""
    return _json.loads(_transition_report(sweep, group_a, group_b, field))


__all__ = [name for name in dir() if not name.startswith("_")]
