"""Band spectra of Schrodinger operators on periodic graphs."""

import json

from ._core import (
    Band,
    BandgraphError,
    BandStructure,
    FlatBand,
    Graph,
    ParameterError,
    ParseError,
    PreconditionError,
    ValidationError,
    analyze_json,
    band_structure,
    builtin,
    builtins,
    classify,
    dirac_check,
    eigenvalues,
    estimates,
    fiber_matrix,
    stability,
)


def analyze(graph, kind="schrodinger", **options):
    """Full analysis report as a dict."""
    return json.loads(analyze_json(graph, kind, **options))


__all__ = [
    "Band",
    "BandgraphError",
    "BandStructure",
    "FlatBand",
    "Graph",
    "ParameterError",
    "ParseError",
    "PreconditionError",
    "ValidationError",
    "analyze",
    "analyze_json",
    "band_structure",
    "builtin",
    "builtins",
    "classify",
    "dirac_check",
    "eigenvalues",
    "estimates",
    "fiber_matrix",
    "stability",
]
