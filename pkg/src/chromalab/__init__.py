"""Chromatic number laboratory for binomial random graphs."""

__version__ = "0.1.0"

from .graph import Graph, SampleSpec, complement, induced_subgraph, sample_gnp  # noqa: F401
