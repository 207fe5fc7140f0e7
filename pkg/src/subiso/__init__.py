"""Colored and exact-weight subgraph isomorphism for patterns of bounded width."""
from .graph_core import (ColoredInstance, Graph, Hypergraph, UncoloredInstance, WeightFn,
                         configuration_weight, is_valid_configuration)

__version__ = "0.1.0"

__all__ = ["ColoredInstance", "Graph", "Hypergraph", "UncoloredInstance", "WeightFn",
           "configuration_weight", "is_valid_configuration", "__version__"]
