"""Fat-graph coordinates for Teichmüller spaces and measured laminations."""

from .fatgraph import FatGraph, GraphError, build_graph, flip, stock, surface_type

__version__ = "0.1.0"

__all__ = ["FatGraph", "GraphError", "build_graph", "flip", "stock", "surface_type"]
