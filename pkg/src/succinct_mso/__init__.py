"""Clique-decomposition pumping, MSO types and succinct circuit reductions."""

__version__ = "0.1.0"
