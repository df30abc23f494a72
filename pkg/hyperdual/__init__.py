"""
hyperdual

Graphical models and tensor hypernetworks as two readings of one hypergraph:
duality, junction-tree marginals and tensor-network contraction.
"""

__version__ = "0.1.0"
