"""Numerical verification of explicit symplectomorphisms, Lagrangian tori and their invariants."""

__version__ = "0.1.0"
