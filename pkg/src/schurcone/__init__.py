"""Schur multipliers of finite groups, pairs and triples via bar complexes and mapping cones."""

__version__ = "0.1.0"
