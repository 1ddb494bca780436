"""Structural identifiability analysis for rational ODE models."""
__version__ = "0.1.0"
