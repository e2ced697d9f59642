"""Neyman-Pearson phase-detection bounds for coherent and squeezed probes."""

__version__ = "0.1.0"
