"""Capacity lower bounds for stochastic stabilization over digital channels."""
__version__ = "0.1.0"
