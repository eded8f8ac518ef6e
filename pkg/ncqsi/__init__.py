"""Stochastic integrals against martingales on finite tensor-chain filtrations."""

__version__ = "0.1.0"
