"""Binomiality of vanishing ideals of colored Gaussian graphical models."""

__version__ = "0.1.0"
