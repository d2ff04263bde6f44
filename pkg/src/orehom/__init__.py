"""Exact computations for Ore extensions of finite-dimensional algebras over Q."""

__version__ = "0.1.0"
