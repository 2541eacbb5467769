"""Exact combinatorics of affine root systems, parabolic subsets and
truncated parabolic induction of weight modules."""

__version__ = "0.1.0"
