"""confdex: index conference publications, classify venues, score departments."""

__version__ = "0.1.0"
