"""Face densities of random 0/1-polytopes."""

__version__ = "0.1.0"
