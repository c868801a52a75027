"""Search and verification toolkit for powerful triplets centred at cubes."""

__version__ = "0.1.0"
