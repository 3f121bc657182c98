"""Reference-free quality estimation and complexity prediction for text simplification."""

__version__ = "0.1.0"
