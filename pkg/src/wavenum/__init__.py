"""Exact natural wave-number algebra and co-number prime identification."""

__version__ = "0.1.0"
