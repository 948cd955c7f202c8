"""Diverse solutions of vertex problems on graphs of bounded cliquewidth."""

__version__ = "0.1.0"
