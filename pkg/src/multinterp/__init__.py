"""Synthesis of Boolean control witnesses from EUF specifications via n-interpolation."""

__version__ = "0.1.0"
