"""Picard-Fuchs analysis toolkit for one-parameter Calabi-Yau families."""

__version__ = "0.1.0"
