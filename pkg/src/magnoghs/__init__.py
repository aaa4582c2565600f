"""Goos-Haenchen shift of a probe reflected from a cavity-magnomechanical system."""

__version__ = "0.1.0"
