"""Achievable secrecy rate regions with unreliable entanglement assistance."""

__version__ = "0.1.0"
