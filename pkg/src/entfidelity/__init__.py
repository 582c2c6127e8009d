"""Entanglement fidelity of qubit channels from Kraus representations."""

__version__ = "0.1.0"
