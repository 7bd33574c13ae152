"""
swapsim - Entanglement Swapping Between Qubits in Lossy Cavities

Exact single-excitation dynamics of two qubits in independent leaky cavities,
Bell-state projections on the photons that leave them, and the concurrence,
linear entropy and entangling power that follow.
"""

__version__ = "1.0.0"
