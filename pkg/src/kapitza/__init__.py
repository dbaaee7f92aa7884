"""Dynamical-stability toolkit for the periodically driven sine-Gordon chain.

Four mutually cross-checking methods:

- floquet:     monodromy analysis of Hill's equation (single pendulum)
- quadratic:   per-mode Hill analysis of the chain + closed-form criterion
- magnus:      high-frequency effective-Hamiltonian coefficients
- variational: self-consistent Gaussian dynamics (suppression factor Z)
- twa:         truncated-Wigner semiclassical lattice ensembles
"""

from .params import ModelParams

__all__ = ["ModelParams"]
__version__ = "0.1.0"
