"""Steady states, correlations and currents of two tunnel-coupled fermion sites
attached to separate bosonic or fermionic reservoirs."""

from .model import EigenData, Kind, ReservoirSpec, SystemParams, diagonalize, occupation
from .states import Basis, BlochCoefficients, XState, bloch_decompose, canonicalize_phase, eigenvalues, to_local

__version__ = "0.1.0"
