"""Qubit digitization of lambda phi^4 scalar field theory.

Field-basis (uniform grid) and harmonic-oscillator-basis Hamiltonians,
their spectra, Pauli decompositions, gate counts and circuits.
"""

__version__ = "0.1.0"

from .grid import BoundaryMode, HoBasisSpec, JlpGrid, build_jlp_grid, grid_from_states
from .hamiltonians import (LatticeSpec, Pi2Variant, SiteTheoryParams, SpatialBC, build_lattice_hamiltonian,
                           build_site_hamiltonian_ho, build_site_hamiltonian_jlp)
from .operators import HermitianOperator, symmetric_dft
from .pauli import PauliString, PauliSum, ResourceTally, decompose, reconstruct, tally
from .circuits import Circuit, Gate, symmetric_qft_circuit, synth_pauli_exp, trotter_step_jlp
from .spectra import SpectralResult, SweepRecord, eigensolve, epsilon_percent, sweep_ho, sweep_jlp

__all__ = [
    "BoundaryMode", "HoBasisSpec", "JlpGrid", "build_jlp_grid", "grid_from_states",
    "LatticeSpec", "Pi2Variant", "SiteTheoryParams", "SpatialBC", "build_lattice_hamiltonian",
    "build_site_hamiltonian_ho", "build_site_hamiltonian_jlp", "HermitianOperator", "symmetric_dft",
    "PauliString", "PauliSum", "ResourceTally", "decompose", "reconstruct", "tally",
    "Circuit", "Gate", "symmetric_qft_circuit", "synth_pauli_exp", "trotter_step_jlp",
    "SpectralResult", "SweepRecord", "eigensolve", "epsilon_percent", "sweep_ho", "sweep_jlp",
]
