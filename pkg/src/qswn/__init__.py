"""Electron localization on quantum small-world networks.

Builds tight-binding Hamiltonians on ring-plus-shortcut graphs under
periodic, random, and quasiperiodic on-site potentials, computes von
Neumann entropy measures over the full eigenspectrum, and locates
localization-delocalization transitions from the entropy's derivative
with respect to shortcut density.
"""

__version__ = "0.1.0"

from .graph import SmallWorldGraph, generate_small_world, shortcut_count_from_density, eligible_pair_count
from .model import PotentialSpec, Hamiltonian, sample_potential, build_hamiltonian
from .spectra import SpectralDecomposition, eigendecompose, gap_ratio_statistic
from .entropy import site_entropy, state_entropy, spectrum_entropy, eigenstate_profiles
from .ensemble import SweepConfig, SweepResult, run_realization, run_sweep, run_lambda_sweep
from .analysis import fit_polynomial, locate_transition, locate_lambda_drop, participation_ratio

__all__ = [
    "SmallWorldGraph",
    "generate_small_world",
    "shortcut_count_from_density",
    "eligible_pair_count",
    "PotentialSpec",
    "Hamiltonian",
    "sample_potential",
    "build_hamiltonian",
    "SpectralDecomposition",
    "eigendecompose",
    "gap_ratio_statistic",
    "site_entropy",
    "state_entropy",
    "spectrum_entropy",
    "eigenstate_profiles",
    "SweepConfig",
    "SweepResult",
    "run_realization",
    "run_sweep",
    "run_lambda_sweep",
    "fit_polynomial",
    "locate_transition",
    "locate_lambda_drop",
    "participation_ratio",
]
