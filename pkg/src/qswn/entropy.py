"""Von Neumann entropy observables over the eigenspectrum.

The per-site entropy is the binary entropy of the local occupation
z_n = |psi_n|^2; the per-state entropy is its site average, and all
reported values are scaled by (1/N) log2(N) so extended states score
near 1 and localized states near 0.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np

from .spectra import SpectralDecomposition

_CLAMP = 1e-12
_NORM_TOL = 1e-8


def _binary_entropy(z: np.ndarray) -> np.ndarray:
    """h(z) = -z log2 z - (1-z) log2(1-z), with h(0) = h(1) = 0 exactly."""
    z = np.asarray(z, dtype=float)
    out = np.zeros_like(z)
    interior = (z > 0.0) & (z < 1.0)
    zi = z[interior]
    out[interior] = -zi * np.log2(zi) - (1.0 - zi) * np.log2(1.0 - zi)
    return out


def _clamp_occupation(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    if np.any(z < -_CLAMP) or np.any(z > 1.0 + _CLAMP):
        bad = z[(z < -_CLAMP) | (z > 1.0 + _CLAMP)]
        raise ValueError(f"occupation outside [0, 1] beyond rounding window: {bad[:5]}")
    return np.clip(z, 0.0, 1.0)


def scale_factor(n: int) -> float:
    """The extended-state reference (1/N) log2(N)."""
    return math.log2(n) / n


def site_entropy(z) -> float | np.ndarray:
    """Binary entropy (bits) of a local occupation probability.

    Values within 1e-12 outside [0, 1] are clamped; anything further out
    is rejected.
    """
    scalar = np.isscalar(z)
    out = _binary_entropy(_clamp_occupation(np.atleast_1d(z)))
    return float(out[0]) if scalar else out


def state_entropy(psi: np.ndarray, scaled: bool = True) -> float:
    """Site-averaged von Neumann entropy of one normalized eigenvector."""
    psi = np.asarray(psi, dtype=float)
    nrm = np.linalg.norm(psi)
    if abs(nrm - 1.0) > _NORM_TOL:
        raise ValueError(f"eigenvector norm {nrm} deviates from 1 beyond tolerance")
    n = len(psi)
    raw = float(np.mean(_binary_entropy(_clamp_occupation(psi**2))))
    return raw / scale_factor(n) if scaled else raw


def _all_state_entropies(decomp: SpectralDecomposition, scaled: bool = True) -> np.ndarray:
    z = _clamp_occupation(decomp.eigenvectors**2)
    raw = np.mean(_binary_entropy(z), axis=0)
    return raw / scale_factor(decomp.n) if scaled else raw


@dataclass(frozen=True)
class EntropyProfile:
    """Entropy data for one eigenstate."""

    state_index: int
    eigenvalue: float
    site_entropies: np.ndarray
    state_entropy_raw: float
    state_entropy_scaled: float


@dataclass(frozen=True)
class SpectrumEntropy:
    """Scaled entropy averaged over all eigenstates of one realization."""

    value: float
    state_count: int
    provenance: tuple = ()


def spectrum_entropy(decomp: SpectralDecomposition) -> SpectrumEntropy:
    """Mean scaled state entropy over the full spectrum."""
    vals = _all_state_entropies(decomp, scaled=True)
    return SpectrumEntropy(value=float(np.mean(vals)), state_count=decomp.n, provenance=decomp.source)


def eigenstate_profiles(decomp: SpectralDecomposition) -> list[EntropyProfile]:
    """One profile per eigenstate, in eigenvalue order."""
    z = _clamp_occupation(decomp.eigenvectors**2)
    site = _binary_entropy(z)
    raw = np.mean(site, axis=0)
    scaled = raw / scale_factor(decomp.n)
    return [
        EntropyProfile(
            state_index=i,
            eigenvalue=float(decomp.eigenvalues[i]),
            site_entropies=site[:, i],
            state_entropy_raw=float(raw[i]),
            state_entropy_scaled=float(scaled[i]),
        )
        for i in range(decomp.n)
    ]


def profiles_csv(profiles: list[EntropyProfile]) -> str:
    """Scatter export: one line per eigenstate."""
    out = io.StringIO()
    out.write("state_index,eigenvalue,state_entropy_scaled\n")
    for p in profiles:
        out.write(f"{p.state_index},{p.eigenvalue!r},{p.state_entropy_scaled!r}\n")
    return out.getvalue()


def site_entropies_csv(profiles: list[EntropyProfile]) -> str:
    """Per-site export, one line per (state, site)."""
    out = io.StringIO()
    out.write("state_index,site,site_entropy\n")
    for p in profiles:
        for site_idx, h in enumerate(p.site_entropies, start=1):
            out.write(f"{p.state_index},{site_idx},{float(h)!r}\n")
    return out.getvalue()
