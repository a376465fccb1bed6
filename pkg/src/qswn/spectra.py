"""Full eigendecomposition and level-statistics diagnostics.

The adjacent-gap ratio is used as the unfolding-free level statistic:
it sits near 2*ln(2) - 1 ~ 0.386 for Poisson (localized) spectra and
near 0.53 for Wigner-Dyson / GOE (delocalized) spectra.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np

from .model import Hamiltonian

R_POISSON = 2.0 * math.log(2.0) - 1.0
R_GOE = 0.5307  # accepted numerical value for the orthogonal ensemble

NORMALIZATION_TOL = 1e-10
ORTHOGONALITY_TOL = 1e-8
RESIDUAL_TOL = 1e-8


class EigensolverError(RuntimeError):
    """Dense solver failed to converge; carries the matrix provenance."""


@dataclass(frozen=True)
class SpectralDecomposition:
    """Ascending eigenvalues with orthonormal eigenvectors (one per column)."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    source: tuple = ()

    @property
    def n(self) -> int:
        return len(self.eigenvalues)

    def validate(self, h: Hamiltonian | None = None) -> None:
        """Check ordering, normalization, orthogonality and (optionally)
        the reconstruction residual against the source matrix."""
        ev, vecs = self.eigenvalues, self.eigenvectors
        if np.any(np.diff(ev) < 0):
            raise ValueError("eigenvalues not nondecreasing")
        norms = np.linalg.norm(vecs, axis=0)
        if np.max(np.abs(norms - 1.0)) > NORMALIZATION_TOL:
            raise ValueError("eigenvector normalization beyond tolerance")
        gram = vecs.T @ vecs
        np.fill_diagonal(gram, 0.0)
        if np.max(np.abs(gram)) > ORTHOGONALITY_TOL:
            raise ValueError("eigenvectors not pairwise orthogonal within tolerance")
        if h is not None:
            resid = h.entries @ vecs - vecs * ev
            bound = RESIDUAL_TOL * (1.0 + np.abs(ev))
            if np.any(np.linalg.norm(resid, axis=0) > bound):
                raise ValueError("reconstruction residual beyond tolerance")

    def eigenvalues_csv(self) -> str:
        out = io.StringIO()
        out.write("index,eigenvalue\n")
        for i, e in enumerate(self.eigenvalues):
            out.write(f"{i},{float(e)!r}\n")
        return out.getvalue()


def eigendecompose(h: Hamiltonian) -> SpectralDecomposition:
    """Dense symmetric full-spectrum diagonalization."""
    try:
        ev, vecs = np.linalg.eigh(h.entries)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(
            f"eigensolver failed for n={h.n}, provenance={h.provenance}"
        ) from exc
    return SpectralDecomposition(eigenvalues=ev, eigenvectors=vecs, source=h.provenance)


def gap_ratio_statistic(eigenvalues: np.ndarray) -> float:
    """Mean adjacent-gap ratio <r> = mean_n min(s_n, s_n+1)/max(s_n, s_n+1).

    Exact degeneracies contribute r = 0 terms; they are kept in the mean.
    """
    ev = np.asarray(eigenvalues, dtype=float)
    if len(ev) < 3:
        raise ValueError(f"need at least 3 eigenvalues, got {len(ev)}")
    s = np.diff(ev)
    if np.any(s < 0):
        raise ValueError("eigenvalues must be ascending")
    lo = np.minimum(s[:-1], s[1:])
    hi = np.maximum(s[:-1], s[1:])
    with np.errstate(invalid="ignore"):
        r = np.where(hi > 0, lo / np.where(hi > 0, hi, 1.0), 0.0)
    return float(np.mean(r))
