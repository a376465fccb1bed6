"""On-site potentials and dense tight-binding Hamiltonian assembly.

Sites are labeled 1..n, matching the quasiperiodic potential formula
eps_n = lambda * cos(2*pi*sigma*n).  Hopping t acts on ring bonds
(periodic boundary), t1 on shortcut links.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .graph import SmallWorldGraph


class PotentialConfigError(ValueError):
    """Potential parameters inconsistent with the requested system size."""


_FIBONACCI = [1, 1]
while _FIBONACCI[-1] < 10**12:
    _FIBONACCI.append(_FIBONACCI[-2] + _FIBONACCI[-1])


def fibonacci_sigma(n: int) -> tuple[int, int]:
    """Return (F_{k-1}, F_k) with F_k = n, for use as an exact sigma ratio."""
    for i in range(2, len(_FIBONACCI)):
        if _FIBONACCI[i] == n:
            return _FIBONACCI[i - 1], _FIBONACCI[i]
    raise PotentialConfigError(f"{n} is not a Fibonacci number")


@dataclass(frozen=True)
class PotentialSpec:
    """Tagged choice of on-site potential.

    kind: "periodic" (all zeros), "anderson" (i.i.d. uniform on [-W/2, W/2]),
    or "harper" (lambda * cos(2*pi*sigma*n) with sigma an exact Fibonacci
    ratio sigma_num/sigma_den).
    """

    kind: str
    w: float = 0.0
    lam: float = 0.0
    sigma_num: int = 0
    sigma_den: int = 0
    seed: object = None

    def __post_init__(self):
        if self.kind not in ("periodic", "anderson", "harper"):
            raise ValueError(f"unknown potential kind {self.kind!r}")
        if self.kind == "anderson" and self.w <= 0:
            raise ValueError(f"anderson potential needs W > 0, got {self.w}")
        if self.kind == "harper":
            if self.lam < 0:
                raise ValueError(f"harper potential needs lambda >= 0, got {self.lam}")
            num, den = fibonacci_sigma(self.sigma_den)
            if self.sigma_num != num:
                raise PotentialConfigError(
                    f"sigma_num must be the Fibonacci predecessor of {self.sigma_den}, "
                    f"expected {num}, got {self.sigma_num}"
                )
            if math.gcd(self.sigma_num, self.sigma_den) != 1:
                raise PotentialConfigError(
                    f"sigma = {self.sigma_num}/{self.sigma_den} is not in lowest terms"
                )


def sample_potential(spec: PotentialSpec, n: int, allow_size_mismatch: bool = False) -> np.ndarray:
    """On-site energies eps_1..eps_n for the given potential.

    For the harper kind the system size must equal sigma_den (the periodic
    approximant is commensurate with the lattice); pass
    ``allow_size_mismatch`` to warn and proceed for exploratory runs.
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if spec.kind == "periodic":
        return np.zeros(n)
    if spec.kind == "anderson":
        rng = np.random.default_rng(spec.seed)
        return rng.uniform(-spec.w / 2, spec.w / 2, size=n)
    # harper
    if n != spec.sigma_den:
        msg = f"harper potential expects n = sigma_den = {spec.sigma_den}, got n = {n}"
        if not allow_size_mismatch:
            raise PotentialConfigError(msg)
        warnings.warn(msg, stacklevel=2)
    sites = np.arange(1, n + 1, dtype=np.int64)
    # Reduce sigma*n mod 1 in exact integer arithmetic so e.g. the last
    # site of the full approximant gets cos(2*pi*integer) = 1 exactly.
    phase = (spec.sigma_num * sites) % spec.sigma_den
    return spec.lam * np.cos(2.0 * np.pi * phase / spec.sigma_den)


@dataclass(frozen=True)
class Hamiltonian:
    """Dense real symmetric tight-binding matrix on a small-world graph."""

    n: int
    entries: np.ndarray
    t: float
    t1: float
    provenance: tuple = ()

    def __post_init__(self):
        if self.entries.shape != (self.n, self.n):
            raise ValueError(f"entries shape {self.entries.shape} != ({self.n}, {self.n})")
        self.entries.setflags(write=False)

    @property
    def trace(self) -> float:
        return float(np.trace(self.entries))

    def to_triplets(self) -> str:
        """Plain-text `i j value` dump of nonzeros, 1-based row-major."""
        lines = []
        for i in range(self.n):
            for j in range(self.n):
                v = self.entries[i, j]
                if v != 0.0:
                    lines.append(f"{i + 1} {j + 1} {float(v)!r}")
        return "\n".join(lines) + "\n"


def build_hamiltonian(
    graph: SmallWorldGraph,
    epsilon: np.ndarray,
    t: float = 1.0,
    t1: float = 1.0,
    provenance: tuple = (),
) -> Hamiltonian:
    """Assemble the dense symmetric matrix: diagonal eps, ring bonds t,
    shortcut bonds t1, periodic boundary."""
    epsilon = np.asarray(epsilon, dtype=float)
    if epsilon.shape != (graph.n,):
        raise ValueError(f"epsilon length {epsilon.shape} does not match n={graph.n}")
    n = graph.n
    h = np.zeros((n, n))
    np.fill_diagonal(h, epsilon)
    for a, b in graph.ring_edges():
        h[a - 1, b - 1] = t
        h[b - 1, a - 1] = t
    for a, b in graph.shortcuts:
        h[a - 1, b - 1] = t1
        h[b - 1, a - 1] = t1
    return Hamiltonian(n=n, entries=h, t=t, t1=t1, provenance=provenance)
