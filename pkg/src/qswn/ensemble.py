"""Seeded multi-realization sweeps over shortcut density or potential strength.

Each realization seed is derived from (master_seed, grid_index,
realization_index) alone, so results never depend on execution order or
worker count; shortcut positions and disorder potentials come from
independent substreams of that seed.
"""

from __future__ import annotations

import io
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, asdict, replace

import numpy as np

from .graph import generate_small_world, shortcut_count_from_density
from .model import PotentialSpec, sample_potential, build_hamiltonian, fibonacci_sigma
from .spectra import eigendecompose, gap_ratio_statistic
from .entropy import spectrum_entropy, eigenstate_profiles

RNG_IDENTIFIER = "numpy.PCG64/SeedSequence"

SCENARIOS = ("periodic", "anderson", "harper")
OBSERVABLES = ("entropy", "gap_ratio", "profiles")


@dataclass(frozen=True)
class SweepConfig:
    """One sweep: a scenario, a grid of p (or lambda) values, and an
    ensemble size per grid point."""

    scenario: str
    n: int
    grid: tuple
    realizations: int
    master_seed: int
    sweep_kind: str = "p"  # "p" varies shortcut density, "lambda" varies strength
    w: float = 0.0
    lam: float = 0.0
    fixed_shortcuts: int = 0  # shortcut count L held fixed during lambda sweeps
    t: float = 1.0
    t1: float = 1.0
    observables: tuple = ("entropy",)

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ValueError(f"unknown scenario {self.scenario!r}")
        if self.sweep_kind not in ("p", "lambda"):
            raise ValueError(f"unknown sweep_kind {self.sweep_kind!r}")
        if self.sweep_kind == "lambda" and self.scenario != "harper":
            raise ValueError("lambda sweeps require the harper scenario")
        grid = tuple(float(g) for g in self.grid)
        if len(grid) == 0:
            raise ValueError("empty grid")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("grid must be strictly increasing")
        if self.realizations < 1:
            raise ValueError(f"need realizations >= 1, got {self.realizations}")
        if self.scenario == "anderson" and self.w <= 0:
            raise ValueError("anderson scenario needs W > 0")
        if self.scenario == "harper":
            fibonacci_sigma(self.n)  # raises unless n is a Fibonacci number
        unknown = set(self.observables) - set(OBSERVABLES)
        if unknown:
            raise ValueError(f"unknown observables {sorted(unknown)}")
        object.__setattr__(self, "grid", grid)

    def potential_spec(self, seed=None) -> PotentialSpec:
        if self.scenario == "periodic":
            return PotentialSpec(kind="periodic")
        if self.scenario == "anderson":
            return PotentialSpec(kind="anderson", w=self.w, seed=seed)
        num, den = fibonacci_sigma(self.n)
        return PotentialSpec(kind="harper", lam=self.lam, sigma_num=num, sigma_den=den)


@dataclass(frozen=True)
class SweepPoint:
    """Ensemble statistics at one grid value."""

    grid_value: float
    mean_entropy: float
    stderr_entropy: float
    mean_gap_ratio: float | None
    realizations: int
    seeds: tuple
    complete: bool = True
    single_run: bool = False
    failures: tuple = ()


@dataclass(frozen=True)
class SweepResult:
    config: SweepConfig
    points: tuple
    wall_clock: float = 0.0
    rng_identifier: str = RNG_IDENTIFIER

    @property
    def grid_values(self) -> np.ndarray:
        return np.array([pt.grid_value for pt in self.points])

    @property
    def mean_entropies(self) -> np.ndarray:
        return np.array([pt.mean_entropy for pt in self.points])

    @property
    def stderr_entropies(self) -> np.ndarray:
        return np.array([pt.stderr_entropy for pt in self.points])

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write("grid_value,mean_entropy,stderr_entropy,mean_gap_ratio,realizations\n")
        for pt in self.points:
            r = "" if pt.mean_gap_ratio is None else repr(pt.mean_gap_ratio)
            out.write(
                f"{pt.grid_value!r},{pt.mean_entropy!r},{pt.stderr_entropy!r},"
                f"{r},{pt.realizations}\n"
            )
        return out.getvalue()

    def manifest(self, software_version: str = "0.1.0") -> dict:
        cfg = asdict(self.config)
        return {
            "config": cfg,
            "master_seed": self.config.master_seed,
            "rng_identifier": self.rng_identifier,
            "grid": list(self.config.grid),
            "point_seeds": [list(map(list, pt.seeds)) for pt in self.points],
            "software_version": software_version,
            "wall_clock_seconds": self.wall_clock,
        }


def realization_seed(master_seed: int, grid_index: int, realization_index: int) -> tuple:
    """Stable seed tuple for one realization; hashing happens inside
    numpy's SeedSequence, so results are order- and worker-independent."""
    return (int(master_seed), int(grid_index), int(realization_index))


def _substreams(seed_tuple: tuple) -> tuple:
    graph_ss, pot_ss = np.random.SeedSequence(entropy=seed_tuple).spawn(2)
    return graph_ss, pot_ss


def run_realization(config: SweepConfig, grid_index: int, realization_index: int) -> dict:
    """Compute the requested observables for one (grid point, realization)."""
    if not (0 <= grid_index < len(config.grid)):
        raise IndexError(f"grid_index {grid_index} out of range")
    if not (0 <= realization_index < config.realizations):
        raise IndexError(f"realization_index {realization_index} out of range")
    grid_value = config.grid[grid_index]
    if config.sweep_kind == "p":
        shortcut_count = shortcut_count_from_density(config.n, grid_value)
        lam = config.lam
    else:
        shortcut_count = config.fixed_shortcuts
        lam = grid_value

    seed_tuple = realization_seed(config.master_seed, grid_index, realization_index)
    graph_ss, pot_ss = _substreams(seed_tuple)

    graph = generate_small_world(config.n, shortcut_count, graph_ss)
    if config.scenario == "harper":
        num, den = fibonacci_sigma(config.n)
        spec = PotentialSpec(kind="harper", lam=lam, sigma_num=num, sigma_den=den)
    elif config.scenario == "anderson":
        spec = PotentialSpec(kind="anderson", w=config.w, seed=pot_ss)
    else:
        spec = PotentialSpec(kind="periodic")
    epsilon = sample_potential(spec, config.n)
    h = build_hamiltonian(graph, epsilon, t=config.t, t1=config.t1, provenance=seed_tuple)
    decomp = eigendecompose(h)

    out = {"seed": seed_tuple}
    if "entropy" in config.observables:
        out["entropy"] = spectrum_entropy(decomp).value
    if "gap_ratio" in config.observables:
        out["gap_ratio"] = gap_ratio_statistic(decomp.eigenvalues)
    if "profiles" in config.observables:
        out["profiles"] = [
            (p.eigenvalue, p.state_entropy_scaled) for p in eigenstate_profiles(decomp)
        ]
    return out


def _worker(args):
    config, gi, ri = args
    try:
        return gi, ri, run_realization(config, gi, ri), None
    except Exception as exc:  # surfaced per grid point, never silently averaged
        return gi, ri, None, f"{type(exc).__name__}: {exc}"


def _aggregate(config: SweepConfig, results: dict) -> tuple:
    points = []
    for gi, grid_value in enumerate(config.grid):
        entropies, ratios, seeds, failures = [], [], [], []
        for ri in range(config.realizations):
            obs, err = results[(gi, ri)]
            seeds.append(realization_seed(config.master_seed, gi, ri))
            if err is not None:
                failures.append((ri, err))
                continue
            if "entropy" in obs:
                entropies.append(obs["entropy"])
            if "gap_ratio" in obs:
                ratios.append(obs["gap_ratio"])
        complete = not failures
        r = len(entropies)
        if r >= 2:
            mean = float(np.mean(entropies))
            stderr = float(np.std(entropies, ddof=1) / math.sqrt(r))
        elif r == 1:
            mean, stderr = float(entropies[0]), 0.0
        else:
            mean, stderr = math.nan, math.nan
        points.append(
            SweepPoint(
                grid_value=grid_value,
                mean_entropy=mean,
                stderr_entropy=stderr,
                mean_gap_ratio=float(np.mean(ratios)) if ratios else None,
                realizations=r,
                seeds=tuple(seeds),
                complete=complete,
                single_run=(config.realizations == 1),
                failures=tuple(failures),
            )
        )
    return tuple(points)


def run_sweep(config: SweepConfig, workers: int = 1) -> SweepResult:
    """Run the full (grid x realizations) lattice and aggregate.

    The output is bitwise independent of ``workers``: every realization is
    a pure function of its seed tuple and aggregation is keyed by index.
    """
    t0 = time.perf_counter()
    tasks = [
        (config, gi, ri)
        for gi in range(len(config.grid))
        for ri in range(config.realizations)
    ]
    results = {}
    if workers <= 1:
        for task in tasks:
            gi, ri, obs, err = _worker(task)
            results[(gi, ri)] = (obs, err)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for gi, ri, obs, err in pool.map(_worker, tasks, chunksize=4):
                results[(gi, ri)] = (obs, err)
    points = _aggregate(config, results)
    return SweepResult(config=config, points=points, wall_clock=time.perf_counter() - t0)


def run_lambda_sweep(config: SweepConfig, workers: int = 1) -> SweepResult:
    """Sweep lambda at fixed shortcut count L (config.fixed_shortcuts)."""
    if config.sweep_kind != "lambda":
        config = replace(config, sweep_kind="lambda")
    return run_sweep(config, workers=workers)
