import numpy as np
import pytest

from qswn.graph import generate_small_world
from qswn.model import (
    Hamiltonian,
    PotentialConfigError,
    PotentialSpec,
    build_hamiltonian,
    fibonacci_sigma,
    sample_potential,
)


def ring(n, seed=0):
    return generate_small_world(n, 0, seed=seed)


class TestPotentialSpec:
    def test_non_fibonacci_denominator_rejected(self):
        with pytest.raises(PotentialConfigError):
            PotentialSpec(kind="harper", lam=1.0, sigma_num=9, sigma_den=14)

    def test_wrong_predecessor_rejected(self):
        with pytest.raises(PotentialConfigError):
            PotentialSpec(kind="harper", lam=1.0, sigma_num=8, sigma_den=21)

    def test_fibonacci_sigma(self):
        assert fibonacci_sigma(987) == (610, 987)
        assert fibonacci_sigma(13) == (8, 13)

    def test_anderson_needs_positive_width(self):
        with pytest.raises(ValueError):
            PotentialSpec(kind="anderson", w=0.0)

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            PotentialSpec(kind="random")


class TestSamplePotential:
    def test_periodic_is_zero(self):
        assert np.all(sample_potential(PotentialSpec(kind="periodic"), 17) == 0.0)

    def test_harper_zero_strength(self):
        spec = PotentialSpec(kind="harper", lam=0.0, sigma_num=8, sigma_den=13)
        assert np.all(sample_potential(spec, 13) == 0.0)

    def test_harper_last_site_exact(self):
        # sigma * n = 610 exactly at the last site: cos(2*pi*610) = 1
        spec = PotentialSpec(kind="harper", lam=3.0, sigma_num=610, sigma_den=987)
        eps = sample_potential(spec, 987)
        assert eps[-1] == 3.0

    def test_harper_periodicity_in_site_index(self):
        spec = PotentialSpec(kind="harper", lam=1.7, sigma_num=8, sigma_den=13)
        eps = sample_potential(spec, 13)
        extended = spec.lam * np.cos(
            2 * np.pi * ((spec.sigma_num * np.arange(14, 27)) % 13) / 13
        )
        np.testing.assert_allclose(extended, eps, atol=1e-15)

    def test_harper_size_mismatch(self):
        spec = PotentialSpec(kind="harper", lam=1.0, sigma_num=8, sigma_den=13)
        with pytest.raises(PotentialConfigError):
            sample_potential(spec, 12)
        with pytest.warns(UserWarning):
            sample_potential(spec, 12, allow_size_mismatch=True)

    def test_anderson_bounds_and_mean(self):
        spec = PotentialSpec(kind="anderson", w=10.0, seed=123)
        eps = sample_potential(spec, 1000)
        assert eps.min() >= -5.0 and eps.max() <= 5.0
        # uniform on [-5, 5]: sigma of the sample mean is W/sqrt(12 n)
        sigma_mean = 10.0 / np.sqrt(12 * 1000)
        assert abs(eps.mean()) <= 4 * sigma_mean

    def test_anderson_reproducibility(self):
        spec = PotentialSpec(kind="anderson", w=2.0, seed=77)
        a = sample_potential(spec, 50)
        b = sample_potential(spec, 50)
        np.testing.assert_array_equal(a, b)


class TestBuildHamiltonian:
    def test_three_ring_spectrum(self):
        h = build_hamiltonian(ring(3), np.zeros(3))
        off = h.entries[~np.eye(3, dtype=bool)]
        assert np.all(off == 1.0)
        assert np.all(np.diag(h.entries) == 0.0)
        ev = np.linalg.eigvalsh(h.entries)
        np.testing.assert_allclose(ev, [-1.0, -1.0, 2.0], atol=1e-12)

    def test_trace_identity(self):
        eps = np.array([5.0, 0.0, 0.0, 0.0])
        h = build_hamiltonian(ring(4), eps)
        np.testing.assert_array_equal(np.diag(h.entries), eps)
        assert h.trace == 5.0

    def test_fig1_nonzero_count(self):
        g = generate_small_world(32, 7, seed=1)
        h = build_hamiltonian(g, np.zeros(32))
        off = h.entries.copy()
        np.fill_diagonal(off, 0.0)
        assert np.count_nonzero(off) == 2 * (32 + 7)

    def test_exact_symmetry(self):
        g = generate_small_world(40, 15, seed=2)
        h = build_hamiltonian(g, np.linspace(-1, 1, 40), t=0.7, t1=0.3)
        assert np.array_equal(h.entries, h.entries.T)

    def test_periodic_boundary(self):
        h = build_hamiltonian(ring(8), np.zeros(8))
        assert h.entries[0, 7] == 1.0 and h.entries[7, 0] == 1.0

    def test_linearity(self):
        g = generate_small_world(20, 5, seed=3)
        eps = np.random.default_rng(0).normal(size=20)
        h1 = build_hamiltonian(g, eps, t=1.0, t1=0.5)
        h2 = build_hamiltonian(g, 3 * eps, t=3.0, t1=1.5)
        np.testing.assert_array_equal(h2.entries, 3 * h1.entries)

    def test_dimension_error(self):
        with pytest.raises(ValueError):
            build_hamiltonian(ring(5), np.zeros(6))

    def test_shortcut_hopping_value(self):
        g = generate_small_world(10, 3, seed=4)
        h = build_hamiltonian(g, np.zeros(10), t=1.0, t1=2.5)
        for a, b in g.shortcuts:
            assert h.entries[a - 1, b - 1] == 2.5

    def test_triplet_dump(self):
        h = build_hamiltonian(ring(4), np.array([1.0, 0.0, 0.0, 0.0]))
        lines = h.to_triplets().strip().splitlines()
        entries = {(int(i), int(j)): float(v) for i, j, v in (ln.split() for ln in lines)}
        assert entries[(1, 1)] == 1.0
        assert entries[(1, 2)] == 1.0 and entries[(2, 1)] == 1.0
        assert (2, 2) not in entries
        # symmetric storage: 4 ring edges doubled plus one diagonal entry
        assert len(entries) == 9

    def test_entries_immutable(self):
        h = build_hamiltonian(ring(4), np.zeros(4))
        with pytest.raises(ValueError):
            h.entries[0, 0] = 1.0
