"""QL solver against closed forms, the Sturm oracle, and matrix identities."""

import math

import numpy as np
import pytest

import scaledchain as sc
from scaledchain import ConvergenceError, TridiagonalHamiltonian


def uniform_levels(n, t):
    m = np.arange(1, n + 1)
    return np.sort(2.0 * t * np.cos(m * np.pi / (n + 1)))


@pytest.mark.parametrize("n", [10, 221, 1861])
def test_uniform_chain_closed_form(n):
    values = sc.eig_values_only(sc.uniform_hamiltonian(n, 1.0))
    assert np.abs(values - uniform_levels(n, 1.0)).max() < 1e-9


def test_two_site_closed_form():
    h = TridiagonalHamiltonian(np.array([1.0, 2.0]), np.array([0.5]))
    lo, hi = sc.eig_values_only(h)
    assert abs(lo - (1.5 - math.sqrt(2) / 2)) < 1e-14
    assert abs(hi - (1.5 + math.sqrt(2) / 2)) < 1e-14


def test_single_site():
    h = TridiagonalHamiltonian(np.array([3.5]), np.array([]))
    assert sc.eig_values_only(h).tolist() == [3.5]
    result = sc.eig_all(h)
    assert result.eigenvectors.shape == (1, 1)
    assert abs(abs(result.eigenvectors[0, 0]) - 1.0) < 1e-15


def test_diagonal_matrix_is_exact():
    d = np.array([2.0, -1.0, 0.5, 2.0, -3.0])
    h = TridiagonalHamiltonian(d, np.zeros(4))
    assert np.array_equal(sc.eig_values_only(h), np.sort(d))


def test_sturm_oracle_agreement():
    rng = np.random.default_rng(123)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(1, 65))
        h = TridiagonalHamiltonian(rng.normal(size=n), rng.normal(size=n - 1))
        delta = np.abs(sc.eig_values_only(h) - sc.sturm_eigenvalues(h)).max()
        worst = max(worst, float(delta))
    assert worst < 1e-10


def test_trace_identities():
    rng = np.random.default_rng(5)
    n = 400
    d = rng.normal(size=n)
    o = rng.normal(size=n - 1)
    values = sc.eig_values_only(TridiagonalHamiltonian(d, o))
    scale = float(np.abs(values).sum())
    assert abs(values.sum() - d.sum()) < 1e-10 * scale
    sumsq = (d**2).sum() + 2.0 * (o**2).sum()
    assert abs((values**2).sum() - sumsq) < 1e-10 * sumsq


def test_values_only_matches_full_decomposition():
    h = sc.build_hamiltonian(sc.scaled_chain(8), sc.TbParams(t=0.5))
    values = sc.eig_values_only(h)
    result = sc.eig_all(h)
    assert np.abs(values - result.eigenvalues).max() < 1e-12


def test_eigenvector_residuals_and_orthogonality():
    h = sc.build_hamiltonian(sc.scaled_chain(8), sc.TbParams(t=0.5))
    result = sc.eig_all(h)
    assert result.max_residual <= 1e-11 * h.scale_bound()
    v = result.eigenvectors
    gram = v.T @ v
    assert np.abs(gram - np.eye(h.n)).max() < 1e-8


def test_near_degenerate_clusters_stay_orthogonal():
    # t = 0.001 leaves the two on-site levels split into tight clusters
    h = sc.build_hamiltonian(sc.scaled_chain(8), sc.TbParams(t=0.001))
    result = sc.eig_all(h)
    v = result.eigenvectors
    assert np.abs(v.T @ v - np.eye(h.n)).max() < 1e-8
    assert result.max_residual <= 1e-11 * h.scale_bound()


def test_interlacing_with_leading_submatrix():
    """Eigenvalues of the order n-1 leading block interlace the full set."""
    rng = np.random.default_rng(77)
    for _ in range(10):
        n = int(rng.integers(3, 33))
        d = rng.normal(size=n)
        o = rng.normal(size=n - 1)
        full = sc.eig_values_only(TridiagonalHamiltonian(d, o))
        sub = sc.eig_values_only(TridiagonalHamiltonian(d[:-1], o[:-1]))
        tol = 1e-12 * max(1.0, np.abs(full).max())
        assert np.all(full[:-1] <= sub + tol)
        assert np.all(sub <= full[1:] + tol)


def test_deterministic_output():
    h = sc.build_hamiltonian(sc.scaled_chain(5), sc.TbParams(t=0.3))
    assert np.array_equal(sc.eig_values_only(h), sc.eig_values_only(h))
    a = sc.eig_all(h)
    b = sc.eig_all(h)
    assert np.array_equal(a.eigenvalues, b.eigenvalues)
    assert np.array_equal(a.eigenvectors, b.eigenvectors)


def test_sweep_budget_exhaustion_raises():
    with pytest.raises(ConvergenceError):
        sc.eig_values_only(sc.uniform_hamiltonian(8, 1.0), max_sweeps=0)
    with pytest.raises(RuntimeError):
        sc.eig_all(sc.uniform_hamiltonian(8, 1.0), max_sweeps=0)


def test_large_chain_against_sturm(chain_spectrum):
    values = chain_spectrum(30, 0.1)
    h = sc.build_hamiltonian(sc.scaled_chain(30), sc.TbParams(t=0.1))
    oracle = sc.sturm_eigenvalues(h)
    assert np.abs(values - oracle).max() < 1e-10
