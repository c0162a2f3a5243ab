import numpy as np
import pytest

import scaledchain as sc
from scaledchain import TbParams, TridiagonalHamiltonian


def test_site_energies_follow_the_chain():
    h = sc.build_hamiltonian(sc.scaled_chain(2), TbParams(eps_a=1.0, eps_b=2.0, t=0.7))
    # ABBAABBBBAAAA
    expected = [1, 2, 2, 1, 1, 2, 2, 2, 2, 1, 1, 1, 1]
    assert h.diag.tolist() == expected
    assert np.all(h.offdiag == 0.7)
    assert h.n == 13


def test_order_ten_site_counts():
    h = sc.build_hamiltonian(sc.scaled_chain(10), TbParams(t=0.3))
    assert h.n == 221
    assert int((h.diag == 1.0).sum()) == 111
    assert int((h.diag == 2.0).sum()) == 110


def test_uniform_hamiltonian():
    h = sc.uniform_hamiltonian(5, 0.25, eps=1.5)
    assert np.all(h.diag == 1.5)
    assert np.all(h.offdiag == 0.25)
    with pytest.raises(ValueError):
        sc.uniform_hamiltonian(0, 1.0)


def test_dense_agrees_with_bands():
    h = sc.build_hamiltonian(sc.scaled_chain(2), TbParams(t=0.4))
    m = h.dense()
    assert np.array_equal(m, m.T)
    assert np.array_equal(np.diag(m), h.diag)
    assert np.array_equal(np.diag(m, 1), h.offdiag)
    assert np.count_nonzero(m - np.triu(np.tril(m, 1), -1)) == 0


def test_band_validation():
    with pytest.raises(ValueError):
        TridiagonalHamiltonian(np.array([]), np.array([]))
    with pytest.raises(ValueError):
        TridiagonalHamiltonian(np.ones(3), np.ones(3))
    with pytest.raises(ValueError):
        TridiagonalHamiltonian(np.array([1.0, np.nan]), np.array([0.1]))


def test_bands_are_defensive_copies():
    diag = np.ones(4)
    off = np.full(3, 0.2)
    h = TridiagonalHamiltonian(diag, off)
    diag[0] = 99.0
    assert h.diag[0] == 1.0
    with pytest.raises(ValueError):
        h.diag[1] = 5.0


def test_spectrum_shift_covariance():
    """Adding a constant to both site energies shifts every level by it."""
    chain = sc.scaled_chain(4)
    base = sc.eig_values_only(sc.build_hamiltonian(chain, TbParams(1.0, 2.0, 0.3)))
    shifted = sc.eig_values_only(sc.build_hamiltonian(chain, TbParams(1.7, 2.7, 0.3)))
    assert np.abs(shifted - base - 0.7).max() < 1e-12


def test_zero_coupling_spectrum_is_the_site_multiset():
    chain = sc.scaled_chain(6)
    h = sc.build_hamiltonian(chain, TbParams(t=0.0))
    assert np.array_equal(sc.eig_values_only(h), np.sort(h.diag))


def test_scale_bound_dominates_spectrum():
    h = sc.build_hamiltonian(sc.scaled_chain(5), TbParams(t=0.9))
    values = sc.eig_values_only(h)
    assert np.abs(values).max() <= h.scale_bound() + 1e-12
