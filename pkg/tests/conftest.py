import functools

import pytest

import scaledchain as sc


@pytest.fixture(scope="session")
def chain_spectrum():
    """Cached sorted spectrum of scaled_chain(order) at coupling t.

    The large chains (N = 1861, N = 5101) are diagonalized once per
    session and shared by every test that needs them.
    """

    @functools.lru_cache(maxsize=None)
    def compute(order: int, t: float):
        h = sc.build_hamiltonian(sc.scaled_chain(order), sc.TbParams(t=t))
        values = sc.eig_values_only(h)
        values.setflags(write=False)
        return values

    return compute


@pytest.fixture(scope="session")
def chain_modes():
    """Cached full eigendecomposition, for the vector-based tests."""

    @functools.lru_cache(maxsize=None)
    def compute(order: int, t: float):
        h = sc.build_hamiltonian(sc.scaled_chain(order), sc.TbParams(t=t))
        return sc.eig_all(h)

    return compute
