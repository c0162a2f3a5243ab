"""Single-band tight-binding operator for a two-species chain.

The operator is the real symmetric tridiagonal matrix with the on-site
energy of each site on the diagonal (``eps_a`` for A sites, ``eps_b``
for B sites), one constant nearest-neighbour coupling ``t`` on the first
off-diagonals, and open ends.  Only the diagonal and the off-diagonal
are stored; nothing in this package ever materializes the dense matrix
outside of small cross-checks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chain import SymbolChain


@dataclass(frozen=True)
class TbParams:
    """On-site energies per species and the nearest-neighbour coupling."""

    eps_a: float = 1.0
    eps_b: float = 2.0
    t: float = 1.0


@dataclass(frozen=True)
class TridiagonalHamiltonian:
    """Real symmetric tridiagonal operator, stored as two bands.

    ``diag`` has length ``n``; ``offdiag`` has length ``n - 1`` and holds
    the coupling between neighbouring sites.
    """

    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        diag = np.asarray(self.diag, dtype=np.float64).copy()
        offdiag = np.asarray(self.offdiag, dtype=np.float64).copy()
        if diag.ndim != 1 or diag.size == 0:
            raise ValueError("diag must be a nonempty 1-d array")
        if offdiag.ndim != 1 or offdiag.size != diag.size - 1:
            raise ValueError("offdiag must have length len(diag) - 1")
        if not (np.isfinite(diag).all() and np.isfinite(offdiag).all()):
            raise ValueError("matrix entries must be finite")
        diag.setflags(write=False)
        offdiag.setflags(write=False)
        object.__setattr__(self, "diag", diag)
        object.__setattr__(self, "offdiag", offdiag)

    @property
    def n(self) -> int:
        return self.diag.size

    def scale_bound(self) -> float:
        """max|diag| + 2 max|offdiag|, an upper bound on the spectral radius."""
        off = np.abs(self.offdiag).max() if self.offdiag.size else 0.0
        return float(np.abs(self.diag).max() + 2.0 * off)

    def dense(self) -> np.ndarray:
        """Dense copy, intended for small cross-checks only."""
        h = np.diag(self.diag)
        if self.offdiag.size:
            idx = np.arange(self.n - 1)
            h[idx, idx + 1] = self.offdiag
            h[idx + 1, idx] = self.offdiag
        return h


def build_hamiltonian(chain: SymbolChain, params: TbParams) -> TridiagonalHamiltonian:
    """Assemble the tridiagonal operator for ``chain`` under ``params``."""
    diag = np.where(chain.codes == 0, float(params.eps_a), float(params.eps_b))
    offdiag = np.full(len(chain) - 1, float(params.t))
    return TridiagonalHamiltonian(diag, offdiag)


def uniform_hamiltonian(n: int, t: float, eps: float = 0.0) -> TridiagonalHamiltonian:
    """Open uniform chain: constant on-site energy, constant coupling."""
    if n < 1:
        raise ValueError("need at least one site")
    return TridiagonalHamiltonian(np.full(n, float(eps)), np.full(n - 1, float(t)))
