"""Eigensolver for real symmetric tridiagonal matrices.

The decomposition is computed by the implicit QL algorithm with
Wilkinson-style origin shifts, accumulating the plane rotations into the
eigenvector matrix when vectors are requested.  The kernels are plain
loops compiled with numba; no external decomposition routine is used.

A Sturm-sequence bisection solver for the same problem lives at the end
of the module.  It shares no code with the QL path and serves as an
independent cross-check of the eigenvalues.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .hamiltonian import TridiagonalHamiltonian

DEFAULT_TOL_REL = 1e-11
DEFAULT_MAX_SWEEPS = 50

# eigenvalues closer than this (relative to the matrix scale) are treated
# as one cluster when enforcing orthogonality
_CLUSTER_REL = 1e-9

__all__ = [
    "ConvergenceError",
    "SpectralResult",
    "eig_all",
    "eig_values_only",
    "sturm_eigenvalues",
]


class ConvergenceError(RuntimeError):
    """QL iteration exhausted its sweep budget for one eigenvalue."""

    def __init__(self, index: int, max_sweeps: int):
        super().__init__(
            f"eigenvalue {index} failed to converge within {max_sweeps} sweeps"
        )
        self.index = index
        self.max_sweeps = max_sweeps


@dataclass(frozen=True)
class SpectralResult:
    """Sorted eigenvalues, matching eigenvector columns, worst residual.

    ``eigenvectors[:, i]`` belongs to ``eigenvalues[i]``; columns are
    unit-norm and mutually orthogonal.  ``max_residual`` is
    ``max_i ||H v_i - lambda_i v_i||_2``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    max_residual: float

    @property
    def n(self) -> int:
        return self.eigenvalues.size


@njit(cache=True, nogil=True)
def _ql_implicit(d, e, v, want_vectors, tol, max_sweeps):  # pragma: no cover
    """Implicit-shift QL on the bands (d, e); rotations accumulate in v.

    Returns -1 on success, otherwise the index that failed to converge.
    On entry e[n-1] must be 0; d and e are overwritten.
    """
    n = d.shape[0]
    for low in range(n):
        sweeps = 0
        while True:
            # find the first negligible coupling above `low`
            m = low
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= tol * dd:
                    break
                m += 1
            if m == low:
                break
            if sweeps >= max_sweeps:
                return low
            sweeps += 1

            # Wilkinson-style shift from the 2x2 block at `low`
            g = (d[low + 1] - d[low]) / (2.0 * e[low])
            r = math.hypot(g, 1.0)
            if g >= 0.0:
                g = d[m] - d[low] + e[low] / (g + r)
            else:
                g = d[m] - d[low] + e[low] / (g - r)

            s = 1.0
            c = 1.0
            p = 0.0
            underflow = False
            for i in range(m - 1, low - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    # rotation annihilated prematurely; restart the sweep
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                if want_vectors:
                    for row in range(n):
                        f = v[row, i + 1]
                        v[row, i + 1] = s * v[row, i] + c * f
                        v[row, i] = c * v[row, i] - s * f
            if underflow:
                continue
            d[low] -= p
            e[low] = g
            e[m] = 0.0
    return -1


def _bands(h: TridiagonalHamiltonian):
    d = np.array(h.diag, dtype=np.float64)
    e = np.zeros(h.n, dtype=np.float64)
    if h.n > 1:
        e[: h.n - 1] = h.offdiag
    return d, e


def _apply_tridiag(diag, offdiag, v):
    out = diag[:, None] * v
    if offdiag.size:
        out[:-1] += offdiag[:, None] * v[1:]
        out[1:] += offdiag[:, None] * v[:-1]
    return out


def _orthogonalize_clusters(lam, v, gap):
    """Re-orthogonalize eigenvector columns within near-degenerate runs."""
    n = lam.size
    start = 0
    for end in range(1, n + 1):
        if end == n or lam[end] - lam[end - 1] > gap:
            if end - start > 1:
                q, r = np.linalg.qr(v[:, start:end])
                sign = np.sign(np.diag(r))
                sign[sign == 0.0] = 1.0
                v[:, start:end] = q * sign[None, :]
            start = end


def eig_all(
    h: TridiagonalHamiltonian,
    tol_rel: float = DEFAULT_TOL_REL,
    max_sweeps: int = DEFAULT_MAX_SWEEPS,
) -> SpectralResult:
    """Full eigendecomposition of ``h``.

    Eigenvalues are ascending (ties keep the pre-sort order); the worst
    residual is bounded by ``tol_rel * h.scale_bound()``.  Raises
    :class:`ConvergenceError` if any eigenvalue needs more than
    ``max_sweeps`` QL sweeps.
    """
    d, e = _bands(h)
    v = np.eye(h.n)
    # the kernel threshold is a quarter of tol_rel so that the couplings it
    # drops keep the documented residual bound with margin
    bad = _ql_implicit(d, e, v, True, 0.25 * tol_rel, max_sweeps)
    if bad >= 0:
        raise ConvergenceError(int(bad), max_sweeps)
    order = np.argsort(d, kind="stable")
    lam = d[order]
    v = np.ascontiguousarray(v[:, order])
    _orthogonalize_clusters(lam, v, _CLUSTER_REL * h.scale_bound())
    resid = _apply_tridiag(h.diag, h.offdiag, v) - v * lam[None, :]
    max_residual = float(np.linalg.norm(resid, axis=0).max())
    return SpectralResult(lam, v, max_residual)


def eig_values_only(
    h: TridiagonalHamiltonian,
    tol_rel: float = DEFAULT_TOL_REL,
    max_sweeps: int = DEFAULT_MAX_SWEEPS,
) -> np.ndarray:
    """Ascending eigenvalues of ``h`` without eigenvectors.

    Runs the same QL iteration as :func:`eig_all` minus the rotation
    accumulation, so the values agree with :func:`eig_all` to rounding.
    """
    d, e = _bands(h)
    dummy = np.empty((1, 1))
    bad = _ql_implicit(d, e, dummy, False, 0.25 * tol_rel, max_sweeps)
    if bad >= 0:
        raise ConvergenceError(int(bad), max_sweeps)
    return np.sort(d, kind="stable")


# ---------------------------------------------------------------------------
# Sturm-sequence bisection: independent eigenvalue cross-check
# ---------------------------------------------------------------------------


@njit(cache=True, nogil=True)
def _neg_count(d, esq, x, pivmin):  # pragma: no cover
    """Number of eigenvalues strictly below x (Sturm sign count)."""
    count = 0
    q = d[0] - x
    if q < 0.0:
        count += 1
    for i in range(1, d.shape[0]):
        if abs(q) < pivmin:
            q = -pivmin
        q = d[i] - x - esq[i - 1] / q
        if q < 0.0:
            count += 1
    return count


@njit(cache=True, nogil=True)
def _sturm_bisect(d, esq, lo0, hi0, atol, pivmin):  # pragma: no cover
    n = d.shape[0]
    out = np.empty(n)
    for j in range(n):
        lo = lo0
        hi = hi0
        it = 0
        while hi - lo > atol and it < 200:
            mid = 0.5 * (lo + hi)
            if _neg_count(d, esq, mid, pivmin) >= j + 1:
                hi = mid
            else:
                lo = mid
            it += 1
        out[j] = 0.5 * (lo + hi)
    return out


def sturm_eigenvalues(h: TridiagonalHamiltonian, atol: float | None = None) -> np.ndarray:
    """All eigenvalues of ``h`` by Sturm-count bisection, ascending.

    Brute-force oracle: each eigenvalue is located independently by
    bisection on the Sturm sign count inside the Gershgorin interval,
    down to ``atol`` (default ``1e-13 * max(1, interval bounds)``).
    """
    d, e = _bands(h)
    esq = e[: max(h.n - 1, 0)] ** 2
    radius = np.zeros(h.n)
    if h.n > 1:
        radius[:-1] += np.abs(h.offdiag)
        radius[1:] += np.abs(h.offdiag)
    lo = float((d - radius).min())
    hi = float((d + radius).max())
    if atol is None:
        atol = 1e-13 * max(1.0, abs(lo), abs(hi))
    pivmin = 1e-280 * max(1.0, float(esq.max()) if esq.size else 1.0)
    return _sturm_bisect(d, esq, lo, hi, atol, pivmin)
