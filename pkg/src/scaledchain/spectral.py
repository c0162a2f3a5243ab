"""Diagnostics on sorted spectra and eigenvector sets.

Level indices reported by the detectors here are 1-based: spacing ``m``
is ``E_{m+1} - E_m`` for levels ``E_1 <= ... <= E_N``, so a spacing
index doubles as the label of the level just below the corresponding
boundary.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

__all__ = [
    "Branch",
    "BranchDecomposition",
    "BranchSummary",
    "DosHistogram",
    "spacings",
    "detect_branches",
    "detect_cusps",
    "branch_summary",
    "detect_minigaps",
    "dos",
    "dos_peak_clusters",
    "ipr",
    "ipr_values",
    "eigenstate_map",
    "write_pgm",
]


def spacings(eigenvalues: np.ndarray) -> np.ndarray:
    """Consecutive level distances of an ascending spectrum.

    Returns an array of length ``N - 1``; entry ``j`` (0-based) is the
    1-based spacing ``m = j + 1``.
    """
    e = np.asarray(eigenvalues, dtype=np.float64)
    if e.ndim != 1 or e.size < 2:
        raise ValueError("need at least two levels")
    s = np.diff(e)
    if s.min() < 0.0:
        raise ValueError("spectrum must be sorted ascending")
    return s


@dataclass(frozen=True)
class Branch:
    """Contiguous block of levels, 1-based inclusive, with its energy range."""

    start: int
    end: int
    e_min: float
    e_max: float


@dataclass(frozen=True)
class BranchDecomposition:
    """Branches split at outlier spacings, plus the splitting gaps.

    ``gaps`` holds ``(m, width)`` pairs where ``m`` is the 1-based
    spacing index at the split.  Branches partition ``1..N``.
    """

    branches: tuple[Branch, ...]
    gaps: tuple[tuple[int, float], ...]

    @property
    def n_branches(self) -> int:
        return len(self.branches)


def detect_branches(eigenvalues: np.ndarray, gap_threshold: float = 50.0) -> BranchDecomposition:
    """Split a spectrum wherever a spacing exceeds ``gap_threshold`` medians.

    A spacing larger than ``gap_threshold * median(spacings)`` is taken
    as a spectral gap; the levels between gaps form the branches.  The
    default multiplier separates genuine inter-branch gaps (hundreds of
    medians and up) from the isolated minigap peaks inside a branch,
    which stay around thirty medians on the scaled chains.
    """
    e = np.asarray(eigenvalues, dtype=np.float64)
    s = spacings(e)
    med = float(np.median(s))
    cut = np.flatnonzero(s > gap_threshold * med)
    bounds = np.concatenate(([0], cut + 1, [e.size]))
    branches = tuple(
        Branch(int(a + 1), int(b), float(e[a]), float(e[b - 1]))
        for a, b in zip(bounds[:-1], bounds[1:])
    )
    gaps = tuple((int(m + 1), float(s[m])) for m in cut)
    return BranchDecomposition(branches, gaps)


def detect_cusps(
    eigenvalues: np.ndarray,
    window: int = 61,
    slope_ratio: float = 5.0,
    edge_margin: int | None = None,
) -> tuple[int, ...]:
    """Locate slope discontinuities of the level staircase ``E_m`` vs ``m``.

    At a cusp the local level density changes abruptly while no wide gap
    opens.  The detector compares the median spacing over ``window``
    levels to the left and to the right of each boundary and flags
    boundaries where the two differ by more than a factor
    ``slope_ratio``; runs of flagged boundaries closer than ``window``
    collapse to the strongest one.  Medians make the comparison
    insensitive to isolated spacing outliers (gaps, minigap peaks).

    Returns 1-based spacing indices.  ``edge_margin`` (default
    ``3 * window``) suppresses the trivial density drift near the
    spectrum ends.
    """
    if window < 2:
        raise ValueError("window must be at least 2")
    if slope_ratio <= 1.0:
        raise ValueError("slope_ratio must exceed 1")
    if edge_margin is None:
        edge_margin = 3 * window
    s = spacings(eigenvalues)
    ns = s.size
    if ns < 2 * window + 1:
        return ()
    meds = np.median(sliding_window_view(s, window), axis=1)
    # boundary position p (0-based into s): left window ends at p,
    # right window starts at p
    pos = np.arange(window, ns - window + 1)
    left = meds[pos - window]
    right = meds[pos]
    valid = (left > 0.0) & (right > 0.0)
    score = np.zeros(pos.size)
    score[valid] = np.abs(np.log(right[valid] / left[valid]))
    inside = (pos >= edge_margin) & (pos <= ns - edge_margin)
    hits = np.flatnonzero((score > np.log(slope_ratio)) & inside & valid)
    if hits.size == 0:
        return ()
    cusps = []
    run_start = 0
    for i in range(1, hits.size + 1):
        if i == hits.size or hits[i] - hits[i - 1] > window:
            run = hits[run_start:i]
            best = run[np.argmax(score[run])]
            cusps.append(int(pos[best]) + 1)
            run_start = i
    return tuple(cusps)


@dataclass(frozen=True)
class BranchSummary:
    """Gap-based decomposition combined with cusp detections."""

    decomposition: BranchDecomposition
    cusps: tuple[int, ...]
    total_branches: int


def branch_summary(
    eigenvalues: np.ndarray,
    gap_threshold: float = 50.0,
    cusp_window: int = 61,
    slope_ratio: float = 5.0,
) -> BranchSummary:
    """Combine gap splitting and cusp detection into one branch count.

    Cusps falling within ``cusp_window`` levels of a gap boundary are
    not counted again.
    """
    deco = detect_branches(eigenvalues, gap_threshold)
    cusps = detect_cusps(eigenvalues, window=cusp_window, slope_ratio=slope_ratio)
    gap_pos = np.array([m for m, _ in deco.gaps], dtype=np.int64)
    extra = [
        c for c in cusps
        if gap_pos.size == 0 or np.abs(gap_pos - c).min() > cusp_window
    ]
    return BranchSummary(deco, cusps, deco.n_branches + len(extra))


def detect_minigaps(
    spacing_values: np.ndarray,
    window: int = 21,
    peak_factor: float = 6.0,
) -> tuple[int, ...]:
    """Find isolated spacing peaks well above their local background.

    A spacing qualifies when it is a strict local maximum and exceeds
    ``peak_factor`` times the median spacing over the centered odd
    ``window``.  Returns 1-based spacing indices; boundaries closer than
    half a window to either end are not scanned.
    """
    if window < 3 or window % 2 == 0:
        raise ValueError("window must be an odd integer >= 3")
    s = np.asarray(spacing_values, dtype=np.float64)
    if s.ndim != 1:
        raise ValueError("spacings must be a 1-d array")
    if s.size < window:
        return ()
    half = window // 2
    local_med = np.median(sliding_window_view(s, window), axis=1)
    center = s[half:-half]
    over = center > peak_factor * local_med
    peak = np.ones_like(over)
    idx = np.arange(half, s.size - half)
    peak &= center > s[idx - 1]
    peak &= center > s[idx + 1]
    return tuple(int(i) for i in idx[over & peak] + 1)


@dataclass(frozen=True)
class DosHistogram:
    """Histogram of a spectrum over uniform bins covering its full range."""

    bin_edges: np.ndarray
    counts: np.ndarray

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.bin_edges[:-1] + self.bin_edges[1:])


def dos(eigenvalues: np.ndarray, bins: int = 200) -> DosHistogram:
    """Density of states as raw counts over ``bins`` uniform bins.

    The bin range is the spectrum range padded by ``1e-12`` of its width
    on each side so every level lands strictly inside; the counts always
    sum to the number of levels.
    """
    e = np.asarray(eigenvalues, dtype=np.float64)
    if e.ndim != 1 or e.size == 0:
        raise ValueError("need at least one level")
    if bins < 2:
        raise ValueError("need at least two bins")
    lo = float(e.min())
    hi = float(e.max())
    eta = 1e-12 * (hi - lo)
    if eta == 0.0:
        eta = max(1e-12 * abs(hi), 1e-15)
    edges = np.linspace(lo - eta, hi + eta, bins + 1)
    counts, _ = np.histogram(e, edges)
    return DosHistogram(edges, counts.astype(np.int64))


def dos_peak_clusters(hist: DosHistogram, height_factor: float = 3.0) -> tuple[tuple[int, int], ...]:
    """Contiguous bin runs whose counts stand out of the background.

    A bin belongs to a cluster when its count is at least
    ``height_factor`` times the median count of the occupied bins.
    Returns ``(start, end)`` bin index pairs, inclusive.
    """
    counts = hist.counts
    occupied = counts[counts > 0]
    if occupied.size == 0:
        return ()
    cut = height_factor * float(np.median(occupied))
    mask = counts >= cut
    clusters = []
    start = None
    for i, flag in enumerate(mask):
        if flag and start is None:
            start = i
        elif not flag and start is not None:
            clusters.append((start, i - 1))
            start = None
    if start is not None:
        clusters.append((start, counts.size - 1))
    return tuple(clusters)


def ipr(vector: np.ndarray, norm_tol: float = 1e-10) -> float:
    """Inverse participation ratio ``sum |psi_i|^4`` of a unit vector.

    Input must be normalized: ``|sum |psi_i|^2 - 1| <= norm_tol``.
    The result lies in ``[1/N, 1]``; 1 marks a single-site state and
    ``1/N`` a uniformly spread one.
    """
    v = np.asarray(vector)
    if v.ndim != 1 or v.size == 0:
        raise ValueError("need a nonempty vector")
    mag2 = np.abs(v) ** 2
    norm = float(mag2.sum())
    if abs(norm - 1.0) > norm_tol:
        raise ValueError(f"vector is not normalized (|psi|^2 = {norm!r})")
    return float((mag2**2).sum())


def ipr_values(eigenvectors: np.ndarray) -> np.ndarray:
    """IPR of every eigenvector column of a unit-column matrix."""
    v = np.asarray(eigenvectors)
    if v.ndim != 2:
        raise ValueError("need a matrix with eigenvector columns")
    return np.einsum("ij,ij->j", np.abs(v) ** 2, np.abs(v) ** 2)


def eigenstate_map(eigenvectors: np.ndarray) -> np.ndarray:
    """Magnitude matrix ``|psi_i^(m)|`` (row = site, column = state)."""
    v = np.asarray(eigenvectors)
    if v.ndim != 2:
        raise ValueError("need a matrix with eigenvector columns")
    return np.abs(v)


def write_pgm(path, magnitudes: np.ndarray, comment: str | None = None) -> None:
    """Write a magnitude matrix as a binary (P5) greyscale image.

    Layout: line 1 is the magic ``P5``; an optional ``#`` comment line;
    then ``<width> <height>`` with width the number of states (columns)
    and height the number of sites (rows); then ``255``; then
    ``width * height`` pixel bytes in row-major site order.  Pixels are
    ``round(255 * |psi| / max |psi|)``.
    """
    mag = np.asarray(magnitudes, dtype=np.float64)
    if mag.ndim != 2 or mag.size == 0:
        raise ValueError("need a nonempty 2-d magnitude array")
    if mag.min() < 0.0:
        raise ValueError("magnitudes must be nonnegative")
    top = mag.max()
    if top == 0.0:
        top = 1.0
    pixels = np.rint(255.0 * mag / top).astype(np.uint8)
    height, width = pixels.shape
    header = "P5\n"
    if comment is not None:
        header += f"# {comment}\n"
    header += f"{width} {height}\n255\n"
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii"))
        fh.write(pixels.tobytes())
