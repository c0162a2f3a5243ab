"""Spacing, branch, cusp, minigap, DOS, IPR and image-map diagnostics."""

import math

import numpy as np
import pytest

import scaledchain as sc
from scaledchain import spectral


def test_spacings_basic():
    assert spectral.spacings(np.array([0.0, 1.0, 3.0])).tolist() == [1.0, 2.0]


def test_spacings_uniform_four_site_chain():
    values = sc.eig_values_only(sc.uniform_hamiltonian(4, 1.0))
    gaps = spectral.spacings(values)
    expected = [1.0, math.sqrt(5.0) - 1.0, 1.0]
    assert np.abs(gaps - expected).max() < 1e-12


def test_spacings_validation():
    with pytest.raises(ValueError):
        spectral.spacings(np.array([1.0]))
    with pytest.raises(ValueError):
        spectral.spacings(np.array([1.0, 0.5, 2.0]))


def test_detect_branches_synthetic():
    deco = sc.detect_branches(np.array([0.0, 1.0, 2.0, 100.0, 101.0]), gap_threshold=10.0)
    assert deco.n_branches == 2
    (first, second) = deco.branches
    assert (first.start, first.end) == (1, 3)
    assert (second.start, second.end) == (4, 5)
    assert first.e_max == 2.0 and second.e_min == 100.0
    assert deco.gaps == ((3, 98.0),)


def test_detect_branches_partition(chain_spectrum):
    values = chain_spectrum(30, 0.1)
    deco = sc.detect_branches(values)
    starts = [b.start for b in deco.branches]
    ends = [b.end for b in deco.branches]
    assert starts[0] == 1 and ends[-1] == values.size
    assert all(s == e + 1 for s, e in zip(starts[1:], ends[:-1]))
    gaps = spectral.spacings(values)
    for m, width in deco.gaps:
        assert width == gaps[m - 1]


def test_detect_cusps_synthetic_slope_break():
    dense = np.cumsum(np.full(200, 0.001))
    sparse = dense[-1] + np.cumsum(np.full(200, 0.01))
    levels = np.concatenate((dense, sparse))
    hits = spectral.detect_cusps(levels, window=31, slope_ratio=5.0)
    assert len(hits) == 1
    assert abs(hits[0] - 200) <= 31


def test_detect_cusps_quiet_on_smooth_staircase():
    levels = np.cumsum(np.linspace(1.0, 2.0, 600))
    assert spectral.detect_cusps(levels, window=31, slope_ratio=5.0) == ()


def test_detect_cusps_validation():
    levels = np.arange(10.0)
    with pytest.raises(ValueError):
        spectral.detect_cusps(levels, window=1)
    with pytest.raises(ValueError):
        spectral.detect_cusps(levels, slope_ratio=1.0)
    # too short for the window: no detections rather than an error
    assert spectral.detect_cusps(levels, window=31) == ()


def test_detect_minigaps_synthetic_spike():
    gaps = np.ones(100)
    gaps[50] = 50.0
    assert spectral.detect_minigaps(gaps, window=21, peak_factor=6.0) == (51,)
    # below the factor: nothing isolated enough
    gaps[50] = 5.0
    assert spectral.detect_minigaps(gaps, window=21, peak_factor=6.0) == ()


def test_detect_minigaps_validation():
    with pytest.raises(ValueError):
        spectral.detect_minigaps(np.ones(50), window=20)
    assert spectral.detect_minigaps(np.ones(5), window=21) == ()


def test_branch_summary_counts(chain_spectrum):
    summary = sc.branch_summary(chain_spectrum(30, 0.5))
    assert summary.decomposition.n_branches == 1
    assert len(summary.cusps) == 2
    assert summary.total_branches == 3


def test_dos_counts_and_edges(chain_spectrum):
    values = chain_spectrum(30, 0.1)
    hist = sc.dos(values, bins=150)
    assert hist.counts.sum() == values.size
    assert np.all(np.diff(hist.bin_edges) > 0)
    assert hist.counts.size == 150
    assert hist.bin_edges.size == 151
    assert hist.centers.size == 150


def test_dos_handles_degenerate_spectrum():
    hist = sc.dos(np.array([2.0, 2.0, 2.0]), bins=2)
    assert hist.counts.tolist() == [0, 3]


def test_dos_validation():
    with pytest.raises(ValueError):
        sc.dos(np.array([]), bins=10)
    with pytest.raises(ValueError):
        sc.dos(np.ones(3), bins=1)


def test_dos_peak_clusters_synthetic():
    hist = spectral.DosHistogram(
        np.linspace(0.0, 8.0, 9),
        np.array([50, 1, 1, 1, 50, 50, 1, 1]),
    )
    assert sc.dos_peak_clusters(hist) == ((0, 0), (4, 5))
    empty = spectral.DosHistogram(np.linspace(0.0, 1.0, 4), np.zeros(3, dtype=np.int64))
    assert sc.dos_peak_clusters(empty) == ()


def test_dos_landmark_large_chain(chain_spectrum):
    """N = 5101, weak coupling: two split site-energy clusters per species."""
    hist = sc.dos(chain_spectrum(50, 0.1), bins=200)
    clusters = sc.dos_peak_clusters(hist)
    assert clusters == ((0, 0), (56, 56), (143, 143), (199, 199))
    # the spectral gap shows as a long interior run of empty bins
    zero = hist.counts == 0
    assert bool(zero[58:142].all())
    assert not zero[0] and not zero[-1]


def test_ipr_limits():
    n = 64
    single = np.zeros(n)
    single[3] = 1.0
    assert sc.ipr(single) == 1.0
    flat = np.full(n, 1.0 / math.sqrt(n))
    assert abs(sc.ipr(flat) - 1.0 / n) < 1e-15


def test_ipr_invariances():
    rng = np.random.default_rng(11)
    v = rng.normal(size=40)
    v /= np.linalg.norm(v)
    base = sc.ipr(v)
    assert sc.ipr(-v) == base
    assert sc.ipr(v[rng.permutation(40)]) == pytest.approx(base, abs=1e-15)


def test_ipr_rejects_unnormalized():
    with pytest.raises(ValueError):
        sc.ipr(np.ones(4))
    with pytest.raises(ValueError):
        sc.ipr(np.array([]))


def test_ipr_values_matches_scalar():
    rng = np.random.default_rng(3)
    v = rng.normal(size=(30, 6))
    v /= np.linalg.norm(v, axis=0, keepdims=True)
    per_column = [sc.ipr(v[:, j]) for j in range(6)]
    assert np.abs(sc.ipr_values(v) - per_column).max() < 1e-15


def test_eigenstate_map_is_column_magnitudes():
    rng = np.random.default_rng(9)
    v = rng.normal(size=(12, 12))
    v, _ = np.linalg.qr(v)
    mag = sc.eigenstate_map(v)
    assert np.array_equal(mag, np.abs(v))
    assert np.abs(np.linalg.norm(mag, axis=0) - 1.0).max() < 1e-12
    with pytest.raises(ValueError):
        sc.eigenstate_map(np.ones(5))


def test_write_pgm_layout(tmp_path):
    mag = np.array([[0.0, 0.5], [1.0, 0.25], [0.75, 0.0]])
    path = tmp_path / "map.pgm"
    spectral.write_pgm(path, mag, comment="w=2 h=3")
    raw = path.read_bytes()
    header = b"P5\n# w=2 h=3\n2 3\n255\n"
    assert raw.startswith(header)
    pixels = raw[len(header):]
    assert len(pixels) == 6
    assert list(pixels) == [0, 128, 255, 64, 191, 0]


def test_write_pgm_no_comment_and_validation(tmp_path):
    path = tmp_path / "flat.pgm"
    spectral.write_pgm(path, np.zeros((2, 2)))
    assert path.read_bytes() == b"P5\n2 2\n255\n" + bytes(4)
    with pytest.raises(ValueError):
        spectral.write_pgm(path, np.array([[-0.1, 0.2]]))
    with pytest.raises(ValueError):
        spectral.write_pgm(path, np.ones(3))
