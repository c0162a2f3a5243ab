"""Closed-form resonator approximation to the scaled-chain spectrum.

Cutting every A-B interface of the order-``l`` scaled chain leaves
isolated homogeneous resonators: one single A site plus, for each
``k = 1..l``, one A and one B resonator of even size ``2k``.  Each
resonator of size ``n`` and species energy ``eps`` contributes the open
uniform-chain levels

    E(n, m) = eps + 2 t cos(m pi / (n + 1)),   m = 1..n,

(the singleton is the ``n = 1`` case), giving exactly ``1 + 2l(l+1)``
levels, the size of the full chain.  The model is exact at ``t = 0`` and
degrades smoothly as the coupling mixes the resonators.

Two resonator levels of one species coincide exactly iff their mode
fractions ``m / (n + 1)`` are equal as reduced rationals; because every
resonator has odd ``n + 1``, all such coincidences come from odd
multiples ``(alpha m, alpha (n + 1))``.  Energies are evaluated from the
reduced fraction so that exactly degenerate levels are equal to the bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .hamiltonian import TbParams
from .spectral import detect_minigaps, spacings

__all__ = [
    "ResonatorLevel",
    "LrmSpectrum",
    "DegenerateGroup",
    "CrossSpeciesCoincidence",
    "SpectrumComparison",
    "lrm_spectrum",
    "lrm_gap_width",
    "enumerate_degeneracies",
    "cross_species_coincidences",
    "compare_to_tb",
]


@dataclass(frozen=True)
class ResonatorLevel:
    species: str
    size: int
    mode: int
    energy: float


@dataclass(frozen=True)
class LrmSpectrum:
    """All resonator levels of one chain order plus the sorted energies."""

    order: int
    levels: tuple[ResonatorLevel, ...]
    energies: np.ndarray

    def __len__(self) -> int:
        return len(self.levels)


def _mode_energy(eps: float, t: float, size: int, mode: int) -> float:
    frac = Fraction(mode, size + 1)
    return eps + 2.0 * t * math.cos(math.pi * frac.numerator / frac.denominator)


def lrm_spectrum(order: int, params: TbParams) -> LrmSpectrum:
    """Level set of all resonators of the order-``order`` scaled chain."""
    order = int(order)
    if order < 1:
        raise ValueError("order must be a positive integer")
    eps = {"A": float(params.eps_a), "B": float(params.eps_b)}
    t = float(params.t)
    levels = [ResonatorLevel("A", 1, 1, _mode_energy(eps["A"], t, 1, 1))]
    for k in range(1, order + 1):
        size = 2 * k
        for species in ("A", "B"):
            for mode in range(1, size + 1):
                levels.append(
                    ResonatorLevel(species, size, mode,
                                   _mode_energy(eps[species], t, size, mode))
                )
    energies = np.sort(np.array([lv.energy for lv in levels]), kind="stable")
    return LrmSpectrum(order, tuple(levels), energies)


def lrm_gap_width(order: int, params: TbParams) -> float:
    """Spectral gap of the resonator model between the two species bands.

    The topmost A level and the lowest B level both come from the largest
    resonator (size ``2 * order``), so the gap is
    ``(eps_b - eps_a) - 4 t cos(pi / (2 order + 1))``.  Nonpositive
    values mean the bands overlap (gap closed).
    """
    order = int(order)
    if order < 1:
        raise ValueError("order must be a positive integer")
    return float(params.eps_b) - float(params.eps_a) - 4.0 * float(params.t) * math.cos(
        math.pi / (2 * order + 1)
    )


@dataclass(frozen=True)
class DegenerateGroup:
    """Same-species levels sharing one reduced mode fraction.

    ``members`` are ``(size, mode)`` pairs, ascending by size; all reduce
    to ``fraction = mode / (size + 1)`` and therefore share one energy
    exactly.
    """

    species: str
    fraction: Fraction
    members: tuple[tuple[int, int], ...]


def enumerate_degeneracies(order: int) -> tuple[DegenerateGroup, ...]:
    """All exact same-species level coincidences up to ``order``.

    Groups are generated from the base pairs ``(m, 2k+1)`` with
    ``gcd(m, 2k+1) = 1`` by the odd-multiple family
    ``(alpha m, alpha (2k+1))`` while the implied size
    ``alpha (2k+1) - 1`` stays within the largest resonator ``2*order``;
    each family is cross-checked against the reduced-fraction criterion.
    Only groups with at least two members are returned, one per species.
    """
    order = int(order)
    if order < 1:
        raise ValueError("order must be a positive integer")
    max_size = 2 * order
    groups = []
    for k in range(1, order + 1):
        q = 2 * k + 1
        for m in range(1, 2 * k + 1):
            if math.gcd(m, q) != 1:
                continue
            members = []
            alpha = 1
            while alpha * q - 1 <= max_size:
                members.append((alpha * q - 1, alpha * m))
                alpha += 2
            if len(members) < 2:
                continue
            base = Fraction(m, q)
            for size, mode in members:
                if Fraction(mode, size + 1) != base:
                    raise RuntimeError("degeneracy family failed the rational check")
            for species in ("A", "B"):
                groups.append(DegenerateGroup(species, base, tuple(members)))
    return tuple(groups)


@dataclass(frozen=True)
class CrossSpeciesCoincidence:
    """One shared energy with the A and B levels that land on it."""

    energy: float
    a_levels: tuple[ResonatorLevel, ...]
    b_levels: tuple[ResonatorLevel, ...]


def cross_species_coincidences(
    order: int, params: TbParams, tol: float = 1e-12
) -> tuple[CrossSpeciesCoincidence, ...]:
    """Accidental A-B level collisions, detected numerically.

    Unlike the same-species families these depend on the parameter
    values; two levels count as coincident when their energies differ by
    at most ``tol``.
    """
    model = lrm_spectrum(order, params)
    a_levels = [lv for lv in model.levels if lv.species == "A"]
    b_levels = [lv for lv in model.levels if lv.species == "B"]
    hits = {}
    for la in a_levels:
        for lb in b_levels:
            if abs(la.energy - lb.energy) <= tol:
                key = round(la.energy / max(tol, 1e-300))
                bucket = hits.setdefault(key, (la.energy, [], []))
                if la not in bucket[1]:
                    bucket[1].append(la)
                if lb not in bucket[2]:
                    bucket[2].append(lb)
    return tuple(
        CrossSpeciesCoincidence(energy, tuple(a), tuple(b))
        for energy, a, b in (hits[k] for k in sorted(hits))
    )


@dataclass(frozen=True)
class SpectrumComparison:
    """Rank-wise comparison of the resonator levels with an exact spectrum."""

    max_deviation: float
    mean_deviation: float
    model_zero_spacings: int
    model_minigaps: tuple[int, ...]
    exact_minigaps: tuple[int, ...]
    matching_minigaps: int


def compare_to_tb(
    spectrum: LrmSpectrum,
    exact: np.ndarray,
    minigap_window: int = 21,
    minigap_factor: float = 6.0,
    index_slack: int = 1,
) -> SpectrumComparison:
    """Rank-by-rank deviation and minigap-position agreement.

    Both spectra must have the same cardinality.  Minigap indices match
    when they differ by at most ``index_slack``.
    """
    model = spectrum.energies
    exact = np.asarray(exact, dtype=np.float64)
    if exact.ndim != 1 or exact.size != model.size:
        raise ValueError(
            f"cardinality mismatch: model has {model.size} levels, exact has {exact.size}"
        )
    dev = np.abs(model - exact)
    model_sp = spacings(model)
    model_mg = detect_minigaps(model_sp, minigap_window, minigap_factor)
    exact_mg = detect_minigaps(spacings(exact), minigap_window, minigap_factor)
    exact_arr = np.array(exact_mg, dtype=np.int64)
    matches = sum(
        1 for m in model_mg
        if exact_arr.size and np.abs(exact_arr - m).min() <= index_slack
    )
    return SpectrumComparison(
        max_deviation=float(dev.max()),
        mean_deviation=float(dev.mean()),
        model_zero_spacings=int(np.count_nonzero(model_sp == 0.0)),
        model_minigaps=model_mg,
        exact_minigaps=exact_mg,
        matching_minigaps=matches,
    )
