"""Two-species chains grown by iterated end reflections.

A chain is a finite word over the site species ``A`` and ``B``.  The
generator extends a seed by repeatedly appending the reversal of its own
tail.  Run with the incremental schedule 2, 3, 4, ... this produces a
word whose homogeneous runs grow linearly; truncated after the run
``2l A`` it is the order-``l`` scaled chain

    1A, 2B, 2A, 4B, 4A, ..., 2lB, 2lA

with ``1 + 2l(l+1)`` sites, which the rest of the package turns into
tight-binding models.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

SYMBOLS = ("A", "B")

# ordered reflection-domain sizes, one entry per reflection step
ReflectionSchedule = Iterable[int]

_A_CODE = ord("A")
_B_CODE = ord("B")


class SymbolChain:
    """Immutable sequence of A/B site labels backed by a uint8 code array.

    ``codes`` stores 0 for species A and 1 for species B.  Construct from
    an iterable of codes or via :meth:`from_string`.
    """

    __slots__ = ("_codes",)

    def __init__(self, codes):
        arr = np.asarray(codes, dtype=np.uint8)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("a chain needs at least one site")
        if arr.max() > 1:
            raise ValueError("site codes must be 0 (A) or 1 (B)")
        arr = arr.copy()
        arr.setflags(write=False)
        self._codes = arr

    @classmethod
    def from_string(cls, symbols: str) -> "SymbolChain":
        raw = np.frombuffer(symbols.encode("ascii"), dtype=np.uint8)
        bad = (raw != _A_CODE) & (raw != _B_CODE)
        if bad.any():
            raise ValueError(f"invalid site symbol {chr(raw[bad.argmax()])!r}")
        return cls(raw - _A_CODE)

    @property
    def codes(self) -> np.ndarray:
        return self._codes

    def symbols(self) -> str:
        return (self._codes + _A_CODE).tobytes().decode("ascii")

    def __len__(self) -> int:
        return self._codes.size

    def __getitem__(self, i) -> str:
        return SYMBOLS[self._codes[i]]

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymbolChain):
            return NotImplemented
        return np.array_equal(self._codes, other._codes)

    def __hash__(self):
        return hash(self._codes.tobytes())

    def __repr__(self) -> str:
        s = self.symbols()
        if len(s) > 40:
            s = s[:37] + "..."
        return f"SymbolChain({s!r}, n={len(self)})"


def apply_reflection(chain: SymbolChain, k: int) -> SymbolChain:
    """Append the reversal of the last ``k`` sites to ``chain``.

    The result has ``len(chain) + k`` sites and starts with ``chain``.
    ``k`` must satisfy ``1 <= k <= len(chain)``.
    """
    k = int(k)
    n = len(chain)
    if k < 1:
        raise ValueError("reflection size must be a positive integer")
    if k > n:
        raise ValueError(f"reflection size {k} exceeds chain length {n}")
    codes = chain.codes
    return SymbolChain(np.concatenate([codes, codes[-k:][::-1]]))


def lsd_generate(seed: SymbolChain, schedule: ReflectionSchedule) -> SymbolChain:
    """Fold :func:`apply_reflection` over ``schedule``, left to right.

    An empty schedule returns ``seed`` unchanged.  Each schedule entry is
    validated against the current (already grown) length, so the usual
    incremental schedule 2, 3, ..., k is always admissible for a seed of
    two or more sites.
    """
    chain = seed
    for k in schedule:
        chain = apply_reflection(chain, k)
    return chain


def scaled_chain(order: int) -> SymbolChain:
    """Build the run-length word 1A, 2B, 2A, 4B, 4A, ..., 2lB, 2lA.

    ``order`` is the number of B/A run pairs ``l >= 1``; the chain has
    ``1 + 2*order*(order + 1)`` sites, ``1 + order*(order+1)`` of species
    A and ``order*(order+1)`` of species B.  It equals the first
    ``1 + 2*order*(order+1)`` sites of
    ``lsd_generate(AB, range(2, 2*order + 2))``.
    """
    order = int(order)
    if order < 1:
        raise ValueError("order must be a positive integer")
    values = np.zeros(2 * order + 1, dtype=np.uint8)
    values[1::2] = 1
    lengths = np.empty(2 * order + 1, dtype=np.int64)
    lengths[0] = 1
    lengths[1::2] = 2 * np.arange(1, order + 1)
    lengths[2::2] = lengths[1::2]
    return SymbolChain(np.repeat(values, lengths))


def scaled_chain_length(order: int) -> int:
    """Site count of ``scaled_chain(order)``."""
    order = int(order)
    if order < 1:
        raise ValueError("order must be a positive integer")
    return 1 + 2 * order * (order + 1)


def run_length_decomposition(chain: SymbolChain) -> list[tuple[str, int]]:
    """Split a chain into maximal homogeneous runs.

    Returns ``[(symbol, length), ...]`` in site order; lengths sum to
    ``len(chain)`` and adjacent runs alternate species.
    """
    codes = chain.codes
    starts = np.concatenate(([0], np.flatnonzero(codes[1:] != codes[:-1]) + 1))
    lengths = np.diff(np.concatenate((starts, [codes.size])))
    return [(SYMBOLS[codes[s]], int(n)) for s, n in zip(starts, lengths)]


def expand_runs(runs: Sequence[tuple[str, int]]) -> SymbolChain:
    """Inverse of :func:`run_length_decomposition`."""
    if not runs:
        raise ValueError("need at least one run")
    values = []
    lengths = []
    for sym, n in runs:
        if sym not in SYMBOLS:
            raise ValueError(f"invalid site symbol {sym!r}")
        if n < 1:
            raise ValueError("run lengths must be positive")
        values.append(SYMBOLS.index(sym))
        lengths.append(int(n))
    return SymbolChain(np.repeat(np.array(values, dtype=np.uint8), lengths))
