"""Coherent transmission through a chain between two semi-infinite leads.

Each lead is a uniform chain with on-site energy ``eps``, internal
coupling ``t_lead`` and dispersion ``E = eps + 2 t_lead cos k``; it
attaches to the first or last device site with coupling ``t_couple``.
Eliminating the leads exactly folds them into a retarded self-energy
``(t_couple^2 / t_lead) * phase`` on the corner sites, with
``phase = exp(-i * sign(t_lead) * k)`` so that the imaginary part is
nonpositive and evanescent amplitudes decay.  A unit wave incoming from
the left becomes an inhomogeneous complex tridiagonal system; its
solution at the last site gives the transmitted amplitude and

    T = (v_R / v_L) |amp|^2,      v = 2 |t_lead| sin k.

An independent check computes the same coefficient from the product of
the 2x2 real transfer matrices of the device, rescaled on the fly so
that strongly evanescent energies do not overflow.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np
from numba import njit
from scipy.signal import find_peaks

from .chain import SymbolChain
from .hamiltonian import TbParams, build_hamiltonian

DEFAULT_GRID_POINTS = 4001
BAND_MARGIN = 1e-4
PEAK_HEIGHT = 0.5
PEAK_PROMINENCE = 0.25

__all__ = [
    "LeadParams",
    "TransmissionCurve",
    "BandEdgeError",
    "TransportError",
    "lead_wavenumber",
    "propagating_window",
    "transmission_at",
    "transmission_sweep",
    "transfer_matrix_transmission",
]


class BandEdgeError(ValueError):
    """Energy at or outside a lead band, where no travelling wave exists."""


class TransportError(RuntimeError):
    """Numerical failure inside a scattering calculation."""


@dataclass(frozen=True)
class LeadParams:
    """Uniform semi-infinite lead and its coupling to the device edge."""

    eps: float = 1.0
    t_lead: float = 1.0
    t_couple: float = 1.0

    def __post_init__(self):
        if self.t_lead == 0.0:
            raise ValueError("lead coupling t_lead must be nonzero")
        if self.t_couple == 0.0:
            raise ValueError("contact coupling t_couple must be nonzero")


def lead_wavenumber(energy: float, lead: LeadParams) -> complex:
    """Wavenumber ``k`` with ``E = eps + 2 t_lead cos k``.

    Inside the band the result is real in ``(0, pi)``; at the band edges
    it is exactly 0 or pi (zero group velocity, flagged as singular by
    the scattering routines).  Outside the band the complex branch is
    chosen so the implied lead amplitude decays away from the device.
    """
    x = (energy - lead.eps) / (2.0 * lead.t_lead)
    if -1.0 <= x <= 1.0:
        return complex(math.acos(x), 0.0)
    k = cmath.acos(complex(x, 0.0))
    sgn = 1.0 if lead.t_lead > 0 else -1.0
    if sgn * k.imag > 0.0:
        k = k.conjugate()
    return k


def propagating_window(left: LeadParams, right: LeadParams) -> tuple[float, float]:
    """Open energy interval where both leads carry travelling waves."""
    lo = max(left.eps - 2 * abs(left.t_lead), right.eps - 2 * abs(right.t_lead))
    hi = min(left.eps + 2 * abs(left.t_lead), right.eps + 2 * abs(right.t_lead))
    if hi <= lo:
        raise ValueError("the lead bands do not overlap")
    return lo, hi


@dataclass(frozen=True)
class TransmissionCurve:
    """Transmission sampled on an energy grid, plus detected peak indices."""

    energies: np.ndarray
    transmission: np.ndarray
    peaks: np.ndarray

    @property
    def peak_energies(self) -> np.ndarray:
        return self.energies[self.peaks]

    @property
    def peak_heights(self) -> np.ndarray:
        return self.transmission[self.peaks]


@njit(cache=True, nogil=True)
def _solve_tridiag(dl, d, du, b):  # pragma: no cover
    """Solve the tridiagonal system in place (partial row pivoting).

    dl/d/du are the sub/main/super diagonals (dl[0] and du[n-1] unused);
    the solution overwrites b.  Returns False if a pivot vanished.
    """
    n = d.shape[0]
    if n == 1:
        if abs(d[0]) == 0.0:
            return False
        b[0] = b[0] / d[0]
        return True
    du2 = np.zeros(n, np.complex128)
    for i in range(n - 1):
        sub = dl[i + 1]
        if abs(sub) == 0.0:
            if abs(d[i]) == 0.0:
                return False
            continue
        if abs(d[i]) >= abs(sub):
            fact = sub / d[i]
            d[i + 1] = d[i + 1] - fact * du[i]
            b[i + 1] = b[i + 1] - fact * b[i]
        else:
            fact = d[i] / sub
            d[i] = sub
            tmp = d[i + 1]
            d[i + 1] = du[i] - fact * tmp
            if i < n - 2:
                du2[i] = du[i + 1]
                du[i + 1] = -fact * du2[i]
            du[i] = tmp
            tb = b[i]
            b[i] = b[i + 1]
            b[i + 1] = tb - fact * b[i + 1]
    if abs(d[n - 1]) == 0.0:
        return False
    b[n - 1] = b[n - 1] / d[n - 1]
    if n > 1:
        b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2]
    for i in range(n - 3, -1, -1):
        b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i]
    return True


@njit(cache=True, nogil=True)
def _transmission_grid(
    diag, t, energies, eps_l, t_l, tc_l, eps_r, t_r, tc_r
):  # pragma: no cover
    """Transmission at each grid energy (all strictly inside both bands)."""
    n = diag.shape[0]
    ne = energies.shape[0]
    out = np.empty(ne)
    sl = 1.0 if t_l > 0 else -1.0
    sr = 1.0 if t_r > 0 else -1.0
    for ie in range(ne):
        en = energies[ie]
        kl = math.acos((en - eps_l) / (2.0 * t_l))
        kr = math.acos((en - eps_r) / (2.0 * t_r))
        ph_l = complex(math.cos(kl), -sl * math.sin(kl))
        ph_r = complex(math.cos(kr), -sr * math.sin(kr))
        sig_l = (tc_l * tc_l / t_l) * ph_l
        sig_r = (tc_r * tc_r / t_r) * ph_r

        d = np.empty(n, np.complex128)
        dl = np.empty(n, np.complex128)
        du = np.empty(n, np.complex128)
        b = np.zeros(n, np.complex128)
        for i in range(n):
            d[i] = complex(en - diag[i], 0.0)
            dl[i] = complex(-t, 0.0)
            du[i] = complex(-t, 0.0)
        d[0] -= sig_l
        d[n - 1] -= sig_r
        b[0] = complex(0.0, 2.0 * sl * tc_l * math.sin(kl)) * ph_l

        if not _solve_tridiag(dl, d, du, b):
            out[ie] = np.nan
            continue
        amp = (tc_r / t_r) * ph_r * b[n - 1]
        v_l = 2.0 * abs(t_l) * math.sin(kl)
        v_r = 2.0 * abs(t_r) * math.sin(kr)
        out[ie] = (v_r / v_l) * (amp.real * amp.real + amp.imag * amp.imag)
    return out


def _check_inside_band(energy: float, lead: LeadParams, side: str) -> None:
    x = (energy - lead.eps) / (2.0 * lead.t_lead)
    if abs(x) >= 1.0:
        kind = "at the band edge of" if abs(x) == 1.0 else "outside the band of"
        raise BandEdgeError(f"energy {energy!r} is {kind} the {side} lead")


def _grid_transmission(diag, t, energies, left, right):
    out = _transmission_grid(
        diag, t, energies,
        left.eps, left.t_lead, left.t_couple,
        right.eps, right.t_lead, right.t_couple,
    )
    if np.isnan(out).any():
        bad = float(energies[int(np.flatnonzero(np.isnan(out))[0])])
        raise TransportError(f"scattering solve failed at energy {bad!r}")
    return out


def transmission_at(
    energy: float,
    chain: SymbolChain,
    params: TbParams,
    left: LeadParams,
    right: LeadParams,
) -> float:
    """Transmission coefficient at one energy strictly inside both bands."""
    _check_inside_band(energy, left, "left")
    _check_inside_band(energy, right, "right")
    h = build_hamiltonian(chain, params)
    out = _grid_transmission(
        h.diag, float(params.t), np.array([float(energy)]), left, right
    )
    return float(out[0])


def transmission_sweep(
    chain: SymbolChain,
    params: TbParams,
    left: LeadParams,
    right: LeadParams,
    n_points: int = DEFAULT_GRID_POINTS,
    energies: np.ndarray | None = None,
    peak_height: float = PEAK_HEIGHT,
    peak_prominence: float = PEAK_PROMINENCE,
) -> TransmissionCurve:
    """Transmission over an energy grid, with resonance peak detection.

    Without an explicit ``energies`` array the grid is ``n_points``
    uniform samples spanning the shared propagating window, pulled in
    from each band edge by ``1e-4``.  Explicit grid points at or outside
    a band edge are dropped with a warning.  A peak is a local maximum
    with height above ``peak_height`` whose prominence over the larger
    flanking minimum exceeds ``peak_prominence``.
    """
    if energies is None:
        lo, hi = propagating_window(left, right)
        lo += BAND_MARGIN
        hi -= BAND_MARGIN
        if hi <= lo:
            raise ValueError("propagating window is narrower than the band margin")
        if n_points < 2:
            raise ValueError("need at least two grid points")
        grid = np.linspace(lo, hi, int(n_points))
    else:
        grid = np.asarray(energies, dtype=np.float64)
        xl = (grid - left.eps) / (2.0 * left.t_lead)
        xr = (grid - right.eps) / (2.0 * right.t_lead)
        keep = (np.abs(xl) < 1.0) & (np.abs(xr) < 1.0)
        if not keep.all():
            warnings.warn(
                f"dropping {int((~keep).sum())} grid points at or outside a lead band",
                stacklevel=2,
            )
            grid = grid[keep]
        if grid.size == 0:
            raise ValueError("no usable grid points inside the lead bands")
    h = build_hamiltonian(chain, params)
    trans = _grid_transmission(h.diag, float(params.t), grid, left, right)
    peaks, _ = find_peaks(trans, height=peak_height, prominence=peak_prominence)
    return TransmissionCurve(grid, trans, peaks.astype(np.int64))


@njit(cache=True, nogil=True)
def _transfer_product(diag, t, tld, tdr, en):  # pragma: no cover
    """Rescaled product of the device transfer matrices.

    Maps (psi_1, psi_0) to (psi_{N+1}, psi_N).  Returns the four product
    entries and the accumulated log of the factored-out scale.
    """
    n = diag.shape[0]
    p00 = 1.0
    p01 = 0.0
    p10 = 0.0
    p11 = 1.0
    logscale = 0.0
    for i in range(n):
        if n == 1:
            a = (en - diag[0]) / tdr
            bb = -tld / tdr
        elif i == 0:
            a = (en - diag[0]) / t
            bb = -tld / t
        elif i == n - 1:
            a = (en - diag[i]) / tdr
            bb = -t / tdr
        else:
            a = (en - diag[i]) / t
            bb = -1.0
        q00 = a * p00 + bb * p10
        q01 = a * p01 + bb * p11
        p10 = p00
        p11 = p01
        p00 = q00
        p01 = q01
        mx = max(abs(p00), abs(p01), abs(p10), abs(p11))
        if mx > 1e100:
            p00 /= mx
            p01 /= mx
            p10 /= mx
            p11 /= mx
            logscale += math.log(mx)
    return p00, p01, p10, p11, logscale


def transfer_matrix_transmission(
    energy: float,
    chain: SymbolChain,
    params: TbParams,
    left: LeadParams,
    right: LeadParams,
) -> float:
    """Transmission via the 2x2 transfer-matrix product.

    Independent of :func:`transmission_at`: propagates the real transfer
    matrices through the device and matches travelling waves in the
    leads.  The running product is rescaled to postpone overflow; a
    computation that still degenerates raises :class:`TransportError`.
    """
    _check_inside_band(energy, left, "left")
    _check_inside_band(energy, right, "right")
    h = build_hamiltonian(chain, params)
    en = float(energy)
    p00, p01, p10, p11, logscale = _transfer_product(
        h.diag, float(params.t), left.t_couple, right.t_couple, en
    )
    if not all(map(math.isfinite, (p00, p01, p10, p11, logscale))):
        raise TransportError(
            f"transfer-matrix product overflowed at energy {energy!r}"
        )
    kl = lead_wavenumber(en, left).real
    kr = lead_wavenumber(en, right).real
    ql = -(1.0 if left.t_lead > 0 else -1.0) * kl
    qr = -(1.0 if right.t_lead > 0 else -1.0) * kr

    # wave bases: left (a, b) -> (psi_1, psi_0), right (tau, s) -> (psi_{N+1}, psi_N)
    rl = left.t_lead / left.t_couple
    rr = right.t_lead / right.t_couple
    l01 = rl * cmath.exp(-1j * ql)
    r10 = rr * cmath.exp(-1j * qr)
    r11 = rr * cmath.exp(1j * qr)
    det_r = r11 - r10

    # W22 = [R^-1 P L]_{22} up to the factored scale; the incoming-wave
    # column of L never enters because detW = v_L/v_R is known exactly
    m0 = p00 * l01 + p01 * 1.0
    m1 = p10 * l01 + p11 * 1.0
    w22 = (-r10 * m0 + 1.0 * m1) / det_r
    mag = abs(w22)
    if mag == 0.0 or not math.isfinite(mag):
        raise TransportError(
            f"transfer-matrix matching degenerated at energy {energy!r}"
        )
    v_l = 2.0 * abs(left.t_lead) * math.sin(kl)
    v_r = 2.0 * abs(right.t_lead) * math.sin(kr)
    log_t = math.log(v_l / v_r) - 2.0 * (logscale + math.log(mag))
    if log_t > 700.0:
        raise TransportError(
            f"transfer-matrix matching degenerated at energy {energy!r}"
        )
    return math.exp(log_t)
