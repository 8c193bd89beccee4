"""Particle-in-a-box film: effective width, sub-bands and matrix elements.

Electrons fill an infinite square well of width ``d`` that is wider than the
ion slab ``D``; ``d`` is fixed by charge neutrality, ``N d = N0 D``, with the
Fermi energy held at its bulk value.  All lengths are internal (cm).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import units
from .errors import BandEdgeError, ConvergenceError, InvalidArgumentError, NoBoundStateError
from .units import HBAR, M_E, E_CHARGE

__all__ = [
    "FilmSpec",
    "QuantizedWell",
    "g_factor",
    "solve_effective_width",
    "well_from_reduced_width",
    "subband_energy",
    "momentum_matrix_element_sq",
    "lateral_momentum_matrix_element",
    "quantized_density",
    "trk_sum",
]

# Unoccupied sub-bands kept beyond m_0 in QuantizedWell.energies.
SUBBAND_MARGIN = 16


@dataclass(frozen=True)
class FilmSpec:
    """Ion slab of thickness ``D`` (cm) and positive background density ``N0`` (cm^-3).

    Use :meth:`from_plasma_frequency` or :meth:`from_density` to build one
    from nanometre thicknesses.
    """

    D: float
    N0: float

    def __post_init__(self):
        for name in ("D", "N0"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise InvalidArgumentError(f"{name} must be finite and positive, got {v!r}")

    @classmethod
    def from_plasma_frequency(cls, D_nm: float, omega_p: float) -> "FilmSpec":
        """Film with bulk plasma frequency ``omega_p`` (rad/s), Omega_p^2 = 4 pi e^2 N0 / m."""
        if not (math.isfinite(omega_p) and omega_p > 0):
            raise InvalidArgumentError(f"omega_p must be finite and positive, got {omega_p!r}")
        return cls(units.to_internal_length(D_nm), omega_p**2 * M_E / (4 * math.pi * E_CHARGE**2))

    @classmethod
    def from_density(cls, D_nm: float, N0: float) -> "FilmSpec":
        return cls(units.to_internal_length(D_nm), float(N0))

    @property
    def D_nm(self) -> float:
        return units.from_internal_length(self.D)

    @property
    def k_F(self) -> float:
        return (3 * math.pi**2 * self.N0) ** (1.0 / 3.0)

    @property
    def E_F(self) -> float:
        return HBAR**2 * self.k_F**2 / (2 * M_E)

    @property
    def omega_p(self) -> float:
        """Bulk (free electron) plasma frequency in rad/s."""
        return math.sqrt(4 * math.pi * E_CHARGE**2 * self.N0 / M_E)


@dataclass(frozen=True)
class QuantizedWell:
    """Solved confinement state of a film.

    ``energies[i]`` is the bottom of sub-band ``i + 1`` and ``areal_density[i]``
    its occupied areal density (spin included).  ``N`` is the quantized volume
    density and ``omega_p`` the matching plasma frequency sqrt(4 pi e^2 N / m).
    """

    spec: FilmSpec
    d: float
    m_F: float
    m_0: int
    energies: np.ndarray = field(repr=False)
    areal_density: np.ndarray = field(repr=False)
    N: float
    omega_p: float
    root_count: int = 1

    @property
    def d_nm(self) -> float:
        return units.from_internal_length(self.d)

    @property
    def density_ratio(self) -> float:
        return self.N / self.spec.N0


def g_factor(m_F: float) -> float:
    """Ratio N/N0 of quantized to bulk density at reduced width ``m_F = k_F d / pi``.

    >>> g_factor(2.0)
    0.5625
    """
    m_F = float(m_F)
    if not math.isfinite(m_F):
        raise InvalidArgumentError(f"m_F must be finite, got {m_F!r}")
    if m_F < 1.0:
        raise BandEdgeError(f"m_F = {m_F} < 1: no occupied sub-band")
    m0 = math.floor(m_F)
    return 1.5 * m0 / m_F * (1.0 - (m0 + 1) * (2 * m0 + 1) / (6.0 * m_F**2))


def _check_index(n, name):
    if int(n) != n or n < 1:
        raise InvalidArgumentError(f"{name} must be a positive integer, got {n!r}")
    return int(n)


def _check_width(d):
    if not (math.isfinite(d) and d > 0):
        raise InvalidArgumentError(f"well width must be finite and positive, got {d!r}")
    return float(d)


def subband_energy(n, d: float):
    """Bottom of sub-band ``n`` in a well of width ``d``: hbar^2 pi^2 n^2 / (2 m d^2).

    ``n`` may be an integer array.
    """
    d = _check_width(d)
    n_arr = np.asarray(n)
    if np.any(n_arr < 1) or np.any(np.asarray(n_arr, dtype=float) != np.floor(n_arr)):
        raise InvalidArgumentError(f"sub-band index must be >= 1, got {n!r}")
    nf = n_arr.astype(float)
    e = HBAR**2 * math.pi**2 * nf**2 / (2 * M_E * d**2)
    return float(e) if np.ndim(e) == 0 else e


def momentum_matrix_element_sq(n, n_prime, d: float):
    """|<n|p_z|n'>|^2 between box states; zero unless ``n + n'`` is odd.

    Closed form 16 hbar^2 n^2 n'^2 / (d^2 (n^2 - n'^2)^2).  Accepts integer
    arrays (broadcast together).
    """
    d = _check_width(d)
    n = np.asarray(n)
    npr = np.asarray(n_prime)
    if np.any(n < 1) or np.any(npr < 1):
        raise InvalidArgumentError("sub-band indices must be >= 1")
    nf = n.astype(float)
    pf = npr.astype(float)
    odd = ((n + npr) % 2) == 1
    with np.errstate(divide="ignore", invalid="ignore"):
        val = 16 * HBAR**2 * nf**2 * pf**2 / (d**2 * (nf**2 - pf**2) ** 2)
    out = np.where(odd, val, 0.0)
    return float(out) if out.ndim == 0 else out


def lateral_momentum_matrix_element(n: int, n_prime: int, k_x: float, d: float) -> float:
    """<k,n|p_x|k,n'> for equal in-plane wavevector.

    p_x acts only on the plane wave, so the result is hbar k_x times the
    overlap of the two standing waves, which vanishes for n != n'.
    Matrix elements between different in-plane wavevectors vanish by
    plane-wave orthogonality.
    """
    n = _check_index(n, "n")
    n_prime = _check_index(n_prime, "n_prime")
    _check_width(d)
    return HBAR * k_x if n == n_prime else 0.0


def trk_sum(n: int, d: float, n_max: int) -> float:
    """Thomas-Reiche-Kuhn sum for sub-band ``n`` truncated at ``n' <= n_max``.

    sum_{n'} 2 |p_{n n'}|^2 / (m (E_{n'} - E_n)); the untruncated value is 1.
    """
    n = _check_index(n, "n")
    n_max = _check_index(n_max, "n_max")
    npr = np.arange(1, n_max + 1)
    npr = npr[((npr + n) % 2) == 1]
    c2 = momentum_matrix_element_sq(n, npr, d)
    de = subband_energy(npr, d) - subband_energy(n, d)
    return math.fsum(2 * c2 / (M_E * de))


def quantized_density(well: QuantizedWell, E_F: float) -> float:
    """Volume density (1/d) sum_n (m / pi hbar^2)(E_F - E_n) over occupied sub-bands."""
    d = well.d
    e1 = subband_energy(1, d)
    if E_F <= e1:
        raise BandEdgeError("Fermi energy at or below the first sub-band")
    m0 = int(math.floor(math.sqrt(E_F / e1)))
    # touching sub-band counts as empty
    if subband_energy(m0, d) >= E_F:
        m0 -= 1
    n = np.arange(1, m0 + 1)
    return float(np.sum(M_E / (math.pi * HBAR**2) * (E_F - subband_energy(n, d))) / d)


def _reduced_state(spec: FilmSpec, d: float, root_count: int = 1) -> QuantizedWell:
    k_F = spec.k_F
    m_F = k_F * d / math.pi
    m0 = math.floor(m_F)
    if m0 == m_F:
        # touching sub-band counts as empty
        m0 -= 1
    if m0 < 1:
        raise NoBoundStateError(f"m_F = {m_F}: no occupied sub-band")
    n = np.arange(1, m0 + SUBBAND_MARGIN + 1)
    energies = subband_energy(n, d)
    E_F = spec.E_F
    nu = np.where(n <= m0, M_E / (math.pi * HBAR**2) * (E_F - energies), 0.0)
    nu = np.maximum(nu, 0.0)
    N = spec.N0 * g_factor(m_F)
    omega_p = math.sqrt(4 * math.pi * E_CHARGE**2 * N / M_E)
    energies.setflags(write=False)
    nu.setflags(write=False)
    return QuantizedWell(spec, d, m_F, int(m0), energies, nu, N, omega_p, root_count)


def _bisect(h, a, b, xtol, max_iter=200):
    fa = h(a)
    for _ in range(max_iter):
        mid = 0.5 * (a + b)
        if b - a <= xtol or mid in (a, b):
            return mid
        fm = h(mid)
        if fm == 0.0:
            return mid
        if (fm < 0) == (fa < 0):
            a, fa = mid, fm
        else:
            b = mid
    raise ConvergenceError("bisection did not converge", {"a": a, "b": b})


def solve_effective_width(spec: FilmSpec, *, max_intervals: int = 1_000_000) -> QuantizedWell:
    """Find the well width d with d G(k_F d / pi) = D.

    The residual is scanned over the intervals m_F in (n, n + 1) where G is
    smooth and bisected inside the first interval that brackets a root.
    Every bracketing interval is counted; the smallest root is returned and
    the count is kept as ``root_count``.
    """
    D = spec.D
    unit = math.pi / spec.k_F

    def h(d):
        return d * g_factor(d / unit) - D

    # d G(m_F) = unit * m_F G(m_F) grows with m_F, so the root lies near
    # D / unit + 1 in reduced units; scan a window around that.
    guess = D / unit
    n_lo = 1
    n_hi = min(max_intervals, int(guess + 2) + 2)
    roots = []
    for n in range(n_lo, n_hi + 1):
        a, b = n * unit, (n + 1) * unit
        ha, hb = h(a), h(b)
        if ha == 0.0 and n > 1:
            roots.append(a)
        elif ha < 0.0 < hb or (ha < 0.0 and hb == 0.0):
            roots.append(_bisect(h, a, b, xtol=1e-15 * b))
    if not roots:
        # h(unit) = -D < 0, so an empty scan means the window was too short
        raise ConvergenceError(f"no root of d G(m_F) = D found up to m_F = {n_hi + 1}")
    return _reduced_state(spec, roots[0], len(roots))


def well_from_reduced_width(omega_p: float, m_F: float) -> QuantizedWell:
    """Well at a prescribed reduced width m_F = k_F d / pi and bulk plasma frequency.

    The matching ion thickness D = d G(m_F) follows directly, no root search.
    """
    probe = FilmSpec.from_plasma_frequency(1.0, omega_p)
    d = m_F * math.pi / probe.k_F
    D = d * g_factor(m_F)
    if D <= 0:
        raise NoBoundStateError(f"m_F = {m_F} gives zero ion thickness")
    return _reduced_state(FilmSpec(D, probe.N0), d)
