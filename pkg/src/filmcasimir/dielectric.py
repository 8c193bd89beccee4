"""Dielectric tensor of the quantized film on the imaginary frequency axis.

The lateral components are plain plasma responses.  The normal component
carries the inter-sub-band transitions; at T = 0 and equal in-plane
wavevector the double sum collapses to a set of Lorentz oscillators, one per
sub-band pair (n, n') with n occupied, n' > n and n + n' odd:

    eps_zz(i xi) = 1 + sum_j s_j / (nu_j^2 + xi^2)

with nu_j = (E_n' - E_n) / hbar and s_j = (8 pi e^2 / d m^2) dN C / dE.  The
oscillator strengths add up to omega_p^2 (f-sum rule), which is what keeps
the static limit finite.  The strength lost to truncation is restored by a
single lumped tail oscillator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, InvalidArgumentError, PrecisionError
from .quantum_well import (
    QuantizedWell,
    g_factor,
    momentum_matrix_element_sq,
    subband_energy,
)
from .units import A0, E_CHARGE, HBAR, M_E

__all__ = [
    "CONVENTIONS",
    "DielectricSample",
    "TransitionTable",
    "effective_plasma_frequency_sq",
    "eps_xx_imag",
    "build_transition_table",
    "eps_zz_imag",
    "eps_zz_static",
    "eps_zz_static_unfloored",
    "eps_zz_direct",
    "literal_term",
    "sample",
]

CONVENTIONS = ("sqrt", "linear")

# ratio between the lumped tail frequency and the truncation frequency that
# reproduces the n'^-4 / n'^-8 moment ratio of the omitted terms
_TAIL_FREQ_FACTOR = math.sqrt(7.0 / 3.0)


@dataclass(frozen=True)
class DielectricSample:
    xi: float
    eps_xx: float
    eps_zz: float


@dataclass(frozen=True)
class TransitionTable:
    """Inter-sub-band oscillators of one well.

    ``strength`` and ``freq`` hold s_j (rad^2/s^2) and nu_j (rad/s);
    ``sum_rule_residual`` is 1 - sum(s_j) / omega_p^2 before the tail
    oscillator is added.
    """

    d: float
    m_0: int
    n: np.ndarray = field(repr=False)
    n_prime: np.ndarray = field(repr=False)
    delta_e: np.ndarray = field(repr=False)
    delta_n: np.ndarray = field(repr=False)
    c2: np.ndarray = field(repr=False)
    strength: np.ndarray = field(repr=False)
    freq: np.ndarray = field(repr=False)
    tail_strength: float
    tail_freq: float
    omega_p_sq: float
    n_trunc: int
    sum_rule_residual: float
    convention: str = "sqrt"

    def __len__(self):
        return len(self.strength)

    def trk_residuals(self) -> np.ndarray:
        """1 - TRK sum for every occupied sub-band, from the stored pairs."""
        x = 2 * self.c2 / (M_E * self.delta_e)
        up = np.bincount(self.n, weights=x, minlength=self.m_0 + 1)
        down = np.bincount(self.n_prime, weights=x, minlength=self.m_0 + 1)
        return 1.0 - (up[1 : self.m_0 + 1] - down[1 : self.m_0 + 1])


def _check_convention(convention):
    if convention not in CONVENTIONS:
        raise InvalidArgumentError(f"omega_p convention must be one of {CONVENTIONS}, got {convention!r}")


def effective_plasma_frequency_sq(well: QuantizedWell, convention: str = "sqrt") -> float:
    """omega_p^2 of the quantized gas.

    ``"sqrt"`` gives 4 pi e^2 N / m = Omega_p^2 N/N0; ``"linear"`` gives
    (Omega_p N/N0)^2.
    """
    _check_convention(convention)
    ratio = well.N / well.spec.N0
    wp2 = well.spec.omega_p ** 2
    return wp2 * ratio if convention == "sqrt" else wp2 * ratio**2


def eps_xx_imag(xi, omega_p: float):
    """Lateral permittivity 1 + omega_p^2 / xi^2 at imaginary frequency ``xi``."""
    xi_a = np.asarray(xi, dtype=float)
    if np.any(~(xi_a > 0)) or np.any(~np.isfinite(xi_a)):
        raise InvalidArgumentError("xi must be finite and positive")
    if not omega_p >= 0:
        raise InvalidArgumentError("omega_p must be >= 0")
    out = 1.0 + omega_p**2 / xi_a**2
    return float(out) if out.ndim == 0 else out


def _areal_density(well, n):
    n = np.asarray(n)
    e = subband_energy(n, well.d)
    nu = M_E / (math.pi * HBAR**2) * (well.spec.E_F - e)
    return np.where(n <= well.m_0, np.maximum(nu, 0.0), 0.0)


def _pairs(well, n_trunc):
    m0 = well.m_0
    ns = []
    ps = []
    for n in range(1, m0 + 1):
        # n' = n + 1, n + 3, ... keeps n + n' odd
        p = np.arange(n + 1, n_trunc + 1, 2)
        ns.append(np.full(len(p), n))
        ps.append(p)
    return np.concatenate(ns), np.concatenate(ps)


def build_transition_table(
    well: QuantizedWell,
    rel_tail_tol: float = 1e-9,
    *,
    convention: str = "sqrt",
    max_oscillators: int = 20_000_000,
) -> TransitionTable:
    """Collect the sub-band transitions of ``well``.

    The cutoff n' <= n_trunc grows until the explicit oscillators carry all
    but ``rel_tail_tol`` of the f-sum omega_p^2; the omitted strength decays
    as n_trunc^-3, which sets the step.
    """
    _check_convention(convention)
    if not (0 < rel_tail_tol < 1):
        raise InvalidArgumentError("rel_tail_tol must lie in (0, 1)")
    d = well.d
    wp2 = effective_plasma_frequency_sq(well, "sqrt")
    pref = 8 * math.pi * E_CHARGE**2 / (d * M_E**2)
    e_n = subband_energy(np.arange(1, well.m_0 + 1), d)
    nu_occ = _areal_density(well, np.arange(1, well.m_0 + 1))
    n_trunc = max(4 * well.m_0 + 32, 64)
    while True:
        if well.m_0 * n_trunc / 2 > max_oscillators:
            raise ConvergenceError(
                "transition budget exhausted",
                {"n_trunc": n_trunc, "m_0": well.m_0, "rel_tail_tol": rel_tail_tol},
            )
        n, p = _pairs(well, n_trunc)
        de = subband_energy(p, d) - e_n[n - 1]
        dn = nu_occ[n - 1] - _areal_density(well, p)
        c2 = momentum_matrix_element_sq(n, p, d)
        s = pref * dn * c2 / de
        residual = 1.0 - float(np.sum(s)) / wp2
        if residual <= rel_tail_tol:
            break
        grow = (residual / rel_tail_tol) ** (1.0 / 3.0) * 1.1
        n_trunc = int(math.ceil(n_trunc * min(max(grow, 1.25), 64.0)))
    tail_freq = _TAIL_FREQ_FACTOR * (subband_energy(n_trunc, d) - e_n[0]) / HBAR
    tail_strength = max(residual, 0.0) * wp2
    scale = 1.0
    if convention == "linear":
        scale = effective_plasma_frequency_sq(well, "linear") / wp2
    arrays = [n, p, de, dn, c2, s * scale, de / HBAR]
    for a in arrays:
        a.setflags(write=False)
    return TransitionTable(
        d=d,
        m_0=well.m_0,
        n=arrays[0],
        n_prime=arrays[1],
        delta_e=arrays[2],
        delta_n=arrays[3],
        c2=arrays[4],
        strength=arrays[5],
        freq=arrays[6],
        tail_strength=tail_strength * scale,
        tail_freq=tail_freq,
        omega_p_sq=wp2 * scale,
        n_trunc=n_trunc,
        sum_rule_residual=residual,
        convention=convention,
    )


# cap on temporaries in eps_zz_imag, in array elements (~32 MB of float64)
_WORK_ELEMENTS = 4_000_000


def eps_zz_imag(xi, table: TransitionTable):
    """Normal permittivity at imaginary frequency ``xi`` (scalar or array)."""
    if not isinstance(table, TransitionTable):
        raise InvalidArgumentError("table must be a TransitionTable")
    xi_a = np.asarray(xi, dtype=float)
    if np.any(~(xi_a > 0)) or np.any(~np.isfinite(xi_a)):
        raise InvalidArgumentError("xi must be finite and positive")
    flat = xi_a.ravel()
    out = np.empty(flat.shape)
    nu2 = table.freq**2
    chunk = max(1, _WORK_ELEMENTS // max(len(table), 1))
    for i in range(0, len(flat), chunk):
        x2 = flat[i : i + chunk, None] ** 2
        out[i : i + chunk] = np.sum(table.strength / (nu2 + x2), axis=1)
    out += 1.0 + table.tail_strength / (table.tail_freq**2 + flat**2)
    out = out.reshape(xi_a.shape)
    return float(out) if out.ndim == 0 else out


def _static_sums(well):
    n = np.arange(1, well.m_0 + 1, dtype=float)
    return np.sum(1.0 / n**2), np.sum(1.0 / n**4)


def eps_zz_static(well: QuantizedWell, convention: str = "sqrt") -> float:
    """Static normal permittivity in closed form.

    1 + (d m_F^2 / 6 pi^2 a0) [15 (S4 - S2/m_F^2) + pi^2 (m_0/m_F^2 - S2)],
    S_k = sum_{n <= m_0} n^-k.  This is the exact zero-frequency value of
    the oscillator sum; it is continuous in m_F with kinks at the integers.
    """
    _check_convention(convention)
    m_F = well.m_F
    s2, s4 = _static_sums(well)
    bracket = 15.0 * (s4 - s2 / m_F**2) + math.pi**2 * (well.m_0 / m_F**2 - s2)
    chi = well.d * m_F**2 / (6 * math.pi**2 * A0) * bracket
    if convention == "linear":
        chi *= g_factor(m_F)
    return 1.0 + chi


def eps_zz_static_unfloored(well: QuantizedWell) -> float:
    """Static value with m_F standing in for m_0: bracket pi^2 (1 - m_F S2) / m_F.

    Differs from :func:`eps_zz_static` by (d / 6 a0)(m_F - m_0) and jumps at
    integer m_F; kept for comparison only.
    """
    m_F = well.m_F
    s2, s4 = _static_sums(well)
    bracket = 15.0 * (s4 - s2 / m_F**2) + math.pi**2 * (1.0 - m_F * s2) / m_F
    return 1.0 + well.d * m_F**2 / (6 * math.pi**2 * A0) * bracket


def literal_term(well: QuantizedWell, n: int, n_prime: int, xi: float) -> complex:
    """One ordered term (f_n - f_n') |p_nn'|^2 / (E_n - E_n' - hbar omega) at omega = i xi.

    Occupations enter as areal densities (the surface area cancels).
    """
    e = subband_energy(np.array([n, n_prime]), well.d)
    nu = _areal_density(well, np.array([n, n_prime]))
    c2 = momentum_matrix_element_sq(n, n_prime, well.d)
    return (nu[0] - nu[1]) * c2 / (e[0] - e[1] - 1j * HBAR * xi)


def eps_zz_direct(
    xi: float,
    well: QuantizedWell,
    n_trunc: int,
    *,
    convention: str = "sqrt",
    include_transitions: bool = True,
) -> float:
    """Literal ordered-pair evaluation of the normal permittivity.

    Brute-force reference for :func:`eps_zz_imag`.  The Drude term and the
    transition sum cancel as xi -> 0, so ``xi`` must stay above 1e-3 omega_p.
    """
    _check_convention(convention)
    wp2 = effective_plasma_frequency_sq(well, convention)
    if not xi >= 1e-3 * math.sqrt(wp2):
        raise PrecisionError(f"xi = {xi} is below 1e-3 omega_p; the literal form loses all precision")
    omega = 1j * xi
    eps = 1.0 - wp2 / omega**2
    if include_transitions:
        n, p = _pairs(well, n_trunc)
        e_n = subband_energy(n, well.d)
        e_p = subband_energy(p, well.d)
        nu_n = _areal_density(well, n)
        nu_p = _areal_density(well, p)
        c2 = momentum_matrix_element_sq(n, p, well.d)
        forward = (nu_n - nu_p) * c2 / (e_n - e_p - HBAR * omega)
        backward = (nu_p - nu_n) * c2 / (e_p - e_n - HBAR * omega)
        total = np.sum(forward) + np.sum(backward)
        pref = 4 * math.pi * E_CHARGE**2 / (well.d * M_E**2 * omega**2)
        if convention == "linear":
            pref *= g_factor(well.m_F)
        eps = eps - pref * total
    if abs(eps.imag) > 1e-8 * abs(eps.real):
        raise PrecisionError(f"literal sum left an imaginary part {eps.imag}")
    return float(eps.real)


def sample(xi: float, well: QuantizedWell, table: TransitionTable) -> DielectricSample:
    wp = math.sqrt(table.omega_p_sq)
    return DielectricSample(xi, eps_xx_imag(xi, wp), eps_zz_imag(xi, table))
