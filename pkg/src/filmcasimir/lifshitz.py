"""Zero-temperature force between two identical anisotropic films.

Everything is evaluated on the imaginary frequency axis, omega = i xi, where
the permittivities are real and >= 1 and every square root is real:

    F = -hbar / (2 pi^2) int_0^inf dxi int_0^inf k dk  gamma
            [Q_TM^2 / (1 - Q_TM^2) + Q_TE^2 / (1 - Q_TE^2)]

with Q the finite-slab reflection amplitude times exp(-gamma ell).  Negative
values are attractive.  Lengths are internal (cm); forces are dyn/cm^2 unless
a ``_pa`` name says otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import units
from .dielectric import (
    TransitionTable,
    build_transition_table,
    eps_zz_imag,
)
from .errors import ConvergenceError, InvalidArgumentError
from .quadrature import IntegrationResult, IntegrationSettings, integrate_2d_semi_infinite
from .quantum_well import FilmSpec, QuantizedWell, solve_effective_width
from .units import C, HBAR

__all__ = [
    "Geometry",
    "FilmResponse",
    "ForceResult",
    "MIN_SEPARATION_NM",
    "OPTICAL_THICKNESS",
    "wave_factors",
    "reflection_amplitudes",
    "slab_amplitude",
    "mode_integrand",
    "integrate_force",
    "force",
    "casimir_ideal",
    "compare",
]

MIN_SEPARATION_NM = 0.1
OPTICAL_THICKNESS = ("D", "d")


@dataclass(frozen=True)
class Geometry:
    """Slab thickness entering the exp(-2 gamma D) factors and the gap ``ell`` (cm)."""

    D_optical: float
    ell: float

    def __post_init__(self):
        if not (math.isfinite(self.D_optical) and self.D_optical > 0):
            raise InvalidArgumentError(f"slab thickness must be positive, got {self.D_optical!r}")
        if not (math.isfinite(self.ell) and self.ell > 0):
            raise InvalidArgumentError(f"separation must be positive, got {self.ell!r}")
        if self.ell < units.to_internal_length(MIN_SEPARATION_NM):
            raise InvalidArgumentError(
                f"separation below {MIN_SEPARATION_NM} nm is outside the continuum model"
            )

    @classmethod
    def from_nm(cls, D_nm: float, ell_nm: float) -> "Geometry":
        return cls(units.to_internal_length(D_nm), units.to_internal_length(ell_nm))


@dataclass(frozen=True)
class FilmResponse:
    """Permittivities of one film as a function of xi.

    ``kind`` is ``"plasma"`` (isotropic, eps = 1 + omega_p^2 / xi^2) or
    ``"quantized"`` (lateral plasma term plus the sub-band oscillators of
    ``table`` in the normal direction).
    """

    kind: str
    omega_p_sq: float
    table: Optional[TransitionTable] = None

    @classmethod
    def plasma(cls, omega_p: float) -> "FilmResponse":
        if not omega_p >= 0:
            raise InvalidArgumentError("omega_p must be >= 0")
        return cls("plasma", float(omega_p) ** 2)

    @classmethod
    def quantized(cls, table: TransitionTable) -> "FilmResponse":
        return cls("quantized", table.omega_p_sq, table)

    def __call__(self, xi: float) -> tuple[float, float]:
        exx = 1.0 + self.omega_p_sq / xi**2
        if self.kind == "plasma":
            return exx, exx
        return exx, eps_zz_imag(xi, self.table)


@dataclass(frozen=True)
class ForceResult:
    """F_Q, F_P and F_CAS in dyn/cm^2 with the derived ratios.

    ``quadrature_Q`` and ``quadrature_P`` hold the integration diagnostics.
    """

    F_Q: float
    F_P: float
    F_CAS: float
    eta_Q: float
    eta_P: float
    delta: float
    quadrature_Q: IntegrationResult
    quadrature_P: IntegrationResult
    well: QuantizedWell

    @property
    def F_Q_pa(self) -> float:
        return units.force_to_pascal(self.F_Q)

    @property
    def F_P_pa(self) -> float:
        return units.force_to_pascal(self.F_P)

    @property
    def F_CAS_pa(self) -> float:
        return units.force_to_pascal(self.F_CAS)

    @property
    def converged(self) -> bool:
        return self.quadrature_Q.converged and self.quadrature_P.converged


def wave_factors(k, xi, eps_xx, eps_zz):
    """Decay constants (gamma, gamma_TE, gamma_TM) at omega = i xi."""
    q2 = (xi / C) ** 2
    k2 = np.square(k)
    gamma = np.sqrt(k2 + q2)
    gamma_te = np.sqrt(k2 + eps_xx * q2)
    gamma_tm = np.sqrt((k2 / eps_zz + q2) * eps_xx)
    return gamma, gamma_te, gamma_tm


def reflection_amplitudes(gamma, gamma_te, gamma_tm, eps_xx):
    """Single-interface amplitudes (rho_TM, rho_TE)."""
    ge = gamma * eps_xx
    rho_tm = (gamma_tm - ge) / (gamma_tm + ge)
    rho_te = (gamma_te - gamma) / (gamma_te + gamma)
    return rho_tm, rho_te


def slab_amplitude(rho, gamma_slab, D_optical, gamma, ell):
    """Finite-slab amplitude rho (1 - e^{-2 g D}) / (1 - rho^2 e^{-2 g D}) times e^{-gamma ell}."""
    e2 = np.exp(-2.0 * gamma_slab * D_optical)
    return rho * (-np.expm1(-2.0 * gamma_slab * D_optical)) / (1.0 - rho**2 * e2) * np.exp(-gamma * ell)


def mode_integrand(k, xi, eps_xx, eps_zz, geom: Geometry):
    """k gamma [Q_TM^2/(1-Q_TM^2) + Q_TE^2/(1-Q_TE^2)] for an array of k at one xi."""
    gamma, gamma_te, gamma_tm = wave_factors(k, xi, eps_xx, eps_zz)
    rho_tm, rho_te = reflection_amplitudes(gamma, gamma_te, gamma_tm, eps_xx)
    q_tm = slab_amplitude(rho_tm, gamma_tm, geom.D_optical, gamma, geom.ell)
    q_te = slab_amplitude(rho_te, gamma_te, geom.D_optical, gamma, geom.ell)
    q_tm2 = q_tm * q_tm
    q_te2 = q_te * q_te
    if np.any(q_tm2 >= 1.0) or np.any(q_te2 >= 1.0):
        raise FloatingPointError("|Q| >= 1: mode sum does not converge")
    return k * gamma * (q_tm2 / (1.0 - q_tm2) + q_te2 / (1.0 - q_te2))


def integrate_force(
    response: FilmResponse,
    geom: Geometry,
    settings: IntegrationSettings | None = None,
) -> IntegrationResult:
    """Quadrature of the force integral; value and error in dyn/cm^2."""
    settings = settings or IntegrationSettings()
    cache = {}

    def f(k, xi):
        eps = cache.get(xi)
        if eps is None:
            cache.clear()
            eps = cache[xi] = response(xi)
        return mode_integrand(k, xi, eps[0], eps[1], geom)

    scales = (1.0 / (2.0 * geom.ell), C / (2.0 * geom.ell))
    r = integrate_2d_semi_infinite(f, scales, settings)
    pref = -HBAR / (2.0 * math.pi**2)
    return IntegrationResult(pref * r.value, abs(pref) * r.error_estimate, r.evaluations, r.converged)


def force(
    response: FilmResponse,
    geom: Geometry,
    settings: IntegrationSettings | None = None,
) -> float:
    """Force per unit area in dyn/cm^2 (negative is attractive).

    Raises
    ------
    ConvergenceError
        If the quadrature budget ran out; ``diagnostics`` holds the partial
        :class:`IntegrationResult`.
    """
    r = integrate_force(response, geom, settings)
    if not r.converged:
        raise ConvergenceError("force quadrature did not converge", r)
    return r.value


def casimir_ideal(ell: float) -> float:
    """-hbar c pi^2 / (240 ell^4) in dyn/cm^2, ``ell`` in cm."""
    if not (math.isfinite(ell) and ell > 0):
        raise InvalidArgumentError(f"separation must be positive, got {ell!r}")
    return -HBAR * C * math.pi**2 / (240.0 * ell**4)


def compare(
    spec: FilmSpec,
    ell_nm: float,
    settings: IntegrationSettings | None = None,
    *,
    convention: str = "sqrt",
    optical_thickness: str = "D",
    rel_tail_tol: float = 1e-9,
    well: QuantizedWell | None = None,
    require_convergence: bool = True,
) -> ForceResult:
    """Quantized-film force against the plasma model and ideal mirrors.

    F_Q uses the dielectric tensor of the solved well, F_P the isotropic
    plasma model at the bulk plasma frequency; both use the same gap and,
    by default, the ion thickness D as slab thickness (``optical_thickness="d"``
    switches F_Q to the effective width).
    """
    if optical_thickness not in OPTICAL_THICKNESS:
        raise InvalidArgumentError(f"optical_thickness must be one of {OPTICAL_THICKNESS}")
    settings = settings or IntegrationSettings()
    well = well or solve_effective_width(spec)
    table = build_transition_table(well, rel_tail_tol, convention=convention)
    ell = units.to_internal_length(ell_nm)
    D_q = spec.D if optical_thickness == "D" else well.d
    r_q = integrate_force(FilmResponse.quantized(table), Geometry(D_q, ell), settings)
    r_p = integrate_force(FilmResponse.plasma(spec.omega_p), Geometry(spec.D, ell), settings)
    if require_convergence:
        for name, r in (("F_Q", r_q), ("F_P", r_p)):
            if not r.converged:
                raise ConvergenceError(f"{name} quadrature did not converge", r)
    f_cas = casimir_ideal(ell)
    return ForceResult(
        F_Q=r_q.value,
        F_P=r_p.value,
        F_CAS=f_cas,
        eta_Q=r_q.value / f_cas,
        eta_P=r_p.value / f_cas,
        delta=(r_p.value - r_q.value) / r_p.value,
        quadrature_Q=r_q,
        quadrature_P=r_p,
        well=well,
    )
