"""Physical constants and unit conversions.

Internally everything is Gaussian CGS: lengths in cm, times in s, masses in g,
charges in statcoulomb, energies in erg, and force per unit area in dyn/cm^2.
Angular frequencies are rad/s both internally and at the API boundary.  The
public boundary uses nanometres for lengths and pascals for pressures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import scipy
from scipy import constants as _sc

from .errors import InvalidArgumentError

__all__ = [
    "PhysicalConstants",
    "CONSTANTS",
    "CONSTANTS_VERSION",
    "HBAR",
    "C",
    "E_CHARGE",
    "M_E",
    "A0",
    "to_internal_length",
    "from_internal_length",
    "force_to_pascal",
    "pascal_to_force",
    "energy_to_ev",
    "ev_to_energy",
]


@dataclass(frozen=True)
class PhysicalConstants:
    """The constant set, in Gaussian CGS units."""

    hbar: float  # erg s
    c: float  # cm / s
    e: float  # statC
    m_e: float  # g
    a0: float  # cm

    def as_dict(self) -> dict:
        return {"hbar": self.hbar, "c": self.c, "e": self.e, "m_e": self.m_e, "a0": self.a0}


_hbar = _sc.hbar * 1e7
_c = _sc.c * 1e2
# 1 C = 10 c[m/s] statC
_e = _sc.e * _sc.c * 10.0
_m = _sc.m_e * 1e3

# Bohr radius derived from the set itself so that a0 = hbar^2 / (m e^2) exactly.
CONSTANTS = PhysicalConstants(hbar=_hbar, c=_c, e=_e, m_e=_m, a0=_hbar**2 / (_m * _e**2))
CONSTANTS_VERSION = f"scipy-{scipy.__version__}-codata/gaussian-cgs"

HBAR = CONSTANTS.hbar
C = CONSTANTS.c
E_CHARGE = CONSTANTS.e
M_E = CONSTANTS.m_e
A0 = CONSTANTS.a0

_CM_PER_NM = 1e-7
_PA_PER_BARYE = 0.1
_ERG_PER_EV = _sc.e * 1e7


def _check_finite(x, name):
    x = float(x)
    if not math.isfinite(x):
        raise InvalidArgumentError(f"{name} must be finite, got {x!r}")
    return x


def to_internal_length(x_nm: float) -> float:
    """Convert a length in nanometres to centimetres."""
    x = _check_finite(x_nm, "length")
    if x < 0:
        raise InvalidArgumentError(f"length must be non-negative, got {x!r} nm")
    return x * _CM_PER_NM


def from_internal_length(x_cm: float) -> float:
    """Convert a length in centimetres to nanometres."""
    return _check_finite(x_cm, "length") / _CM_PER_NM


def force_to_pascal(f: float) -> float:
    """Convert a force per unit area from dyn/cm^2 to Pa."""
    return _check_finite(f, "force per area") * _PA_PER_BARYE


def pascal_to_force(p: float) -> float:
    return _check_finite(p, "pressure") / _PA_PER_BARYE


def energy_to_ev(e_erg: float) -> float:
    return e_erg / _ERG_PER_EV


def ev_to_energy(e_ev: float) -> float:
    return e_ev * _ERG_PER_EV
