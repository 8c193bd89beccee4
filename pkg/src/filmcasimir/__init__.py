"""Vacuum-fluctuation forces between thin metallic films with quantized electrons."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    BandEdgeError,
    ConvergenceError,
    FilmError,
    InvalidArgumentError,
    NoBoundStateError,
    PrecisionError,
)
from .units import CONSTANTS, CONSTANTS_VERSION, PhysicalConstants  # noqa: E402
from .quantum_well import (  # noqa: E402
    FilmSpec,
    QuantizedWell,
    g_factor,
    solve_effective_width,
    well_from_reduced_width,
)
from .quadrature import IntegrationResult, IntegrationSettings  # noqa: E402
from .dielectric import (  # noqa: E402
    DielectricSample,
    TransitionTable,
    build_transition_table,
    eps_xx_imag,
    eps_zz_imag,
    eps_zz_static,
)
from .lifshitz import ForceResult, Geometry, FilmResponse, casimir_ideal, compare, force  # noqa: E402
from .sweep import SweepSpec, SweepTable, figure_preset, run_sweep, write_table  # noqa: E402

__all__ = [
    "__version__",
    "BandEdgeError",
    "ConvergenceError",
    "FilmError",
    "InvalidArgumentError",
    "NoBoundStateError",
    "PrecisionError",
    "CONSTANTS",
    "CONSTANTS_VERSION",
    "PhysicalConstants",
    "FilmSpec",
    "QuantizedWell",
    "g_factor",
    "solve_effective_width",
    "well_from_reduced_width",
    "IntegrationResult",
    "IntegrationSettings",
    "DielectricSample",
    "TransitionTable",
    "build_transition_table",
    "eps_xx_imag",
    "eps_zz_imag",
    "eps_zz_static",
    "ForceResult",
    "Geometry",
    "FilmResponse",
    "casimir_ideal",
    "compare",
    "force",
    "SweepSpec",
    "SweepTable",
    "figure_preset",
    "run_sweep",
    "write_table",
]
