"""Parameter sweeps, figure presets and table output."""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .dielectric import CONVENTIONS, eps_zz_static
from .errors import FilmError, InvalidArgumentError
from .lifshitz import OPTICAL_THICKNESS, compare
from .quadrature import IntegrationSettings
from .quantum_well import FilmSpec, solve_effective_width, well_from_reduced_width
from .units import CONSTANTS, CONSTANTS_VERSION

__all__ = [
    "AXES",
    "OUTPUTS",
    "PRESETS",
    "SweepSpec",
    "SweepTable",
    "run_sweep",
    "figure_preset",
    "write_table",
    "read_csv",
    "run_figure",
    "sweep_metadata",
]

AXES = {
    "thickness_D": "D_nm",
    "plasma_frequency": "omega_p_rad_s",
    "separation": "ell_nm",
    "reduced_width": "d_kF_over_pi",
}
_AXIS_PARAM = {
    "thickness_D": "D_nm",
    "plasma_frequency": "omega_p",
    "separation": "ell_nm",
    "reduced_width": "m_F",
}
OUTPUTS = {
    "d": "d_nm",
    "m_F": "m_F",
    "N_ratio": "N_ratio",
    "eps_zz_0": "eps_zz_0",
    "F_Q": "F_Q_Pa",
    "F_P": "F_P_Pa",
    "F_CAS": "F_CAS_Pa",
    "eta_Q": "eta_Q",
    "eta_P": "eta_P",
    "delta": "delta",
}
_FORCE_OUTPUTS = {"F_Q", "F_P", "F_CAS", "eta_Q", "eta_P", "delta"}
_FIXED_KEYS = ("D_nm", "omega_p", "ell_nm")


@dataclass(frozen=True)
class SweepSpec:
    """One curve: a grid along ``axis`` with the other parameters held in ``fixed``.

    ``fixed`` takes ``D_nm``, ``omega_p`` (rad/s) and ``ell_nm``; the key
    matching the swept axis is ignored.  The ``reduced_width`` axis sweeps
    m_F = k_F d / pi directly at fixed ``omega_p``.
    """

    axis: str
    start: float
    stop: float
    points: int
    spacing: str = "linear"
    fixed: dict = field(default_factory=dict)
    outputs: tuple = ()
    settings: IntegrationSettings = field(default_factory=IntegrationSettings)
    convention: str = "sqrt"
    optical_thickness: str = "D"
    label: str = ""

    def __post_init__(self):
        if self.axis not in AXES:
            raise InvalidArgumentError(f"unknown sweep axis {self.axis!r}")
        if not (self.start < self.stop):
            raise InvalidArgumentError("sweep range needs start < stop")
        if self.points < 2:
            raise InvalidArgumentError("a sweep needs at least two points")
        if self.spacing not in ("linear", "log"):
            raise InvalidArgumentError(f"unknown spacing {self.spacing!r}")
        if self.spacing == "log" and self.start <= 0:
            raise InvalidArgumentError("log spacing needs a positive start")
        if self.convention not in CONVENTIONS:
            raise InvalidArgumentError(f"convention must be one of {CONVENTIONS}")
        if self.optical_thickness not in OPTICAL_THICKNESS:
            raise InvalidArgumentError(f"optical_thickness must be one of {OPTICAL_THICKNESS}")
        for key, val in self.fixed.items():
            if key not in _FIXED_KEYS:
                raise InvalidArgumentError(f"unknown fixed parameter {key!r}")
            if not (math.isfinite(val) and val > 0):
                raise InvalidArgumentError(f"fixed parameter {key} must be positive")
        unknown = set(self.outputs) - set(OUTPUTS)
        if unknown:
            raise InvalidArgumentError(f"unknown outputs {sorted(unknown)}")
        needed = set(_FIXED_KEYS) - {_AXIS_PARAM[self.axis]}
        if not _FORCE_OUTPUTS & set(self.outputs):
            needed.discard("ell_nm")
        if self.axis == "reduced_width":
            needed.discard("D_nm")
        missing = needed - set(self.fixed)
        if missing:
            raise InvalidArgumentError(f"missing fixed parameters {sorted(missing)}")

    def grid(self) -> np.ndarray:
        if self.spacing == "log":
            return np.geomspace(self.start, self.stop, self.points)
        return np.linspace(self.start, self.stop, self.points)

    @property
    def columns(self) -> list[str]:
        return [AXES[self.axis]] + [OUTPUTS[o] for o in self.outputs]

    def as_dict(self) -> dict:
        return {
            "axis": self.axis,
            "start": self.start,
            "stop": self.stop,
            "points": self.points,
            "spacing": self.spacing,
            "fixed": dict(sorted(self.fixed.items())),
            "outputs": list(self.outputs),
            "settings": self.settings.as_dict(),
            "convention": self.convention,
            "optical_thickness": self.optical_thickness,
            "label": self.label,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SweepSpec":
        d = dict(d)
        d["outputs"] = tuple(d.get("outputs", ()))
        d["settings"] = IntegrationSettings(**d.get("settings", {}))
        return cls(**d)


@dataclass
class SweepTable:
    """Tabular sweep result.

    ``rows[i]`` lines up with ``columns``; ``ok[i]`` is False when the point
    failed or its quadrature did not converge, with the reason in
    ``messages[i]``.
    """

    columns: list
    rows: list
    ok: list
    messages: list
    metadata: dict

    def __len__(self):
        return len(self.rows)

    def column(self, name: str) -> np.ndarray:
        i = self.columns.index(name)
        return np.array([r[i] for r in self.rows], dtype=float)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, delimiter=",", lineterminator="\n")
        has_outputs = len(self.columns) > 1
        w.writerow(self.columns if has_outputs else self.columns[:1])
        if has_outputs:
            for row in self.rows:
                w.writerow([_fmt(v) for v in row])
        return buf.getvalue()

    def to_json(self) -> str:
        rows = []
        for row, ok, msg in zip(self.rows, self.ok, self.messages):
            entry = {c: (None if not math.isfinite(v) else float(_fmt(v))) for c, v in zip(self.columns, row)}
            entry["ok"] = bool(ok)
            if msg:
                entry["error"] = msg
            rows.append(entry)
        return json.dumps({"metadata": self.metadata, "rows": rows}, indent=2, sort_keys=False) + "\n"


def _fmt(v: float) -> str:
    if not math.isfinite(v):
        return "nan"
    return f"{v:.8e}"


def _evaluate_point(args):
    spec, x = args
    params = dict(spec.fixed)
    params[_AXIS_PARAM[spec.axis]] = float(x)
    outs = spec.outputs
    values = dict.fromkeys(outs, math.nan)
    try:
        if spec.axis == "reduced_width":
            well = well_from_reduced_width(params["omega_p"], params["m_F"])
            film = well.spec
        else:
            film = FilmSpec.from_plasma_frequency(params["D_nm"], params["omega_p"])
            well = solve_effective_width(film)
        values.update(
            {
                "d": well.d_nm,
                "m_F": well.m_F,
                "N_ratio": well.density_ratio,
            }
        )
        if "eps_zz_0" in outs:
            values["eps_zz_0"] = eps_zz_static(well, spec.convention)
        ok, msg = True, None
        if _FORCE_OUTPUTS & set(outs):
            r = compare(
                film,
                params["ell_nm"],
                spec.settings,
                convention=spec.convention,
                optical_thickness=spec.optical_thickness,
                well=well,
                require_convergence=False,
            )
            values.update(
                {
                    "F_Q": r.F_Q_pa,
                    "F_P": r.F_P_pa,
                    "F_CAS": r.F_CAS_pa,
                    "eta_Q": r.eta_Q,
                    "eta_P": r.eta_P,
                    "delta": r.delta,
                }
            )
            if not r.converged:
                ok, msg = False, "quadrature did not converge"
        row = [float(x)] + [float(values[o]) for o in outs]
        return row, ok, msg
    except (FilmError, ArithmeticError) as exc:
        return [float(x)] + [math.nan] * len(outs), False, f"{type(exc).__name__}: {exc}"


def run_sweep(spec: SweepSpec, workers: int = 1) -> SweepTable:
    """Evaluate ``spec`` on its grid.

    Points are independent; with ``workers > 1`` they run in a process pool.
    Row order follows the grid, and the numbers do not depend on the worker
    count.  A failing point leaves NaNs and a False flag in its row.
    """
    if workers < 1:
        raise InvalidArgumentError("workers must be >= 1")
    tasks = [(spec, x) for x in spec.grid()]
    if workers == 1 or len(tasks) == 1:
        results = [_evaluate_point(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=min(workers, len(tasks))) as pool:
            results = list(pool.map(_evaluate_point, tasks))
    rows, ok, messages = zip(*results)
    return SweepTable(
        columns=spec.columns,
        rows=list(rows),
        ok=list(ok),
        messages=list(messages),
        metadata=sweep_metadata(spec),
    )


def sweep_metadata(spec: SweepSpec) -> dict:
    return {
        "spec": spec.as_dict(),
        "constants": CONSTANTS.as_dict(),
        "constants_version": CONSTANTS_VERSION,
        "package_version": __version__,
        "switches": {
            "omega_p_convention": spec.convention,
            "optical_thickness": spec.optical_thickness,
        },
    }


# The figures fix no numeric axis extents; these ranges
# cover the kinks, oscillations, plateau and local maximum the captions describe.
PRESETS = ("fig1", "fig3", "fig4", "fig5", "fig6")


def figure_preset(
    fig_id: str,
    settings: IntegrationSettings | None = None,
    *,
    convention: str = "sqrt",
    optical_thickness: str = "D",
) -> list[SweepSpec]:
    """Sweep specs reproducing one figure, one spec per curve.

    >>> [s.fixed["omega_p"] for s in figure_preset("fig3")]
    [100000000000000.0, 500000000000000.0, 100000000000000.0]
    """
    settings = settings or IntegrationSettings()
    common = dict(settings=settings, convention=convention, optical_thickness=optical_thickness)
    force_cols = ("d", "m_F", "F_Q", "F_P", "F_CAS", "eta_Q", "eta_P", "delta")
    if fig_id == "fig1":
        return [
            SweepSpec("reduced_width", 1.05, 12.0, 1000, "linear", {"omega_p": 1e16},
                      ("eps_zz_0", "N_ratio"), label="fig1", **common),
        ]
    if fig_id == "fig3":
        curves = [(1e14, 10.0), (5e14, 50.0), (1e14, 50.0)]
        return [
            SweepSpec("thickness_D", 0.5, 50.0, 100, "linear", {"omega_p": wp, "ell_nm": ell},
                      force_cols, label=f"fig3 curve{i + 1}", **common)
            for i, (wp, ell) in enumerate(curves)
        ]
    if fig_id == "fig4":
        curves = [(1.0, 10.0), (5.0, 10.0), (5.0, 50.0)]
        return [
            SweepSpec("plasma_frequency", 1e14, 1e16, 41, "log", {"D_nm": D, "ell_nm": ell},
                      force_cols, label=f"fig4 curve{i + 1}", **common)
            for i, (D, ell) in enumerate(curves)
        ]
    if fig_id == "fig5":
        curves = [(1e16, 5.0), (1e15, 1.0), (1e15, 5.0)]
        return [
            SweepSpec("separation", 10.0, 1e4, 31, "log", {"omega_p": wp, "D_nm": D},
                      ("eta_Q", "eta_P", "delta"), label=f"fig5 curve{i + 1}", **common)
            for i, (wp, D) in enumerate(curves)
        ]
    if fig_id == "fig6":
        return [
            SweepSpec("separation", 10.0, 1e4, 31, "log", {"omega_p": 1e15, "D_nm": 5.0},
                      ("delta", "eta_P", "eta_Q"), label="fig6", **common),
        ]
    raise InvalidArgumentError(f"unknown figure id {fig_id!r}; expected one of {PRESETS}")


def write_table(table: SweepTable, fmt: str, destination) -> None:
    """Write ``table`` as ``"csv"`` or ``"json"`` to ``destination`` (path or open text file)."""
    if fmt == "csv":
        text = table.to_csv()
    elif fmt == "json":
        text = table.to_json()
    else:
        raise InvalidArgumentError(f"unknown table format {fmt!r}")
    if hasattr(destination, "write"):
        destination.write(text)
        return
    path = Path(destination)
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write table: {exc.strerror}", str(path)) from exc


def read_csv(path) -> tuple[list, np.ndarray]:
    """Parse a table written by :func:`write_table`; returns (columns, values)."""
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    values = np.array([[float(v) for v in r] for r in body], dtype=float).reshape(len(body), len(header))
    return header, values


def run_figure(fig_id: str, workers: int = 1, **kwargs) -> list[SweepTable]:
    return [run_sweep(s, workers) for s in figure_preset(fig_id, **kwargs)]
