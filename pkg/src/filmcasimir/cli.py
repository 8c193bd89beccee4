"""Command-line front end.

    filmcasimir {well|epsilon|force|figure} [flags]

Exit codes: 0 success, 2 invalid arguments, 3 numerical non-convergence.
Global flags may also come from an INI file given with ``--config``: keys
in ``[filmcasimir]`` apply to every subcommand, keys in a section named
after the subcommand apply to it alone.  Command-line values win.
"""

from __future__ import annotations

import argparse
import configparser
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from .dielectric import (
    CONVENTIONS,
    build_transition_table,
    effective_plasma_frequency_sq,
    eps_xx_imag,
    eps_zz_imag,
)
from .errors import FilmError, InvalidArgumentError
from .lifshitz import OPTICAL_THICKNESS, compare
from .quadrature import IntegrationSettings
from .quantum_well import FilmSpec, solve_effective_width
from .sweep import PRESETS, SweepTable, figure_preset, run_sweep, write_table
from .units import energy_to_ev

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NONCONVERGENCE = 3
THREADS_ENV = "FILMCASIMIR_THREADS"

_GLOBAL_DEFAULTS = {
    "rel_tol": 1e-6,
    "threads": None,
    "omega_p_convention": "sqrt",
    "optical_thickness": "D",
    "out": None,
    "format": None,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _positive(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not (math.isfinite(v) and v > 0):
        raise argparse.ArgumentTypeError(f"must be finite and positive: {text!r}")
    return v


def _count(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {text!r}")
    return v


def _global_flags() -> argparse.ArgumentParser:
    # SUPPRESS keeps a flag given before the subcommand from being reset by
    # the subparser's copy; real defaults are filled in after config merge.
    g = argparse.ArgumentParser(add_help=False)
    s = argparse.SUPPRESS
    g.add_argument("--rel-tol", type=_positive, default=s, help="quadrature relative tolerance (1e-6)")
    g.add_argument("--threads", type=_count, default=s, help=f"sweep workers (env {THREADS_ENV} caps the default)")
    g.add_argument("--config", default=s, help="INI file supplying flag values")
    g.add_argument("--omega-p-convention", choices=CONVENTIONS, default=s)
    g.add_argument("--optical-thickness", choices=OPTICAL_THICKNESS, default=s)
    g.add_argument("--out", default=s, help="output file (default standard output)")
    g.add_argument("--format", choices=("csv", "json"), default=s)
    return g


def _film_flags(p):
    p.add_argument("--thickness-nm", type=_positive, required=True, help="ion slab thickness D in nm")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--omega-p", type=_positive, help="bulk plasma frequency in rad/s")
    src.add_argument("--density-cm3", type=_positive, help="bulk electron density in cm^-3")


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags()
    parser = _Parser(prog="filmcasimir", description=__doc__.split("\n")[0], parents=[common])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("well", parents=[common], help="solve the effective width and sub-bands")
    _film_flags(p)

    p = sub.add_parser("epsilon", parents=[common], help="tabulate eps_xx and eps_zz at imaginary frequency")
    _film_flags(p)
    p.add_argument("--xi-min", type=_positive, required=True, help="rad/s")
    p.add_argument("--xi-max", type=_positive, required=True, help="rad/s")
    p.add_argument("--points", type=_count, default=50)
    p.add_argument("--log", action="store_true", help="log-spaced grid")

    p = sub.add_parser("force", parents=[common], help="quantized vs plasma vs ideal force at one point")
    _film_flags(p)
    p.add_argument("--ell-nm", type=_positive, required=True, help="gap between the films in nm")

    p = sub.add_parser("figure", parents=[common], help="run a figure preset")
    p.add_argument("--id", required=True, help=f"one of {', '.join(PRESETS)}")
    p.add_argument("--out-dir", default=".")
    return parser


def _config_tokens(path, command):
    cp = configparser.ConfigParser()
    try:
        with open(path, encoding="utf-8") as fh:
            cp.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise InvalidArgumentError(f"cannot read config {path}: {exc}")
    values = {}
    for section in ("filmcasimir", command):
        if cp.has_section(section):
            values.update({k.replace("_", "-"): v for k, v in cp.items(section)})
    tokens = []
    for key, val in values.items():
        if key == "config":
            continue
        if val.lower() in ("true", "yes", "on"):
            tokens.append("--" + key)
        elif val.lower() not in ("false", "no", "off"):
            tokens.append(f"--{key}={val}")
    return tokens


def _split_at_command(argv):
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _COMMANDS:
            return argv[:i], argv[i + 1 :]
        if tok.startswith("--") and "=" not in tok:
            i += 1
        i += 1
    return argv, []


def _parse(parser, argv):
    """Parse ``argv``; config values go first so command-line flags override them."""
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    before, after = _split_at_command(list(argv))
    if known.config is None or len(before) == len(argv):
        return parser.parse_args(argv)
    command = argv[len(before)]
    tokens = _config_tokens(known.config, command)
    # every global flag is also accepted after the subcommand, where the
    # last occurrence wins
    return parser.parse_args([command] + tokens + after + before)


def _resolve(args):
    for key, val in _GLOBAL_DEFAULTS.items():
        if not hasattr(args, key):
            setattr(args, key, val)
    if args.threads is None:
        threads = os.cpu_count() or 1
        cap = os.environ.get(THREADS_ENV)
        if cap:
            try:
                cap_n = int(cap)
            except ValueError:
                raise InvalidArgumentError(f"{THREADS_ENV} must be an integer, got {cap!r}")
            if cap_n < 1:
                raise InvalidArgumentError(f"{THREADS_ENV} must be >= 1")
            threads = min(threads, cap_n)
        args.threads = threads
    if not args.rel_tol < 1:
        raise InvalidArgumentError("--rel-tol must be below 1")
    args.settings = IntegrationSettings(rel_tol=args.rel_tol)


def _film(args) -> FilmSpec:
    if args.omega_p is not None:
        return FilmSpec.from_plasma_frequency(args.thickness_nm, args.omega_p)
    return FilmSpec.from_density(args.thickness_nm, args.density_cm3)


def _emit(text, args):
    if args.out is None:
        sys.stdout.write(text)
        return
    path = Path(args.out)
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise InvalidArgumentError(f"cannot write {path}: {exc.strerror}")


def cmd_well(args) -> int:
    well = solve_effective_width(_film(args))
    occupied = well.energies[: well.m_0]
    report = {
        "D_nm": well.spec.D_nm,
        "d_nm": well.d_nm,
        "m_F": well.m_F,
        "m_0": well.m_0,
        "E_F_eV": energy_to_ev(well.spec.E_F),
        "subband_energies_eV": [energy_to_ev(float(e)) for e in occupied],
        "N_over_N0": well.density_ratio,
        "omega_p_eff": math.sqrt(effective_plasma_frequency_sq(well, args.omega_p_convention)),
        "omega_p_convention": args.omega_p_convention,
    }
    _emit(json.dumps(report, indent=2) + "\n", args)
    return EXIT_OK


def cmd_epsilon(args) -> int:
    if not args.xi_min < args.xi_max:
        raise InvalidArgumentError("--xi-min must be below --xi-max")
    if args.points < 2:
        raise InvalidArgumentError("--points must be >= 2")
    well = solve_effective_width(_film(args))
    table = build_transition_table(well, convention=args.omega_p_convention)
    grid = np.geomspace if args.log else np.linspace
    xi = grid(args.xi_min, args.xi_max, args.points)
    exx = eps_xx_imag(xi, math.sqrt(table.omega_p_sq))
    ezz = eps_zz_imag(xi, table)
    out = SweepTable(
        columns=["xi_rad_s", "eps_xx", "eps_zz"],
        rows=[[float(a), float(b), float(c)] for a, b, c in zip(xi, exx, ezz)],
        ok=[True] * len(xi),
        messages=[None] * len(xi),
        metadata={
            "D_nm": well.spec.D_nm,
            "N0_cm3": well.spec.N0,
            "omega_p_convention": args.omega_p_convention,
            "m_F": well.m_F,
            "n_trunc": table.n_trunc,
        },
    )
    fmt = args.format or "csv"
    _emit(out.to_csv() if fmt == "csv" else out.to_json(), args)
    return EXIT_OK


def cmd_force(args) -> int:
    r = compare(
        _film(args),
        args.ell_nm,
        args.settings,
        convention=args.omega_p_convention,
        optical_thickness=args.optical_thickness,
        require_convergence=False,
    )
    report = {
        "F_Q_Pa": r.F_Q_pa,
        "F_P_Pa": r.F_P_pa,
        "F_CAS_Pa": r.F_CAS_pa,
        "eta_Q": r.eta_Q,
        "eta_P": r.eta_P,
        "delta": r.delta,
        "converged": r.converged,
        "m_F": r.well.m_F,
        "d_nm": r.well.d_nm,
    }
    _emit(json.dumps(report, indent=2) + "\n", args)
    if not r.converged:
        print("force quadrature did not converge", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    return EXIT_OK


def cmd_figure(args) -> int:
    specs = figure_preset(
        args.id,
        args.settings,
        convention=args.omega_p_convention,
        optical_thickness=args.optical_thickness,
    )
    out_dir = Path(args.out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise InvalidArgumentError(f"cannot create {out_dir}: {exc.strerror}")
    meta = {"id": args.id, "curves": []}
    any_ok = False
    for k, spec in enumerate(specs, start=1):
        table = run_sweep(spec, args.threads)
        name = f"{args.id}_curve{k}.csv"
        try:
            write_table(table, "csv", out_dir / name)
        except OSError as exc:
            raise InvalidArgumentError(str(exc))
        failed = [i for i, ok in enumerate(table.ok) if not ok]
        for i in failed:
            print(f"{name}: row {i}: {table.messages[i]}", file=sys.stderr)
        any_ok |= len(failed) < len(table)
        meta["curves"].append(
            {"file": name, **table.metadata, "failed_rows": failed}
        )
    meta_path = out_dir / f"{args.id}_meta.json"
    try:
        meta_path.write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")
    except OSError as exc:
        raise InvalidArgumentError(f"cannot write {meta_path}: {exc.strerror}")
    return EXIT_OK if any_ok else EXIT_NONCONVERGENCE


_COMMANDS = {"well": cmd_well, "epsilon": cmd_epsilon, "force": cmd_force, "figure": cmd_figure}


def main(argv=None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    try:
        args = _parse(parser, argv)
        _resolve(args)
        return _COMMANDS[args.command](args)
    except InvalidArgumentError as exc:
        print(f"filmcasimir: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (FilmError, ArithmeticError) as exc:
        print(f"filmcasimir: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
