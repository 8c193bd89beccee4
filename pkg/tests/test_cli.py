import argparse
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from filmcasimir import cli
from filmcasimir.quadrature import IntegrationSettings
from filmcasimir.quantum_well import FilmSpec, g_factor


def run(argv, capsys):
    rc = cli.main(argv)
    out, err = capsys.readouterr()
    return rc, out, err


def test_well_report(capsys):
    rc, out, _ = run(["well", "--thickness-nm", "100", "--omega-p", "1e16"], capsys)
    assert rc == 0
    r = json.loads(out)
    assert r["N_over_N0"] == pytest.approx(g_factor(r["m_F"]), rel=1e-10)
    spec = FilmSpec.from_plasma_frequency(100.0, 1e16)
    shift_nm = 3 * math.pi / (4 * spec.k_F) * 1e7
    assert r["d_nm"] - 100.0 == pytest.approx(shift_nm, rel=0.02)
    assert len(r["subband_energies_eV"]) == r["m_0"] == math.floor(r["m_F"])
    assert r["subband_energies_eV"][-1] < r["E_F_eV"]
    assert r["omega_p_convention"] == "sqrt"


def test_well_from_density(capsys):
    rc, out, _ = run(["well", "--thickness-nm", "5", "--density-cm3", "8.47e22"], capsys)
    assert rc == 0
    assert json.loads(out)["m_F"] > 1


def test_epsilon_table(capsys):
    wp = 1e15
    rc, out, _ = run(
        ["epsilon", "--thickness-nm", "5", "--omega-p", str(wp),
         "--xi-min", str(1e-6 * wp), "--xi-max", str(100 * wp), "--points", "40", "--log"],
        capsys,
    )
    assert rc == 0
    lines = out.splitlines()
    assert lines[0] == "xi_rad_s,eps_xx,eps_zz"
    data = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
    assert data.shape == (40, 3)
    assert np.all(data[:, 2] <= data[:, 1])
    assert abs(data[-1, 2] - 1) < 1e-3
    rc, out, _ = run(["well", "--thickness-nm", "5", "--omega-p", str(wp)], capsys)
    from filmcasimir.dielectric import eps_zz_static
    from filmcasimir.quantum_well import solve_effective_width

    static = eps_zz_static(solve_effective_width(FilmSpec.from_plasma_frequency(5.0, wp)))
    assert data[0, 2] == pytest.approx(static, rel=1e-5)


def test_epsilon_json(capsys, tmp_path):
    path = tmp_path / "e.json"
    rc, _, _ = run(
        ["epsilon", "--thickness-nm", "5", "--omega-p", "1e15", "--xi-min", "1e13",
         "--xi-max", "1e16", "--points", "5", "--format", "json", "--out", str(path)],
        capsys,
    )
    assert rc == 0
    data = json.loads(path.read_text())
    assert len(data["rows"]) == 5
    assert data["metadata"]["omega_p_convention"] == "sqrt"


def test_force_report(capsys):
    rc, out, _ = run(["force", "--thickness-nm", "5", "--omega-p", "1e15", "--ell-nm", "50"], capsys)
    assert rc == 0
    r = json.loads(out)
    assert r["converged"] is True
    assert 0 < r["delta"] < 1
    assert r["delta"] == pytest.approx(1 - r["eta_Q"] / r["eta_P"], rel=1e-12)
    assert r["eta_Q"] == pytest.approx(r["F_Q_Pa"] / r["F_CAS_Pa"], rel=1e-12)


def test_force_ideal_value(capsys):
    rc, out, _ = run(["force", "--thickness-nm", "50", "--omega-p", "1e16", "--ell-nm", "1000"], capsys)
    assert rc == 0
    assert json.loads(out)["F_CAS_Pa"] == pytest.approx(-1.30e-3, rel=5e-3)


def test_figure_writes_tables_and_is_reproducible(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    assert cli.main(["figure", "--id", "fig1", "--out-dir", str(a), "--threads", "1"]) == 0
    assert cli.main(["figure", "--id", "fig1", "--out-dir", str(b), "--threads", "2"]) == 0
    for name in ("fig1_curve1.csv", "fig1_meta.json"):
        assert (a / name).read_bytes() == (b / name).read_bytes()
    meta = json.loads((a / "fig1_meta.json").read_text())
    assert meta["curves"][0]["file"] == "fig1_curve1.csv"
    assert meta["curves"][0]["failed_rows"] == []
    assert "constants" in meta["curves"][0]


@pytest.mark.slow
def test_figure_fig5_files(tmp_path):
    assert cli.main(["figure", "--id", "fig5", "--out-dir", str(tmp_path), "--threads", "1"]) == 0
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == ["fig5_curve1.csv", "fig5_curve2.csv", "fig5_curve3.csv", "fig5_meta.json"]


@pytest.mark.parametrize(
    "argv",
    [
        ["figure", "--id", "fig9"],
        ["well", "--thickness-nm", "5"],
        ["well", "--thickness-nm", "-5", "--omega-p", "1e15"],
        ["well", "--thickness-nm", "5", "--omega-p", "1e15", "--density-cm3", "1e22"],
        ["force", "--thickness-nm", "5", "--omega-p", "1e15", "--ell-nm", "0.01"],
        ["epsilon", "--thickness-nm", "5", "--omega-p", "1e15", "--xi-min", "2", "--xi-max", "1"],
        ["force", "--thickness-nm", "5", "--omega-p", "1e15", "--ell-nm", "10", "--rel-tol", "2"],
        ["frobnicate"],
    ],
)
def test_invalid_arguments_exit_2(argv, capsys):
    with_exit = None
    try:
        with_exit = cli.main(argv)
    except SystemExit as exc:
        with_exit = exc.code
    assert with_exit == 2
    assert capsys.readouterr().err


def test_non_convergence_exits_3(capsys, monkeypatch):
    # a two-level subdivision cap cannot meet the tolerance
    shallow = lambda rel_tol: IntegrationSettings(rel_tol=rel_tol, max_levels=2)  # noqa: E731
    monkeypatch.setattr(cli, "IntegrationSettings", shallow)
    rc, out, err = run(
        ["force", "--thickness-nm", "5", "--omega-p", "1e15", "--ell-nm", "50", "--rel-tol", "1e-10"],
        capsys,
    )
    assert rc == 3
    assert "converge" in err
    assert json.loads(out)["converged"] is False


def test_config_file_and_precedence(tmp_path, capsys):
    cfg = tmp_path / "c.ini"
    cfg.write_text("[filmcasimir]\nomega_p_convention = linear\n[force]\nell_nm = 1000\n")
    base = ["--config", str(cfg)]
    rc, out, _ = run(base + ["well", "--thickness-nm", "5", "--omega-p", "1e15"], capsys)
    assert json.loads(out)["omega_p_convention"] == "linear"
    rc, out, _ = run(
        base + ["well", "--thickness-nm", "5", "--omega-p", "1e15", "--omega-p-convention", "sqrt"], capsys
    )
    assert json.loads(out)["omega_p_convention"] == "sqrt"
    rc, out, _ = run(base + ["force", "--thickness-nm", "50", "--omega-p", "1e16"], capsys)
    assert rc == 0
    assert json.loads(out)["F_CAS_Pa"] == pytest.approx(-1.30e-3, rel=5e-3)
    rc, out, _ = run(base + ["force", "--thickness-nm", "50", "--omega-p", "1e16", "--ell-nm", "100"], capsys)
    assert json.loads(out)["F_CAS_Pa"] == pytest.approx(-13.0, rel=5e-3)


def test_unreadable_config_exits_2(tmp_path, capsys):
    rc, _, err = run(["--config", str(tmp_path / "none.ini"), "well", "--thickness-nm", "5", "--omega-p", "1e15"], capsys)
    assert rc == 2
    assert "config" in err


def _ns(**kw):
    return argparse.Namespace(**kw)


def test_thread_default_respects_environment(monkeypatch):
    monkeypatch.setenv(cli.THREADS_ENV, "1")
    args = _ns()
    cli._resolve(args)
    assert args.threads == 1
    args = _ns(threads=4)
    cli._resolve(args)
    assert args.threads == 4
    monkeypatch.setenv(cli.THREADS_ENV, "zero")
    with pytest.raises(cli.InvalidArgumentError):
        cli._resolve(_ns())


def test_console_entry_point_exit_codes():
    ok = subprocess.run(
        [sys.executable, "-m", "filmcasimir", "well", "--thickness-nm", "5", "--omega-p", "1e15"],
        capture_output=True, text=True,
    )
    assert ok.returncode == 0
    assert json.loads(ok.stdout)["m_F"] > 1
    bad = subprocess.run([sys.executable, "-m", "filmcasimir", "well"], capture_output=True, text=True)
    assert bad.returncode == 2
    assert "usage" in bad.stderr
