import json
import math

import numpy as np
import pytest

from filmcasimir.errors import InvalidArgumentError
from filmcasimir.lifshitz import compare
from filmcasimir.quantum_well import FilmSpec, g_factor
from filmcasimir.sweep import (
    PRESETS,
    SweepSpec,
    SweepTable,
    figure_preset,
    read_csv,
    run_sweep,
    write_table,
)

FORCE = ("F_Q", "F_P", "delta")


def _small(points=2, **kw):
    args = dict(axis="separation", start=10.0, stop=40.0, points=points,
                fixed={"D_nm": 3.0, "omega_p": 5e14}, outputs=FORCE)
    args.update(kw)
    return SweepSpec(**args)


@pytest.mark.parametrize(
    "kw",
    [
        {"axis": "temperature"},
        {"start": 50.0},
        {"points": 1},
        {"spacing": "cubic"},
        {"spacing": "log", "start": -1.0},
        {"convention": "other"},
        {"optical_thickness": "x"},
        {"fixed": {"D_nm": 3.0, "omega_p": 5e14, "T": 1.0}},
        {"fixed": {"D_nm": -3.0, "omega_p": 5e14}},
        {"fixed": {"D_nm": 3.0}},
        {"outputs": ("F_Z",)},
    ],
)
def test_spec_validation(kw):
    with pytest.raises(InvalidArgumentError):
        _small(**kw)


def test_separation_not_needed_without_force_outputs():
    s = SweepSpec("thickness_D", 1.0, 2.0, 3, fixed={"omega_p": 1e15}, outputs=("d", "m_F"))
    assert s.columns == ["D_nm", "d_nm", "m_F"]


def test_two_point_sweep_matches_direct_calls():
    spec = _small()
    table = run_sweep(spec)
    assert table.columns == ["ell_nm", "F_Q_Pa", "F_P_Pa", "delta"]
    film = FilmSpec.from_plasma_frequency(3.0, 5e14)
    for row, ell in zip(table.rows, (10.0, 40.0)):
        r = compare(film, ell)
        assert row == [ell, r.F_Q_pa, r.F_P_pa, r.delta]
    assert all(table.ok)


def test_worker_count_does_not_change_numbers():
    spec = _small(points=4)
    a = run_sweep(spec, workers=1)
    b = run_sweep(spec, workers=8)
    assert a.rows == b.rows
    assert a.to_csv() == b.to_csv()
    assert a.metadata == b.metadata


def test_failing_point_is_isolated():
    spec = _small(points=3, start=0.01, stop=20.0, spacing="linear")
    table = run_sweep(spec)
    assert table.ok == [False, True, True]
    assert all(math.isnan(v) for v in table.rows[0][1:])
    assert "InvalidArgumentError" in table.messages[0]
    assert all(math.isfinite(v) for v in table.rows[1])
    assert "nan" in table.to_csv().splitlines()[1]
    rows = json.loads(table.to_json())["rows"]
    assert rows[0]["ok"] is False and "error" in rows[0]
    assert rows[0]["F_Q_Pa"] is None


def test_non_converged_point_is_flagged():
    from filmcasimir.quadrature import IntegrationSettings

    spec = _small(settings=IntegrationSettings(rel_tol=1e-12, max_levels=2))
    table = run_sweep(spec)
    assert table.ok == [False, False]
    assert all(math.isfinite(v) for v in table.rows[0])


def test_csv_round_trip(tmp_path):
    table = run_sweep(_small(points=3))
    path = tmp_path / "t.csv"
    write_table(table, "csv", path)
    header, values = read_csv(path)
    assert header == table.columns
    np.testing.assert_allclose(values, np.array(table.rows), rtol=1e-8)


def test_json_round_trip(tmp_path):
    table = run_sweep(_small())
    path = tmp_path / "t.json"
    write_table(table, "json", path)
    data = json.loads(path.read_text())
    assert data["metadata"] == json.loads(json.dumps(table.metadata))
    for entry, row in zip(data["rows"], table.rows):
        got = [entry[c] for c in table.columns]
        np.testing.assert_allclose(got, row, rtol=1e-8)
    # the stored spec rebuilds an identical sweep
    again = run_sweep(SweepSpec.from_dict(data["metadata"]["spec"]))
    assert again.to_csv() == table.to_csv()


def test_write_to_file_object_and_bad_format(tmp_path):
    import io

    table = run_sweep(_small())
    buf = io.StringIO()
    write_table(table, "csv", buf)
    assert buf.getvalue() == table.to_csv()
    with pytest.raises(InvalidArgumentError):
        write_table(table, "xml", buf)
    with pytest.raises(OSError):
        write_table(table, "csv", tmp_path / "missing" / "t.csv")


def test_header_only_without_outputs():
    table = run_sweep(SweepSpec("thickness_D", 1.0, 2.0, 3, fixed={"omega_p": 1e15}))
    assert table.to_csv() == "D_nm\n"


def test_csv_format_is_fixed():
    table = SweepTable(["x", "y"], [[1.0, -2.5e-7]], [True], [None], {})
    assert table.to_csv() == "x,y\n1.00000000e+00,-2.50000000e-07\n"


def test_fig1_table(fig1_tables):
    (t,) = fig1_tables
    assert t.columns == ["d_kF_over_pi", "eps_zz_0", "N_ratio"]
    assert len(t) == 1000
    m = t.column("d_kF_over_pi")
    np.testing.assert_allclose(t.column("N_ratio"), [g_factor(x) for x in m], rtol=1e-12)
    assert np.all(t.column("eps_zz_0") >= 1)


def test_presets():
    assert PRESETS == ("fig1", "fig3", "fig4", "fig5", "fig6")
    counts = {p: len(figure_preset(p)) for p in PRESETS}
    assert counts == {"fig1": 1, "fig3": 3, "fig4": 3, "fig5": 3, "fig6": 1}
    fig5 = figure_preset("fig5")
    assert [(s.fixed["omega_p"], s.fixed["D_nm"]) for s in fig5] == [(1e16, 5.0), (1e15, 1.0), (1e15, 5.0)]
    assert all(s.spacing == "log" for s in fig5)
    fig3 = figure_preset("fig3", convention="linear", optical_thickness="d")
    assert {s.convention for s in fig3} == {"linear"}
    assert {s.optical_thickness for s in fig3} == {"d"}
    with pytest.raises(InvalidArgumentError):
        figure_preset("fig9")


def test_workers_must_be_positive():
    with pytest.raises(InvalidArgumentError):
        run_sweep(_small(), workers=0)
