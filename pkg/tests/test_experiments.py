import math

import pytest

from handoff_lab.analytic import false_handoff_probability, handoff_failure_probability
from handoff_lab.errors import InvalidParameterError
from handoff_lab.experiments import Axis, SweepSpec, SweepTable, run_sweep
from handoff_lab.geometry import CellGeometry
from handoff_lab.montecarlo import SimControls

SQRT3 = math.sqrt(3.0)


def rows_by_series(table: SweepTable):
    series = {}
    for row in table.rows:
        series.setdefault(row[0], []).append(row)
    return series


# ----------------------------------------------------------------------
# false handoff vs overlap
# ----------------------------------------------------------------------

def test_false_vs_overlap_trends():
    spec = SweepSpec(
        kind="false_vs_overlap",
        axis=Axis(0.0, 0.8 * SQRT3 * 500.0 / 2.0, 40),
        cell_radius_m=(500.0, 1000.0, 2000.0),
    )
    table = run_sweep(spec)
    assert table.columns == ("cell_radius_m", "overlap_m", "false_handoff_probability")
    assert len(table.rows) == 3 * 40
    series = rows_by_series(table)
    assert table.series_count() == 3
    for radius, rows in series.items():
        values = [r[2] for r in rows]
        assert values[0] == pytest.approx(7.0 / 12.0, rel=1e-12)
        assert all(b > a for a, b in zip(values, values[1:]))
    # at any shared overlap, the smaller cell sits above
    for i in range(40):
        s500 = series[500.0][i][2]
        s1000 = series[1000.0][i][2]
        s2000 = series[2000.0][i][2]
        if i > 0:
            assert s500 > s1000 > s2000


def test_false_vs_overlap_matches_direct_calls():
    spec = SweepSpec(
        kind="false_vs_overlap",
        axis=Axis(0.0, 400.0, 9),
        cell_radius_m=(800.0,),
    )
    for row in run_sweep(spec).rows:
        assert row[2] == false_handoff_probability(CellGeometry(row[0], row[1]))


# ----------------------------------------------------------------------
# failure vs speed
# ----------------------------------------------------------------------

def test_failure_vs_speed_trends():
    spec = SweepSpec(
        kind="failure_vs_speed",
        axis=Axis(10.0, 90.0, 33),
        cell_radius_m=(1000.0,),
        overlap_m=(0.0, 10.0, 50.0),
        delay_s=3.0,
    )
    table = run_sweep(spec)
    assert table.columns == ("overlap_m", "speed_mps", "failure_probability")
    series = rows_by_series(table)
    for _, rows in series.items():
        values = [r[2] for r in rows]
        assert all(b >= a for a, b in zip(values, values[1:]))
    # more overlap never hurts, at any speed
    for i in range(33):
        assert series[0.0][i][2] >= series[10.0][i][2] >= series[50.0][i][2]


def test_failure_vs_speed_matches_direct_calls():
    spec = SweepSpec(
        kind="failure_vs_speed",
        axis=Axis(5.0, 80.0, 16),
        cell_radius_m=(1000.0,),
        overlap_m=(25.0,),
        delay_s=4.0,
    )
    geom = CellGeometry(1000.0, 25.0)
    for row in run_sweep(spec).rows:
        assert row[2] == handoff_failure_probability(geom, row[1], 4.0)


# ----------------------------------------------------------------------
# failure vs delay
# ----------------------------------------------------------------------

def test_failure_vs_delay_trends():
    spec = SweepSpec(
        kind="failure_vs_delay",
        axis=Axis(0.0, 12.0, 49),
        cell_radius_m=(1000.0,),
        overlap_m=(0.0,),
        speed_mps=50.0,
    )
    table = run_sweep(spec)
    assert table.columns == ("overlap_m", "delay_s", "failure_probability")
    values = [r[2] for r in table.rows]
    delays = [r[1] for r in table.rows]
    assert all(b >= a for a, b in zip(values, values[1:]))
    for tau, pf in zip(delays, values):
        if tau < 2.679:
            assert pf == 0.0
        if tau >= 10.3528:
            assert pf == 1.0


def test_failure_vs_delay_matches_direct_calls():
    spec = SweepSpec(
        kind="failure_vs_delay",
        axis=Axis(1.0, 11.0, 21),
        cell_radius_m=(1000.0,),
        overlap_m=(0.0, 100.0),
        speed_mps=40.0,
    )
    for row in run_sweep(spec).rows:
        geom = CellGeometry(1000.0, row[0])
        assert row[2] == handoff_failure_probability(geom, 40.0, row[1])


# ----------------------------------------------------------------------
# sampling overlay
# ----------------------------------------------------------------------

def test_mc_overlay_columns_and_agreement():
    spec = SweepSpec(
        kind="failure_vs_speed",
        axis=Axis(20.0, 80.0, 7),
        cell_radius_m=(1000.0,),
        overlap_m=(0.0, 30.0),
        delay_s=3.0,
        mc=SimControls(samples=200_000, seed=2024),
    )
    table = run_sweep(spec)
    assert table.columns == (
        "overlap_m",
        "speed_mps",
        "failure_probability",
        "estimate",
        "std_err",
    )
    misses = 0
    for row in table.rows:
        _, _, exact, est, se = row
        if se == 0.0:
            assert est == exact
        elif abs(est - exact) > 3.0 * se:
            misses += 1
    assert misses <= 1


def test_mc_overlay_uses_distinct_substreams():
    spec = SweepSpec(
        kind="false_vs_overlap",
        axis=Axis(0.0, 0.0001, 3),
        cell_radius_m=(1000.0,),
        mc=SimControls(samples=5_000, seed=9),
    )
    estimates = [row[3] for row in run_sweep(spec).rows]
    # near-identical geometry at every point, so equal estimates would mean
    # the points shared a stream
    assert len(set(estimates)) > 1


def test_sweep_is_deterministic():
    spec = SweepSpec(
        kind="failure_vs_delay",
        axis=Axis(0.0, 12.0, 5),
        cell_radius_m=(1000.0,),
        overlap_m=(0.0,),
        speed_mps=50.0,
        mc=SimControls(samples=20_000, seed=7, batches=4),
    )
    assert run_sweep(spec).rows == run_sweep(spec).rows


# ----------------------------------------------------------------------
# validation and provenance
# ----------------------------------------------------------------------

def test_spec_validation():
    good_axis = Axis(1.0, 2.0, 3)
    with pytest.raises(InvalidParameterError):
        SweepSpec(kind="nope", axis=good_axis, cell_radius_m=(1.0,))
    with pytest.raises(InvalidParameterError):
        Axis(1.0, 2.0, 1)
    with pytest.raises(InvalidParameterError):
        Axis(2.0, 1.0, 5)
    with pytest.raises(InvalidParameterError):
        SweepSpec(kind="false_vs_overlap", axis=good_axis, cell_radius_m=())
    with pytest.raises(InvalidParameterError):
        SweepSpec(
            kind="failure_vs_speed",
            axis=good_axis,
            cell_radius_m=(1000.0, 2000.0),
            delay_s=3.0,
        )
    with pytest.raises(InvalidParameterError):
        SweepSpec(kind="failure_vs_speed", axis=good_axis, cell_radius_m=(1000.0,))
    with pytest.raises(InvalidParameterError):
        SweepSpec(kind="failure_vs_delay", axis=Axis(0.0, 5.0, 3), cell_radius_m=(1000.0,))


def test_invalid_grid_point_is_named():
    spec = SweepSpec(
        kind="false_vs_overlap",
        axis=Axis(0.0, SQRT3 * 500.0, 5),
        cell_radius_m=(500.0,),
    )
    with pytest.raises(InvalidParameterError) as err:
        run_sweep(spec)
    assert "cell_radius_m=500" in str(err.value)
    assert "overlap_m=" in str(err.value)


def test_provenance_records_the_spec():
    spec = SweepSpec(
        kind="failure_vs_speed",
        axis=Axis(10.0, 90.0, 5),
        cell_radius_m=(1000.0,),
        overlap_m=(0.0, 50.0),
        delay_s=3.0,
        mc=SimControls(samples=1_000, seed=3, batches=2),
    )
    prov = run_sweep(spec).provenance
    assert prov["kind"] == "failure_vs_speed"
    assert prov["axis"] == "10:90:5"
    assert prov["cell_radius_m"] == "1000"
    assert prov["overlap_m"] == "0,50"
    assert prov["delay_s"] == "3"
    assert prov["mc_samples"] == "1000"
    assert prov["mc_seed"] == "3"
    assert prov["mc_batches"] == "2"
    assert "version" in prov
