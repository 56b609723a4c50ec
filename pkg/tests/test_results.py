"""
Tests for result tables, their CSV encoding and the comparison report.
"""

import math

import pytest

from admm_lab import compare_report
from admm_lab.exceptions import MissingSourceError
from admm_lab.results import (
    CDF_COLUMNS,
    RESULT_COLUMNS,
    CdfRow,
    CdfTable,
    ResultRow,
    ResultTable,
    Source,
    Tolerances,
    db_gap,
)


def _table(empirical, predicted, ser_emp=None, ser_pred=None):
    rows = []
    for k, value in enumerate(empirical, start=1):
        rows.append(ResultRow(
            source=Source.EMPIRICAL, k=k, mse_mean=value, mse_stderr=0.001,
            ser_mean=None if ser_emp is None else ser_emp[k - 1], trials=100,
        ))
    for k, value in enumerate(predicted, start=1):
        rows.append(ResultRow(
            source=Source.PREDICTION, k=k, mse_mean=value,
            ser_mean=None if ser_pred is None else ser_pred[k - 1],
            alpha_star=math.sqrt(value + 0.001), beta_star=0.5, particles=100_000,
        ))
    return ResultTable(rows=rows)


# ---------------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------------

def test_result_header_is_fixed():
    header = ResultTable().to_csv().splitlines()[0]
    assert header == "source,k,mse_mean,mse_stderr,ser_mean,ser_stderr,alpha_star,beta_star,particles,trials"
    assert header.split(',') == RESULT_COLUMNS


def test_cdf_header_is_fixed():
    assert CdfTable().to_csv().splitlines()[0] == "k,grid_point,cdf_empirical,cdf_predicted"
    assert CDF_COLUMNS == ["k", "grid_point", "cdf_empirical", "cdf_predicted"]


def test_result_table_round_trip():
    table = _table([0.1 + 0.2, 1e-17, 0.25], [0.3, 2.5e-3, 1 / 3], ser_emp=[0.1, 0.0, 0.05], ser_pred=[0.1, 0.0, 0.04])
    table.rows.append(ResultRow(source=Source.OPTIMIZER, k=500, mse_mean=0.011, trials=100))
    table.rows.append(ResultRow(source=Source.FAILED, k=3))
    assert ResultTable.from_csv(table.to_csv()) == table


def test_missing_values_are_empty_cells():
    line = ResultTable(rows=[ResultRow(source=Source.FAILED, k=7)]).to_csv().splitlines()[1]
    assert line == "failed,7,,,,,,,,"


def test_result_table_file_io(tmp_path):
    table = _table([0.2, 0.1], [0.21, 0.09])
    path = table.write(tmp_path / "out" / "results.csv")
    assert ResultTable.read(path) == table
    assert not table.failed
    assert len(table.by_source("prediction")) == 2


def test_cdf_table_round_trip_and_ks(tmp_path):
    table = CdfTable(rows=[
        CdfRow(k=1, grid_point=-1.0, cdf_empirical=0.1, cdf_predicted=0.12),
        CdfRow(k=1, grid_point=0.0, cdf_empirical=0.5, cdf_predicted=0.43),
        CdfRow(k=4, grid_point=0.0, cdf_empirical=0.5, cdf_predicted=0.5),
    ])
    assert CdfTable.read(table.write(tmp_path / "cdf.csv")) == table
    assert table.iterations == [1, 4]
    assert table.ks_distance(1) == pytest.approx(0.07)
    assert table.ks_distance(4) == 0.0
    with pytest.raises(KeyError):
        table.ks_distance(2)


# ---------------------------------------------------------------------------
# Comparison
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("empirical, predicted, expected", [
    (1.0, 1.0, 0.0),
    (10.0, 1.0, 10.0),
    (0.1, 1.0, -10.0),
    (0.0, 0.0, 0.0),
    (1.0, 0.0, math.inf),
])
def test_db_gap(empirical, predicted, expected):
    assert db_gap(empirical, predicted) == pytest.approx(expected)


def test_identical_tables_pass_with_zero_gaps():
    report = compare_report(_table([0.3, 0.2, 0.1], [0.3, 0.2, 0.1], [0.1, 0.05, 0.02], [0.1, 0.05, 0.02]))
    assert report.passed
    assert report.worst_mse_gap_db == 0.0
    assert report.worst_ser_gap == 0.0
    assert all(g.mse_gap_rel == 0.0 for g in report.gaps)


def test_single_source_table_raises():
    table = ResultTable(rows=[r for r in _table([0.3], [0.3]).rows if r.source == Source.EMPIRICAL])
    with pytest.raises(MissingSourceError) as exc_info:
        compare_report(table)
    assert exc_info.value.source == "prediction"


def test_mse_gap_over_tolerance_fails():
    report = compare_report(_table([0.3, 0.5], [0.3, 0.2]), Tolerances(mse_db=1.0))
    assert not report.passed
    assert report.to_dict()['failing_iterations'] == [2]
    assert report.worst_mse_gap_db == pytest.approx(10 * math.log10(2.5))


def test_unchecked_mse_gap_is_reported_but_does_not_fail():
    report = compare_report(
        _table([0.3, 0.5], [0.3, 0.2], [0.10, 0.05], [0.10, 0.05]), Tolerances(mse_db=None)
    )
    assert report.passed
    assert report.worst_mse_gap_db == pytest.approx(10 * math.log10(2.5))
    assert any("not checked" in line for line in report.summary_lines())


def test_ser_gap_still_fails_when_mse_is_unchecked():
    report = compare_report(_table([0.3], [0.9], [0.10], [0.12]), Tolerances(mse_db=None))
    assert not report.passed


def test_ser_gap_over_tolerance_fails():
    report = compare_report(_table([0.3], [0.3], [0.10], [0.12]), Tolerances(ser_abs=0.01))
    assert not report.passed
    assert report.gaps[0].ser_gap == pytest.approx(0.02)


def test_from_k_skips_early_iterations():
    report = compare_report(_table([0.9, 0.2], [0.3, 0.2]), Tolerances(from_k=2))
    assert [g.k for g in report.gaps] == [2]
    assert report.passed


def test_ks_distances_enter_the_verdict():
    cdf = CdfTable(rows=[CdfRow(k=1, grid_point=0.0, cdf_empirical=0.5, cdf_predicted=0.6)])
    report = compare_report(_table([0.3], [0.3]), Tolerances(ks=0.05), cdf)
    assert report.ks_distances == {1: pytest.approx(0.1)}
    assert not report.passed
    lines = list(report.summary_lines())
    assert lines[0] == "verdict: FAIL"
    assert any(line.startswith("KS distance k=1") for line in lines)
