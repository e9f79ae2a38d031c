"""
Tests for the report_table module.

The tests are run using pytest. To run the tests, use the following command from the
root directory of the project:

    pytest heraldsim/scheme_utils/tests/test_report_table.py

"""

import json
import os

import numpy as np
import pytest

from heraldsim.exceptions import InvalidParameterException
from heraldsim.merit_utils.wigner import WignerGrid
from heraldsim.scheme_utils import report_table


def test_reports_to_frame(reports):
    """The table has the sweep columns in row order."""
    frame = report_table.reports_to_frame(reports)
    assert frame.columns.tolist() == ["eta1", "eta2", "p", "F", "wln", "d_used", "seconds"]
    assert frame["d_used"].tolist() == [4, 5, 6, 7]
    assert frame["seconds"].tolist() == [0.25, 0.5, 0.75, 1.0]
    assert report_table.reports_to_frame(reports, timing=False)["seconds"].eq(0.0).all()


def test_write_csv(reports, tmp_path):
    """CSV output has a header, 12 significant digits and bare newlines."""
    path = str(tmp_path / "sweep.csv")
    text = report_table.write_table(report_table.reports_to_frame(reports), path)
    lines = text.split("\n")
    assert lines[0] == "eta1,eta2,p,F,wln,d_used,seconds"
    assert lines[1] == "0.5,0.5,0.123456789012,0.5,0.1,4,0.25"
    assert len(lines) == 6 and lines[-1] == ""
    with open(path, "rb") as f:
        assert f.read() == text.encode()


def test_write_json(reports):
    """JSON output is one record per report."""
    text = report_table.write_table(report_table.reports_to_frame(reports), None, "json")
    records = json.loads(text)
    assert len(records) == 4
    assert records[3] == {
        "eta1": 1.0, "eta2": 1.0, "p": 0.4, "F": 0.8, "wln": 0.4, "d_used": 7, "seconds": 1.0
    }


def test_write_table_errors(reports, tmp_path):
    """Unknown formats and unwritable paths are parameter errors."""
    frame = report_table.reports_to_frame(reports)
    with pytest.raises(InvalidParameterException, match="format"):
        report_table.write_table(frame, None, "xlsx")
    with pytest.raises(InvalidParameterException, match="cannot write"):
        report_table.write_table(frame, str(tmp_path / "missing" / "sweep.csv"))


def test_wigner_to_frame():
    """Every grid point becomes one (x, p, W) row."""
    values = np.arange(16.0).reshape(4, 4)
    grid = WignerGrid(2.0, 4, values)
    frame = report_table.wigner_to_frame(grid)
    assert frame.shape == (16, 3)
    assert frame.iloc[1].tolist() == [grid.axis[0], grid.axis[1], 1.0]
    assert frame["W"].sum() == values.sum()


def test_heatmap_svg(reports):
    """One rectangle per grid point with eta labels on both axes."""
    svg = report_table.heatmap_svg(report_table.reports_to_frame(reports), "F")
    assert svg.startswith("<svg")
    assert svg.rstrip().endswith("</svg>")
    assert svg.count("<rect") == 4
    assert ">eta1</text>" in svg and ">eta2</text>" in svg
    # extreme values take the ends of the color scale
    assert "#440154" in svg and "#fde725" in svg
    with pytest.raises(InvalidParameterException):
        report_table.heatmap_svg(report_table.reports_to_frame(reports), "G")


def test_write_svg_heatmaps(reports, tmp_path):
    """A heatmap is written for p, F and wln."""
    prefix = str(tmp_path / "sweep")
    paths = report_table.write_svg_heatmaps(report_table.reports_to_frame(reports), prefix)
    assert [os.path.basename(path) for path in paths] == ["sweep_p.svg", "sweep_F.svg", "sweep_wln.svg"]
    assert all(os.path.exists(path) for path in paths)
