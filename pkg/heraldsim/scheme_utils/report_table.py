"""Functions to convert merit reports and Wigner grids to tables and heatmaps."""

import logging
from typing import List, Optional, Sequence

import numpy as np
import pandas as pd

from heraldsim.exceptions import InvalidParameterException
from heraldsim.merit_utils.wigner import WignerGrid

from . import REPORT_COLUMNS
from .schemes import MeritReport

# low and high ends of the linear heatmap color scale
_LOW_RGB = np.array([68, 1, 84])
_HIGH_RGB = np.array([253, 231, 37])
_CELL = 24
_MARGIN = 70

HEATMAP_COLUMNS = ("p", "F", "wln")


def reports_to_frame(reports: Sequence[MeritReport], timing: bool = True) -> pd.DataFrame:
    """
    reports_to_frame converts merit reports to a table.

    Parameters
    ----------
    reports : Sequence[MeritReport]
        the reports, in row order
    timing : bool, optional
        keep the measured seconds; False writes zeros so that repeated runs
        give identical tables, by default True

    Returns
    -------
    pd.DataFrame
        columns eta1, eta2, p, F, wln, d_used, seconds
    """
    frame = pd.DataFrame([report.to_dict() for report in reports], columns=REPORT_COLUMNS)
    frame["d_used"] = frame["d_used"].astype(int)
    if not timing:
        frame["seconds"] = 0.0
    return frame


def write_table(frame: pd.DataFrame, file_path: Optional[str], output_format: str = "csv") -> str:
    """
    write_table writes a table as CSV or JSON records.

    CSV uses 12 significant digits and '\\n' line endings.

    Parameters
    ----------
    frame : pd.DataFrame
        the table
    file_path : Optional[str]
        destination, None to only return the text
    output_format : str, optional
        ``csv`` or ``json``, by default "csv"

    Returns
    -------
    str
        the written text

    Raises
    ------
    InvalidParameterException
        if the format is unknown or the file cannot be written
    """
    if output_format == "csv":
        text = frame.to_csv(index=False, float_format="%.12g", lineterminator="\n")
    elif output_format == "json":
        text = frame.to_json(orient="records", double_precision=12, indent=2) + "\n"
    else:
        raise InvalidParameterException(f"unknown output format {output_format!r}")
    if file_path is not None:
        try:
            with open(file_path, "w", newline="") as f:
                f.write(text)
        except OSError as e:
            raise InvalidParameterException(f"cannot write {file_path}: {e.strerror}")
        logging.info(f"Wrote {len(frame)} rows to {file_path}")
    return text


def wigner_to_frame(grid: WignerGrid) -> pd.DataFrame:
    """
    wigner_to_frame flattens a Wigner grid to (x, p, W) rows.

    Parameters
    ----------
    grid : WignerGrid
        the sampled Wigner function

    Returns
    -------
    pd.DataFrame
        one row per grid point, x varying slowest
    """
    x, p = np.meshgrid(grid.axis, grid.axis, indexing="ij")
    return pd.DataFrame({"x": x.ravel(), "p": p.ravel(), "W": grid.values.ravel()})


def _color(fraction: float) -> str:
    rgb = np.rint(_LOW_RGB + fraction * (_HIGH_RGB - _LOW_RGB)).astype(int)
    return "#{:02x}{:02x}{:02x}".format(*(int(c) for c in rgb))


def heatmap_svg(frame: pd.DataFrame, column: str) -> str:
    """
    heatmap_svg draws one merit column over the (eta2, eta1) grid.

    eta2 runs along the horizontal axis and eta1 up the vertical axis; the
    colors are a linear scale between the column's minimum and maximum.

    Parameters
    ----------
    frame : pd.DataFrame
        a sweep table
    column : str
        the merit column to draw

    Returns
    -------
    str
        the SVG document
    """
    if column not in frame.columns:
        raise InvalidParameterException(f"{column!r} is not a column of the table")
    table = frame.pivot_table(index="eta1", columns="eta2", values=column)
    eta1_values, eta2_values = table.index.to_numpy(), table.columns.to_numpy()
    values = table.to_numpy()
    low, high = np.nanmin(values), np.nanmax(values)
    span = high - low if high > low else 1.0
    width = _MARGIN + _CELL * len(eta2_values) + 20
    height = _MARGIN + _CELL * len(eta1_values) + 40
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<text x="{width / 2:.1f}" y="16" text-anchor="middle" font-size="14">'
        f"{column} (min {low:.4g}, max {high:.4g})</text>",
    ]
    top = 30
    for i, eta1 in enumerate(eta1_values):
        # eta1 grows upwards
        y = top + _CELL * (len(eta1_values) - 1 - i)
        parts.append(
            f'<text x="{_MARGIN - 4}" y="{y + _CELL * 0.7:.1f}" text-anchor="end" '
            f'font-size="10">{eta1:.3g}</text>'
        )
        for j in range(len(eta2_values)):
            value = values[i, j]
            fill = "#ffffff" if np.isnan(value) else _color((value - low) / span)
            parts.append(
                f'<rect x="{_MARGIN + _CELL * j}" y="{y}" width="{_CELL}" height="{_CELL}" '
                f'fill="{fill}"><title>eta1={eta1:.4g} eta2={eta2_values[j]:.4g} '
                f"{column}={value:.6g}</title></rect>"
            )
    bottom = top + _CELL * len(eta1_values)
    for j, eta2 in enumerate(eta2_values):
        parts.append(
            f'<text x="{_MARGIN + _CELL * (j + 0.5):.1f}" y="{bottom + 12}" '
            f'text-anchor="middle" font-size="10">{eta2:.3g}</text>'
        )
    parts += [
        f'<text x="{_MARGIN + _CELL * len(eta2_values) / 2:.1f}" y="{bottom + 30}" '
        'text-anchor="middle" font-size="12">eta2</text>',
        f'<text x="14" y="{top + _CELL * len(eta1_values) / 2:.1f}" font-size="12" '
        f'transform="rotate(-90 14 {top + _CELL * len(eta1_values) / 2:.1f})" '
        'text-anchor="middle">eta1</text>',
        "</svg>",
    ]
    return "\n".join(parts) + "\n"


def write_svg_heatmaps(frame: pd.DataFrame, prefix: str) -> List[str]:
    """
    write_svg_heatmaps writes ``{prefix}_{column}.svg`` for p, F and wln.

    Parameters
    ----------
    frame : pd.DataFrame
        a sweep table
    prefix : str
        path prefix of the files

    Returns
    -------
    List[str]
        the written paths
    """
    paths = []
    for column in HEATMAP_COLUMNS:
        path = f"{prefix}_{column}.svg"
        try:
            with open(path, "w") as f:
                f.write(heatmap_svg(frame, column))
        except OSError as e:
            raise InvalidParameterException(f"cannot write {path}: {e.strerror}")
        paths.append(path)
    logging.info(f"Wrote heatmaps {paths}")
    return paths
