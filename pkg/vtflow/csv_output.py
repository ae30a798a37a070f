# -*- coding: utf-8 -*-
# ---------------------------------------------------------------------------
# CSV output
# Author: vtflow contributors
# Last Updated: 2026-10-19
# Usage: Requires a Python 3.9+ distribution.
# Description: "CSV output" is a set of functions that write and read the versioned vtflow CSV artifacts. Floats are written with their shortest round-trip representation so that identical runs give identical bytes.
# ---------------------------------------------------------------------------

import csv
import os

from vtflow.step_flow import FRAME_COLUMNS
from vtflow.verify_run import VERIFICATION_COLUMNS

CSV_VERSION_LINE = '# vtflow-csv v1'


def format_value(value):
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        return value
    # numpy scalars
    return repr(float(value))


def write_csv(path, header, rows):
    """
    Description: writes a versioned CSV artifact
    Inputs: 'path' -- output file path; parent directories are created
            'header' -- column names
            'rows' -- iterable of row sequences
    Returned Value: Returns the path written
    Preconditions: none
    """

    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    with open(path, 'w', newline='', encoding='utf-8') as handle:
        handle.write(CSV_VERSION_LINE + '\n')
        writer = csv.writer(handle, lineterminator='\n')
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(value) for value in row])
    return path


def write_frames(path, frames):
    return write_csv(path, FRAME_COLUMNS, [frame.as_row() for frame in frames])


def write_constants(path, report):
    return write_csv(path, ('name', 'value'), report.as_rows())


def write_verification(path, reports):
    rows = []
    for report in reports:
        if report.skipped or not report.rows:
            verdict = 'skipped: ' + report.reason if report.skipped else report.reason
            rows.append([report.mode, '', '', '', '', '', '', verdict])
        rows.extend(report.as_rows())
    return write_csv(path, VERIFICATION_COLUMNS, rows)


def _parse(column, text):
    if column == 'status':
        return text
    if column == 'step':
        return int(text)
    return float(text)


def read_csv(path):
    """Rows of a versioned CSV artifact as dicts of strings."""

    with open(path, newline='', encoding='utf-8') as handle:
        first = handle.readline().rstrip('\n')
        if first != CSV_VERSION_LINE:
            raise ValueError(f'{path} is not a vtflow CSV artifact (first line {first!r})')
        return list(csv.DictReader(handle))


def read_frames(path):
    """
    Description: reads frames.csv back into dicts with typed values
    Inputs: 'path' -- path of a frames.csv written by write_frames
    Returned Value: Returns a list of dicts keyed by the frame columns
    Preconditions: file written by vtflow
    """

    rows = read_csv(path)
    missing = [column for column in FRAME_COLUMNS if rows and column not in rows[0]]
    if missing:
        raise ValueError(f'{path} lacks frame columns {missing}')
    return [{column: _parse(column, row[column]) for column in FRAME_COLUMNS} for row in rows]
