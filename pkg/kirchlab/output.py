"""
Serialization of reports (JSON) and fields/tables (CSV). Output is a pure
function of its input: keys are sorted and no timestamps are written.
"""
import csv
import json
import logging
import os

import numpy as np

from kirchlab._rtconfig import kl_exc_io
from kirchlab.constants import REPORT_SCHEMA_VERSION
from kirchlab.grid import Field

log = logging.getLogger(__name__)

FIELD_HEADER = ('x', 'y', 'u')


def _ensure_parent(path):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)


def report_json(report, include_timing=False):
    if include_timing and hasattr(report, 'timing'):
        data = report.to_dict(include_timing=True)
    else:
        data = report.to_dict()
    data['schema_version'] = REPORT_SCHEMA_VERSION
    return json.dumps(data, sort_keys=True, indent=2, allow_nan=False) + '\n'


def write_report(report, path, include_timing=False):
    """
    Write `report` as JSON.

    :raise KirchlabIOError: carrying `path` if the file cannot be written
    """
    text = report_json(report, include_timing)
    try:
        _ensure_parent(path)
        with open(path, 'w') as fp:
            fp.write(text)
    except (IOError, OSError) as e:
        kl_exc_io('Cannot write report: {0}'.format(e), path)
    log.debug('output: report path=%s', path)


def write_csv(path, header, rows):
    try:
        _ensure_parent(path)
        with open(path, 'w', newline='') as fp:
            writer = csv.writer(fp, lineterminator='\n')
            writer.writerow(header)
            for row in rows:
                writer.writerow([repr(float(v)) if isinstance(
                    v, (float, np.floating)) else v for v in row])
    except (IOError, OSError) as e:
        kl_exc_io('Cannot write table: {0}'.format(e), path)


def write_field(field, path):
    """
    One ``x,y,u`` row per interior node, in node order.
    """
    xy = field.grid.coords
    write_csv(path, FIELD_HEADER,
              zip(xy[:, 0], xy[:, 1], field.values))


def read_field(path, grid):
    """
    Read a field written by :func:`write_field` onto `grid`. Rows are
    matched to nodes by rounding their coordinates to the lattice; nodes
    without a row are zero and rows outside the mask are ignored.
    """
    vals = np.zeros(grid.N)
    ox, oy = grid.origin
    try:
        with open(path, 'r', newline='') as fp:
            reader = csv.DictReader(fp)
            if tuple(reader.fieldnames or ()) != FIELD_HEADER:
                kl_exc_io('Field file must have header x,y,u', path)
            for row in reader:
                i = int(round((float(row['x']) - ox) / grid.h))
                j = int(round((float(row['y']) - oy) / grid.h))
                if not (0 <= i < grid.nx and 0 <= j < grid.ny):
                    continue
                idx = grid.index[i + 1, j + 1]
                if idx >= 0:
                    vals[idx] = float(row['u'])
    except (IOError, OSError, ValueError) as e:
        kl_exc_io('Cannot read field: {0}'.format(e), path)
    return Field(grid, vals)
