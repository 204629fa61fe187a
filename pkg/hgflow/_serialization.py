import csv
import json
import math

import numpy as np

from hgflow._hamiltonian import phase_point
from hgflow._pfaffian import PathSpec, PATH_CLEARANCE


def parse_complex(token):
    """
    Parse a command line complex number written as re or re+imj.

    >>> parse_complex('0.5')
    (0.5+0j)
    >>> parse_complex('1-2j')
    (1-2j)
    """
    try:
        return complex(token.replace(' ', ''))
    except ValueError:
        raise ValueError('Not a complex number: {0!r}'.format(token))


def json_number(value):
    """
    A float for JSON output, None when it is not finite.
    """
    value = float(value)
    return value if math.isfinite(value) else None


def complex_to_json(value):
    value = complex(value)
    return [json_number(value.real), json_number(value.imag)]


def array_to_json(values):
    """
    Nested lists of [re, im] pairs for an array of any dimension.
    """
    values = np.asarray(values, dtype=complex)
    if values.ndim == 0:
        return complex_to_json(values)

    return [array_to_json(v) for v in values]


def array_from_json(values):
    """
    Inverse of :py:func:`array_to_json`, also accepting plain numbers for the entries.
    """
    def convert(item):
        if isinstance(item, list) and len(item) == 2 and all(isinstance(v, (int, float)) for v in item):
            return complex(item[0], item[1])
        if isinstance(item, list):
            return [convert(v) for v in item]
        return complex(item)

    return np.array(convert(values), dtype=complex)


def phase_point_to_json(pt):
    return {'q': array_to_json(pt.q), 'p': array_to_json(pt.p)}


def phase_point_from_json(obj):
    return phase_point(array_from_json(obj['q']), array_from_json(obj['p']))


def path_from_json(obj, clearance=PATH_CLEARANCE):
    if not isinstance(obj, dict) or 'waypoints' not in obj:
        raise ValueError('Path document needs "waypoints"')

    waypoints = [[complex(v[0], v[1]) if isinstance(v, list) else complex(v) for v in point]
                 for point in obj['waypoints']]
    return PathSpec(waypoints=waypoints, clearance=obj.get('clearance', clearance))


def load_path(path, clearance=PATH_CLEARANCE):
    with open(path) as f:
        return path_from_json(json.load(f), clearance)


def write_samples_csv(rows, stream):
    """
    Rows s, x_1.re, x_1.im, ..., y_k.re, y_k.im for the samples produced by
    :py:func:`hgflow.sample_path`.
    """
    writer = csv.writer(stream, lineterminator='\n')
    _, x, y = rows[0]
    header = ['s']
    for i in range(1, len(x) + 1):
        header += ['x_{0}.re'.format(i), 'x_{0}.im'.format(i)]
    for k in range(len(y)):
        header += ['y_{0}.re'.format(k), 'y_{0}.im'.format(k)]
    writer.writerow(header)

    for s, x, y in rows:
        row = [repr(float(s))]
        for value in list(x) + list(y.as_array()):
            row += [repr(float(value.real)), repr(float(value.imag))]
        writer.writerow(row)
