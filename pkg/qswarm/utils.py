# Copyright (c) 2026, UChicago Argonne, LLC. All rights reserved.
# See LICENSE.txt for license details.

import os
import sys
import json
from collections import OrderedDict

import yaml
import numpy as np
import pandas as pd

from qswarm import log


def ordered_yaml():
    """Support OrderedDict for yaml.

    Returns:
        tuple: yaml Loader and Dumper.
    """
    try:
        from yaml import CSafeDumper as Dumper
        from yaml import CSafeLoader as Loader
    except ImportError:
        from yaml import SafeDumper as Dumper
        from yaml import SafeLoader as Loader

    _mapping_tag = yaml.resolver.BaseResolver.DEFAULT_MAPPING_TAG

    def dict_representer(dumper, data):
        return dumper.represent_dict(data.items())

    def dict_constructor(loader, node):
        return OrderedDict(loader.construct_pairs(node))

    Dumper.add_representer(OrderedDict, dict_representer)
    Loader.add_constructor(_mapping_tag, dict_constructor)
    return Loader, Dumper


def yaml_load(f):
    """Load yaml file or string.

    Args:
        f (str): File path or a python string.

    Returns:
        dict: Loaded dict.
    """
    if os.path.isfile(f):
        with open(f, 'r') as f:
            return yaml.load(f, Loader=ordered_yaml()[0])
    else:
        return yaml.load(f, Loader=ordered_yaml()[0])


def encode_complex(z):
    z = complex(z)
    return [float(z.real), float(z.imag)]


def decode_complex(pair, path='value'):
    if isinstance(pair, (int, float)) and not isinstance(pair, bool):
        return complex(pair)
    if not isinstance(pair, (list, tuple)) or len(pair) != 2 or \
            not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in pair):
        raise ValueError(f"{path}: expected a [re, im] pair, got {pair!r}")
    return complex(pair[0], pair[1])


def encode_matrix(m):
    """Matrix as ``{dim, entries}`` with complex entries as ``[re, im]`` pairs."""
    m = np.asarray(m, dtype=np.complex128)
    return OrderedDict([('dim', int(m.shape[0])),
                        ('entries', [[encode_complex(z) for z in row] for row in m])])


def decode_matrix(obj, path='matrix'):
    """Inverse of :func:`encode_matrix`; a bare list of rows is accepted too."""
    rows = obj.get('entries') if isinstance(obj, dict) else obj
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise ValueError(f"{path}: expected a list of rows")
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError(f"{path}: matrix is not square")
    if isinstance(obj, dict) and 'dim' in obj and obj['dim'] != n:
        raise ValueError(f"{path}: dim {obj['dim']} does not match {n} rows")
    return np.array([[decode_complex(v, f"{path}[{i}][{j}]") for j, v in enumerate(r)]
                     for i, r in enumerate(rows)], dtype=np.complex128)


def format_real(x):
    return format(float(x), '.17g')


def format_complex(z):
    z = complex(z)
    if z.imag == 0:
        return format_real(z.real)
    return f"{format(z.real, '.17g')}{format(z.imag, '+.17g')}j"


def write_matrix_csv(fname, m):
    """One matrix per file, row-major, 17 significant digits."""
    m = np.asarray(m, dtype=np.complex128)
    df = pd.DataFrame([[format_complex(z) for z in row] for row in m])
    df.to_csv(fname, header=False, index=False)
    log.info("Matrix written to %s" % fname)


def dumps(obj):
    return json.dumps(obj, indent=2)


def write_json(obj, out=None):
    """Write *obj* as JSON to the file *out*, or to stdout."""
    text = dumps(obj) + '\n'
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, 'w', encoding='utf-8') as f:
            f.write(text)
        log.info("Output written to %s" % out)


def write_json_lines(records, out=None):
    text = ''.join(json.dumps(r) + '\n' for r in records)
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, 'w', encoding='utf-8') as f:
            f.write(text)
        log.info("Output written to %s" % out)
