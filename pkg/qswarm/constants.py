# Copyright (c) 2026, UChicago Argonne, LLC. All rights reserved.
# See LICENSE.txt for license details.

import os

NORM_TOL = 1e-9
HERM_TOL = 1e-9
TRACE_TOL = 1e-9
PSD_TOL = 1e-9
WEIGHT_TOL = 1e-9

UNITARY_TOL = 1e-8
REASSIGN_TOL = 1e-6
REASSIGN_MAX_STEPS = 500

DELTA = 0.05
ETA = 0.5
SEED = 0
MAX_ITERATIONS = 100
DT = 1e-3
RELAXATION_TIME = 1.0

RESOLUTION = 50

SCHEMA_VERSION = 1

TOL_ENV_VAR = 'QSWARM_TOL'


def default_tol():
    """Density-matrix tolerance, overridden by the QSWARM_TOL environment variable."""
    value = os.environ.get(TOL_ENV_VAR)
    if value is None or value.strip() == '':
        return NORM_TOL
    try:
        tol = float(value)
    except ValueError:
        raise ValueError(f"{TOL_ENV_VAR}={value!r} is not a real number")
    if not tol > 0:
        raise ValueError(f"{TOL_ENV_VAR} must be positive, got {tol}")
    return tol
