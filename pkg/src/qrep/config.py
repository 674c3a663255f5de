"""Numerical tolerance handling.

All floating-point identity checks in this package compare a residual
against a single tolerance.  The default is 1e-8; it can be overridden
with the QREP_TOL environment variable, which must parse to a float in
(0, 1e-3].
"""

import os

DEFAULT_TOL = 1e-8

_ENV_VAR = "QREP_TOL"


def get_tol():
    """Return the active tolerance, honoring the QREP_TOL override."""
    raw = os.environ.get(_ENV_VAR)
    if raw is None:
        return DEFAULT_TOL
    try:
        val = float(raw)
    except ValueError:
        raise ValueError(f"{_ENV_VAR} must be a float, got {raw!r}")
    if not (0.0 < val <= 1e-3):
        raise ValueError(f"{_ENV_VAR} must lie in (0, 1e-3], got {val}")
    return val
