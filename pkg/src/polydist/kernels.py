"""Backend selection for the hot loops.

numba is used when importable unless ``POLYDIST_DISABLE_NUMBA`` is set to a
non-empty value other than ``0``; otherwise the vectorised numpy path runs.
Callers should go through this module and never import a backend directly.
"""
import os

from . import _kernels_numpy

_disabled = os.environ.get("POLYDIST_DISABLE_NUMBA", "").strip() not in ("", "0")

if _disabled:
    _impl = _kernels_numpy
    BACKEND = "numpy"
else:
    try:
        from . import _kernels_numba as _impl
        BACKEND = "numba"
    except ImportError:  # numba missing or broken
        _impl = _kernels_numpy
        BACKEND = "numpy"

divided_difference_table = _impl.divided_difference_table
assemble_blocks = _impl.assemble_blocks
varpi_table = _impl.varpi_table
assemble_lower = _impl.assemble_lower
theta_matrix = _impl.theta_matrix
hat_coefficients = _impl.hat_coefficients
hat_combine = _impl.hat_combine

__all__ = [
    "BACKEND",
    "divided_difference_table",
    "assemble_blocks",
    "varpi_table",
    "assemble_lower",
    "theta_matrix",
    "hat_coefficients",
    "hat_combine",
]
