"""Minimal dense complex matrix operations.

The universal tensor of this package is a 2-D, row-major (C-contiguous)
``numpy.ndarray`` of ``complex128`` (or ``float64`` for real-field models,
whose imaginary parts are identically zero).  One sample per row, so a dense
layer is ``X @ W + b``.

All functions here are pure: inputs are never mutated.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "ShapeError",
    "as_matrix",
    "matmul",
    "conj",
    "conj_transpose",
    "add_bias_row",
]


class ShapeError(ValueError):
    """Raised when operand shapes do not conform."""


def as_matrix(values, *, real: bool = False) -> np.ndarray:
    """Coerce ``values`` to a 2-D row-major matrix.

    ``real=False`` gives ``complex128``, ``real=True`` gives ``float64``.
    1-D input becomes a single row.
    """
    a = np.asarray(values, dtype=np.float64 if real else np.complex128)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    if a.ndim != 2:
        raise ShapeError(f"expected a 2-D matrix, got ndim={a.ndim}")
    if a.shape[0] < 1 or a.shape[1] < 1:
        raise ShapeError(f"matrix must be at least 1x1, got {a.shape}")
    return np.ascontiguousarray(a)


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product ``a @ b`` with an explicit conformance check."""
    if a.ndim != 2 or b.ndim != 2:
        raise ShapeError(f"matmul needs 2-D operands, got {a.shape} and {b.shape}")
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"matmul shape mismatch: {a.shape} @ {b.shape}")
    return a @ b


def conj(a: np.ndarray) -> np.ndarray:
    """Elementwise complex conjugate (a copy, even for real input)."""
    return np.conjugate(a).copy() if np.isrealobj(a) else np.conjugate(a)


def conj_transpose(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose a^H."""
    return np.conjugate(a).T


def add_bias_row(a: np.ndarray, bias: np.ndarray) -> np.ndarray:
    """Add a 1 x cols bias row to every row of ``a``."""
    if bias.ndim != 2 or bias.shape[0] != 1 or bias.shape[1] != a.shape[1]:
        raise ShapeError(
            f"bias must be 1x{a.shape[1]} to broadcast over {a.shape}, got {bias.shape}"
        )
    return a + bias
