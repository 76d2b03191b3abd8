"""Wirtinger-calculus gradient machinery.

For f(z) with z = x + jy, the two cogradients are

    df/dz    = (df/dx - j df/dy) / 2
    df/dzbar = (df/dx + j df/dy) / 2

and for a real-valued loss the complex gradient used for steepest descent is
``2 df/dzbar``.  Backpropagation in :mod:`cvnn_bench.nn` carries only
``df/dzbar`` (for real losses ``df/dz`` is its conjugate; that identity is
tested, not assumed).

This module also provides the central finite-difference checker that serves
as the universal gradient oracle for every analytic backward pass in the
package.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "CogradientPair",
    "complex_gradient",
    "autodiff_convention_check",
    "numeric_wirtinger",
    "numeric_param_cogradient",
    "chain_backward",
]

DEFAULT_FD_STEP = 1e-5  # balances truncation vs rounding in float64


@dataclass(frozen=True)
class CogradientPair:
    """The (df/dz, df/dzbar) pair attached to one differentiation step."""

    d_z: np.ndarray
    d_zbar: np.ndarray

    def __post_init__(self):
        dz = np.asarray(self.d_z, dtype=np.complex128)
        dzbar = np.asarray(self.d_zbar, dtype=np.complex128)
        if dz.shape != dzbar.shape:
            raise ValueError(f"cogradient shapes differ: {dz.shape} vs {dzbar.shape}")
        object.__setattr__(self, "d_z", dz)
        object.__setattr__(self, "d_zbar", dzbar)


def complex_gradient(pair: CogradientPair) -> np.ndarray:
    """Steepest-descent gradient of a real loss: 2 * df/dzbar."""
    return 2.0 * pair.d_zbar


def autodiff_convention_check(pair: CogradientPair) -> np.ndarray:
    """The alternative gradient convention conj(df/dz + conj(df/dzbar)).

    For a real-valued loss this equals :func:`complex_gradient`; the
    agreement is an acceptance-tested contract of the package.
    """
    return np.conjugate(pair.d_z + np.conjugate(pair.d_zbar))


def numeric_wirtinger(
    f: Callable[[complex], float], z: complex, h: float = DEFAULT_FD_STEP
) -> CogradientPair:
    """Central-difference cogradients of a scalar real function at ``z``.

    Evaluates f at z +/- h and z +/- jh; raises ArithmeticError on any
    non-finite value.
    """
    if h <= 0:
        raise ValueError(f"step must be positive, got {h}")
    vals = [f(z + h), f(z - h), f(z + 1j * h), f(z - 1j * h)]
    if not all(np.isfinite(v) for v in vals):
        raise ArithmeticError(f"non-finite function value near z={z}")
    dfdx = (vals[0] - vals[1]) / (2.0 * h)
    dfdy = (vals[2] - vals[3]) / (2.0 * h)
    return CogradientPair(
        d_z=np.array(0.5 * (dfdx - 1j * dfdy)),
        d_zbar=np.array(0.5 * (dfdx + 1j * dfdy)),
    )


def numeric_param_cogradient(
    loss: Callable[[], float], param: np.ndarray, h: float = DEFAULT_FD_STEP
) -> CogradientPair:
    """Finite-difference cogradients of ``loss()`` w.r.t. every entry of ``param``.

    ``param`` is perturbed in place one entry (and one real component) at a
    time and restored; ``loss`` must re-read it on every call.  Works for
    float64 parameters too, in which case only the real component is probed
    (df/dy = 0).
    """
    if h <= 0:
        raise ValueError(f"step must be positive, got {h}")
    complex_param = np.iscomplexobj(param)
    d_z = np.zeros(param.shape, dtype=np.complex128)
    d_zbar = np.zeros(param.shape, dtype=np.complex128)
    flat = param.reshape(-1)
    for i in range(flat.size):
        orig = flat[i]
        flat[i] = orig + h
        f_px = loss()
        flat[i] = orig - h
        f_mx = loss()
        dfdx = (f_px - f_mx) / (2.0 * h)
        if complex_param:
            flat[i] = orig + 1j * h
            f_py = loss()
            flat[i] = orig - 1j * h
            f_my = loss()
            dfdy = (f_py - f_my) / (2.0 * h)
        else:
            dfdy = 0.0
        flat[i] = orig
        if not (np.isfinite(dfdx) and np.isfinite(dfdy)):
            raise ArithmeticError(f"non-finite loss while probing entry {i}")
        d_z.reshape(-1)[i] = 0.5 * (dfdx - 1j * dfdy)
        d_zbar.reshape(-1)[i] = 0.5 * (dfdx + 1j * dfdy)
    return CogradientPair(d_z=d_z, d_zbar=d_zbar)


def chain_backward(
    upstream_r: np.ndarray,
    upstream_s: np.ndarray,
    dr_dzbar: np.ndarray,
    ds_dzbar: np.ndarray,
) -> np.ndarray:
    """Chain rule for a real loss through g(z) = r(z) + j s(z), elementwise.

    Returns dL/dzbar = dL/dr * dr/dzbar + dL/ds * ds/dzbar.
    """
    upstream_r = np.asarray(upstream_r)
    upstream_s = np.asarray(upstream_s)
    if upstream_r.shape != upstream_s.shape:
        raise ValueError(
            f"upstream shapes differ: {upstream_r.shape} vs {upstream_s.shape}"
        )
    dr = np.broadcast_to(np.asarray(dr_dzbar), upstream_r.shape)
    ds = np.broadcast_to(np.asarray(ds_dzbar), upstream_s.shape)
    return upstream_r * dr + upstream_s * ds
