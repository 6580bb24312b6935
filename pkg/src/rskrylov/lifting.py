"""Rank-one lifting of a terminal least squares iterate.

On a singular range-symmetric system whose right-hand side has a
component outside the range, minimum-residual iterations stop at *some*
least squares solution, generally not the minimum-norm one.  Subtracting
the component of ``x - x0`` along the final residual projects the iterate
onto the least squares solution set orthogonally through ``x0``; with
``x0`` in the range of the operator the result is the pseudoinverse
solution.
"""

from __future__ import annotations

import numpy as np

__all__ = ["lift"]


def lift(x, x0, r):
    """Return ``x - (r @ (x - x0) / (r @ r)) * r``.

    Parameters
    ----------
    x : array
        Terminal least squares iterate.
    x0 : array
        Initial iterate (the projection anchor).
    r : array
        Final residual ``b - A x``; must be nonzero.
    """
    x = np.asarray(x, dtype=np.float64)
    x0 = np.asarray(x0, dtype=np.float64)
    r = np.asarray(r, dtype=np.float64)
    if not x.shape == x0.shape == r.shape:
        raise ValueError("x, x0 and r must have identical shapes")
    rr = float(r @ r)
    if rr == 0.0:
        raise ValueError("no lifting needed: residual is zero")
    return x - (float(r @ (x - x0)) / rr) * r
