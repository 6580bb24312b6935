"""Arnoldi process with modified Gram-Schmidt.

Builds an orthonormal basis ``V_k`` of the Krylov subspace generated by an
operator and a seed vector, together with the rectangular upper-Hessenberg
matrix ``H`` satisfying ``A V_k = V_{k+1} H``.  The same machinery serves
two seeds: the initial residual (GMRES, long-recurrence A-residual
minimization) and the image of the initial residual under the operator
(range-restricted methods).

A step whose new subdiagonal entry falls below
``breakdown_tol * max(1, ||A v_k||)`` is a happy breakdown: the subspace
is invariant, the column is kept (with its tiny trailing entry) but no new
basis vector is added, and ``breakdown_step`` records the subspace
dimension.
"""

from __future__ import annotations

import numpy as np

from .operators import aslinearoperator

__all__ = ["ZeroSeedError", "ArnoldiState", "arnoldi_init", "arnoldi_step"]


class ZeroSeedError(ValueError):
    """The seed vector is numerically zero: nothing to iterate on."""


class ArnoldiState:
    """Mutable state of one Arnoldi run.

    Attributes
    ----------
    k : int
        Number of completed steps (= Hessenberg columns).
    seed_norm : float
        Norm of the seed vector.
    broke_down : bool
        Whether a happy breakdown occurred.
    breakdown_step : int or None
        The step index at which the subspace closed (the maximal Krylov
        dimension for this seed), if it did.
    """

    def __init__(self, v1, seed_norm, breakdown_tol, reorthogonalize):
        n = v1.shape[0]
        self._V = np.empty((n, min(32, n + 1)))
        self._V[:, 0] = v1
        self._columns = []
        self.n = n
        self.k = 0
        self.seed_norm = float(seed_norm)
        self.breakdown_tol = float(breakdown_tol)
        self.reorthogonalize = bool(reorthogonalize)
        self.broke_down = False
        self.breakdown_step = None

    @property
    def basis_count(self):
        return self.k if self.broke_down else self.k + 1

    def basis(self, count=None):
        """View of the first ``count`` orthonormal basis vectors."""
        if count is None:
            count = self.basis_count
        return self._V[:, :count]

    def vector(self, j):
        """The ``j``-th basis vector (0-based)."""
        return self._V[:, j]

    def column(self, j):
        """The ``j``-th Hessenberg column (0-based, length ``j + 2``)."""
        return self._columns[j]

    def hessenberg(self, cols=None, rows=None):
        """Assemble the dense ``H`` with the given shape (defaults to
        ``(k+1) x k``)."""
        if cols is None:
            cols = self.k
        if rows is None:
            rows = cols + 1
        H = np.zeros((rows, cols))
        for j in range(cols):
            col = self._columns[j]
            H[: min(len(col), rows), j] = col[:rows]
        return H

    def _ensure_capacity(self):
        if self._V.shape[1] < self.basis_count:
            width = min(max(2 * self._V.shape[1], self.basis_count), self.n + 1)
            grown = np.empty((self.n, width))
            grown[:, : self._V.shape[1]] = self._V
            self._V = grown


def arnoldi_init(A, seed, breakdown_tol=1e-13, reorthogonalize=False):
    """Start an Arnoldi run from a seed vector.

    Raises :class:`ZeroSeedError` when the seed norm is at or below
    ``breakdown_tol`` (the system is already solved, or the seed carries
    no information).
    """
    A = aslinearoperator(A)
    seed = np.asarray(seed, dtype=np.float64)
    if seed.shape != (A.n,):
        raise ValueError(f"seed has shape {seed.shape}, expected ({A.n},)")
    norm = float(np.linalg.norm(seed))
    if norm <= breakdown_tol:
        raise ZeroSeedError("seed vector is numerically zero (already solved)")
    return ArnoldiState(seed / norm, norm, breakdown_tol, reorthogonalize)


def arnoldi_step(state, A):
    """Advance one Arnoldi step; returns ``"advanced"`` or ``"breakdown"``.

    On a normal step the state gains one basis vector and one Hessenberg
    column.  On breakdown the column (with its tiny trailing entry) is
    still appended so that ``A V_l = V_l H_l`` holds, but no basis vector
    is added and the state refuses further steps.
    """
    if state.broke_down:
        raise RuntimeError("cannot step an Arnoldi process past its breakdown")
    A = aslinearoperator(A)
    k = state.k
    w = A.apply(state.vector(k))
    wnorm = float(np.linalg.norm(w))
    col = np.empty(k + 2)
    Vk = state.basis(k + 1)
    for i in range(k + 1):
        hik = float(Vk[:, i] @ w)
        w -= hik * Vk[:, i]
        col[i] = hik
    if state.reorthogonalize:
        for i in range(k + 1):
            corr = float(Vk[:, i] @ w)
            w -= corr * Vk[:, i]
            col[i] += corr
    hnext = float(np.linalg.norm(w))
    col[k + 1] = hnext
    state._columns.append(col)
    state.k = k + 1
    if hnext <= state.breakdown_tol * max(1.0, wnorm):
        state.broke_down = True
        state.breakdown_step = state.k
        return "breakdown"
    state._ensure_capacity()
    state._V[:, k + 1] = w / hnext
    return "advanced"
