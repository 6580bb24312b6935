"""Incremental QR factorizations via Givens rotations.

:class:`HessenbergQr` factors a column-growing matrix with one subdiagonal
(the Arnoldi Hessenberg) while maintaining the rotated right-hand side, so
the tail entry of the transformed RHS is the least squares residual of the
current subproblem.  :class:`BandedQr` does the same for matrices whose
columns reach two rows below the diagonal, as produced by the second
factorization level of the long-recurrence A-residual method; each column
append there applies exactly two new rotations.

Rotations use the convention ``[[c, s], [-s, c]]`` with signs chosen so
every diagonal entry of ``R`` is nonnegative, which makes the factors
deterministic.
"""

from __future__ import annotations

import numpy as np

__all__ = ["SingularTriangularError", "HessenbergQr", "BandedQr"]


class SingularTriangularError(np.linalg.LinAlgError):
    """The triangular factor is numerically singular; the square system at
    subspace closure has no unique solution."""


def _givens(a, b):
    """Rotation (c, s) with [[c, s], [-s, c]] @ [a, b] = [r, 0], r >= 0."""
    r = float(np.hypot(a, b))
    if r == 0.0:
        return 1.0, 0.0, 0.0
    return a / r, b / r, r


def _solve_upper(R, rhs):
    """Back substitution with a relative singularity guard on the diagonal."""
    k = R.shape[0]
    if k == 0:
        return np.zeros(0)
    diag = np.abs(np.diag(R))
    if diag.min() <= 1e-14 * diag.max():
        raise SingularTriangularError(
            "triangular factor is numerically singular "
            f"(min diag {diag.min():.3e}, max diag {diag.max():.3e})"
        )
    z = np.zeros(k)
    for i in range(k - 1, -1, -1):
        z[i] = (rhs[i] - R[i, i + 1 :] @ z[i + 1 :]) / R[i, i]
    return z


class HessenbergQr:
    """Incremental QR of an upper-Hessenberg matrix with rotated RHS.

    Parameters
    ----------
    rhs_seed : float
        First entry of the right-hand side (the seed norm ``beta``); the
        transformed RHS starts as ``[rhs_seed]``.

    After ``k`` column appends the object holds the rotation pairs, the
    ``k x k`` triangular factor, and ``t = Q^T g`` of length ``k + 1``
    where ``g`` collects the RHS entries passed to :meth:`append_column`.
    The absolute tail entry ``|t[k]]`` is the subproblem's minimal
    residual.
    """

    def __init__(self, rhs_seed):
        self.rotations = []
        self.rcols = []
        self.t = [float(rhs_seed)]
        self.rhs_norm = float(rhs_seed)
        # Last column of the implicit Q factor, updated per append; used
        # by the second-level factorization.
        self._qlast = np.array([1.0])
        self.q_new_col = None

    @property
    def k(self):
        return len(self.rcols)

    @property
    def tail(self):
        return abs(self.t[-1])

    def append_column(self, column, rhs_append=0.0):
        """Append one Hessenberg column (length ``k + 2``) and one RHS
        entry; returns the new tail scalar ``|t[k+1]|``."""
        k = self.k
        col = np.asarray(column, dtype=np.float64).copy()
        if col.shape != (k + 2,):
            raise ValueError(f"column has shape {col.shape}, expected ({k + 2},)")
        for i, (c, s) in enumerate(self.rotations):
            ci, cip = col[i], col[i + 1]
            col[i] = c * ci + s * cip
            col[i + 1] = -s * ci + c * cip
        c, s, r = _givens(col[k], col[k + 1])
        col[k] = r
        self.rotations.append((c, s))
        self.rcols.append(col[: k + 1])
        self.t.append(float(rhs_append))
        tk, tk1 = self.t[k], self.t[k + 1]
        self.t[k] = c * tk + s * tk1
        self.t[k + 1] = -s * tk + c * tk1
        # Q_{k+1} e_{k+1} = c * [qlast; 0] + s * e_{k+2} and the running
        # last column becomes -s * [qlast; 0] + c * e_{k+2}.
        qpad = np.append(self._qlast, 0.0)
        ek = np.zeros(k + 2)
        ek[k + 1] = 1.0
        self.q_new_col = c * qpad + s * ek
        self._qlast = -s * qpad + c * ek
        return abs(self.t[k + 1])

    def r_matrix(self, size=None):
        """Dense triangular factor (leading ``size`` columns)."""
        if size is None:
            size = self.k
        R = np.zeros((size, size))
        for j in range(size):
            R[: j + 1, j] = self.rcols[j]
        return R

    def q_matrix(self):
        """Dense ``(k+1) x (k+1)`` orthogonal factor rebuilt from the
        stored rotations (for verification)."""
        k = self.k
        Q = np.eye(k + 1)
        for i, (c, s) in enumerate(self.rotations):
            gi = Q[i].copy()
            gip = Q[i + 1].copy()
            Q[i] = c * gi + s * gip
            Q[i + 1] = -s * gi + c * gip
        return Q.T

    def solve(self, size=None):
        """Solve ``R z = t[:size]`` by back substitution.

        Raises :class:`SingularTriangularError` when the leading diagonal
        spread exceeds the relative floor; GMRES maps that condition to a
        ``singular_final_system`` termination on inconsistent systems.
        """
        if size is None:
            size = self.k
        R = self.r_matrix(size)
        return _solve_upper(R, np.asarray(self.t[:size]))

    def apply_rinv(self, rhs, size=None):
        """Solve ``R z = rhs`` for an arbitrary right-hand side (used by
        the two-level factorization to undo the inner factor)."""
        if size is None:
            size = self.k
        return _solve_upper(self.r_matrix(size), np.asarray(rhs, dtype=np.float64))

    def solve_rhs(self, rhs):
        """Least squares solve of the current factorization against an
        arbitrary dense right-hand side (padded with zeros to length
        ``k + 1``)."""
        k = self.k
        g = np.zeros(k + 1)
        rhs = np.asarray(rhs, dtype=np.float64)
        g[: rhs.shape[0]] = rhs
        for i, (c, s) in enumerate(self.rotations):
            gi, gip = g[i], g[i + 1]
            g[i] = c * gi + s * gip
            g[i + 1] = -s * gi + c * gip
        return _solve_upper(self.r_matrix(k), g[:k])


class BandedQr:
    """Incremental QR for columns reaching two rows below the diagonal.

    Parameters
    ----------
    rhs_seed : pair of floats
        The two leading RHS entries (the transformed RHS starts as this
        pair, of length ``k + 2`` after ``k`` appends).

    Column ``j`` (1-based) must have entries through row ``j + 2`` only.
    Each append applies the stored rotations and exactly two new ones
    (zeroing rows ``j+2`` then ``j+1``), and returns the pair
    ``(|t[j]|, |t[j+1]|)`` whose root sum of squares is the subproblem's
    minimal residual.
    """

    def __init__(self, rhs_seed):
        a, b = rhs_seed
        self.rotations = []  # (row, c, s) acting on (row, row + 1), in order
        self.rcols = []
        self.t = [float(a), float(b)]

    @property
    def k(self):
        return len(self.rcols)

    @property
    def tail_pair(self):
        return abs(self.t[-2]), abs(self.t[-1])

    def append_column(self, column):
        k = self.k
        col = np.asarray(column, dtype=np.float64).copy()
        if col.shape != (k + 3,):
            raise ValueError(f"column has shape {col.shape}, expected ({k + 3},)")
        for row, c, s in self.rotations:
            ci, cip = col[row], col[row + 1]
            col[row] = c * ci + s * cip
            col[row + 1] = -s * ci + c * cip
        new_rots = []
        # Zero the lowest entry first, then the one above it.
        for row in (k + 1, k):
            c, s, r = _givens(col[row], col[row + 1])
            col[row] = r
            col[row + 1] = 0.0
            new_rots.append((row, c, s))
        self.rotations.extend(new_rots)
        self.rcols.append(col[: k + 1])
        self.t.append(0.0)
        for row, c, s in new_rots:
            ti, tip = self.t[row], self.t[row + 1]
            self.t[row] = c * ti + s * tip
            self.t[row + 1] = -s * ti + c * tip
        return abs(self.t[k + 1]), abs(self.t[k + 2])

    def r_matrix(self, size=None):
        if size is None:
            size = self.k
        R = np.zeros((size, size))
        for j in range(size):
            R[: j + 1, j] = self.rcols[j]
        return R

    def q_matrix(self):
        """Dense ``(k+2) x (k+2)`` orthogonal factor for verification."""
        k = self.k
        Q = np.eye(k + 2)
        for row, c, s in self.rotations:
            gi = Q[row].copy()
            gip = Q[row + 1].copy()
            Q[row] = c * gi + s * gip
            Q[row + 1] = -s * gi + c * gip
        return Q.T

    def solve(self, size=None):
        if size is None:
            size = self.k
        R = self.r_matrix(size)
        return _solve_upper(R, np.asarray(self.t[:size]))
