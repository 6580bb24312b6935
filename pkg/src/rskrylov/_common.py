"""Shared plumbing for the iterative solver drivers."""

from __future__ import annotations

import numpy as np

from .lifting import lift
from .operators import (
    CONVERGED,
    HAPPY_BREAKDOWN,
    SINGULAR_FINAL_SYSTEM,
    CountingOperator,
    SolveOptions,
    SolveReport,
    as_vector,
)

LIFT_TERMINATIONS = (CONVERGED, HAPPY_BREAKDOWN, SINGULAR_FINAL_SYSTEM)


class Histories:
    """Per-iteration residual, A-residual, estimate, and matvec logs."""

    def __init__(self):
        self.res = []
        self.ares = []
        self.est = []
        self.mv = []

    def append(self, rn, arn, est, mv):
        self.res.append(float(rn))
        self.ares.append(float(arn))
        self.est.append(float(est))
        self.mv.append(int(mv))


def prepare(A, b, x0, opts, **overrides):
    """Normalize the solver inputs and compute the initial residual."""
    if opts is None:
        opts = SolveOptions(**overrides)
    elif overrides:
        raise TypeError("pass either opts or keyword options, not both")
    A = CountingOperator(A)
    b = as_vector(b, A.n)
    if x0 is None:
        x0 = np.zeros(A.n)
    else:
        x0 = as_vector(x0, A.n).copy()
    if np.any(x0):
        r0 = b - A.apply(x0)
    else:
        r0 = b.copy()
    return A, b, x0, r0, opts


def explicit_norms(A, b, x):
    """Recompute the residual and A-residual of an iterate (two matvecs)."""
    r = b - A.apply(x)
    ar = A.apply(r)
    return r, float(np.linalg.norm(r)), float(np.linalg.norm(ar))


def maybe_lift(x, x0, r_final, res_floor, termination):
    """Apply the rank-one lift when the run ended in the inconsistent
    regime (finished, but with a residual above the convergence floor)."""
    if termination not in LIFT_TERMINATIONS or r_final is None:
        return None
    rnorm = float(np.linalg.norm(r_final))
    if rnorm <= res_floor or rnorm == 0.0:
        return None
    return lift(x, x0, r_final)


class HessBuffer:
    """Growing dense copy of Hessenberg columns, used by the two-level
    factorizations to form outer-factor columns with one gemv."""

    def __init__(self):
        self._H = np.zeros((3, 2))
        self.cols = 0

    def push(self, col):
        rows = len(col)
        if rows > self._H.shape[0] or self.cols + 1 > self._H.shape[1]:
            grown = np.zeros((2 * rows, 2 * (self.cols + 1)))
            grown[: self._H.shape[0], : self._H.shape[1]] = self._H
            self._H = grown
        self._H[:rows, self.cols] = col
        self.cols += 1

    def matvec(self, rows, q):
        return self._H[:rows, : len(q)] @ q


def build_report(
    method,
    x,
    lifted,
    hist,
    matvec_count,
    termination,
    stop_rule,
    detected_ell,
):
    return SolveReport(
        method=method,
        solution=x,
        lifted_solution=lifted,
        residual_history=np.asarray(hist.res),
        aresidual_history=np.asarray(hist.ares),
        estimate_history=np.asarray(hist.est),
        matvec_history=np.asarray(hist.mv, dtype=np.int64),
        matvec_count=int(matvec_count),
        termination=termination,
        stop_rule=stop_rule,
        detected_ell=detected_ell,
    )
