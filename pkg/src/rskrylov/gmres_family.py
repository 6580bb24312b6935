"""Minimum-residual Krylov solvers built on the Arnoldi process.

``gmres_solve`` minimizes the residual norm over the Krylov space seeded
by the initial residual.  ``rrgmres_solve`` minimizes the same functional
over the range-restricted space seeded by the image of the initial
residual, which keeps its iterates in range(A) and makes the final
iterate the pseudoinverse solution on singular range-symmetric systems
(with a zero initial guess).  ``dgmres_solve`` minimizes the A-residual
norm over the range-restricted space (index-1 systems) through a
two-level QR of the product of consecutive hat Hessenberg factors, and
its final iterate is again the pseudoinverse solution.

All three share a convergence rule: stop once the residual norm falls
below ``tol * ||r_0||`` or the A-residual norm falls below
``tol * ||A r_0||``.  GMRES additionally treats a singular square
Hessenberg at subspace closure as the signature of an inconsistent
system: it returns the previous iterate and applies the rank-one lift to
recover the minimum-norm least squares solution.
"""

from __future__ import annotations

import numpy as np

from ._common import (
    HessBuffer,
    Histories,
    build_report,
    explicit_norms,
    maybe_lift,
    prepare,
)
from .arnoldi import ZeroSeedError, arnoldi_init, arnoldi_step
from .hessenberg_qr import BandedQr, HessenbergQr, SingularTriangularError
from .operators import CONVERGED, HAPPY_BREAKDOWN, MAXIT, SINGULAR_FINAL_SYSTEM

__all__ = ["gmres_solve", "rrgmres_solve", "dgmres_solve"]


class _CycleResult:
    def __init__(self, x, r, termination, stop_rule, detected_ell, iters):
        self.x = x
        self.r = r
        self.termination = termination
        self.stop_rule = stop_rule
        self.detected_ell = detected_ell
        self.iters = iters


def _run_cycles(cycle, A, b, x0, r0, opts, hist, floors):
    """Drive restart cycles around one inner-cycle implementation."""
    maxit = opts.maxit if opts.maxit is not None else A.n
    budget = maxit
    x = x0
    r = r0
    result = None
    while True:
        cycle_budget = budget if opts.restart is None else min(opts.restart, budget)
        result = cycle(A, b, x, r, opts, cycle_budget, floors, hist)
        budget -= result.iters
        x = result.x
        if result.termination != MAXIT or budget <= 0 or opts.restart is None:
            break
        r = result.r
        if r is None:
            r = b - A.apply(x)
    return result


def _finalize(method, A, b, x0, hist, floors, result, lift_enabled):
    r_final = result.r
    if (
        lift_enabled
        and r_final is None
        and result.termination in (CONVERGED, HAPPY_BREAKDOWN, SINGULAR_FINAL_SYSTEM)
    ):
        r_final = b - A.apply(result.x)
    lifted = (
        maybe_lift(result.x, x0, r_final, floors["res"], result.termination)
        if lift_enabled
        else None
    )
    return build_report(
        method,
        result.x,
        lifted,
        hist,
        A.count,
        result.termination,
        result.stop_rule,
        result.detected_ell,
    )


def _trivial_report(method, A, x0, beta1, hist):
    hist.append(beta1, 0.0, beta1, A.count)
    return build_report(
        method, x0, None, hist, A.count, CONVERGED, "residual", None
    )


def _gmres_cycle(A, b, x_in, r0, opts, budget, floors, hist):
    beta1 = float(np.linalg.norm(r0))
    try:
        state = arnoldi_init(A, r0, opts.breakdown_tol, opts.reorthogonalize)
    except ZeroSeedError:
        return _CycleResult(x_in, r0, CONVERGED, "residual", None, 0)
    qr = HessenbergQr(beta1)
    x_best = x_in
    r_best = r0
    # best least squares candidate seen so far (smallest explicit |A r|);
    # the fallback whenever the subproblem degenerates
    x_lsq, r_lsq, rn_lsq, arn_lsq = x_in, r0, beta1, np.inf
    for k in range(1, budget + 1):
        outcome = arnoldi_step(state, A)
        col = state.column(k - 1)
        tail = qr.append_column(col, 0.0)
        if k == 1:
            beta_hat = beta1 * float(np.linalg.norm(col))
            if floors["ares"] is None:
                floors["ares"] = opts.tol * beta_hat
            if np.isnan(hist.ares[0]):
                hist.ares[0] = beta_hat

        if outcome == "breakdown":
            ell = state.breakdown_step
            singular = False
            try:
                z = qr.solve(k)
                xk = x_in + state.basis(k) @ z
                r, rn, arn = explicit_norms(A, b, xk)
                # The residual norm cannot exceed the previous one (nested
                # minimization); a jump proves the square system at closure
                # is numerically singular even when the diagonal guard
                # missed it.
                singular = rn > hist.res[-1] * (1.0 + 1e-6) + 1e-12 * beta1
            except SingularTriangularError:
                singular = True
            if not singular:
                hist.append(rn, arn, tail, A.count)
                return _CycleResult(xk, r, HAPPY_BREAKDOWN, None, ell, k)
            if np.isinf(arn_lsq):
                r_lsq, rn_lsq, arn_lsq = explicit_norms(A, b, x_lsq)
            hist.append(rn_lsq, arn_lsq, tail, A.count)
            return _CycleResult(x_lsq, r_lsq, SINGULAR_FINAL_SYSTEM, None, ell, k)

        if opts.record_explicit:
            try:
                z = qr.solve(k)
            except SingularTriangularError:
                if np.isinf(arn_lsq):
                    r_lsq, rn_lsq, arn_lsq = explicit_norms(A, b, x_lsq)
                hist.append(rn_lsq, arn_lsq, tail, A.count)
                return _CycleResult(
                    x_lsq, r_lsq, SINGULAR_FINAL_SYSTEM, None, None, k
                )
            xk = x_in + state.basis(k) @ z
            r, rn, arn = explicit_norms(A, b, xk)
            if rn > hist.res[-1] * 2.0 + 1e-12 * beta1:
                # A clear residual increase contradicts the minimization
                # property: the subproblem has degenerated numerically.
                return _CycleResult(
                    x_lsq, r_lsq, SINGULAR_FINAL_SYSTEM, None, None, k - 1
                )
            hist.append(rn, arn, tail, A.count)
            x_best, r_best = xk, r
            if arn < arn_lsq:
                x_lsq, r_lsq, rn_lsq, arn_lsq = xk, r, rn, arn
            if rn <= floors["res"]:
                return _CycleResult(xk, r, CONVERGED, "residual", None, k)
            if arn <= floors["ares"]:
                return _CycleResult(xk, r, CONVERGED, "aresidual", None, k)
        else:
            hist.append(tail, np.nan, tail, A.count)
            if tail <= floors["res"]:
                z = qr.solve(k)
                xk = x_in + state.basis(k) @ z
                return _CycleResult(xk, None, CONVERGED, "residual", None, k)

    if opts.record_explicit:
        return _CycleResult(x_best, r_best, MAXIT, None, None, budget)
    try:
        z = qr.solve(qr.k)
        xk = x_in + state.basis(qr.k) @ z
    except SingularTriangularError:
        xk = x_in.copy()
    return _CycleResult(xk, None, MAXIT, None, None, budget)


def gmres_solve(A, b, x0=None, opts=None, **options):
    """GMRES for (possibly singular) range-symmetric systems.

    On consistent systems the run ends at the subspace closure with the
    exact solution; on inconsistent systems it ends with a least squares
    iterate (detected through the A-residual monitor or a singular final
    triangular factor) whose lifted companion, stored in
    ``lifted_solution``, is the projection of ``x0`` onto the least
    squares solution set.
    """
    A, b, x0, r0, opts = prepare(A, b, x0, opts, **options)
    hist = Histories()
    beta1 = float(np.linalg.norm(r0))
    if beta1 <= opts.breakdown_tol:
        return _trivial_report("gmres", A, x0, beta1, hist)
    hist.append(beta1, np.nan, beta1, A.count)
    floors = {"res": opts.tol * beta1, "ares": None}
    result = _run_cycles(_gmres_cycle, A, b, x0, r0, opts, hist, floors)
    return _finalize("gmres", A, b, x0, hist, floors, result, True)


def _rrgmres_cycle(A, b, x_in, r0, opts, budget, floors, hist):
    """Range-restricted cycle: projected RHS, residual minimization."""
    beta1 = float(np.linalg.norm(r0))
    seed = A.apply(r0)
    try:
        state = arnoldi_init(A, seed, opts.breakdown_tol, opts.reorthogonalize)
    except ZeroSeedError:
        # A r0 vanishes: x_in already minimizes the residual over
        # x_in + range(A).
        if np.isnan(hist.ares[0]):
            hist.ares[0] = 0.0
        return _CycleResult(x_in, r0, CONVERGED, "aresidual", None, 0)
    beta_hat = state.seed_norm
    if np.isnan(hist.ares[0]):
        hist.ares[0] = beta_hat
    if floors["ares"] is None:
        floors["ares"] = opts.tol * beta_hat
    qr = HessenbergQr(float(state.vector(0) @ r0))
    gnorm2 = qr.rhs_norm**2
    x_best = x_in
    r_best = None
    x_lsq, r_lsq, rn_lsq, arn_lsq = x_in, r0, beta1, np.inf
    for k in range(1, budget + 1):
        outcome = arnoldi_step(state, A)
        col = state.column(k - 1)
        gk = float(state.vector(k) @ r0) if outcome == "advanced" else 0.0
        tail = qr.append_column(col, gk)
        gnorm2 += gk * gk
        est = np.sqrt(max(tail**2 + beta1**2 - gnorm2, 0.0))

        if outcome == "breakdown":
            m = state.breakdown_step
            singular = False
            try:
                z = qr.solve(k)
                xk = x_in + state.basis(k) @ z
                r, rn, arn = explicit_norms(A, b, xk)
                singular = rn > hist.res[-1] * (1.0 + 1e-6) + 1e-12 * beta1
            except SingularTriangularError:
                singular = True
            if not singular:
                hist.append(rn, arn, est, A.count)
                return _CycleResult(xk, r, HAPPY_BREAKDOWN, None, m, k)
            if np.isinf(arn_lsq):
                r_lsq, rn_lsq, arn_lsq = explicit_norms(A, b, x_lsq)
            hist.append(rn_lsq, arn_lsq, est, A.count)
            return _CycleResult(x_lsq, r_lsq, SINGULAR_FINAL_SYSTEM, None, m, k)

        if opts.record_explicit:
            try:
                z = qr.solve(k)
            except SingularTriangularError:
                if np.isinf(arn_lsq):
                    r_lsq, rn_lsq, arn_lsq = explicit_norms(A, b, x_lsq)
                hist.append(rn_lsq, arn_lsq, est, A.count)
                return _CycleResult(
                    x_lsq, r_lsq, SINGULAR_FINAL_SYSTEM, None, None, k
                )
            xk = x_in + state.basis(k) @ z
            r, rn, arn = explicit_norms(A, b, xk)
            if rn > hist.res[-1] * 2.0 + 1e-12 * beta1:
                return _CycleResult(
                    x_lsq, r_lsq, SINGULAR_FINAL_SYSTEM, None, None, k - 1
                )
            hist.append(rn, arn, est, A.count)
            x_best, r_best = xk, r
            if arn < arn_lsq:
                x_lsq, r_lsq, rn_lsq, arn_lsq = xk, r, rn, arn
            if rn <= floors["res"]:
                return _CycleResult(xk, r, CONVERGED, "residual", None, k)
            if arn <= floors["ares"]:
                return _CycleResult(xk, r, CONVERGED, "aresidual", None, k)
        else:
            hist.append(est, np.nan, est, A.count)
            if est <= floors["res"]:
                z = qr.solve(k)
                xk = x_in + state.basis(k) @ z
                return _CycleResult(xk, None, CONVERGED, "residual", None, k)

    if opts.record_explicit:
        return _CycleResult(x_best, r_best, MAXIT, None, None, budget)
    try:
        z = qr.solve(qr.k)
        xk = x_in + state.basis(qr.k) @ z
    except SingularTriangularError:
        xk = x_in.copy()
    return _CycleResult(xk, None, MAXIT, None, None, budget)


def _dgmres_cycle(A, b, x_in, r0, opts, budget, floors, hist):
    """Index-1 cycle: A-residual minimization over the hat space.

    With ``x = x_in + Vhat_k y`` the A-residual is
    ``A r0 - Vhat_{k+2} Hhat_{k+2,k+1} Hhat_{k+1,k} y``, so the projected
    subproblem involves the product of two Hessenberg factors.  It is
    handled exactly like the two-level A-residual factorization: an inner
    QR of the hat Hessenberg and an outer banded QR of the product with
    the inner orthogonal factor, assembled column by column.
    """
    seed = A.apply(r0)
    try:
        state = arnoldi_init(A, seed, opts.breakdown_tol, opts.reorthogonalize)
    except ZeroSeedError:
        if np.isnan(hist.ares[0]):
            hist.ares[0] = 0.0
        if np.isnan(hist.est[0]):
            hist.est[0] = 0.0
        return _CycleResult(x_in, r0, CONVERGED, "aresidual", None, 0)
    beta_hat = state.seed_norm
    if np.isnan(hist.ares[0]):
        hist.ares[0] = beta_hat
    if np.isnan(hist.est[0]):
        hist.est[0] = beta_hat
    if floors["ares"] is None:
        floors["ares"] = opts.tol * beta_hat

    hbuf = HessBuffer()
    arnoldi_step(state, A)
    hbuf.push(state.column(0))
    inner = HessenbergQr(beta_hat)
    outer = BandedQr((beta_hat, 0.0))
    x_best = x_in
    r_best = None
    x_lsq, r_lsq, rn_lsq, arn_lsq = x_in, r0, float(np.linalg.norm(r0)), beta_hat

    def reconstruct(k):
        ytilde = outer.solve(k)
        y = inner.apply_rinv(ytilde, k)
        return x_in + state.basis(k) @ y

    for k in range(1, budget + 1):
        if not state.broke_down:
            arnoldi_step(state, A)
            hbuf.push(state.column(state.k - 1))
        if state.k < k + 1:
            # Subspace closed at dimension k: the square hat Hessenberg
            # is nonsingular on index-1 systems, so solve
            # Hhat_k**2 y = beta_hat e1 through two triangular solves.
            inner.append_column(state.column(k - 1), 0.0)
            singular = False
            try:
                w = inner.solve(k)
                y = inner.solve_rhs(w)
                xk = x_in + state.basis(k) @ y
                r, rn, arn = explicit_norms(A, b, xk)
                singular = (
                    arn > hist.ares[-1] * (1.0 + 1e-6) + 1e-12 * hist.ares[0]
                )
            except SingularTriangularError:
                singular = True
            if singular:
                return _CycleResult(
                    x_lsq,
                    r_lsq,
                    SINGULAR_FINAL_SYSTEM,
                    None,
                    state.breakdown_step,
                    k - 1,
                )
            hist.append(rn, arn, 0.0, A.count)
            return _CycleResult(
                xk, r, HAPPY_BREAKDOWN, None, state.breakdown_step, k
            )

        inner.append_column(state.column(k - 1), 0.0)
        q = inner.q_new_col
        htcol = hbuf.matvec(k + 2, q)
        t1, t2 = outer.append_column(htcol)
        rho = float(np.hypot(t1, t2))

        if opts.record_explicit:
            try:
                xk = reconstruct(k)
            except SingularTriangularError:
                hist.append(rn_lsq, arn_lsq, rho, A.count)
                return _CycleResult(
                    x_lsq, r_lsq, SINGULAR_FINAL_SYSTEM, None, None, k
                )
            r, rn, arn = explicit_norms(A, b, xk)
            if arn > hist.ares[-1] * 2.0 + 1e-12 * hist.ares[0]:
                return _CycleResult(
                    x_lsq, r_lsq, SINGULAR_FINAL_SYSTEM, None, None, k - 1
                )
            hist.append(rn, arn, rho, A.count)
            x_best, r_best = xk, r
            if arn < arn_lsq:
                x_lsq, r_lsq, rn_lsq, arn_lsq = xk, r, rn, arn
            if rn <= floors["res"]:
                return _CycleResult(xk, r, CONVERGED, "residual", None, k)
            if arn <= floors["ares"]:
                return _CycleResult(xk, r, CONVERGED, "aresidual", None, k)
        else:
            hist.append(np.nan, rho, rho, A.count)
            if rho <= floors["ares"]:
                xk = reconstruct(k)
                return _CycleResult(xk, None, CONVERGED, "aresidual", None, k)

    if opts.record_explicit:
        return _CycleResult(x_best, r_best, MAXIT, None, None, budget)
    try:
        xk = reconstruct(outer.k)
    except SingularTriangularError:
        xk = x_in.copy()
    return _CycleResult(xk, None, MAXIT, None, None, budget)



def _hat_solve(method, cycle, A, b, x0, opts, options, est0_is_residual):
    A, b, x0, r0, opts = prepare(A, b, x0, opts, **options)
    hist = Histories()
    beta1 = float(np.linalg.norm(r0))
    if beta1 <= opts.breakdown_tol:
        return _trivial_report(method, A, x0, beta1, hist)
    hist.append(beta1, np.nan, beta1 if est0_is_residual else np.nan, A.count)
    floors = {"res": opts.tol * beta1, "ares": None}
    result = _run_cycles(cycle, A, b, x0, r0, opts, hist, floors)
    return _finalize(method, A, b, x0, hist, floors, result, False)


def rrgmres_solve(A, b, x0=None, opts=None, **options):
    """Range-restricted GMRES.

    Minimizes the residual norm over the Krylov space seeded by
    ``A r_0``.  With a zero initial guess on a singular range-symmetric
    system the final iterate is the pseudoinverse solution in both the
    consistent and the inconsistent case, so no lifting is needed.
    """
    return _hat_solve("rrgmres", _rrgmres_cycle, A, b, x0, opts, options, True)


def dgmres_solve(A, b, x0=None, opts=None, **options):
    """Drazin-inverse GMRES specialized to index-1 systems.

    Minimizes the A-residual norm over the Krylov space seeded by
    ``A r_0`` through a two-level QR of the product of consecutive hat
    Hessenberg factors; the root sum of squares of the two outer tail
    entries is the A-residual norm estimate.  With a zero initial guess
    on a range-symmetric system the final iterate is the pseudoinverse
    solution.
    """
    return _hat_solve("dgmres", _dgmres_cycle, A, b, x0, opts, options, False)
