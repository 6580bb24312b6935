"""Per-iterate equivalence against dense brute-force subproblem solves.

Each projected method claims its k-th iterate minimizes a specific
functional over a specific affine Krylov space.  These tests rebuild that
space densely (orthonormal basis columns via repeated orthogonalization),
solve the constrained minimization with a dense least squares call, and
compare against the solver capped at k iterations.  This checks the whole
pipeline: the orthogonalization, the incremental (banded) QR levels, and
the reconstruction, independent of the recurrences under test.
"""

import numpy as np
import pytest

import rskrylov as rk


def krylov_basis(A, v, k):
    """Dense orthonormal basis of span{v, Av, ..., A^(k-1) v}."""
    n = len(v)
    Q = np.zeros((n, k))
    w = v / np.linalg.norm(v)
    Q[:, 0] = w
    for j in range(1, k):
        w = A @ Q[:, j - 1]
        for _ in range(2):
            w = w - Q[:, :j] @ (Q[:, :j].T @ w)
        Q[:, j] = w / np.linalg.norm(w)
    return Q


def make_system(seed, n=14, rank=10):
    A, Ap = rk.make_random_range_symmetric(
        rk.RandomSpec(n=n, rank=rank, cond=50.0, seed=seed)
    )
    rng = np.random.default_rng(seed + 31)
    b_cons = A @ rng.standard_normal(n)
    nullv = rng.standard_normal(n)
    nullv -= Ap @ (A @ nullv)
    b = b_cons + 0.5 * np.linalg.norm(b_cons) * nullv / np.linalg.norm(nullv)
    return A, b


def dense_minimizer(M, target, basis):
    """argmin over the basis span of ||target - M @ (basis z)||."""
    z, *_ = np.linalg.lstsq(M @ basis, target, rcond=None)
    return basis @ z


@pytest.mark.parametrize("seed", range(3))
def test_gmres_iterates_match_dense_minimizers(seed):
    A, b = make_system(seed)
    m = rk.krylov_max_dim(A, b) - 1
    for k in range(1, m + 1):
        rep = rk.gmres_solve(A, b, tol=1e-30, maxit=k)
        V = krylov_basis(A, b, k)
        x_dense = dense_minimizer(A, b, V)
        assert np.linalg.norm(rep.solution - x_dense) <= 1e-9 * max(
            1.0, np.linalg.norm(x_dense)
        )


@pytest.mark.parametrize("seed", range(3))
def test_rrgmres_iterates_match_dense_minimizers(seed):
    A, b = make_system(seed)
    m = rk.krylov_max_dim(A, A @ b) - 1
    for k in range(1, m + 1):
        rep = rk.rrgmres_solve(A, b, tol=1e-30, maxit=k)
        V = krylov_basis(A, A @ b, k)
        x_dense = dense_minimizer(A, b, V)
        assert np.linalg.norm(rep.solution - x_dense) <= 1e-9 * max(
            1.0, np.linalg.norm(x_dense)
        )


@pytest.mark.parametrize("seed", range(3))
def test_dgmres_iterates_match_dense_minimizers(seed):
    A, b = make_system(seed)
    m = rk.krylov_max_dim(A, A @ b) - 1
    A2 = A @ A
    for k in range(1, m + 1):
        rep = rk.dgmres_solve(A, b, tol=1e-30, maxit=k)
        V = krylov_basis(A, A @ b, k)
        x_dense = dense_minimizer(A2, A @ b, V)
        assert np.linalg.norm(rep.solution - x_dense) <= 1e-8 * max(
            1.0, np.linalg.norm(x_dense)
        )


@pytest.mark.parametrize("method", ["rsmar1", "rsmar2"])
@pytest.mark.parametrize("seed", range(3))
def test_rsmar_iterates_match_dense_minimizers(method, seed):
    A, b = make_system(seed)
    m = rk.krylov_max_dim(A, A @ b)
    A2 = A @ A
    for k in range(1, m + 1):
        rep = rk.SOLVERS[method](A, b, tol=1e-30, maxit=k)
        V = krylov_basis(A, b, k)
        x_dense = dense_minimizer(A2, A @ b, V)
        assert np.linalg.norm(rep.solution - x_dense) <= 1e-8 * max(
            1.0, np.linalg.norm(x_dense)
        )


@pytest.mark.parametrize("seed", range(3))
def test_symmetric_pair_iterates_match_dense_minimizers(seed):
    rng = np.random.default_rng(seed + 77)
    n = 16
    A = rk.make_random_symmetric_singular(
        rk.RandomSpec(n=n, rank=9, cond=10.0, seed=seed + 77)
    )
    Ap = np.linalg.pinv(A, rcond=1e-9)
    b_cons = A @ rng.standard_normal(n)
    nullv = rng.standard_normal(n)
    nullv -= Ap @ (A @ nullv)
    b = b_cons + 0.5 * np.linalg.norm(b_cons) * nullv / np.linalg.norm(nullv)
    m = rk.krylov_max_dim(A, b) - 1
    A2 = A @ A
    for k in range(1, m + 1):
        V = krylov_basis(A, b, k)
        x_minres = rk.minres_solve(A, b, tol=1e-30, maxit=k).solution
        x_dense_r = dense_minimizer(A, b, V)
        assert np.linalg.norm(x_minres - x_dense_r) <= 1e-8 * max(
            1.0, np.linalg.norm(x_dense_r)
        )
        x_minares = rk.minares1_solve(A, b, tol=1e-30, maxit=k).solution
        x_dense_a = dense_minimizer(A2, A @ b, V)
        assert np.linalg.norm(x_minares - x_dense_a) <= 1e-8 * max(
            1.0, np.linalg.norm(x_dense_a)
        )
