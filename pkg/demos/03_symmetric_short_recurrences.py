"""Short-recurrence solvers on singular symmetric systems.

The classical minimum-residual iteration and its A-residual counterpart
use a fixed number of work vectors instead of a growing basis.  On an
inconsistent symmetric system both terminate at the same least squares
iterate (checked here at the theoretical termination index), and the
rank-one lift turns it into the pseudoinverse solution.  The A-residual
variant also demonstrates its estimate fidelity: the recurrence scalar
rho_k tracks the explicitly recomputed A-residual norm.
"""

import numpy as np

import rskrylov as rk

rng = np.random.default_rng(3)
n, rank = 48, 10
A = rk.make_random_symmetric_singular(rk.RandomSpec(n=n, rank=rank, cond=20.0, seed=3))
Apinv = np.linalg.pinv(A, rcond=1e-10)

b_range = A @ rng.standard_normal(n)
nullvec = rng.standard_normal(n)
nullvec -= Apinv @ (A @ nullvec)
b = b_range + 0.4 * np.linalg.norm(b_range) * nullvec / np.linalg.norm(nullvec)
x_star = Apinv @ b

m = rk.krylov_max_dim(A, b) - 1
print(f"symmetric system: n={n}, rank={rank}, subspace closes after m={m} steps\n")

rep_mr = rk.minres_solve(A, b, tol=1e-8, maxit=4 * n)
rep_ma = rk.minares1_solve(A, b, tol=1e-10, maxit=4 * n)
for name, rep in (("minres", rep_mr), ("minares", rep_ma)):
    lifted_err = np.linalg.norm(rep.lifted_solution - x_star) / np.linalg.norm(x_star)
    print(f"{name:8s} its={rep.iterations} termination={rep.termination} "
          f"lifted err={lifted_err:.2e}")

x_mr = rk.minres_solve(A, b, tol=1e-30, maxit=m).solution
x_ma = rk.minares1_solve(A, b, tol=1e-30, maxit=m).solution
gap = np.linalg.norm(x_mr - x_ma) / np.linalg.norm(x_ma)
print(f"\nfinal-iterate gap at the termination index m={m}: {gap:.2e}")

dev = np.max(np.abs(rep_ma.estimate_history - rep_ma.aresidual_history))
print(f"rho_k vs explicit |A r_k| worst deviation: "
      f"{dev / rep_ma.aresidual_history[0]:.2e} (relative to |A r_0|)")

# cross-check against the long-recurrence A-residual method
rep_rs = rk.rsmar2_solve(A, b, tol=1e-10, maxit=4 * n)
gap2 = np.linalg.norm(rep_rs.solution - rep_ma.solution) / np.linalg.norm(rep_ma.solution)
print(f"long- vs short-recurrence A-residual final gap: {gap2:.2e}")
