"""
Checking the Abel-type equation
===============================

Each kernel/mollifier pair solves a one-dimensional Abel-type equation.
The residual is evaluated twice: by direct singular quadrature in r and by
a Riemann-Liouville integral in u = r^2.
"""

from kplane.abel import indicator_infeasibility, log_grid, residual_check, riemann_liouville
from kplane.kernels import Dims, matching_pair, tilde_pair

grid = log_grid(0.05, 20.0, 30)
for n, k, family in [(2, 1, "theoremA"), (5, 1, "theoremA"), (4, 2, "theoremB"), (6, 5, "theoremB")]:
    dims = Dims(n, k)
    kernel, profile = matching_pair(dims, family)
    report = residual_check(kernel, profile, dims, grid)

    # second route: fractional integral of order k/2
    w_t, psi_t = tilde_pair(kernel, profile)
    frac = max(abs(riemann_liouville(w_t, k / 2, 0.0, r * r, points=[1.0]) - psi_t(r * r)) for r in grid)
    print(f"({n},{k}) {family}: direct {report.max_abs_err:.1e}, fractional {frac:.1e}")

# with k >= 2 the ball indicator cannot be reached: the forced right side
# tends to a nonzero constant at u = 1 while any integrable left side tends to 0
for n, k in [(4, 2), (6, 2), (5, 3)]:
    print(f"obstruction for ({n},{k}):", indicator_infeasibility(Dims(n, k)))
