"""
Backprojection kernels and their mollifiers
===========================================

Tabulates the X-ray kernels for n = 2, 3, 4 by three independent routes,
then builds power-tail kernels for k >= 2 and locates their sign changes.
"""

import numpy as np
from scipy.optimize import brentq

from kplane.kernels import Dims, kernel_eval, matching_pair, w_xray_eval

# the X-ray kernel equals 1 on the unit ball and is negative outside
r = np.geomspace(1.01, 20.0, 6)
for n in (2, 3, 4):
    closed = [w_xray_eval(n, x, "closed") for x in r]
    hyper = [w_xray_eval(n, x, "hypergeometric") for x in r]
    quad = [w_xray_eval(n, x, "quadrature") for x in r]
    spread = np.max(np.abs(np.array([closed, hyper, quad]) - closed))
    print(f"n={n}: w(r) =", np.array2string(np.array(closed), precision=5), f" spread {spread:.1e}")

# for k >= 2 the kernel vanishes on the ball and changes sign outside it
for n, k in [(3, 2), (4, 2), (5, 3), (6, 4)]:
    dims = Dims(n, k)
    kernel, profile = matching_pair(dims, "theoremB")
    grid = np.geomspace(1.0 + 1e-6, 30.0, 400)
    vals = [kernel_eval(kernel, x) for x in grid]
    roots = [brentq(lambda x: kernel_eval(kernel, x), a, b)
             for a, b, fa, fb in zip(grid, grid[1:], vals, vals[1:]) if fa * fb < 0]
    print(f"({n},{k}) ell={dims.ell}: lambda={profile.lam:.6f}, roots at", [round(x, 6) for x in roots])

# (4,2) has its root at sqrt(5/3)
print("sqrt(5/3) =", np.sqrt(5 / 3))
