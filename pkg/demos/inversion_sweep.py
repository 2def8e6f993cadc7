"""
Inversion as a -> 0
===================

Normalized backprojection converges to the phantom value. With the ball
indicator (k = 1) the error falls like a^2; the power-tail mollifier has no
second moment, so its error falls only like a.
"""

import numpy as np

from kplane.kernels import Dims, matching_pair
from kplane.transforms import BallPhantom, GaussianPhantom, invert_sweep

for n, k, family in [(2, 1, "theoremA"), (3, 2, "theoremB")]:
    dims = Dims(n, k)
    kernel, profile = matching_pair(dims, family)
    x = np.zeros(n)
    x[0] = 0.5
    res = invert_sweep(GaussianPhantom(1.0, n), dims, kernel, profile, x, 1.0, 0.5, 6)
    print(f"({n},{k}) {family}, f(x) = {res.target:.6f}")
    for a, est, err, order in res.rows():
        print(f"  a={a:<8.5g} estimate={est:.8f} rel err={err / res.target:.2e} order={order:.2f}")

# inside a ball of constant height the planar filter returns the exact disc average
dims = Dims(2, 1)
kernel, profile = matching_pair(dims, "theoremA")
res = invert_sweep(BallPhantom(1.0, 1.0, 2), dims, kernel, profile, [0.3, 0.0], 0.5, 0.5, 3)
print("ball, |x| = 0.3: errors", [f"{e:.1e}" for e in res.errors])
