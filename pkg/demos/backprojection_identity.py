"""
Backprojection reproduces a mollified phantom
=============================================

For a Gaussian phantom the backprojected k-plane data at scale a equals the
convolution of the phantom with psi_a. The deterministic engine reduces the
average over planes to a Beta integral; the Monte Carlo engine samples planes.
"""

import numpy as np

from kplane.kernels import Dims, matching_pair
from kplane.transforms import GaussianPhantom, backproject_mc, backproject_reduced, convolve_oracle

a = 0.5
for n, k in [(2, 1), (3, 2), (5, 3)]:
    dims = Dims(n, k)
    kernel, profile = matching_pair(dims, "theoremA" if k == 1 else "theoremB")
    phantom = GaussianPhantom(1.0, n)
    x = np.zeros(n)
    x[0] = 0.5
    reduced = backproject_reduced(kernel, phantom, dims, x, a)
    conv = convolve_oracle(phantom, profile, x, a)
    est, se = backproject_mc(kernel, phantom, dims, x, a, samples=20_000, seed=7)
    print(f"({n},{k}): reduced {reduced:.10f}  convolution {conv:.10f}  "
          f"MC {est:.5f} +- {se:.5f}")
