"""Convolution-backprojection inversion of the k-plane transform on R^n."""

from .abel import (ResidualReport, abel_lhs, indicator_infeasibility, log_grid,
                   residual_check, riemann_liouville)
from .kernels import (Dims, Family, PiecewiseRadialKernel, ProfileFamily, RadialProfile, Term,
                      abel_constant, halfd_apply, indicator_profile, kernel_eval, lambda_psi,
                      matching_pair, power_tail_profile, psi_eval, sphere_area, tilde_pair,
                      w_theoremB_build, w_xray_eval, xray_kernel)
from .numerics import (AccuracyError, QuadratureSpec, adaptive_quad, gamma_fn, gauss_2f1,
                       singular_quad)
from .transforms import *  # noqa: F401,F403

__version__ = "0.1.0"
