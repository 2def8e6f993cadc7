"""Numerical checks of the Abel-type equation linking a kernel to its mollifier.

For ``r > 0`` the equation reads::

    c r^(2-n) int_0^r s^(n-k-1) w(s) (r^2 - s^2)^(k/2 - 1) ds = psi(r)

with ``c = |S^(k-1)| |S^(n-k-1)| / |S^(n-1)|``. :func:`abel_lhs` evaluates the
left side directly in ``s``; :func:`riemann_liouville` evaluates the same
identity in its fractional-integral form after ``u = r^2``, giving a second
quadrature path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, List, Sequence

import numpy as np

from .kernels import (Dims, PiecewiseRadialKernel, RadialProfile, abel_constant,
                      psi_eval)
from .numerics import KERNEL_SPEC, AccuracyError, QuadratureSpec, adaptive_quad, gamma_fn, singular_quad

__all__ = [
    "ResidualReport",
    "riemann_liouville",
    "abel_lhs",
    "residual_check",
    "log_grid",
    "indicator_infeasibility",
]


def riemann_liouville(g: Callable[[float], float], alpha: float, a: float, u: float,
                      spec: QuadratureSpec = KERNEL_SPEC, points: Sequence[float] = ()) -> float:
    """Riemann-Liouville integral ``(1/Gamma(alpha)) int_a^u (u - v)^(alpha-1) g(v) dv``.

    The interval is split at the optional interior ``points`` (where ``g``
    may have integrable singularities) and once more before ``u``. Only the
    last piece carries the ``(u - v)^(alpha-1)`` weight analytically; the
    others go to the Gauss-Kronrod integrator, which never samples the
    piece endpoints.
    """
    if not alpha > 0:
        raise ValueError(f"order must be positive, got {alpha}")
    if not u > a:
        raise ValueError("need u > a")
    anchors = [a] + sorted(p for p in points if a < p < u)
    mid = 0.5 * (anchors[-1] + u)
    cuts = []
    # pieces grow geometrically away from each point where g may be singular
    for lo, hi in zip(anchors, anchors[1:] + [mid]):
        cuts.append(lo)
        step = 0.25
        while lo + step < hi - 0.5 * step:
            cuts.append(lo + step)
            step *= 2.0
    cuts.append(mid)
    total = 0.0
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        total += adaptive_quad(lambda v: (u - v) ** (alpha - 1.0) * g(v), lo, hi, spec)
    total += singular_quad(g, mid, u, (alpha - 1.0, 0.0), spec)
    return total / gamma_fn(alpha)


def abel_lhs(kernel: PiecewiseRadialKernel, dims: Dims, r: float,
             spec: QuadratureSpec = KERNEL_SPEC) -> float:
    """Left side of the Abel-type equation at radius ``r``.

    On ``[0, min(r, 1)]`` the kernel is constant and both endpoint weights
    ``s^(n-k-1)`` and ``(r - s)^(k/2-1)`` are integrated analytically. On
    ``[1, r]`` the substitution ``s = 1 + t^2`` absorbs the kernel's
    ``(s - 1)^(-1/2)`` edge, using the kernel's scaled form
    ``sqrt(s^2 - 1) w(s)``.
    """
    if not r > 0:
        raise ValueError("r must be positive")
    n, k = dims.n, dims.k
    p = k / 2 - 1
    total = 0.0
    w_in = kernel.inside_value
    if w_in != 0.0:
        if r <= 1.0:
            total += w_in * singular_quad(lambda s: (r + s) ** p, 0.0, r, (p, n - k - 1), spec)
        else:
            total += w_in * singular_quad(lambda s: (r * r - s * s) ** p, 0.0, 1.0, (0.0, n - k - 1), spec)
    if r > 1.0:
        T = math.sqrt(r - 1.0)

        def g(t):
            s = 1.0 + t * t
            # 2t dt * w(s), with w(s) = scaled(s) / (t sqrt(2 + t^2))
            return (2.0 * kernel.scaled(s) / math.sqrt(2.0 + t * t)
                    * s ** (n - k - 1) * ((r + s) * (T + t)) ** p)

        total += singular_quad(g, 0.0, T, (p, 0.0), spec)
    return abel_constant(dims) * r ** (2 - n) * total


@dataclass
class ResidualReport:
    dims: Dims
    grid: List[float]
    lhs: List[float]
    rhs: List[float]
    max_abs_err: float = field(init=False)
    max_rel_err: float = field(init=False)
    failures: List[str] = field(default_factory=list)

    def __post_init__(self):
        if not len(self.grid) == len(self.lhs) == len(self.rhs):
            raise ValueError("grid, lhs and rhs must have equal length")
        err = self.abs_errors
        ok = ~np.isnan(err)
        self.max_abs_err = float(err[ok].max()) if ok.any() else math.nan
        rhs = np.asarray(self.rhs)
        nz = ok & (rhs != 0)
        self.max_rel_err = float((err[nz] / np.abs(rhs[nz])).max()) if nz.any() else math.nan

    @property
    def abs_errors(self) -> np.ndarray:
        return np.abs(np.asarray(self.lhs, dtype=float) - np.asarray(self.rhs, dtype=float))

    @property
    def complete(self) -> bool:
        return not np.isnan(self.abs_errors).any()

    def rows(self):
        return [(r, l, s, abs(l - s)) for r, l, s in zip(self.grid, self.lhs, self.rhs)]


def log_grid(r_min: float = 0.05, r_max: float = 20.0, count: int = 30,
             offset: float = 1e-3) -> List[float]:
    """Log-spaced radii with any point within ``offset`` of 1 pushed to ``1 +- offset``."""
    grid = []
    for r in np.geomspace(r_min, r_max, count):
        r = float(r)
        if abs(r - 1.0) < offset:
            r = 1.0 - offset if r < 1.0 else 1.0 + offset
        grid.append(r)
    return grid


def residual_check(kernel: PiecewiseRadialKernel, profile: RadialProfile, dims: Dims,
                   grid: Sequence[float], spec: QuadratureSpec = KERNEL_SPEC) -> ResidualReport:
    """Both sides of the Abel-type equation on ``grid``.

    A grid point whose quadrature fails is recorded as NaN on the left side
    (and listed in ``failures``) instead of aborting the report.
    """
    lhs, rhs, failures = [], [], []
    for r in grid:
        rhs.append(psi_eval(profile, r))
        try:
            lhs.append(abel_lhs(kernel, dims, r, spec))
        except AccuracyError as exc:
            lhs.append(math.nan)
            failures.append(f"r={r!r}: {exc}")
    return ResidualReport(dims, list(grid), lhs, rhs, failures=failures)


def indicator_infeasibility(dims: Dims, spec: QuadratureSpec = KERNEL_SPEC) -> float:
    """Obstruction constant for pairing the ball indicator with ``k >= 2``.

    Returns the limit as ``u -> 1+`` of the forced right-hand side,
    ``-(1/Gamma(k/2)) int_0^1 (1 - v)^(k/2-1) v^((n-k)/2-1) dv``. The left side
    tends to 0 for every locally integrable kernel, so a nonzero value rules
    the pairing out.
    """
    n, k = dims.n, dims.k
    if k < 2:
        raise ValueError("no obstruction for k = 1: the indicator pairing exists")
    integral = singular_quad(lambda v: 1.0, 0.0, 1.0, (k / 2 - 1, (n - k) / 2 - 1), spec)
    return -integral / gamma_fn(k / 2)
