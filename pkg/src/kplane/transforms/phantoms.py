"""Radial test functions whose k-plane transforms are known in closed form."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..kernels import ball_volume
from ..numerics import KERNEL_SPEC, QuadratureSpec, adaptive_quad
from .geometry import FlatParam

__all__ = ["GaussianPhantom", "BallPhantom", "phantom_hat", "kplane_numeric"]

# exp(-40) ~ 4e-18: beyond this many sigma^2 a Gaussian is treated as zero
_GAUSS_CUTOFF = 40.0


@dataclass(frozen=True)
class GaussianPhantom:
    """``f(x) = exp(-|x|^2 / sigma^2)`` on R^n."""

    sigma: float = 1.0
    n: int = 2
    kinks = ()

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")

    def profile(self, r: float) -> float:
        return math.exp(-r * r / self.sigma**2)

    def value(self, x) -> float:
        return self.profile(float(np.linalg.norm(x)))

    def hat(self, k: int, d: float) -> float:
        return (math.pi * self.sigma**2) ** (k / 2) * math.exp(-d * d / self.sigma**2)

    @property
    def reach(self) -> float:
        return self.sigma * math.sqrt(_GAUSS_CUTOFF)

    def scaled(self, c: float) -> "GaussianPhantom":
        return GaussianPhantom(self.sigma * c, self.n)


@dataclass(frozen=True)
class BallPhantom:
    """``f = height`` on the closed ball of radius ``radius``, zero outside."""

    radius: float = 1.0
    height: float = 1.0
    n: int = 2

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("radius must be positive")

    @property
    def kinks(self):
        return (self.radius,)

    @property
    def reach(self) -> float:
        return self.radius

    def profile(self, r: float) -> float:
        return self.height if r <= self.radius else 0.0

    def value(self, x) -> float:
        return self.profile(float(np.linalg.norm(x)))

    def hat(self, k: int, d: float) -> float:
        if d >= self.radius:
            return 0.0
        return self.height * ball_volume(k) * ((self.radius - d) * (self.radius + d)) ** (k / 2)


def phantom_hat(phantom, k: int, d: float) -> float:
    """Integral of ``phantom`` over any k-plane at distance ``d`` from the origin."""
    if d < 0:
        raise ValueError("distance must be non-negative")
    return phantom.hat(k, d)


def kplane_numeric(phantom, flat: FlatParam, spec: QuadratureSpec = KERNEL_SPEC) -> float:
    """Integrate ``phantom`` over the plane by iterated quadrature in plane coordinates.

    Each coordinate runs over ``[-reach, reach]``. Break points are placed
    where the remaining coordinate crosses one of the phantom's kink radii.
    """
    k = flat.frame.k
    if flat.frame.n != phantom.n:
        raise ValueError("phantom and plane live in different dimensions")
    L = phantom.reach
    foot = flat.foot
    basis = flat.frame.basis
    d2 = float(foot @ foot)
    inner = QuadratureSpec(spec.abs_tol * 1e-2, spec.rel_tol * 1e-2, spec.max_subdivisions)

    def level(j, coords):
        used = d2 + sum(c * c for c in coords)
        pts = []
        for kappa in phantom.kinks:
            if kappa * kappa > used:
                h = math.sqrt(kappa * kappa - used)
                pts += [-h, h]
        if j == k - 1:
            f = lambda c: phantom.profile(float(np.linalg.norm(foot + basis @ np.array(coords + [c]))))
        else:
            f = lambda c: level(j + 1, coords + [c])
        return adaptive_quad(f, -L, L, spec if j == 0 else inner, points=pts)

    return level(0, [])
