"""Backprojection of k-plane data and the convolution it reproduces.

For a radial phantom ``f`` with k-plane transform ``F(|x''|)`` the
backprojection at scale ``a`` is::

    W_a(x) = a^-n  E_zeta[ G(|P_perp x|) ],
    G(rho) = int_{R^m} F(|y|) w(|rho e1 - y| / a) dy,     m = n - k,

where ``zeta`` is Haar distributed. ``|P_perp x|^2 / |x|^2`` follows
Beta(m/2, k/2), which turns the Grassmannian average into a 1-D integral
(:func:`backproject_reduced`); :func:`backproject_mc` samples ``zeta``
instead. :func:`convolve_oracle` evaluates ``int f(x - a y) psi(|y|) dy``
directly, which the backprojection must equal when ``(w, psi)`` solve the
Abel-type equation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from scipy.special import beta as beta_fn

from ..kernels import (Dims, PiecewiseRadialKernel, ProfileFamily, RadialProfile,
                       sphere_area, w_xray_eval)
from ..numerics import TRANSFORM_SPEC, AccuracyError, QuadratureSpec, adaptive_quad, singular_quad
from .geometry import haar_frames

__all__ = [
    "sphere_integral",
    "plane_integral",
    "backproject_reduced",
    "backproject_mc",
    "convolve_oracle",
    "SweepResult",
    "invert_sweep",
    "disc_average_filter",
]

_MC_BLOCK = 4096


# QUADPACK cannot certify relative errors much below 50 machine epsilons
_REL_FLOOR = 1e-13


def _tighter(spec: QuadratureSpec, factor: float = 1e-2, scale: float = 1.0) -> QuadratureSpec:
    # nested integrals get a tighter budget; ``scale`` rescales the absolute
    # tolerance when the integral is later divided by a small number
    return QuadratureSpec(spec.abs_tol * factor * scale, max(spec.rel_tol * factor, _REL_FLOOR),
                          spec.max_subdivisions)


def _shell_kinks(rho, kinks):
    # radii s at which the sphere |y - rho e1| = s touches a kink sphere |y| = kappa
    out = []
    for kappa in kinks:
        out += [abs(rho - kappa), rho + kappa]
    return out


def sphere_integral(profile, rho: float, s: float, m: int, kinks=(),
                    spec: QuadratureSpec = TRANSFORM_SPEC) -> float:
    """``int_{S^(m-1)} profile(|rho e1 - s theta|) dtheta`` (unnormalized measure)."""
    if m == 1:
        return profile(abs(rho - s)) + profile(rho + s)
    if rho == 0.0 or s == 0.0:
        return sphere_area(m) * profile(rho + s)
    two_rs = 2.0 * rho * s
    base = rho * rho + s * s
    pts = []
    for kappa in kinks:
        c = (base - kappa * kappa) / two_rs
        if -1.0 < c < 1.0:
            pts.append(math.acos(c))

    def f(th):
        return profile(math.sqrt(max(base - two_rs * math.cos(th), 0.0))) * math.sin(th) ** (m - 2)

    return sphere_area(m - 1) * adaptive_quad(f, 0.0, math.pi, spec, points=pts)


def plane_integral(kernel: PiecewiseRadialKernel, phantom, dims: Dims, rho: float, a: float,
                   spec: QuadratureSpec = TRANSFORM_SPEC) -> float:
    """``G(rho) = int_{R^(n-k)} F(|y|) w(|rho e1 - y| / a) dy`` in kernel-centred polar coordinates.

    The radial integral is split at the kernel knot ``s = a``; beyond it
    ``s = a (1 + t^2)`` removes the kernel's square-root edge.
    """
    k, m = dims.k, dims.codim
    F = lambda d: phantom.hat(k, d)
    kinks = getattr(phantom, "kinks", ())
    inner = _tighter(spec)
    s_max = rho + phantom.reach
    s_kinks = [p for p in _shell_kinks(rho, kinks) if 0.0 < p < s_max]
    A = lambda s: sphere_integral(F, rho, s, m, kinks, inner)

    total = 0.0
    w_in = kernel.inside_value
    if w_in != 0.0:
        hi = min(a, s_max)
        total += w_in * adaptive_quad(lambda s: s ** (m - 1) * A(s), 0.0, hi, spec,
                                      points=[p for p in s_kinks if p < hi])
    if s_max > a:
        T = math.sqrt(s_max / a - 1.0)

        def g(t):
            u = 1.0 + t * t
            s = a * u
            return 2.0 * a * kernel.scaled(u) / math.sqrt(2.0 + t * t) * s ** (m - 1) * A(s)

        t_kinks = [math.sqrt(p / a - 1.0) for p in s_kinks if p > a]
        total += adaptive_quad(g, 0.0, T, spec, points=t_kinks)
    return total


def backproject_reduced(kernel: PiecewiseRadialKernel, phantom, dims: Dims, x, a: float,
                        spec: QuadratureSpec = TRANSFORM_SPEC) -> float:
    """Backprojection ``W_a`` of the phantom's k-plane transform at ``x``, deterministically."""
    if not a > 0:
        raise ValueError("scale a must be positive")
    x = np.asarray(x, dtype=float)
    if x.shape != (dims.n,):
        raise ValueError(f"x must have shape ({dims.n},)")
    n, k, m = dims.n, dims.k, dims.codim
    norm = float(np.linalg.norm(x))
    # G is O(a^n) and the result is G / a^n, so absolute budgets scale with a^n
    outer = _tighter(spec, 1.0, a**n)
    inner = _tighter(outer, 1e-1)
    if norm == 0.0:
        return plane_integral(kernel, phantom, dims, 0.0, a, inner) / a**n
    g = lambda t: plane_integral(kernel, phantom, dims, norm * math.sqrt(t), a, inner)
    avg = singular_quad(g, 0.0, 1.0, (k / 2 - 1, m / 2 - 1), outer) / beta_fn(m / 2, k / 2)
    return avg / a**n


def backproject_mc(kernel: PiecewiseRadialKernel, phantom, dims: Dims, x, a: float,
                   samples: int = 20_000, seed: int = 0,
                   spec: QuadratureSpec = TRANSFORM_SPEC, degree: int = 32) -> Tuple[float, float]:
    """Monte Carlo over Haar-random planes; returns ``(estimate, standard error)``.

    Frames are drawn in fixed-size blocks, each from its own child of
    ``SeedSequence(seed)``, so results do not depend on how blocks are
    distributed. The per-frame integral over the normal space is
    ``G(|P_perp x|)``, tabulated once on a Chebyshev grid over ``[0, |x|]``.
    """
    if not a > 0:
        raise ValueError("scale a must be positive")
    if samples < 1000:
        raise ValueError("use at least 1000 samples")
    x = np.asarray(x, dtype=float)
    if x.shape != (dims.n,):
        raise ValueError(f"x must have shape ({dims.n},)")
    n, k = dims.n, dims.k
    norm = float(np.linalg.norm(x))
    inner = _tighter(spec, 1e-2, a**n)
    if norm == 0.0:
        return plane_integral(kernel, phantom, dims, 0.0, a, inner) / a**n, 0.0

    G = np.vectorize(lambda rho: plane_integral(kernel, phantom, dims, float(rho), a, inner))
    interp = np.polynomial.Chebyshev.interpolate(G, degree, domain=[0.0, norm])

    blocks = -(-samples // _MC_BLOCK)
    values = []
    for child in np.random.SeedSequence(seed).spawn(blocks):
        count = min(_MC_BLOCK, samples - len(values) * _MC_BLOCK)
        q = haar_frames(n, k, count, np.random.default_rng(child))
        rho = np.linalg.norm(np.einsum("bij,i->bj", q[:, :, k:], x), axis=1)
        values.append(interp(np.clip(rho, 0.0, norm)))
    vals = np.concatenate(values) / a**n
    return float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(vals.size))


def convolve_oracle(phantom, profile: RadialProfile, x, a: float,
                    spec: QuadratureSpec = TRANSFORM_SPEC) -> float:
    """``int_{R^n} f(x - a y) psi(|y|) dy`` by radius-angle quadrature.

    The radial integral stops where ``f`` vanishes (beyond ``(|x| + reach)/a``),
    which is exact for the ball and below ``exp(-40)`` for the Gaussian.
    """
    if not a > 0:
        raise ValueError("scale a must be positive")
    x = np.asarray(x, dtype=float)
    n = x.size
    norm = float(np.linalg.norm(x))
    kinks = getattr(phantom, "kinks", ())
    inner = _tighter(spec)
    s_max = (norm + phantom.reach) / a
    pts = [p / a for p in _shell_kinks(norm, kinks)]

    def integrand(s):
        return profile(s) * s ** (n - 1) * sphere_integral(phantom.profile, norm, a * s, n, kinks, inner)

    if profile.family is ProfileFamily.INDICATOR_BALL:
        hi = min(1.0, s_max)
        return adaptive_quad(integrand, 0.0, hi, spec, points=[p for p in pts if p < hi])
    if s_max <= 1.0:
        return 0.0
    return adaptive_quad(integrand, 1.0, s_max, spec, points=[p for p in pts if 1.0 < p < s_max])


@dataclass
class SweepResult:
    schedule: List[float]
    estimates: List[float]
    errors: List[float]
    observed_orders: List[float]
    target: float
    std_errors: Optional[List[float]] = None
    failures: List[str] = field(default_factory=list)

    def rows(self):
        orders = [math.nan] + list(self.observed_orders)
        return list(zip(self.schedule, self.estimates, self.errors, orders))


def invert_sweep(phantom, dims: Dims, kernel: PiecewiseRadialKernel, profile: RadialProfile, x,
                 a_start: float = 1.0, factor: float = 0.5, steps: int = 6,
                 engine: str = "reduced", samples: int = 20_000, seed: int = 0,
                 spec: QuadratureSpec = TRANSFORM_SPEC) -> SweepResult:
    """Normalized backprojection ``W_a f^ (x) / lam`` along ``a = a_start * factor^i``, i < steps.

    Observed orders are ``log(err_i / err_(i+1)) / log(1 / factor)``. A step
    whose engine fails is recorded as NaN and the sweep continues.
    """
    if steps < 1:
        raise ValueError("steps must be at least 1")
    if not 0.0 < factor < 1.0:
        raise ValueError("factor must lie in (0, 1)")
    if not a_start > 0:
        raise ValueError("a_start must be positive")
    if engine not in ("reduced", "mc"):
        raise ValueError(f"unknown engine {engine!r}")
    x = np.asarray(x, dtype=float)
    target = phantom.value(x)
    schedule = [a_start * factor**i for i in range(steps)]
    estimates, errors, stderrs, failures = [], [], [], []
    for a in schedule:
        try:
            if engine == "reduced":
                value, se = backproject_reduced(kernel, phantom, dims, x, a, spec), 0.0
            else:
                value, se = backproject_mc(kernel, phantom, dims, x, a, samples, seed, spec)
        except AccuracyError as exc:
            failures.append(f"a={a!r}: {exc}")
            value, se = math.nan, math.nan
        est = value / profile.lam
        estimates.append(est)
        errors.append(abs(est - target))
        stderrs.append(se / profile.lam)
    base = math.log(1.0 / factor)
    orders = []
    for e0, e1 in zip(errors, errors[1:]):
        orders.append(math.log(e0 / e1) / base if e0 > 0 and e1 > 0 else math.nan)
    return SweepResult(schedule, estimates, errors, orders, target,
                       stderrs if engine == "mc" else None, failures)


def disc_average_filter(t: float, a: float) -> float:
    """Line filter whose backprojection averages over discs of radius ``a`` in the plane.

    Equals ``1/(pi a^2)`` for ``|t| <= a`` and
    ``(1 - 1/sqrt(1 - a^2/t^2)) / (pi a^2)`` beyond; evaluated through the
    same expression as the planar X-ray kernel at ``|t|/a``.
    """
    if not a > 0:
        raise ValueError("a must be positive")
    return w_xray_eval(2, abs(t) / a, "closed") / (math.pi * a * a)
