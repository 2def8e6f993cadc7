"""Special functions and quadrature engines.

Everything else in the package funnels its integrals through
:func:`adaptive_quad` and :func:`singular_quad`, which wrap QUADPACK (via
``scipy.integrate.quad``) behind a tolerance contract: a result is returned
only if its estimated error is within ``max(abs_tol, rel_tol * |result|)``,
otherwise :class:`AccuracyError` is raised with the best estimate attached.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

from scipy import integrate

__all__ = [
    "AccuracyError",
    "QuadratureSpec",
    "KERNEL_SPEC",
    "TRANSFORM_SPEC",
    "gamma_fn",
    "gauss_2f1",
    "adaptive_quad",
    "singular_quad",
]


class AccuracyError(ArithmeticError):
    """A quadrature (or series) did not reach the requested tolerance."""

    def __init__(self, message: str, estimate: float, error_bound: float):
        super().__init__(f"{message} (estimate={estimate!r}, error={error_bound!r})")
        self.estimate = estimate
        self.error_bound = error_bound


@dataclass(frozen=True)
class QuadratureSpec:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_subdivisions: int = 200
    # (alpha, beta) for (b - x)**alpha * (x - a)**beta; used by singular_quad
    # when no exponents are passed explicitly.
    endpoint_exponents: Optional[Tuple[float, float]] = None

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.max_subdivisions < 2:
            raise ValueError("max_subdivisions must be at least 2")
        if self.endpoint_exponents is not None:
            _check_exponents(self.endpoint_exponents)

    def loosened(self, factor: float) -> "QuadratureSpec":
        return QuadratureSpec(self.abs_tol * factor, self.rel_tol * factor,
                              self.max_subdivisions, self.endpoint_exponents)


KERNEL_SPEC = QuadratureSpec(1e-10, 1e-10)
TRANSFORM_SPEC = QuadratureSpec(1e-8, 1e-8)


def _check_exponents(exponents):
    alpha, beta = exponents
    if not (alpha > -1 and beta > -1):
        raise ValueError(f"endpoint exponents must be > -1, got {exponents}")


def gamma_fn(x: float) -> float:
    """Gamma function for positive real arguments."""
    if not x > 0:
        raise ValueError(f"gamma_fn needs a positive argument, got {x}")
    return math.gamma(x)


def _rgamma(x: float) -> float:
    # 1/Gamma(x), zero at the poles.
    if x <= 0 and x == math.floor(x):
        return 0.0
    return 1.0 / math.gamma(x)


def _series_2f1(a, b, c, z, max_terms=200_000):
    term = 1.0
    total = 1.0
    small = 0
    for j in range(max_terms):
        term *= (a + j) * (b + j) / ((c + j) * (j + 1)) * z
        total += term
        if term == 0.0:
            return total
        if abs(term) <= 1e-17 * abs(total):
            small += 1
            if small >= 2:
                return total
        else:
            small = 0
    raise AccuracyError("hypergeometric series did not converge", total, abs(term))


# below this the series converges fast enough and avoids the connection
# formula's cancellation when c - a - b is close to an integer
_SERIES_MAX_Z = 0.9


def gauss_2f1(a: float, b: float, c: float, z: float) -> float:
    """Gauss hypergeometric function F(a, b; c; z) for real 0 <= z < 1.

    The power series is summed directly for ``z <= 0.9``. Above that the
    connection formula to ``1 - z`` is used, which resolves the
    ``(1 - z)**(c - a - b)`` behaviour near ``z = 1`` explicitly. When
    ``c - a - b`` is an integer that formula degenerates and the direct
    series (convergent for any ``z < 1``) is used instead.
    """
    if not 0.0 <= z < 1.0:
        raise ValueError(f"gauss_2f1 is implemented for 0 <= z < 1, got z={z}")
    if c <= 0 and c == math.floor(c):
        raise ValueError("c must not be a non-positive integer")
    if z == 0.0:
        return 1.0
    terminating = any(p <= 0 and p == math.floor(p) for p in (a, b))
    s = c - a - b
    # near-integer s makes the connection coefficients cancel catastrophically
    gap = abs(s - round(s))
    if z <= _SERIES_MAX_Z or terminating or gap < 1e-6 or (gap < 0.05 and z <= 0.999):
        return _series_2f1(a, b, c, z)
    w = 1.0 - z
    gc = math.gamma(c)
    first = gc * math.gamma(s) * _rgamma(c - a) * _rgamma(c - b)
    second = gc * math.gamma(-s) * _rgamma(a) * _rgamma(b)
    total = 0.0
    if first != 0.0:
        total += first * _series_2f1(a, b, 1.0 - s, w)
    if second != 0.0:
        total += second * w**s * _series_2f1(c - a, c - b, 1.0 + s, w)
    return total


def _run_quad(func, a, b, spec, **kwargs):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        out = integrate.quad(func, a, b, epsabs=spec.abs_tol, epsrel=spec.rel_tol,
                             limit=spec.max_subdivisions, full_output=1, **kwargs)
    value, err = out[0], out[1]
    # QUADPACK flags (roundoff, slow convergence) are tolerated as long as the
    # reported error still meets the contract.
    bound = max(spec.abs_tol, spec.rel_tol * abs(value))
    if not (math.isfinite(value) and err <= bound):
        raise AccuracyError(f"quadrature on [{a}, {b}] failed to converge", value, err)
    return value


def adaptive_quad(f: Callable[[float], float], a: float, b: float,
                  spec: QuadratureSpec = KERNEL_SPEC,
                  points=None) -> float:
    """Integrate ``f`` over ``[a, b]``; ``b`` may be ``math.inf``.

    An infinite upper limit is handled by the substitution ``r = 1/t`` on
    ``[c, inf)`` with ``c > 0``, which turns algebraic tails into algebraic
    behaviour at ``t = 0``. ``points`` are interior break points passed to
    the finite-interval integrator.
    """
    if b == math.inf:
        if a == math.inf:
            return 0.0
        c = a if a > 0 else max(a, 0.0) + 1.0
        head = 0.0
        if c > a:
            pts = [p for p in (points or ()) if a < p < c]
            head = adaptive_quad(f, a, c, spec, points=pts or None)
        tail_pts = sorted(1.0 / p for p in (points or ()) if p > c)
        tail = _run_quad(lambda t: f(1.0 / t) / (t * t), 0.0, 1.0 / c, spec,
                         points=tail_pts or None)
        return head + tail
    if b < a:
        return -adaptive_quad(f, b, a, spec, points)
    if a == b:
        return 0.0
    pts = sorted(p for p in (points or ()) if a < p < b)
    return _run_quad(f, a, b, spec, points=pts or None)


def singular_quad(g: Callable[[float], float], a: float, b: float,
                  exponents: Optional[Tuple[float, float]] = None,
                  spec: QuadratureSpec = KERNEL_SPEC) -> float:
    """Integrate ``(b - x)**alpha * (x - a)**beta * g(x)`` over finite ``[a, b]``.

    ``exponents`` is ``(alpha, beta)``; the algebraic weight is integrated
    exactly by modified Clenshaw-Curtis moments (QUADPACK QAWS), so ``g``
    only needs to be smooth. Note that ``g`` is evaluated at both endpoints.
    """
    if exponents is None:
        exponents = spec.endpoint_exponents or (0.0, 0.0)
    _check_exponents(exponents)
    alpha, beta = exponents
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError("singular_quad needs a finite interval")
    if a == b:
        return 0.0
    if b < a:
        raise ValueError("singular_quad needs a < b")
    if alpha == 0.0 and beta == 0.0:
        return _run_quad(g, a, b, spec)
    # scipy's 'alg' weight is (x - a)**wvar[0] * (b - x)**wvar[1]
    return _run_quad(g, a, b, spec, weight="alg", wvar=(beta, alpha))
