"""Backprojection kernels ``w`` and mollifiers ``psi``.

A kernel is a radial function that is constant on ``[0, 1]`` and, for
``r > 1``, a finite sum of terms ``coef * (r**2 - 1)**alpha * r**beta``.
The power-tail kernels for ``k = 2l`` and ``k = 2l + 1`` are produced
exactly by repeatedly applying the operator ``(1/(2r)) d/dr`` to such term
lists (:func:`halfd_apply`). The X-ray kernel paired with the indicator of
the unit ball has no finite term form for odd ``n`` and is evaluated by
closed form, hypergeometric series, or quadrature (:func:`w_xray_eval`).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence, Tuple

from .numerics import KERNEL_SPEC, adaptive_quad, gamma_fn, gauss_2f1, singular_quad

__all__ = [
    "Dims",
    "Term",
    "Family",
    "ProfileFamily",
    "PiecewiseRadialKernel",
    "RadialProfile",
    "sphere_area",
    "ball_volume",
    "abel_constant",
    "psi_eval",
    "w_xray_eval",
    "xray_scaled",
    "halfd_apply",
    "w_theoremB_build",
    "xray_kernel",
    "kernel_eval",
    "lambda_psi",
    "indicator_profile",
    "power_tail_profile",
    "matching_pair",
    "tilde_pair",
]


@dataclass(frozen=True)
class Dims:
    """Ambient dimension ``n`` and plane dimension ``k`` with ``1 <= k < n``."""

    n: int
    k: int

    def __post_init__(self):
        if self.n < 2 or not (1 <= self.k <= self.n - 1):
            raise ValueError(f"need n >= 2 and 1 <= k < n, got n={self.n}, k={self.k}")
        # guards the Gamma arguments of the power-tail constants
        if self.k % 2 == 0:
            assert self.n / 2 - self.ell > 0
        else:
            assert (self.n - 1) / 2 - self.ell > 0

    @property
    def ell(self) -> int:
        return self.k // 2

    @property
    def codim(self) -> int:
        return self.n - self.k


class Term(NamedTuple):
    coef: float
    alpha: float
    beta: float


class Family(str, enum.Enum):
    THEOREM_A = "theoremA"
    THEOREM_B_EVEN = "theoremB-even"
    THEOREM_B_ODD = "theoremB-odd"
    CUSTOM = "custom"


class ProfileFamily(str, enum.Enum):
    INDICATOR_BALL = "indicator"
    POWER_TAIL = "powertail"


def sphere_area(m: int) -> float:
    """Area of the unit sphere in R^m, i.e. ``2 pi^(m/2) / Gamma(m/2)``."""
    if m < 1:
        raise ValueError(f"sphere_area needs m >= 1, got {m}")
    return 2.0 * math.pi ** (m / 2) / gamma_fn(m / 2)


def ball_volume(m: int) -> float:
    if m < 0:
        raise ValueError(f"ball_volume needs m >= 0, got {m}")
    return math.pi ** (m / 2) / gamma_fn(m / 2 + 1)


def abel_constant(dims: Dims) -> float:
    n, k = dims.n, dims.k
    return sphere_area(k) * sphere_area(n - k) / sphere_area(n)


# --------------------------------------------------------------------------
# mollifiers


@dataclass(frozen=True)
class RadialProfile:
    """Radial mollifier ``psi`` together with its mass ``lam``.

    ``IndicatorBall`` is 1 on the closed unit ball; ``PowerTail`` vanishes
    there and equals ``(r^2 - 1)^ell / r^(n + 2 ell + 1)`` outside.
    """

    family: ProfileFamily
    dims: Dims
    ell: int = 0
    lam: float = field(init=False)

    def __post_init__(self):
        if self.ell < 0:
            raise ValueError("ell must be non-negative")
        object.__setattr__(self, "family", ProfileFamily(self.family))
        object.__setattr__(self, "lam", lambda_psi(self))

    def __call__(self, r: float) -> float:
        return psi_eval(self, r)

    @property
    def knot(self) -> float:
        return 1.0


def indicator_profile(dims: Dims) -> RadialProfile:
    return RadialProfile(ProfileFamily.INDICATOR_BALL, dims)


def power_tail_profile(dims: Dims, ell: int = None) -> RadialProfile:
    return RadialProfile(ProfileFamily.POWER_TAIL, dims, dims.ell if ell is None else ell)


def psi_eval(profile: RadialProfile, r: float) -> float:
    if r < 0:
        raise ValueError(f"psi is defined for r >= 0, got {r}")
    if profile.family is ProfileFamily.INDICATOR_BALL:
        return 1.0 if r <= 1.0 else 0.0
    if r <= 1.0:
        return 0.0
    ell, n = profile.ell, profile.dims.n
    return ((r - 1.0) * (r + 1.0)) ** ell / r ** (n + 2 * ell + 1)


def lambda_psi(profile: RadialProfile) -> float:
    """Total mass of ``x -> psi(|x|)`` over R^n, in closed form."""
    n = profile.dims.n
    if profile.family is ProfileFamily.INDICATOR_BALL:
        return ball_volume(n)
    ell = profile.ell
    return sphere_area(n) * math.sqrt(math.pi) * math.factorial(ell) / (2.0 * gamma_fn(ell + 1.5))


# --------------------------------------------------------------------------
# the X-ray kernel (k = 1, indicator mollifier)


def _xray_closed_scaled(n: int, r: float) -> float:
    q = math.sqrt((r - 1.0) * (r + 1.0))
    if n == 2:
        return -1.0 / (q + r)
    if n == 3:
        return 2.0 / math.pi * (q * math.asin(1.0 / r) - 1.0)
    if n == 4:
        return -1.0 / (2.0 * r * (r + q) ** 2)
    raise ValueError(f"closed form is available only for n in (2, 3, 4), got n={n}")


def _xray_hyper_scaled(n: int, r: float) -> float:
    K = math.gamma((n - 1) / 2) / (2.0 * math.sqrt(math.pi) * math.gamma(n / 2 + 1))
    if r == 1.0:
        # limit of sqrt(1 - z) F(3/2, n/2; n/2 + 1; z) as z -> 1
        return -K * math.gamma(n / 2 + 1) * math.gamma(0.5) / (math.gamma(1.5) * math.gamma(n / 2))
    q = math.sqrt((r - 1.0) * (r + 1.0))
    return -K * q * r ** (-n) * gauss_2f1(1.5, n / 2, n / 2 + 1, 1.0 / (r * r))


def _xray_quad_scaled(n: int, r: float, spec=KERNEL_SPEC) -> float:
    cn = math.gamma((n - 1) / 2) / math.gamma(n / 2)
    pref = -cn * r ** (3 - n) / (2.0 * math.sqrt(math.pi))
    eps = (r - 1.0) * (r + 1.0)
    q = math.sqrt(eps)
    m = n / 2 - 1
    if eps >= 0.05:
        # direct: integral_0^1 v^(n/2-1) (r^2 - v)^(-3/2) dv
        inner = singular_quad(lambda v: (r * r - v) ** -1.5, 0.0, 1.0, (0.0, m), spec)
        return pref * q * inner
    # near r = 1: integrate by parts so the (r^2 - 1)^(-1/2) blow-up is explicit,
    # then substitute t^2 = r^2 - v in the remaining integral
    rest = 2.0 / r if m == 0 else 0.0
    if m > 0:
        rest += 4.0 * m * singular_quad(lambda t: (r + t) ** (m - 1), q, r, (m - 1, 0.0), spec)
    return pref * (2.0 - q * rest)


_XRAY_METHODS = {
    "closed": _xray_closed_scaled,
    "hypergeometric": _xray_hyper_scaled,
    "quadrature": _xray_quad_scaled,
}


def _default_xray_method(n: int) -> str:
    return "closed" if n in (2, 3, 4) else "hypergeometric"


def xray_scaled(n: int, r: float, method: str = None) -> float:
    """``sqrt(r^2 - 1) * w(r)`` for the X-ray kernel, finite down to ``r = 1``."""
    if r < 1.0:
        raise ValueError("xray_scaled is defined for r >= 1")
    method = method or _default_xray_method(n)
    try:
        fn = _XRAY_METHODS[method]
    except KeyError:
        raise ValueError(f"unknown method {method!r}") from None
    return fn(n, r)


def w_xray_eval(n: int, r: float, method: str = None) -> float:
    """Kernel paired with the unit-ball indicator for the X-ray transform in R^n.

    ``method`` is one of ``"closed"`` (n = 2, 3, 4 only),
    ``"hypergeometric"`` or ``"quadrature"``; the default is the closed form
    where available. Values for ``r > 1`` are computed as
    ``xray_scaled(n, r) / sqrt(r^2 - 1)``, which keeps the square-root
    blow-up at ``r = 1`` free of cancellation.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if r < 0:
        raise ValueError(f"r must be non-negative, got {r}")
    if method == "closed" and n not in (2, 3, 4):
        raise ValueError(f"closed form is available only for n in (2, 3, 4), got n={n}")
    if r <= 1.0:
        return 1.0
    return xray_scaled(n, r, method) / math.sqrt((r - 1.0) * (r + 1.0))


# --------------------------------------------------------------------------
# term algebra


def _merge(terms, tol=1e-14):
    merged = []
    for t in terms:
        for i, u in enumerate(merged):
            if abs(u.alpha - t.alpha) <= tol and abs(u.beta - t.beta) <= tol:
                merged[i] = Term(u.coef + t.coef, u.alpha, u.beta)
                break
        else:
            merged.append(Term(*t))
    return [t for t in merged if t.coef != 0.0]


def halfd_apply(terms: Sequence[Tuple[float, float, float]]) -> list:
    """Apply ``(1/(2r)) d/dr`` to ``sum coef (r^2-1)^alpha r^beta``.

    Uses ``(1/(2r)) d/dr [(r^2-1)^a r^b] = a (r^2-1)^(a-1) r^b + (b/2) (r^2-1)^a r^(b-2)``.
    """
    out = []
    for coef, alpha, beta in terms:
        out.append(Term(coef * alpha, alpha - 1.0, beta))
        out.append(Term(coef * beta / 2.0, alpha, beta - 2.0))
    return _merge([t for t in out if t.coef != 0.0])


@dataclass(frozen=True)
class PiecewiseRadialKernel:
    inside_value: float
    outside_terms: Tuple[Term, ...]
    family: Family
    dims: Dims
    method: str = None  # X-ray evaluation method, ignored for term kernels

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        object.__setattr__(self, "outside_terms", tuple(Term(*t) for t in self.outside_terms))
        if any(t.alpha <= -1 for t in self.outside_terms):
            raise ValueError("all alpha must exceed -1")

    def __call__(self, r: float) -> float:
        return kernel_eval(self, r)

    def scaled(self, r: float) -> float:
        """``sqrt(r^2 - 1) * w(r)`` for ``r >= 1``; finite at ``r = 1``."""
        if self.family is Family.THEOREM_A:
            return xray_scaled(self.dims.n, r, self.method)
        if r < 1.0:
            raise ValueError("scaled form is defined for r >= 1")
        e = (r - 1.0) * (r + 1.0)
        # 0.0 ** 0.0 == 1.0 picks up the alpha = -1/2 terms at r = 1
        return math.fsum(c * e ** (a + 0.5) * r**b for c, a, b in self.outside_terms)


def kernel_eval(kernel: PiecewiseRadialKernel, r: float) -> float:
    if r < 0:
        raise ValueError(f"r must be non-negative, got {r}")
    if r <= 1.0:
        return kernel.inside_value
    if kernel.family is Family.THEOREM_A:
        return w_xray_eval(kernel.dims.n, r, kernel.method)
    e = (r - 1.0) * (r + 1.0)
    value = math.fsum(c * e**a * r**b for c, a, b in kernel.outside_terms)
    if math.isfinite(value):
        return value
    # only reachable through alpha < 0 as r -> 1+: report a signed infinity
    lead = min(kernel.outside_terms, key=lambda t: t.alpha)
    return math.copysign(math.inf, lead.coef)


def xray_kernel(n: int, method: str = None) -> PiecewiseRadialKernel:
    return PiecewiseRadialKernel(1.0, (), Family.THEOREM_A, Dims(n, 1), method)


def w_theoremB_build(dims: Dims) -> PiecewiseRadialKernel:
    """Kernel paired with the power-tail mollifier for any ``1 <= k < n``."""
    n, k, ell = dims.n, dims.k, dims.ell
    if k % 2 == 0:
        terms = [Term(1.0, float(ell), -2.0 * ell - 3.0)]
        applications, shift = ell, 2 + 2 * ell - n
        const = gamma_fn(n / 2 - ell) / gamma_fn(n / 2)
        family = Family.THEOREM_B_EVEN
    else:
        terms = [Term(1.0, ell + 0.5, -2.0 * ell - 2.0)]
        applications, shift = ell + 1, 3 + 2 * ell - n
        const = (gamma_fn((n - 1) / 2 - ell) * math.factorial(ell)
                 / (gamma_fn(n / 2) * gamma_fn(ell + 1.5)))
        family = Family.THEOREM_B_ODD
    for _ in range(applications):
        terms = halfd_apply(terms)
    terms = [Term(const * c, a, b + shift) for c, a, b in terms]
    return PiecewiseRadialKernel(0.0, tuple(terms), family, dims)


def matching_pair(dims: Dims, family: str):
    """``(kernel, profile)`` for ``family`` in ``{"theoremA", "theoremB"}``."""
    if family in ("theoremA", Family.THEOREM_A):
        if dims.k != 1:
            raise ValueError("the indicator mollifier admits a kernel only for k = 1")
        return xray_kernel(dims.n), indicator_profile(dims)
    if family in ("theoremB", Family.THEOREM_B_EVEN, Family.THEOREM_B_ODD):
        return w_theoremB_build(dims), power_tail_profile(dims)
    raise ValueError(f"unknown family {family!r}")


def tilde_pair(kernel: PiecewiseRadialKernel,
               profile: RadialProfile) -> Tuple[Callable[[float], float], Callable[[float], float]]:
    """Kernel and mollifier after the substitution ``u = r^2``."""
    if kernel.dims != profile.dims:
        raise ValueError("kernel and profile have different dimensions")
    n, k = kernel.dims.n, kernel.dims.k
    scale = 2.0 / (abel_constant(kernel.dims) * gamma_fn(k / 2))

    def w_tilde(u):
        if u <= 0:
            raise ValueError("u must be positive")
        return u ** ((n - k) / 2 - 1) * kernel_eval(kernel, math.sqrt(u))

    def psi_tilde(u):
        if u <= 0:
            raise ValueError("u must be positive")
        return scale * u ** (n / 2 - 1) * psi_eval(profile, math.sqrt(u))

    return w_tilde, psi_tilde


def lambda_psi_quadrature(profile: RadialProfile, spec=KERNEL_SPEC) -> float:
    """``sigma_(n-1) * int_0^inf psi(r) r^(n-1) dr`` by quadrature."""
    n = profile.dims.n
    f = lambda r: psi_eval(profile, r) * r ** (n - 1)
    if profile.family is ProfileFamily.INDICATOR_BALL:
        return sphere_area(n) * adaptive_quad(f, 0.0, 1.0, spec)
    return sphere_area(n) * adaptive_quad(f, 1.0, math.inf, spec)
