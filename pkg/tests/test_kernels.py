import math

import numpy as np
import pytest
import sympy as sp

from kplane.kernels import (Dims, Family, PiecewiseRadialKernel, ProfileFamily, RadialProfile, Term,
                            abel_constant, halfd_apply, indicator_profile, kernel_eval, lambda_psi,
                            lambda_psi_quadrature, matching_pair, power_tail_profile, psi_eval,
                            sphere_area, tilde_pair, w_theoremB_build, w_xray_eval, xray_kernel)
from kplane.numerics import gamma_fn


def test_dims_validation():
    assert Dims(5, 3).ell == 1
    assert Dims(6, 4).ell == 2
    for n, k in [(1, 1), (3, 3), (3, 0), (4, 5)]:
        with pytest.raises(ValueError):
            Dims(n, k)


@pytest.mark.parametrize("m, expected", [(1, 2.0), (2, 2 * math.pi), (3, 4 * math.pi)])
def test_sphere_area(m, expected):
    assert sphere_area(m) == pytest.approx(expected, rel=1e-14)


def test_sphere_area_domain():
    with pytest.raises(ValueError):
        sphere_area(0)


@pytest.mark.parametrize("n, k, expected", [(2, 1, 2 / math.pi), (3, 1, 1.0), (3, 2, 1.0)])
def test_abel_constant(n, k, expected):
    assert abel_constant(Dims(n, k)) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("n", range(2, 11))
def test_indicator_branch_constant_is_one(n):
    for k in range(1, n):
        c = abel_constant(Dims(n, k))
        value = 2 * gamma_fn(n / 2) / (c * gamma_fn(k / 2) * gamma_fn((n - k) / 2))
        assert value == pytest.approx(1.0, abs=1e-12)


def test_psi_values():
    ball = indicator_profile(Dims(2, 1))
    assert psi_eval(ball, 0.3) == 1.0
    assert psi_eval(ball, 1.0) == 1.0
    assert psi_eval(ball, 2.0) == 0.0
    tail = power_tail_profile(Dims(4, 2))
    # (r^2 - 1)^ell / r^(n + 2 ell + 1) at n=4, ell=1, r=2
    assert psi_eval(tail, 2.0) == pytest.approx(3 / 128, rel=1e-15)
    assert psi_eval(tail, 0.9) == 0.0
    with pytest.raises(ValueError):
        psi_eval(tail, -0.1)


def test_xray_inside_and_closed_forms():
    assert w_xray_eval(2, 0.5) == 1.0
    assert w_xray_eval(2, math.sqrt(2)) == pytest.approx(1 - math.sqrt(2), rel=1e-14)
    n3 = 2 / math.pi * (math.asin(0.5) - 1 / math.sqrt(3))
    assert n3 == pytest.approx(-0.0342193, abs=5e-7)
    for method in ("closed", "hypergeometric", "quadrature"):
        assert w_xray_eval(3, 2.0, method) == pytest.approx(n3, rel=1e-10)
        assert w_xray_eval(2, math.sqrt(2), method) == pytest.approx(1 - math.sqrt(2), rel=1e-10)


def test_xray_closed_form_only_low_dimensions():
    with pytest.raises(ValueError):
        w_xray_eval(5, 2.0, "closed")


def test_xray_near_one_stays_finite():
    r = 1.0 + 1e-13
    for n in (2, 3, 4, 5):
        for method in ("hypergeometric", "quadrature") + (("closed",) if n <= 4 else ()):
            value = w_xray_eval(n, r, method)
            assert math.isfinite(value) and value < -1e5


@pytest.mark.parametrize("n", [2, 3, 4, 5, 7])
def test_xray_kernel_negative_outside(n):
    kernel = xray_kernel(n)
    assert kernel_eval(kernel, 0.0) == 1.0 and kernel_eval(kernel, 1.0) == 1.0
    for r in np.geomspace(1.0001, 1e3, 80):
        assert kernel_eval(kernel, r) < 0


def test_halfd_examples():
    assert halfd_apply([(1, 1, -5)]) == [Term(1, 0, -5), Term(-2.5, 1, -7)]
    assert halfd_apply([(1, 0, -3.0)]) == [Term(-1.5, 0, -5.0)]
    assert halfd_apply([(1, 0.5, 0)]) == [Term(0.5, -0.5, 0)]


def test_halfd_merges_like_terms():
    out = halfd_apply([(1.0, 1.0, 0.0), (2.0, 0.0, 2.0)])
    # 1*(r^2-1)^0 r^0 from the first term and (2*2/2) r^0 from the second
    assert out == [Term(3.0, 0.0, 0.0)]


def test_halfd_matches_derivative():
    terms = [(0.7, 1.5, -4.0), (-1.2, 0.5, -2.0)]
    f = lambda r: sum(c * (r * r - 1) ** a * r**b for c, a, b in terms)
    out = halfd_apply(terms)
    for r in (1.3, 2.0, 5.0):
        h = 1e-5 * r
        fd = (f(r + h) - f(r - h)) / (2 * h) / (2 * r)
        assert sum(c * (r * r - 1) ** a * r**b for c, a, b in out) == pytest.approx(fd, rel=1e-7)


def test_theoremB_even_example():
    kernel = w_theoremB_build(Dims(4, 2))
    assert kernel.family is Family.THEOREM_B_EVEN
    for r in (1.1, 1.5, 2.0, 7.0):
        assert kernel_eval(kernel, r) == pytest.approx((5 - 3 * r * r) / (2 * r**7), rel=1e-13)


def test_theoremB_odd_lowest_order():
    kernel = w_theoremB_build(Dims(2, 1))
    assert kernel.family is Family.THEOREM_B_ODD
    for r in (1.1, 1.5, 2.0, 7.0):
        expected = (2 - r * r) / (r**3 * math.sqrt(r * r - 1))
        assert kernel_eval(kernel, r) == pytest.approx(expected, rel=1e-13)


@pytest.mark.parametrize("n, k", [(2, 1), (3, 2), (4, 2), (6, 2), (4, 3), (5, 3), (6, 4), (6, 5),
                                  (8, 6), (9, 7)])
def test_theoremB_against_symbolic_operator(n, k):
    r = sp.symbols("r", positive=True)
    ell = k // 2
    if k % 2 == 0:
        f = (r**2 - 1) ** ell / r ** (2 * ell + 3)
        times, prefactor = ell, sp.gamma(sp.Rational(n, 2) - ell) / sp.gamma(sp.Rational(n, 2)) * r ** (2 + 2 * ell - n)
    else:
        f = (r**2 - 1) ** (ell + sp.Rational(1, 2)) / r ** (2 * ell + 2)
        times = ell + 1
        prefactor = (sp.gamma(sp.Rational(n - 1, 2) - ell) * sp.factorial(ell)
                     / (sp.gamma(sp.Rational(n, 2)) * sp.gamma(ell + sp.Rational(3, 2)))) * r ** (3 + 2 * ell - n)
    for _ in range(times):
        f = sp.diff(f, r) / (2 * r)
    w = sp.lambdify(r, prefactor * f)
    kernel = w_theoremB_build(Dims(n, k))
    for x in (1.05, 1.7, 3.0, 11.0):
        assert kernel_eval(kernel, x) == pytest.approx(float(w(x)), rel=1e-11, abs=1e-15)


@pytest.mark.parametrize("n, k", [(3, 2), (4, 2), (6, 2), (4, 3), (5, 3), (6, 4), (6, 5), (3, 1)])
def test_theoremB_vanishes_inside_and_decays(n, k):
    kernel = w_theoremB_build(Dims(n, k))
    assert kernel.inside_value == 0.0
    assert kernel_eval(kernel, 0.5) == 0.0 and kernel_eval(kernel, 1.0) == 0.0
    scaled = [abs(kernel_eval(kernel, r)) * r**3 for r in np.geomspace(10, 1e4, 60)]
    assert max(scaled) < 10 * scaled[0] + 1e-12


@pytest.mark.parametrize("n, k", [(2, 1), (3, 1), (3, 2), (5, 3), (6, 4), (7, 6)])
def test_theoremB_decay_exponent(n, k):
    # every term has total degree 2 alpha + beta = -n (k odd) or -n - 1 (k even)
    kernel = w_theoremB_build(Dims(n, k))
    p = n if k % 2 else n + 1
    assert all(abs(2 * t.alpha + t.beta + p) < 1e-14 for t in kernel.outside_terms)
    tail = [kernel_eval(kernel, r) * r**p for r in (1e3, 1e4, 1e5)]
    assert tail[2] == pytest.approx(tail[1], rel=1e-6) and tail[1] != 0.0


def test_kernel_eval_examples():
    kernel = w_theoremB_build(Dims(4, 2))
    assert kernel_eval(kernel, math.sqrt(5 / 3)) == pytest.approx(0.0, abs=1e-15)
    assert kernel_eval(kernel, 1.0 + 1e-12) == pytest.approx(1.0, abs=1e-10)
    assert kernel_eval(kernel, 1.0) == 0.0
    assert kernel_eval(xray_kernel(4), math.sqrt(2)) == pytest.approx(1 - 3 / (2 * math.sqrt(2)), rel=1e-12)
    assert 1 - 3 / (2 * math.sqrt(2)) == pytest.approx(-0.0606602, abs=1e-7)


def test_kernel_eval_reports_unbounded_values_as_signed_infinity():
    kernel = PiecewiseRadialKernel(0.0, [(-2.0, -0.5, 0.0)], Family.CUSTOM, Dims(3, 1))
    r = 1.0 + 2 ** -52
    assert kernel_eval(kernel, r) < -1e7
    huge = PiecewiseRadialKernel(0.0, [(1e300, -0.9, 0.0)], Family.CUSTOM, Dims(3, 1))
    assert kernel_eval(huge, r) == math.inf


def test_kernel_rejects_nonintegrable_terms():
    with pytest.raises(ValueError):
        PiecewiseRadialKernel(0.0, [(1.0, -1.0, 0.0)], Family.CUSTOM, Dims(3, 1))


@pytest.mark.parametrize("n", [2, 3, 5])
def test_scaled_form_consistent(n):
    for kernel in (xray_kernel(n), w_theoremB_build(Dims(n, n - 1))):
        for r in (1.01, 1.5, 4.0):
            assert kernel.scaled(r) == pytest.approx(math.sqrt(r * r - 1) * kernel_eval(kernel, r), rel=1e-12)


def test_lambda_examples():
    assert lambda_psi(indicator_profile(Dims(2, 1))) == pytest.approx(math.pi, rel=1e-14)
    assert lambda_psi(RadialProfile(ProfileFamily.POWER_TAIL, Dims(2, 1), 0)) == pytest.approx(2 * math.pi, rel=1e-14)
    tail = RadialProfile(ProfileFamily.POWER_TAIL, Dims(4, 1), 1)
    assert tail.lam == pytest.approx(4 * math.pi**2 / 3, rel=1e-14)
    assert tail.lam == pytest.approx(13.1594725, abs=1e-7)
    assert lambda_psi_quadrature(tail) == pytest.approx(tail.lam, rel=1e-10)


def test_matching_pair():
    kernel, profile = matching_pair(Dims(3, 1), "theoremA")
    assert kernel.family is Family.THEOREM_A and profile.family is ProfileFamily.INDICATOR_BALL
    kernel, profile = matching_pair(Dims(5, 3), "theoremB")
    assert profile.ell == 1 and kernel.family is Family.THEOREM_B_ODD
    with pytest.raises(ValueError):
        matching_pair(Dims(4, 2), "theoremA")


def test_tilde_pair_examples():
    dims = Dims(2, 1)
    w_t, psi_t = tilde_pair(*matching_pair(dims, "theoremA"))
    for u in (0.04, 0.5, 1.0):
        assert w_t(u) == pytest.approx(u**-0.5, rel=1e-15)
    for n in (2, 3, 6):
        d = Dims(n, 1)
        _, psi_t = tilde_pair(*matching_pair(d, "theoremA"))
        c = abel_constant(d)
        for u in (0.2, 0.9):
            assert psi_t(u) == pytest.approx(2 * u ** (n / 2 - 1) / (c * gamma_fn(0.5)), rel=1e-14)
    w_t, psi_t = tilde_pair(*matching_pair(Dims(4, 2), "theoremB"))
    assert psi_t(0.5) == 0.0 and psi_t(1.0) == 0.0
    with pytest.raises(ValueError):
        w_t(0.0)
    with pytest.raises(ValueError):
        tilde_pair(xray_kernel(3), power_tail_profile(Dims(4, 2)))
