import math

import numpy as np
import pytest

from kplane.abel import (abel_lhs, indicator_infeasibility, log_grid, residual_check,
                         riemann_liouville)
from kplane.kernels import Dims, matching_pair, psi_eval, tilde_pair
from kplane.numerics import QuadratureSpec, gamma_fn


@pytest.mark.parametrize("u", [0.3, 1.0, 4.5])
def test_riemann_liouville_constants(u):
    assert riemann_liouville(lambda v: 1.0, 1.0, 0.0, u) == pytest.approx(u, rel=1e-12)
    assert riemann_liouville(lambda v: 1.0, 0.5, 0.0, u) == pytest.approx(2 * math.sqrt(u / math.pi), rel=1e-12)


def test_riemann_liouville_shifted_lower_limit():
    # I^alpha_{1+} of (v - 1) is (u - 1)^(alpha + 1) / Gamma(alpha + 2)
    got = riemann_liouville(lambda v: v - 1.0, 1.5, 1.0, 3.0)
    assert got == pytest.approx(2.0**2.5 / gamma_fn(3.5), rel=1e-12)


@pytest.mark.parametrize("u", [0.5, 1.0, 2.0])
def test_riemann_liouville_semigroup_half_half(u):
    half = lambda v: riemann_liouville(lambda s: s, 0.5, 0.0, v) if v > 0 else 0.0
    twice = riemann_liouville(half, 0.5, 0.0, u)
    once = riemann_liouville(lambda s: s, 1.0, 0.0, u)
    assert abs(twice - once) <= 1e-8
    assert once == pytest.approx(u * u / 2, rel=1e-12)


@pytest.mark.parametrize("alpha, beta", [(0.5, 0.5), (1.0, 0.5)])
@pytest.mark.parametrize("g", [math.exp, lambda v: math.cos(2 * v)])
def test_riemann_liouville_semigroup(alpha, beta, g):
    inner = lambda v: riemann_liouville(g, beta, 0.0, v) if v > 0 else 0.0
    for u in (0.7, 1.9):
        composed = riemann_liouville(inner, alpha, 0.0, u)
        direct = riemann_liouville(g, alpha + beta, 0.0, u)
        assert abs(composed - direct) <= 1e-7


def test_riemann_liouville_domain():
    with pytest.raises(ValueError):
        riemann_liouville(lambda v: 1.0, 0.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        riemann_liouville(lambda v: 1.0, 0.5, 1.0, 1.0)


def test_abel_lhs_examples():
    d = Dims(2, 1)
    kernel, _ = matching_pair(d, "theoremA")
    assert abel_lhs(kernel, d, 0.5) == pytest.approx(1.0, abs=1e-12)
    d = Dims(3, 1)
    kernel, _ = matching_pair(d, "theoremA")
    assert abel_lhs(kernel, d, 2.0) == pytest.approx(0.0, abs=1e-12)
    d = Dims(4, 2)
    kernel, profile = matching_pair(d, "theoremB")
    assert abel_lhs(kernel, d, 2.0) == pytest.approx(3 / 128, abs=1e-12)
    assert psi_eval(profile, 2.0) == pytest.approx(3 / 128, rel=1e-15)


def test_log_grid_avoids_one():
    grid = log_grid(0.5, 2.0, 5)
    assert all(abs(r - 1.0) >= 1e-3 - 1e-15 for r in grid)
    assert 1.001 in grid
    assert len(log_grid()) == 30


@pytest.mark.parametrize("n, k, family", [(2, 1, "theoremA"), (5, 3, "theoremB"), (3, 2, "theoremB")])
def test_residual_check_examples(n, k, family):
    d = Dims(n, k)
    kernel, profile = matching_pair(d, family)
    report = residual_check(kernel, profile, d, log_grid())
    assert report.complete and not report.failures
    assert len(report.lhs) == len(report.rhs) == len(report.grid) == 30
    assert report.max_abs_err <= 1e-6
    assert report.max_abs_err == pytest.approx(float(np.max(report.abs_errors)))


def test_residual_check_rejects_wrong_pair():
    # the power-tail kernel against the indicator mollifier is not a solution
    d = Dims(3, 1)
    kernel, _ = matching_pair(d, "theoremB")
    _, ball = matching_pair(d, "theoremA")
    report = residual_check(kernel, ball, d, log_grid())
    assert report.max_abs_err > 0.1


def test_residual_check_records_failures():
    d = Dims(3, 1)
    kernel, profile = matching_pair(d, "theoremA")
    spec = QuadratureSpec(1e-15, 1e-15, max_subdivisions=2)
    report = residual_check(kernel, profile, d, [0.5, 1.5, 3.0], spec)
    assert report.failures
    assert not report.complete
    assert len(report.lhs) == 3


@pytest.mark.parametrize("n, k, family", [(2, 1, "theoremA"), (4, 1, "theoremA"), (4, 2, "theoremB"),
                                          (5, 3, "theoremB"), (6, 5, "theoremB")])
def test_two_quadrature_paths_agree(n, k, family):
    d = Dims(n, k)
    kernel, profile = matching_pair(d, family)
    w_t, psi_t = tilde_pair(kernel, profile)
    for r in (0.3, 0.999, 1.001, 2.5, 9.0):
        u = r * r
        fractional = riemann_liouville(w_t, k / 2, 0.0, u, points=[1.0])
        assert abs(fractional - psi_t(u)) <= 1e-6
        # abel_lhs is psi(r); the fractional form is psi~(u) = scale * u^(n/2-1) psi(r)
        scale = psi_t(u) / psi_eval(profile, r) if psi_eval(profile, r) else None
        if scale:
            assert fractional / scale == pytest.approx(abel_lhs(kernel, d, r), abs=1e-6)


@pytest.mark.parametrize("n, k, expected", [
    (4, 2, -1.0),
    (6, 2, -0.5),
    (5, 3, -4 / (3 * math.sqrt(math.pi))),
])
def test_infeasibility_examples(n, k, expected):
    assert indicator_infeasibility(Dims(n, k)) == pytest.approx(expected, rel=1e-12)


def test_infeasibility_bounded_away_from_zero():
    # |value| = Gamma((n-k)/2) / Gamma(n/2) and Gamma >= 0.8856 on (0, inf)
    gamma_min = 0.8856031944108887
    for n in range(3, 11):
        for k in range(2, n):
            value = indicator_infeasibility(Dims(n, k))
            assert abs(value) >= gamma_min / gamma_fn(n / 2) - 1e-15
            assert value == pytest.approx(-gamma_fn((n - k) / 2) / gamma_fn(n / 2), rel=1e-10)


def test_infeasibility_can_drop_below_reciprocal_gamma():
    # n - k = 3 puts Gamma(3/2) < 1 in the numerator
    assert abs(indicator_infeasibility(Dims(5, 2))) < 1 / gamma_fn(2.5)


def test_infeasibility_needs_k_at_least_two():
    with pytest.raises(ValueError):
        indicator_infeasibility(Dims(3, 1))
