"""Truncated q-series against independent float/mpmath oracles."""
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from daha_hc.errors import InsufficientCutoffError, ParameterError, PoleError
from daha_hc.qseries import (
    TruncatedValue, _shell_tail, infinite_product, mu_coefficients, mu_ct_product,
    sigma_series_a1, sigma_star_value, sigma_value, theta_value,
)

from conftest import params_for

mpmath.mp.dps = 40


def _mpf(x: Fraction):
    return mpmath.mpf(x.numerator) / x.denominator


@pytest.mark.parametrize("X", [Fraction(3), Fraction(-5, 2), Fraction(1, 7)])
def test_theta_triple_product(a1, X):
    # A1: θ(X) = Σ v^{n²} X^n = Π (1 - v^{2m})(1 + X v^{2m-1})(1 + X^{-1} v^{2m-1})
    v, x = _mpf(a1.v), _mpf(X)
    want = mpmath.nprod(lambda m: (1 - v ** (2 * m)) * (1 + x * v ** (2 * m - 1))
                        * (1 + v ** (2 * m - 1) / x), [1, mpmath.inf])
    got = theta_value(a1.point_numeric([X]))
    assert got.tail < Fraction(1, 10 ** 30)
    assert abs(_mpf(got.value) - want) < mpmath.mpf(10) ** -30 * (1 + abs(want))


@pytest.mark.parametrize("L", [Fraction(3, 2), Fraction(-2, 5), Fraction(7)])
def test_sigma_q_pochhammer(a1, L):
    q, t = _mpf(a1.q), _mpf(a1.t[1])
    z = _mpf(L) ** 2
    got = sigma_value(a1.point_numeric([L]))
    want = mpmath.qp(t * z, q) / mpmath.qp(z, q)
    assert abs(_mpf(got.value) - want) < mpmath.mpf(10) ** -30 + _mpf(got.tail)
    star = sigma_star_value(a1.point_numeric([L]))
    want = mpmath.qp(t * q / z, q) / mpmath.qp(q / z, q)
    assert abs(_mpf(star.value) - want) < mpmath.mpf(10) ** -30 + _mpf(star.tail)


def test_sigma_series_matches_product(a1):
    L = Fraction(1, 2)
    s = sigma_series_a1(L, a1)
    p = sigma_value(a1.point_numeric([L]))
    assert abs(s.value - p.value) <= s.tail + p.tail


def test_sigma_pole(a1):
    # Λ_α = q^{-2}: the factor 1 - q^2 Λ_α vanishes
    with pytest.raises(PoleError):
        sigma_value(a1.point_numeric([Fraction(16)]))


def _torus_mu(params, n: int = 96, jmax: int = 80) -> float:
    rs = params.rs
    grids = np.meshgrid(*[np.exp(2j * np.pi * np.arange(n) / n)] * rs.rank, indexing="ij")
    mu = np.ones_like(grids[0])
    for a in rs.positive_roots:
        xa = np.ones_like(grids[0])
        for g, e in zip(grids, a):
            xa = xa * g ** e
        t, qa = float(params.t_of(a)), float(params.q_of(a))
        for j in range(jmax):
            z, zi = qa ** j * xa, qa ** (j + 1) / xa
            mu *= (1 - z) / (1 - t * z) * (1 - zi) / (1 - t * zi)
    return float(mu.mean().real)


@pytest.mark.parametrize("label", ["A1", "A2", "B2"])
def test_mu_constant_term_oracle(label):
    p = params_for(label)
    prod = mu_ct_product(p)
    assert abs(float(prod.value) - _torus_mu(p)) < 1e-12
    assert prod.tail < Fraction(1, 10 ** 12)


def test_mu_expansion_agrees(a1, a2):
    for p in (a1, a2):
        mu = mu_coefficients(p)
        prod = mu_ct_product(p)
        assert abs(mu.ct.value - prod.value) <= mu.ct.tail + prod.tail <= Fraction(1, 10 ** 12)


def test_mu_needs_convergence():
    with pytest.raises(ParameterError):
        mu_coefficients(params_for("A1", Fraction(2), Fraction(1, 3)))


def test_infinite_product_exact_zero():
    # (1 - r^2 · r^{-2}) = 0 at j = 2
    r = Fraction(1, 3)
    val = infinite_product([(r ** -2, Fraction(0))], r, 0, 20)
    assert val.value == 0 and val.tail == 0


def test_shell_tail_geometric():
    shells = {s: Fraction(1, 2 ** s) for s in range(20)}
    tail = _shell_tail(shells, "demo")
    assert Fraction(1, 2 ** 20) <= tail <= Fraction(1, 2 ** 18)


def test_shell_tail_refuses_growth():
    with pytest.raises(InsufficientCutoffError):
        _shell_tail({s: Fraction(s + 1) for s in range(20)}, "demo")
    with pytest.raises(InsufficientCutoffError):
        _shell_tail({0: Fraction(1), 1: Fraction(1, 2)}, "demo")


def test_truncated_arithmetic():
    a = TruncatedValue(Fraction(1), Fraction(1, 100))
    b = TruncatedValue(Fraction(2), Fraction(1, 50))
    assert (a + b).contains(Fraction(3))
    assert (a * b).tail >= Fraction(1, 25)
    assert (a / b).contains(Fraction(1, 2))
    assert TruncatedValue.exact(5).tail == 0
