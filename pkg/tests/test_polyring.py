from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from daha_hc.errors import ParameterError, SpecializationError
from daha_hc.polyring import LaurentPoly, ParamSpec, SpectralPoint, as_fraction, fmt
from daha_hc.rootdata import build_root_system

from conftest import params_for

coefs = st.fractions(min_value=-5, max_value=5, max_denominator=7)


def polys(rank: int):
    mono = st.tuples(*[st.integers(-3, 3)] * rank)
    return st.dictionaries(mono, coefs, max_size=5).map(lambda d: LaurentPoly(d, rank))


def test_param_values(a1, a2):
    assert a1.q == Fraction(1, 16) and a1.t[1] == Fraction(1, 81)
    assert a2.q == Fraction(1, 64) and a2.t[1] == Fraction(1, 729)
    assert a1.t_half(1) ** 2 == a1.t[1]


def test_two_lengths():
    p = ParamSpec(build_root_system("B2"), Fraction(1, 2), [Fraction(1, 3), Fraction(1, 5)])
    assert p.t == {1: Fraction(1, 9), 2: Fraction(1, 625)}


@pytest.mark.parametrize("v,u", [(0, Fraction(1, 3)), (1, Fraction(1, 3)), (Fraction(1, 2), 0)])
def test_bad_params(v, u):
    with pytest.raises(ParameterError):
        params_for("A1", v, u)


def test_wrong_number_of_bases():
    with pytest.raises(ParameterError):
        ParamSpec(build_root_system("B2"), Fraction(1, 2), [Fraction(1, 3)])


def test_rationals_round_trip():
    assert fmt(as_fraction("3/7")) == "3/7"
    assert as_fraction(2) == Fraction(2)


def test_sharp_points_a1(a1):
    # Λ_n = t^{1/2} q^{n/2} for n > 0 and t^{-1/2} q^{-|n|/2} otherwise
    th, q = a1.t_half(1), a1.q
    for n in range(1, 5):
        assert a1.point_sharp((n,))((1,)) == th * a1.qpow(Fraction(n, 2))
        assert a1.point_sharp((-n,))((1,)) == 1 / (th * a1.qpow(Fraction(n, 2)))
    assert a1.point_sharp((0,))((1,)) == 1 / th
    assert a1.point_rho(-1)((2,)) == 1 / a1.t[1]
    assert q == a1.qpow(1)


def test_spectral_point_validation(a1):
    with pytest.raises(SpecializationError):
        SpectralPoint(a1, [(Fraction(2), (1, 1))])
    with pytest.raises(SpecializationError):
        SpectralPoint(a1, [(0, (1,))])


@settings(max_examples=60, deadline=None)
@given(polys(2), polys(2), polys(2))
def test_ring_axioms(f, g, h):
    assert (f + g) * h == f * h + g * h
    assert (f * g) * h == f * (g * h)
    assert f - f == LaurentPoly({}, 2)


@settings(max_examples=60, deadline=None)
@given(polys(2), polys(2))
def test_specialization_is_a_homomorphism(f, g):
    p = params_for("A2")
    pt = p.point_numeric([Fraction(3, 2), Fraction(-5, 7)])
    assert (f * g)(pt) == f(pt) * g(pt)
    assert (f + g)(pt) == f(pt) + g(pt)


@settings(max_examples=40, deadline=None)
@given(polys(1), polys(1))
def test_exact_division(f, g):
    if not g:
        return
    assert (f * g).exact_divide(g) == f


def test_json_round_trip():
    f = LaurentPoly({(1, -2): Fraction(3, 5), (0, 0): Fraction(-1)}, 2)
    assert LaurentPoly.from_json(f.to_json(), 2) == f
