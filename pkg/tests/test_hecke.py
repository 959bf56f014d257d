from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from daha_hc.hecke import context
from daha_hc.polyring import LaurentPoly

from conftest import params_for


def _poly(rank, d):
    return LaurentPoly(d, rank)


monos = st.lists(st.integers(-3, 3), min_size=2, max_size=2).map(tuple)


@pytest.mark.parametrize("label", ["A2", "B2", "G2"])
@settings(max_examples=15, deadline=None)
@given(b=monos)
def test_quadratic_and_division(label, b):
    p = params_for(label)
    oc = context(p)
    f = LaurentPoly.monomial(b)
    for i in range(p.rs.rank + 1):
        th = oc._t_half[i][0]
        tf = oc.apply_T(i, f)
        # (T - t^{1/2})(T + t^{-1/2}) = 0
        assert oc.apply_T(i, tf) - tf * (th - 1 / th) - f == 0
        assert oc.apply_T_inverse(i, tf) == f
        assert tf == oc.apply_T_by_division(i, f)


@pytest.mark.parametrize("label", ["A2", "B2"])
def test_y_commute(label):
    p = params_for(label)
    oc = context(p)
    f = LaurentPoly({(1, -1): Fraction(2), (0, 1): Fraction(-1, 3)}, 2)
    assert oc.apply_Y((1, 0), oc.apply_Y((0, 1), f)) == oc.apply_Y((0, 1), oc.apply_Y((1, 0), f))
    assert oc.apply_Y((-1, 0), oc.apply_Y((1, 0), f)) == f


def test_y_triangular_on_a1(a1):
    # Y X^{-1} = eigenvalue X^{-1} + lower terms in the Bruhat-type order
    oc = context(a1)
    out = oc.apply_Y((1,), LaurentPoly.monomial((-1,)))
    assert set(out.support()) <= {(-1,), (1,)}
