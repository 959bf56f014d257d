from fractions import Fraction

import pytest

from daha_hc import macdonald as M
from daha_hc.errors import NonGenericError
from daha_hc.polyring import LaurentPoly

from conftest import params_for


def test_e_minus_one(a1):
    q, t = a1.q, a1.t[1]
    e = M.e_poly(a1, (-1,))
    assert e == LaurentPoly({(-1,): Fraction(1), (1,): (1 - t) / (1 - t * q)}, 1)
    assert M.e_poly(a1, (1,)) == LaurentPoly.monomial((1,))


@pytest.mark.parametrize("v,u", [(Fraction(1, 2), Fraction(1, 3)), (Fraction(2, 3), Fraction(3, 7))])
def test_a1_closed_forms(v, u):
    p = params_for("A1", v, u)
    for n in range(-6, 7):
        e = M.e_poly(p, (n,))
        assert e == M.e_polynomial_a1(p, n) == M.e_polynomial_a1_finite(p, n)
        assert e(p.point_rho(-1)) == M.evaluation_a1(p, n) == M.evaluation_product(p, (n,))


def test_trivial_t():
    p = params_for("A2", Fraction(1, 2), Fraction(1))
    for b in [(1, 0), (-1, 1), (2, -1)]:
        assert M.e_poly(p, b) == LaurentPoly.monomial(b)


def test_non_generic():
    p = params_for("A1", Fraction(1, 2), Fraction(2))
    with pytest.raises(NonGenericError):
        M.e_poly(p, (-1,))


@pytest.mark.parametrize("label", ["A2", "B2", "G2"])
def test_eigen_and_evaluation(label):
    from daha_hc.hecke import context

    p = params_for(label)
    oc = context(p)
    for b in [(0, 0), (1, -1), (-1, 0), (0, 1)]:
        e = M.e_poly(p, b)
        assert e.coeff(b) == 1
        for k in range(2):
            assert oc.apply_Y(p.rs.omega[k], e) == e * oc.y_eigenvalue(k, b)
        assert e(p.point_rho(-1)) == M.evaluation_product(p, b)


def test_duality_samples(a2):
    ws = [(0, 0), (1, 0), (-1, 1), (0, -2)]
    for b in ws:
        for c in ws:
            assert M.duality_gap(a2, b, c) == 0


def test_symmetric_polynomials(a1, a2):
    assert M.symmetric_P(a1, (-1,)) == LaurentPoly({(-1,): Fraction(1), (1,): Fraction(1)}, 1)
    assert M.poincare_value(a1) == 1 + a1.t[1]
    f = M.symmetric_P(a2, (-1, -1))
    assert all(f.weyl_act(w) == f for w in a2.rs.weyl_group)
    assert M.symmetric_P_normalized(a2, (-1, -1)) == M.symmetric_P_normalized_alt(a2, (-1, -1))


def test_star_polynomial_inverts_parameters(a1):
    star = M.star_e_polynomial(a1, (-1,))
    q, t = a1.q, a1.t[1]
    # E^*_b(X) = E_b(X^{-1}) at q^{-1}, t^{-1}
    assert star.coeff((1,)) == 1
    assert star.coeff((-1,)) == (1 - 1 / t) / (1 - 1 / (t * q))
