from fractions import Fraction

import pytest

from daha_hc import spherical as S
from daha_hc.errors import InsufficientCutoffError
from daha_hc.qseries import TruncatedValue, tv

from conftest import params_for

F = Fraction


def test_report_pass_rules(a1):
    exact = S.IdentityReport("demo", a1.echo(), tv(1), tv(1))
    assert exact.passed and exact.tail_budget == 0
    loose = S.IdentityReport("demo", a1.echo(), TruncatedValue(F(1), F(1, 10)), tv(1))
    assert not loose.passed  # tail above max_tail
    off = S.IdentityReport("demo", a1.echo(), TruncatedValue(F(1), F(1, 10 ** 20)), tv(2))
    assert not off.passed
    flagged = S.IdentityReport("demo", a1.echo(), tv(1), tv(1), exact_checks={"x": False})
    assert not flagged.passed and flagged.to_json()["pass"] is False


def test_psi_symmetry(a1, a2):
    for p, x, lam in ((a1, [F(5)], [F(3, 2)]), (a2, [F(7), F(11)], [F(3, 2), F(5, 7)])):
        rep = S.psi_symmetry_residual(p.point_numeric(x), p.point_numeric(lam))
        assert rep.passed, rep.to_json()


def test_shintani_a1(a1):
    for n in (-2, 0, 3):
        rep = S.shintani_residual((n,), a1.point_numeric([F(5, 4)]))
        assert rep.passed, rep.to_json()


@pytest.mark.parametrize("kind", ["minus", "minus_tilde", "plus", "plus_tilde"])
def test_xi_depth_convergence(a1, kind):
    short = S.xi_a1(kind, F(5), F(3, 2), a1, 20)
    deep = S.xi_a1(kind, F(5), F(3, 2), a1, 30)
    assert abs(short.value - deep.value) <= short.tail + deep.tail
    assert deep.tail < short.tail


def test_xi_region_check(a1):
    with pytest.raises(ValueError):
        S.hc_a1_residual(F(1, 10), F(3, 2), a1)


def test_weight_vanishing_a2(a2):
    rs = a2.rs
    for b in [(1, 0), (-1, 1), (0, -1)]:
        lam = a2.point_sharp(b)
        _, _, u = rs.dominant_split(b)
        live = rs.inverse(u)
        for w in rs.weyl_group:
            val = S.weight_factor(w, lam)
            if w != live:
                assert val.value == 0 and val.tail == 0


def test_cutoff_guard():
    p = params_for("G2")
    x = p.point_numeric([F(7), F(8)])
    with pytest.raises(InsufficientCutoffError):
        S.theta_rho(p, S.Cutoffs(theta_shells=3))
        S.psi_value(x, x, S.Cutoffs(psi_shells=2))


def test_limit_gap_rate(a1):
    # the gap shrinks like Λ^{-2n}: four more steps at Λ = 2 gain 4^4
    gaps = dict(S.a1_limit_gaps(F(2), a1, [8, 12], "minus"))
    ratio = float(gaps[12].value / gaps[8].value)
    assert ratio == pytest.approx(4.0 ** -4, rel=0.05)


def test_limit_reaches_tolerance_later(a1):
    gaps = dict(S.a1_limit_gaps(F(2), a1, [14], "minus"))
    assert abs(gaps[14].value) < F(1, 10 ** 8)


def test_trivial_t_limits():
    # t = 1: σ ≡ 1; the minus target (1 - t)σ(Λ^{-1}) is 0, approached as Λ^{-2n},
    # while the plus normalization equals σ(Λ) = 1 already
    p = params_for("A1", F(1, 2), F(1))
    (_, gap), = S.a1_limit_gaps(F(2), p, [6], "minus")
    assert abs(gap.value - F(1, 4 ** 6)) <= gap.tail + F(1, 10 ** 30)
    (_, gap), = S.a1_limit_gaps(F(1, 2), p, [6], "plus")
    assert abs(gap.value) <= gap.tail + F(1, 10 ** 30)
