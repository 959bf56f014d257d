from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from daha_hc.errors import RootSystemError
from daha_hc.rootdata import build_root_system, parse_label

TYPES = {"A1": (1, 2, 2), "A2": (3, 6, 3), "A3": (6, 24, 4), "B2": (4, 8, 1), "C2": (4, 8, 1),
         "B3": (9, 48, 2), "G2": (6, 12, 1), "D4": (12, 192, 2)}


@pytest.mark.parametrize("label", sorted(TYPES))
def test_counts(label):
    n_pos, order, m = TYPES[label]
    rs = build_root_system(label)
    assert len(rs.positive_roots) == n_pos
    assert len(rs.weyl_group) == order
    assert rs.m == m
    assert rs.length(rs.w0) == n_pos


@pytest.mark.parametrize("label", ["", "A0", "E6", "A9", "X2", "D2"])
def test_bad_labels(label):
    with pytest.raises(RootSystemError):
        build_root_system(label)


def test_parse_label():
    assert parse_label("b3") == ("B", 3)


@pytest.mark.parametrize("label", ["A2", "B2", "G2"])
def test_iota_and_dominant_split(label):
    rs = build_root_system(label)
    for b in [(1, 0), (0, 1), (-2, 1), (3, -1)]:
        bm, bp, u = rs.dominant_split(b)
        assert rs.is_antidominant(bm) and rs.is_dominant(bp)
        assert u(tuple(b)) == bm
        assert rs.w0(bm) == bp
        assert rs.iota(rs.iota(b)) == tuple(b)


def test_roots_a2_summary():
    s = build_root_system("A2").summary()
    assert s["m"] == 3 and len(s["positive_roots"]) == 3


@pytest.mark.parametrize("label", ["A1", "A2", "B2", "G2"])
def test_translation_length(label):
    rs = build_root_system(label)
    for b in [(1,) * rs.rank, (-1,) + (2,) * (rs.rank - 1)]:
        pi, word = rs.translation_word(b)
        assert rs.affine_length(pi) == 0
        # l(t_b) = Σ_{α>0} |(b, α∨)|
        assert len(word) == rs.affine_length(rs.ext(c=b))
        assert len(word) == sum(abs(rs.coroot_pair(b, a)) for a in rs.positive_roots)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["A2", "B2", "G2"]), st.integers(0, 1),
       st.lists(st.integers(-5, 5), min_size=2, max_size=2))
def test_reflection_involution_and_pairing(label, i, b):
    rs = build_root_system(label)
    sb = rs.simple_reflection(i, b)
    assert rs.simple_reflection(i, sb) == tuple(b)
    assert rs.pair(sb, sb) == rs.pair(b, b)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["A2", "B2", "G2"]), st.lists(st.integers(-3, 3), min_size=2, max_size=2))
def test_orbit_size_divides_weyl_order(label, b):
    rs = build_root_system(label)
    orbit = rs.orbit(b)
    assert len(rs.weyl_group) % len(orbit) == 0
    assert sum(1 for c in orbit if rs.is_dominant(c)) == 1
    assert rs.pair(b, b) >= Fraction(0)
